#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "asfilt/error.hpp"
#include "asfilt/matrix.hpp"
#include "asfilt/polynomial.hpp"
#include "asfilt/rational.hpp"

namespace asfilt {

inline constexpr int kSchemaVersion = 1;

/// d truncated power series f_1..f_d in X_1..X_d with f_i(0) = 0: the unit
/// section sits at the origin. Whether the equations define a group scheme is
/// not checked.
class Presentation {
 public:
  Presentation() = default;

  Presentation(RingModel ring, std::vector<std::string> variables, std::vector<MultiPoly> equations,
               unsigned truncation = 0)
      : ring_(ring), variables_(std::move(variables)), equations_(std::move(equations)) {
    const unsigned d = static_cast<unsigned>(variables_.size());
    if (d == 0) fail(errc::schema_error, "a presentation needs at least one variable");
    if (equations_.size() != d)
      fail(errc::schema_error, "expected " + std::to_string(d) + " equations, got " +
                                   std::to_string(equations_.size()));
    unsigned max_degree = 0;
    for (std::size_t i = 0; i < equations_.size(); ++i) {
      auto& f = equations_[i];
      if (f.variables() != d || !(f.ring() == ring_))
        fail(errc::schema_error, "equation " + std::to_string(i + 1) + " has the wrong shape or model");
      Exponent origin(d, 0);
      auto it = f.terms().find(origin);
      if (it != f.terms().end()) {
        if (!it->second.is_zero())
          fail(errc::constant_term_error, "equation " + std::to_string(i + 1) + " has constant term " +
                                              format_element(it->second) + "; the unit section must be 0");
        // a constant that vanishes at precision is the asserted exact zero
        MultiPoly trimmed(ring_, d);
        for (const auto& [e, c] : f.terms())
          if (e != origin) trimmed.set(e, c);
        f = std::move(trimmed);
      }
      max_degree = std::max(max_degree, f.max_total_degree());
    }
    truncation_ = truncation == 0 ? std::max(max_degree, ring_.p()) : truncation;
    if (max_degree > truncation_)
      fail(errc::schema_error, "a monomial of total degree " + std::to_string(max_degree) +
                                   " exceeds the truncation order " + std::to_string(truncation_));
    if (truncation_ < ring_.p())
      fail(errc::schema_error, "truncation order must be at least p");
  }

  /// Monogenic presentation from a one-variable polynomial.
  static Presentation monogenic(const UniPoly& f, std::string variable = "X") {
    MultiPoly m(f.ring(), 1);
    for (const auto& [k, c] : f.terms()) m.set({k}, c);
    return Presentation(f.ring(), {std::move(variable)}, {std::move(m)});
  }

  const RingModel& ring() const { return ring_; }
  unsigned dimension() const { return static_cast<unsigned>(variables_.size()); }
  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<MultiPoly>& equations() const { return equations_; }
  unsigned truncation() const { return truncation_; }

  bool is_monogenic() const { return dimension() == 1; }
  UniPoly univariate() const {
    if (!is_monogenic()) fail(errc::not_monogenic, "presentation has " + std::to_string(dimension()) + " variables");
    return equations_[0].to_univariate();
  }

 private:
  RingModel ring_;
  std::vector<std::string> variables_;
  std::vector<MultiPoly> equations_;
  unsigned truncation_ = 0;
};

// ---------------------------------------------------------------------------
// JSON documents

inline RingModel parse_ring(const nlohmann::json& j) {
  if (!j.is_object()) fail(errc::schema_error, "\"ring\" must be an object");
  auto get = [&](const char* key, bool required, unsigned fallback) -> unsigned {
    if (!j.contains(key)) {
      if (required) fail(errc::schema_error, std::string("ring is missing \"") + key + "\"");
      return fallback;
    }
    if (!j[key].is_number_integer() || j[key].get<long long>() <= 0)
      fail(errc::schema_error, std::string("ring.") + key + " must be a positive integer");
    return j[key].get<unsigned>();
  };
  if (!j.contains("kind") || !j["kind"].is_string()) fail(errc::schema_error, "ring.kind must be a string");
  const std::string kind = j["kind"].get<std::string>();
  const unsigned p = get("p", true, 0);
  const unsigned precision = get("precision", true, 0);
  const unsigned q = get("q", false, p);
  const unsigned m = get("ramification", false, 1);
  try {
    if (kind == "eqchar") return RingModel::equal_char(p, q, precision, m);
    if (kind == "padic") {
      if (q != p) fail(errc::schema_error, "p-adic models require q = p");
      if (m != 1) fail(errc::schema_error, "p-adic models require ramification 1");
      return RingModel::padic(p, precision);
    }
  } catch (const error& e) {
    if (e.code() == errc::schema_error) throw;
    fail(errc::schema_error, e.what());
  }
  fail(errc::schema_error, "ring.kind must be \"eqchar\" or \"padic\"");
}

inline nlohmann::json ring_to_json(const RingModel& ring) {
  return {{"kind", ring.is_equal_char() ? "eqchar" : "padic"},
          {"p", ring.p()},
          {"q", ring.q()},
          {"precision", ring.precision()},
          {"ramification", ring.ramification()}};
}

inline TruncElement parse_element_json(const RingModel& ring, const nlohmann::json& j) {
  if (j.is_string()) return parse_element(ring, j.get<std::string>());
  if (j.is_number_integer()) return ring.from_integer(j.get<long long>());
  fail(errc::schema_error, "element literal must be a string or integer");
}

inline Presentation parse_presentation(const nlohmann::json& doc) {
  if (!doc.is_object()) fail(errc::schema_error, "presentation document must be a JSON object");
  if (doc.contains("schema") && doc["schema"] != kSchemaVersion)
    fail(errc::schema_error, "unsupported schema version " + doc["schema"].dump());
  if (!doc.contains("ring")) fail(errc::schema_error, "missing \"ring\"");
  RingModel ring = parse_ring(doc["ring"]);

  if (!doc.contains("variables") || !doc["variables"].is_array() || doc["variables"].empty())
    fail(errc::schema_error, "\"variables\" must be a nonempty array of names");
  std::vector<std::string> vars;
  for (const auto& v : doc["variables"]) {
    if (!v.is_string()) fail(errc::schema_error, "variable names must be strings");
    vars.push_back(v.get<std::string>());
  }
  const unsigned d = static_cast<unsigned>(vars.size());

  if (!doc.contains("equations") || !doc["equations"].is_array())
    fail(errc::schema_error, "\"equations\" must be an array");
  std::vector<MultiPoly> eqs;
  for (const auto& eq : doc["equations"]) {
    if (!eq.is_array()) fail(errc::schema_error, "each equation is an array of terms");
    MultiPoly f(ring, d);
    for (const auto& term : eq) {
      if (!term.is_object() || !term.contains("coeff") || !term.contains("monomial"))
        fail(errc::schema_error, "each term needs \"coeff\" and \"monomial\"");
      const auto& mono = term["monomial"];
      if (!mono.is_array() || mono.size() != d)
        fail(errc::schema_error, "monomial must list " + std::to_string(d) + " exponents");
      Exponent e;
      for (const auto& x : mono) {
        if (!x.is_number_integer() || x.get<long long>() < 0)
          fail(errc::schema_error, "exponents must be nonnegative integers");
        e.push_back(x.get<unsigned>());
      }
      f.add_term(e, parse_element_json(ring, term["coeff"]));
    }
    eqs.push_back(std::move(f));
  }
  unsigned truncation = 0;
  if (doc.contains("truncation")) {
    if (!doc["truncation"].is_number_integer() || doc["truncation"].get<long long>() <= 0)
      fail(errc::schema_error, "\"truncation\" must be a positive integer");
    truncation = doc["truncation"].get<unsigned>();
  }
  return Presentation(ring, std::move(vars), std::move(eqs), truncation);
}

inline nlohmann::json presentation_to_json(const Presentation& pres) {
  nlohmann::json eqs = nlohmann::json::array();
  for (const auto& f : pres.equations()) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [e, c] : f.terms()) terms.push_back({{"coeff", format_element(c)}, {"monomial", e}});
    eqs.push_back(terms);
  }
  return {{"schema", kSchemaVersion},
          {"ring", ring_to_json(pres.ring())},
          {"variables", pres.variables()},
          {"equations", eqs},
          {"truncation", pres.truncation()}};
}

// ---------------------------------------------------------------------------
// Linear part, degree, shape, bound

struct LinearPart {
  Matrix u;        // u(i, j) = coefficient of X_j in f_i
  TruncElement det;
  Matrix v;        // adjugate: u v = v u = det I
};

inline LinearPart linear_part(const Presentation& pres) {
  const unsigned d = pres.dimension();
  Matrix u(pres.ring(), d);
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = 0; j < d; ++j) {
      Exponent e(d, 0);
      e[j] = 1;
      u(i, j) = pres.equations()[i].coefficient(e);
    }
  return {u, determinant(u), adjugate(u)};
}

/// deg(G) = v(det U).
inline Rational degree(const LinearPart& lp) {
  auto v = lp.det.valuation();
  if (!v.is_exact())
    fail(errc::not_generically_etale,
         "det(U) vanishes at precision (" + to_string(v) + "); the degree is not determined");
  return v.value;
}

inline Rational degree(const Presentation& pres) { return degree(linear_part(pres)); }

inline std::vector<Rational> elementary_divisor_valuations(const Presentation& pres) {
  return elementary_divisor_valuations(linear_part(pres).u);
}

struct ShapeViolation {
  unsigned equation;  // 1-based
  Exponent monomial;
  friend bool operator==(const ShapeViolation&, const ShapeViolation&) = default;
};

struct ShapeReport {
  bool good = true;
  std::vector<ShapeViolation> violations;
};

/// Good iff every monomial with a coefficient nonzero at precision has total
/// degree = 1 mod (p - 1).
inline ShapeReport good_shape_check(const Presentation& pres) {
  ShapeReport r;
  const unsigned modulus = pres.ring().p() - 1;
  for (unsigned i = 0; i < pres.equations().size(); ++i)
    for (const auto& [e, c] : pres.equations()[i].terms()) {
      if (c.is_zero()) continue;
      if ((total_degree(e) + modulus - 1) % modulus != 0) r.violations.push_back({i + 1, e});
    }
  r.good = r.violations.empty();
  return r;
}

/// p/(p-1) * deg(G): G^a = 0 for all a above it.
inline Rational bound(const Presentation& pres) {
  const auto p = static_cast<std::int64_t>(pres.ring().p());
  return Rational(p, p - 1) * degree(pres);
}

}  // namespace asfilt
