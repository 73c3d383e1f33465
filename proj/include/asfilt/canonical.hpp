#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "asfilt/error.hpp"
#include "asfilt/matrix.hpp"
#include "asfilt/presentation.hpp"
#include "asfilt/rational.hpp"

// Closed-form parameters for canonical subgroups of truncated Barsotti-Tate
// groups over a p-adic O_K with absolute ramification e. O_K/p is modelled as
// k[pi]/(pi^e), which is exact when K/Q_p is totally ramified. Nothing here
// builds a subgroup; every number is a certified parameter.

namespace asfilt {

/// Matrix of the Verschiebung action on Lie(G mod p), over k[pi]/(pi^e).
struct HodgeInput {
  unsigned p;
  unsigned e;
  Matrix u;

  HodgeInput(unsigned p_, unsigned e_, Matrix u_) : p(p_), e(e_), u(std::move(u_)) {
    if (p < 3) fail(errc::invalid_argument, "Hodge height needs p >= 3");
    if (e == 0) fail(errc::invalid_argument, "ramification index must be positive");
    const auto& ring = u.ring();
    if (!ring.is_equal_char() || ring.p() != p || ring.precision() != e || ring.ramification() != 1)
      fail(errc::model_mismatch, "matrix must live in k[pi]/(pi^e) with e = " + std::to_string(e));
  }
};

/// Truncated valuation of det(U) in [0, 1]; a determinant vanishing mod p
/// counts as 1.
inline Rational hodge_height(const HodgeInput& in) {
  auto v = determinant(in.u).valuation();
  if (!v.is_exact()) return Rational(1);
  return std::min(Rational(1), v.value / Rational(in.e));
}

inline HodgeInput parse_hodge_input(const nlohmann::json& doc) {
  if (!doc.is_object()) fail(errc::schema_error, "Hodge input must be a JSON object");
  if (doc.contains("schema") && doc["schema"] != kSchemaVersion)
    fail(errc::schema_error, "unsupported schema version " + doc["schema"].dump());
  auto get = [&](const char* key, unsigned fallback, bool required) -> unsigned {
    if (!doc.contains(key)) {
      if (required) fail(errc::schema_error, std::string("missing \"") + key + "\"");
      return fallback;
    }
    if (!doc[key].is_number_integer() || doc[key].get<long long>() <= 0)
      fail(errc::schema_error, std::string("\"") + key + "\" must be a positive integer");
    return doc[key].get<unsigned>();
  };
  const unsigned p = get("p", 0, true), e = get("e", 0, true), q = get("q", p, false);
  RingModel ring;
  try {
    ring = RingModel::equal_char(p, q, e, 1);
  } catch (const error& err) {
    fail(errc::schema_error, err.what());
  }
  if (!doc.contains("matrix") || !doc["matrix"].is_array() || doc["matrix"].empty())
    fail(errc::schema_error, "\"matrix\" must be a nonempty array of rows");
  std::vector<std::vector<TruncElement>> rows;
  for (const auto& row : doc["matrix"]) {
    if (!row.is_array() || row.size() != doc["matrix"].size()) fail(errc::schema_error, "matrix must be square");
    std::vector<TruncElement> r;
    for (const auto& x : row) r.push_back(parse_element_json(ring, x));
    rows.push_back(std::move(r));
  }
  try {
    return HodgeInput(p, e, Matrix::from_rows(ring, rows));
  } catch (const error& err) {
    fail(errc::schema_error, err.what());
  }
}

struct CanonicalReport {
  unsigned level = 1;
  bool valid = false;
  std::string reason;  // violated hypothesis when !valid
  Rational lower;      // G^a = C_n for lower < a <= upper
  Rational upper;
  Rational deg_quotient;  // deg(G / C_n)
  Rational linear_bound_threshold;  // p/(p-1) deg(G / C_n), equals lower
  Rational hattori_bound;

  bool interval_nonempty() const { return lower < upper; }
};

/// e n + e/(p-1): Hattori's bound for groups killed by p^n in characteristic 0.
inline Rational hattori_bound(unsigned p, unsigned e, unsigned n) {
  if (p < 2) fail(errc::invalid_argument, "p must be at least 2");
  const auto pe = static_cast<std::int64_t>(e);
  return Rational(pe * n) + Rational(pe, static_cast<std::int64_t>(p) - 1);
}

namespace detail {

inline std::int64_t ipow(std::int64_t b, unsigned n) {
  std::int64_t r = 1;
  for (unsigned i = 0; i < n; ++i) r *= b;
  return r;
}

inline void check_canonical_args(unsigned p, unsigned e, unsigned n, const Rational& h) {
  if (p < 3 || !is_prime(p)) fail(errc::invalid_argument, "p must be a prime >= 3");
  if (e == 0) fail(errc::invalid_argument, "e must be positive");
  if (n == 0) fail(errc::invalid_argument, "level must be positive");
  if (h < 0 || h > 1) fail(errc::invalid_argument, "Hodge height must lie in [0, 1]");
}

}  // namespace detail

/// Level-n canonical subgroup parameters. Valid iff h < 1/3^n (p = 3) or
/// h < 1/(2 p^(n-1)) (p >= 5); G^a = C_n on
/// (e p (p^n - 1)/(p - 1)^2 h, e p/(p - 1) (1 - h)].
inline CanonicalReport leveln_params(unsigned p, unsigned e, unsigned n, const Rational& h) {
  detail::check_canonical_args(p, e, n, h);
  const auto P = static_cast<std::int64_t>(p);
  const auto E = static_cast<std::int64_t>(e);
  const std::int64_t pn = detail::ipow(P, n);
  CanonicalReport r;
  r.level = n;
  const Rational threshold = p == 3 ? Rational(1, pn) : Rational(1, 2 * detail::ipow(P, n - 1));
  r.valid = h < threshold;
  if (!r.valid)
    r.reason = "Hodge height " + to_string(h) + " is not below " + to_string(threshold) + " for p = " +
               std::to_string(p) + ", n = " + std::to_string(n);
  r.deg_quotient = Rational(E * (pn - 1), P - 1) * h;
  r.lower = Rational(E * P * (pn - 1), (P - 1) * (P - 1)) * h;
  r.upper = Rational(E * P, P - 1) * (Rational(1) - h);
  r.linear_bound_threshold = Rational(P, P - 1) * r.deg_quotient;
  r.hattori_bound = hattori_bound(p, e, n);
  return r;
}

/// Level 1: valid iff h < 1/3 (p = 3) or h < 1/2 (p >= 5).
inline CanonicalReport level1_params(unsigned p, unsigned e, const Rational& h) { return leveln_params(p, e, 1, h); }

}  // namespace asfilt
