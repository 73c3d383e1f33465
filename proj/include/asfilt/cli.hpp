#pragma once

#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "asfilt/canonical.hpp"
#include "asfilt/filtration.hpp"
#include "asfilt/oracle.hpp"
#include "asfilt/presentation.hpp"

// Command-line front end. Every command builds one JSON document
//   {"command", "inputs", "payload", "exit_code"}
// and prints either that document (--json) or a line-per-field rendering.
// Exit codes: 0 success, 1 usage/schema/input error, 2 property violation,
// 3 enumeration budget exceeded.

namespace asfilt::cli {

using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolation = 2;
inline constexpr int kExitBudget = 3;

inline int exit_code_for(errc code) {
  switch (code) {
    case errc::theorem_violation: return kExitViolation;
    case errc::enumeration_too_large: return kExitBudget;
    default: return kExitUsage;
  }
}

inline json rat(const Rational& r) { return to_string(r); }

inline json rat_list(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& r : v) out.push_back(rat(r));
  return out;
}

inline json point_json(const Point& x) {
  json out = json::array();
  for (const auto& c : x) out.push_back(format_element(c));
  return out;
}

inline json valuation_json(const ExtValuation& v) {
  return {{"tag", v.is_exact() ? "exact" : "at_least"}, {"value", rat(v.value)}};
}

inline json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(format_element(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Payload builders (also used directly by tests)

inline json polygon_payload(const Presentation& pres) {
  const UniPoly f = pres.univariate();
  const NewtonPolygon np = polygon(f);
  json vertices = json::array(), segments = json::array(), roots = json::array();
  for (const auto& v : np.vertices) vertices.push_back({{"degree", v.degree}, {"valuation", rat(v.valuation.value)}});
  for (const auto& s : np.segments) segments.push_back({{"slope", rat(s.slope)}, {"length", s.length}});
  for (const auto& r : root_valuations(np))
    roots.push_back({{"valuation", r.valuation ? rat(*r.valuation) : json("inf")}, {"multiplicity", r.multiplicity}});
  const PiecewiseLinear n = tropical_function(np);
  json pieces = json::array();
  for (const auto& piece : n.pieces) pieces.push_back({{"slope", rat(piece.slope)}, {"intercept", rat(piece.intercept)}});
  return {{"vertices", vertices},
          {"segments", segments},
          {"order_at_zero", np.order_at_zero},
          {"degree", np.degree},
          {"root_valuations", roots},
          {"tropical", {{"breakpoints", rat_list(n.breakpoints)}, {"pieces", pieces}}}};
}

inline json degree_payload(const Presentation& pres) {
  const LinearPart lp = linear_part(pres);
  return {{"U", matrix_json(lp.u)},
          {"det_U", format_element(lp.det)},
          {"det_valuation", valuation_json(lp.det.valuation())},
          {"adjugate", matrix_json(lp.v)},
          {"degree", rat(degree(lp))},
          {"elementary_divisor_valuations", rat_list(elementary_divisor_valuations(lp.u))}};
}

inline json shape_payload(const Presentation& pres) {
  const ShapeReport s = good_shape_check(pres);
  json violations = json::array();
  for (const auto& v : s.violations) violations.push_back({{"equation", v.equation}, {"monomial", v.monomial}});
  return {{"good_shape", s.good},
          {"violations", violations},
          {"note", "good shape is evidence only; group axioms are not checked"}};
}

inline json bound_payload(const Presentation& pres) {
  const Rational deg = degree(pres);
  const Rational b = bound(pres);
  json out = {{"degree", rat(deg)}, {"bound", rat(b)}, {"p", pres.ring().p()}};
  out["note"] = deg == Rational(0) ? "G^a = 0 for all a > 0"
                                   : "G^a = 0 for all a > " + to_string(b);
  return out;
}

inline json filtration_payload(const Presentation& pres, std::optional<Rational> at, bool connected) {
  const BreakFunction bf = break_function(pres, connected);
  json jumps = json::array();
  for (const auto& j : bf.jumps)
    jumps.push_back({{"a", rat(j.a)},
                     {"order_before", j.order_before},
                     {"order_after", j.order_after},
                     {"root_valuation", rat(j.root_valuation)}});
  json out = {{"jumps", jumps},
              {"total_order", bf.total_order},
              {"connected_order", bf.connected_order},
              {"restricted_to_connected", bf.restricted_to_connected},
              {"max_jump", rat(bf.max_jump())},
              {"note", "orders are group orders only if the equation defines a group scheme"}};
  const BoundReport report = verify_bound(pres);
  out["bound_report"] = {{"max_jump", rat(report.max_jump)},
                         {"bound", rat(report.bound)},
                         {"degree", rat(report.degree)},
                         {"good_shape", report.good_shape},
                         {"pass", report.pass}};
  if (at) {
    const SubgroupAt s = subgroup_at(pres, *at, connected);
    out["at"] = {{"a", rat(*at)},
                 {"order", s.order},
                 {"disk_radius", rat(s.disk_radius)},
                 {"order_a_plus", bf.order_after(*at)}};
  }
  return out;
}

inline json canonical_payload(unsigned p, unsigned e, unsigned n, const Rational& h) {
  const CanonicalReport r = leveln_params(p, e, n, h);
  std::string interval = "(" + to_string(r.lower) + ", " + to_string(r.upper) + "]";
  json out = {{"level", r.level},
              {"valid", r.valid},
              {"interval", interval},
              {"lower", rat(r.lower)},
              {"upper", rat(r.upper)},
              {"interval_nonempty", r.interval_nonempty()},
              {"deg_quotient", rat(r.deg_quotient)},
              {"linear_bound_threshold", rat(r.linear_bound_threshold)},
              {"hattori_bound", rat(r.hattori_bound)},
              {"sources",
               {{"interval", "G^a = C_n for a in this interval"},
                {"deg_quotient", "degree of G/C_n"},
                {"linear_bound_threshold", "p/(p-1) deg(G/C_n), the linear bound applied to G/C_n"},
                {"hattori_bound", "en + e/(p-1), the known characteristic-0 bound"}}}};
  if (!r.valid) out["reason"] = r.reason;
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

inline void add_approx(json& j) {
  if (j.is_object()) {
    json extra = json::object();
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.value().is_string()) {
        const std::string s = it.value().get<std::string>();
        if (s.find('/') != std::string::npos && s.find(' ') == std::string::npos) {
          try {
            extra[it.key() + "_approx"] = to_double(parse_rational(s));
          } catch (const error&) {
          }
        }
      } else {
        add_approx(it.value());
      }
    }
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  } else if (j.is_array()) {
    for (auto& x : j) add_approx(x);
  }
}

inline std::string scalar_text(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

inline void render_text(const json& j, std::ostream& os, const std::string& indent) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const json& v = it.value();
    if (v.is_object()) {
      os << indent << it.key() << ":\n";
      render_text(v, os, indent + "  ");
    } else if (v.is_array() && !v.empty() && (v[0].is_object() || v[0].is_array())) {
      os << indent << it.key() << ":\n";
      for (const auto& item : v) {
        if (item.is_object()) {
          std::string line;
          for (auto f = item.begin(); f != item.end(); ++f)
            line += (line.empty() ? "" : ", ") + f.key() + "=" + (f.value().is_array() ? f.value().dump() : scalar_text(f.value()));
          os << indent << "  - " << line << "\n";
        } else {
          os << indent << "  - " << item.dump() << "\n";
        }
      }
    } else if (v.is_array()) {
      std::string line;
      for (const auto& item : v) line += (line.empty() ? "" : " ") + scalar_text(item);
      os << indent << it.key() << ": [" << line << "]\n";
    } else {
      os << indent << it.key() << ": " << scalar_text(v) << "\n";
    }
  }
}

/// Canonical serialization: sorted keys, no whitespace variation, so
/// dump(parse(dump(x))) == dump(x).
inline std::string canonical_dump(const json& doc) { return doc.dump(2); }

// ---------------------------------------------------------------------------

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::schema_error, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(errc::schema_error, "'" + path + "' is not valid JSON: " + e.what());
  }
}

inline RingModel oracle_model(const Presentation& pres, unsigned ram, std::optional<unsigned> precision) {
  if (!pres.ring().is_equal_char()) fail(errc::model_mismatch, "oracle enumeration is equal-characteristic only");
  if (ram == 0) fail(errc::invalid_argument, "--ram must be positive");
  const RingModel base = pres.ring();
  const unsigned full = base.precision() * ram;
  const unsigned digits = precision.value_or(std::min(full, kMaxDigits));
  if (digits > full)
    fail(errc::invalid_argument, "--precision " + std::to_string(digits) + " exceeds the " + std::to_string(full) +
                                     " digits the presentation determines");
  return RingModel::equal_char(base.p(), base.q(), digits, base.ramification() * ram);
}

/// Smallest extra ramification whose model resolves some point of the disk of
/// radius a - deg(G) below the artifact threshold, within the budget.
inline unsigned default_ram(const Presentation& pres, const Rational& a, std::optional<unsigned> precision,
                            std::uint64_t budget) {
  const Rational deg = degree(pres);
  for (unsigned k = 1; pres.ring().precision() * k <= kMaxDigits; ++k) {
    const RingModel target = oracle_model(pres, k, precision);
    if (target.horizon() < a || target.horizon() <= deg) continue;
    const Rational m(target.ramification());
    const auto first = ceil((a - deg) * m);
    const auto artifact = ceil((target.horizon() - deg) * m);
    if (first >= artifact) continue;
    if (PointSet::disk(target, pres.dimension(), a - deg).cardinality() > budget) break;
    return k;
  }
  return 1;
}

/// Runs one command line. Output goes to `out`, diagnostics to `err`.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"asfilt: ramification data of finite flat group schemes over truncated DVRs", "asfilt"};
  app.require_subcommand(0, 1);
  bool version = false;
  app.add_flag("--version", version, "Print the presentation schema version");

  std::string input;
  bool as_json = false, approx = false, connected = false;
  std::string at_text, a_text, hodge_text, epsilon_text;
  unsigned shards = 1, samples = 200;
  std::optional<unsigned> ram;
  unsigned p = 0, e = 0, n = 1;
  std::optional<unsigned> precision;
  std::uint64_t budget = 10'000'000, seed = 1;

  auto common = [&](CLI::App* sub, bool needs_input) {
    if (needs_input) sub->add_option("-i,--input", input, "Presentation JSON file")->required();
    sub->add_flag("--json", as_json, "Emit a single JSON document");
    sub->add_flag("--approx", approx, "Add decimal approximations next to rationals");
  };

  auto* polygon_cmd = app.add_subcommand("polygon", "Newton polygon, root valuations and tropical function");
  common(polygon_cmd, true);
  auto* degree_cmd = app.add_subcommand("degree", "Linear part, det(U), degree and elementary divisors");
  common(degree_cmd, true);
  auto* shape_cmd = app.add_subcommand("shape", "Good-shape check: monomial degrees = 1 mod (p-1)");
  common(shape_cmd, true);
  auto* bound_cmd = app.add_subcommand("bound", "The linear bound p/(p-1) deg(G)");
  common(bound_cmd, true);
  auto* filtration_cmd = app.add_subcommand("filtration", "Break function of a monogenic presentation");
  common(filtration_cmd, true);
  filtration_cmd->add_option("--at", at_text, "Report G^a and its disk radius at this index");
  filtration_cmd->add_flag("--connected", connected, "Restrict to the connected part (drop valuation-0 roots)");

  auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive finite-precision checks");
  oracle_cmd->require_subcommand(1);
  std::vector<CLI::App*> oracle_subs;
  for (const char* name : {"zeros", "h-preimage", "disk-image"}) {
    auto* sub = oracle_cmd->add_subcommand(name, std::string("oracle ") + name);
    common(sub, true);
    sub->add_option("--a", a_text, "Filtration index a (rational)");
    sub->add_option("--ram", ram, "Extra ramification of the enumeration model (default: smallest that resolves points)")->check(CLI::PositiveNumber);
    sub->add_option("--precision", precision, "Digits kept by the enumeration model");
    sub->add_option("--budget", budget, "Maximum number of enumerated points");
    sub->add_option("--shards", shards, "Parallel shards")->check(CLI::PositiveNumber);
    sub->add_flag("--connected", connected, "Drop valuation-0 roots when comparing with G^a");
    oracle_subs.push_back(sub);
  }
  oracle_subs[2]->add_option("--epsilon", epsilon_text, "Width of the exclusion annulus");
  oracle_subs[2]->add_option("--samples", samples, "Sampled points for the exclusion check");
  oracle_subs[2]->add_option("--seed", seed, "Sampling seed");

  auto* canonical_cmd = app.add_subcommand("canonical", "Canonical-subgroup parameters");
  common(canonical_cmd, false);
  canonical_cmd->add_option("--p", p, "Residue characteristic (>= 3)")->required();
  canonical_cmd->add_option("--e", e, "Absolute ramification index")->required();
  canonical_cmd->add_option("--n", n, "Level");
  canonical_cmd->add_option("--hodge", hodge_text, "Hodge height as NUM/DEN")->required();

  auto* hodge_cmd = app.add_subcommand("hodge-height", "Hodge height from a Verschiebung matrix");
  common(hodge_cmd, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& pe) {
    if (pe.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "usage error: " << pe.what() << "\n";
    return kExitUsage;
  }
  if (version) {
    out << "asfilt schema " << kSchemaVersion << "\n";
    return kExitOk;
  }
  if (app.get_subcommands().empty()) {
    out << app.help();
    return kExitUsage;
  }

  json doc;
  json inputs = json::object();
  int code = kExitOk;
  std::string name;
  try {
    auto load_pres = [&] {
      inputs["input"] = input;
      return parse_presentation(load_json(input));
    };
    json payload;
    if (polygon_cmd->parsed()) {
      name = "polygon";
      payload = polygon_payload(load_pres());
    } else if (degree_cmd->parsed()) {
      name = "degree";
      payload = degree_payload(load_pres());
    } else if (shape_cmd->parsed()) {
      name = "shape";
      payload = shape_payload(load_pres());
    } else if (bound_cmd->parsed()) {
      name = "bound";
      payload = bound_payload(load_pres());
    } else if (filtration_cmd->parsed()) {
      name = "filtration";
      auto pres = load_pres();
      std::optional<Rational> at;
      if (!at_text.empty()) {
        at = parse_rational(at_text);
        inputs["at"] = rat(*at);
      }
      inputs["connected"] = connected;
      payload = filtration_payload(pres, at, connected);
    } else if (oracle_cmd->parsed()) {
      auto pres = load_pres();
      std::optional<Rational> a;
      if (!a_text.empty()) a = parse_rational(a_text);
      if (!ram) ram = a && !oracle_subs[0]->parsed() ? default_ram(pres, *a, precision, budget) : 1;
      const RingModel target = oracle_model(pres, *ram, precision);
      EnumerationOptions opts{budget, shards};
      inputs["ram"] = *ram;
      inputs["budget"] = budget;
      inputs["shards"] = shards;
      inputs["model"] = ring_to_json(target);
      if (a) inputs["a"] = rat(*a);
      if (oracle_subs[0]->parsed()) {
        name = "oracle zeros";
        const ZeroSet zs = zero_set(pres, target, opts);
        json pts = json::array();
        for (const auto& x : zs.points) pts.push_back(point_json(x));
        payload = {{"zeros", pts},
                   {"count", zs.points.size()},
                   {"artifact_threshold", rat(zs.artifact_threshold)},
                   {"representative_digits", zs.representative_digits},
                   {"artifact_points", zs.artifact_points},
                   {"enumerated", zs.enumerated},
                   {"note", "zeros at precision, one representative per class modulo the artifact threshold"}};
        if (a && pres.is_monogenic()) {
          const SubgroupAt s = subgroup_at(pres, *a, connected);
          std::size_t inside = 0;
          for (const auto& x : zs.points)
            if (min_valuation(x) >= s.disk_radius) ++inside;
          const bool agree = inside == s.order;
          payload["at"] = {{"a", rat(*a)},
                           {"disk_radius", rat(s.disk_radius)},
                           {"zeros_in_disk", inside},
                           {"order", s.order},
                           {"agree", agree}};
          if (!agree) code = kExitViolation;
        }
      } else {
        if (!a) fail(errc::invalid_argument, "--a is required");
        if (oracle_subs[1]->parsed()) {
          name = "oracle h-preimage";
          const HPreimageReport r = verify_h_preimage(pres, *a, target, opts);
          json zeros = json::array();
          for (const auto& x : r.nonzero_zeros) zeros.push_back(point_json(x));
          payload = {{"a", rat(r.a)},
                     {"bound", rat(r.bound)},
                     {"degree", rat(r.degree)},
                     {"radius", rat(r.radius)},
                     {"theorem_applies", r.theorem_applies},
                     {"enumerated", r.enumerated},
                     {"artifact_threshold", rat(r.artifact_threshold)},
                     {"artifacts", r.artifacts},
                     {"resolved", r.resolved},
                     {"nonzero_zeros", zeros},
                     {"pass", r.pass}};
          if (!r.theorem_applies)
            payload["note"] = "a <= p/(p-1) deg(G): the theorem does not apply and nonzero zeros may appear";
          if (!r.pass) code = kExitViolation;
        } else {
          name = "oracle disk-image";
          DiskImageOptions dopts;
          dopts.enumeration = opts;
          if (!epsilon_text.empty()) dopts.epsilon = parse_rational(epsilon_text);
          dopts.samples = samples;
          dopts.seed = seed;
          const DiskImageReport r = verify_disk_image(pres, *a, target, dopts);
          payload = {{"a", rat(r.a)},
                     {"bound", rat(r.bound)},
                     {"degree", rat(r.degree)},
                     {"radius", rat(r.radius)},
                     {"epsilon", rat(r.epsilon)},
                     {"inclusion", {{"checked", r.inclusion_checked},
                                    {"failures", r.inclusion_failures},
                                    {"undecidable", r.inclusion_undecidable},
                                    {"composite_mismatches", r.composite_mismatches}}},
                     {"estimates", {{"det_checked", r.det_estimate_checked},
                                    {"det_failures", r.det_estimate_failures},
                                    {"tail_checked", r.tail_estimate_checked},
                                    {"tail_failures", r.tail_estimate_failures},
                                    {"tail_undecided", r.tail_estimate_undecided}}},
                     {"exclusion", {{"model", ring_to_json(r.sample_ring)},
                                    {"samples", r.exclusion_samples},
                                    {"failures", r.exclusion_failures},
                                    {"undecidable", r.exclusion_undecidable}}},
                     {"linear_part_ok", r.linear_part_ok},
                     {"shape_preserved", r.shape_preserved},
                     {"pass", r.pass}};
          if (!r.pass) code = kExitViolation;
        }
      }
    } else if (canonical_cmd->parsed()) {
      name = "canonical";
      const Rational h = parse_rational(hodge_text);
      inputs = {{"p", p}, {"e", e}, {"n", n}, {"hodge", rat(h)}};
      payload = canonical_payload(p, e, n, h);
    } else if (hodge_cmd->parsed()) {
      name = "hodge-height";
      inputs["input"] = input;
      const HodgeInput in = parse_hodge_input(load_json(input));
      const TruncElement det = determinant(in.u);
      payload = {{"p", in.p},
                 {"e", in.e},
                 {"det_U", format_element(det)},
                 {"det_valuation", valuation_json(det.valuation())},
                 {"hodge_height", rat(hodge_height(in))}};
    }
    if (approx) add_approx(payload);
    doc = {{"command", name}, {"inputs", inputs}, {"payload", payload}, {"exit_code", code}};
  } catch (const error& ex) {
    code = exit_code_for(ex.code());
    doc = {{"command", name},
           {"inputs", inputs},
           {"error", {{"kind", std::string(to_string(ex.code()))}, {"message", ex.what()}}},
           {"exit_code", code}};
    if (!as_json) err << "error: " << ex.what() << "\n";
  }

  if (as_json) {
    out << canonical_dump(doc) << "\n";
  } else if (doc.contains("payload")) {
    out << name << "\n";
    render_text(doc["payload"], out, "  ");
  }
  return code;
}

inline int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace asfilt::cli
