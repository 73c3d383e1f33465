#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "asfilt/error.hpp"
#include "asfilt/newton_polygon.hpp"
#include "asfilt/presentation.hpp"

// Monogenic presentations f with unit leading coefficient and a simple root at
// the origin. For x in the maximal ideal with v(x) = t, the generic value of
// v(f(x)) is N(t) = min_i v(a_i) + i t, which is strictly increasing on t > 0.
// The component of 0 in X^a is the closed disk v(x) >= t_a, t_a the first
// crossing of N with a: that disk lies in X^a because N is increasing, and any
// root of valuation s < t_a is cut off by the annulus s < v(x) < t_a, where
// v(f(x)) = N(v(x)) < a. So G^a consists of the origin and the roots with
// valuation >= t_a, and the break for a root of valuation s is N(s).

namespace asfilt {

struct Jump {
  Rational a;
  unsigned order_before;  // order of G^a at the jump itself
  unsigned order_after;   // order of G^b for b slightly above
  Rational root_valuation;

  friend bool operator==(const Jump&, const Jump&) = default;
};

/// The filtration as a right-continuous-from-the-left step function:
/// G^a keeps order_before at a = jump and drops just after.
struct BreakFunction {
  std::vector<Jump> jumps;  // ascending in a
  unsigned total_order = 1;
  unsigned connected_order = 1;
  bool restricted_to_connected = false;

  /// |G^a|; G^0 = G.
  unsigned order_at(const Rational& a) const {
    if (a <= 0) return total_order;
    for (const auto& j : jumps)
      if (j.a >= a) return j.order_before;
    return 1;
  }

  /// |G^{a+}|, the union of G^b over b > a.
  unsigned order_after(const Rational& a) const {
    for (const auto& j : jumps)
      if (j.a > a) return j.order_before;
    return 1;
  }

  Rational max_jump() const { return jumps.empty() ? Rational(0) : jumps.back().a; }
};

namespace detail {

struct MonogenicData {
  UniPoly f;
  NewtonPolygon polygon;
  PiecewiseLinear tropical;
  RootValuations roots;
  unsigned etale_roots = 0;
};

inline MonogenicData analyse_monogenic(const Presentation& pres) {
  if (!pres.is_monogenic())
    fail(errc::not_monogenic, "presentation has " + std::to_string(pres.dimension()) + " variables");
  MonogenicData m;
  m.f = pres.univariate();
  if (m.f.empty()) fail(errc::not_generically_etale, "the equation is identically zero");
  m.polygon = polygon(m.f);
  if (m.polygon.order_at_zero != 1)
    fail(errc::not_generically_etale, "the origin is a root of multiplicity " +
                                          std::to_string(m.polygon.order_at_zero) + "; need a simple root");
  const auto lead = m.f.coefficient(m.f.degree()).valuation();
  if (!(lead.is_exact() && lead.value == 0))
    fail(errc::non_unit_leading_coefficient, "leading coefficient has valuation " + to_string(lead));
  m.tropical = tropical_function(m.polygon);
  m.roots = root_valuations(m.polygon);
  for (const auto& r : m.roots)
    if (r.valuation && *r.valuation == 0) m.etale_roots += r.multiplicity;
  return m;
}

}  // namespace detail

/// 1 + number of roots with positive valuation (the origin included once).
inline unsigned connected_order(const Presentation& pres) {
  auto m = detail::analyse_monogenic(pres);
  unsigned order = 1;
  for (const auto& r : m.roots)
    if (r.valuation && *r.valuation > 0) order += r.multiplicity;
  return order;
}

inline BreakFunction break_function(const Presentation& pres, bool connected_part = false) {
  auto m = detail::analyse_monogenic(pres);
  if (m.etale_roots > 0 && !connected_part)
    fail(errc::etale_roots_present, std::to_string(m.etale_roots) +
                                        " root(s) of valuation 0; restrict to the connected part");
  BreakFunction bf;
  bf.restricted_to_connected = connected_part;
  bf.total_order = m.f.degree();
  unsigned remaining = 1;
  std::vector<RootValuation> positive;
  for (const auto& r : m.roots)
    if (r.valuation && *r.valuation > 0) {
      positive.push_back(r);
      remaining += r.multiplicity;
    }
  bf.connected_order = remaining;
  // ascending valuation gives ascending jumps since N is increasing
  for (const auto& r : positive) {
    Jump j{m.tropical(*r.valuation), remaining, remaining - r.multiplicity, *r.valuation};
    remaining -= r.multiplicity;
    bf.jumps.push_back(j);
  }
  return bf;
}

struct SubgroupAt {
  unsigned order;
  Rational disk_radius;  // t_a
};

/// Order of G^a read off the disk of radius t_a directly.
inline SubgroupAt subgroup_at(const Presentation& pres, const Rational& a, bool connected_part = false) {
  auto m = detail::analyse_monogenic(pres);
  if (m.etale_roots > 0 && !connected_part)
    fail(errc::etale_roots_present, "roots of valuation 0 present; restrict to the connected part");
  if (a <= 0) fail(errc::invalid_argument, "filtration index must be positive");
  const Rational t = first_crossing(m.tropical, a);
  unsigned order = 1;
  for (const auto& r : m.roots)
    if (r.valuation && *r.valuation > 0 && *r.valuation >= t) order += r.multiplicity;
  return {order, t};
}

inline unsigned g_a_plus(const Presentation& pres, const Rational& a, bool connected_part = false) {
  if (a < 0) fail(errc::invalid_argument, "filtration index must be nonnegative");
  return break_function(pres, connected_part).order_after(a);
}

struct BoundReport {
  Rational max_jump;
  Rational bound;
  Rational degree;
  bool good_shape;
  bool pass;
};

/// Compares the top jump of the connected part against p/(p-1) deg(G). A
/// failure on a good-shape presentation raises TheoremViolation.
inline BoundReport verify_bound(const Presentation& pres) {
  auto bf = break_function(pres, true);
  BoundReport r{bf.max_jump(), bound(pres), degree(pres), good_shape_check(pres).good, false};
  r.pass = r.max_jump <= r.bound;
  if (!r.pass && r.good_shape)
    fail(errc::theorem_violation, "max jump " + to_string(r.max_jump) + " exceeds the bound " + to_string(r.bound) +
                                      " on a good-shape presentation");
  return r;
}

}  // namespace asfilt
