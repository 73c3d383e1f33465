#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "asfilt/error.hpp"
#include "asfilt/polynomial.hpp"
#include "asfilt/rational.hpp"

namespace asfilt {

struct PolygonVertex {
  unsigned degree;
  ExtValuation valuation;

  friend bool operator==(const PolygonVertex&, const PolygonVertex&) = default;
};

struct PolygonSegment {
  Rational slope;
  unsigned length;

  friend bool operator==(const PolygonSegment&, const PolygonSegment&) = default;
};

/// Lower convex hull of the points (i, v(a_i)). Slopes strictly increase from
/// left to right; the horizontal lengths add up to degree - order_at_zero.
struct NewtonPolygon {
  std::vector<PolygonVertex> vertices;
  std::vector<PolygonSegment> segments;
  unsigned order_at_zero = 0;
  unsigned degree = 0;

  /// Height of the hull above abscissa i, for lowest <= i <= highest.
  Rational height_at(unsigned i) const {
    for (std::size_t k = 0; k + 1 < vertices.size(); ++k) {
      const auto& a = vertices[k];
      const auto& b = vertices[k + 1];
      if (i >= a.degree && i <= b.degree)
        return a.valuation.value + segments[k].slope * Rational(static_cast<std::int64_t>(i - a.degree));
    }
    return vertices.front().valuation.value;
  }
};

/// One root valuation with multiplicity; nullopt stands for the root at 0.
struct RootValuation {
  std::optional<Rational> valuation;
  unsigned multiplicity;

  bool is_infinite() const { return !valuation.has_value(); }
  friend bool operator==(const RootValuation&, const RootValuation&) = default;
};

using RootValuations = std::vector<RootValuation>;

namespace detail {

// > 0 when o->a->b turns counter-clockwise
inline Rational cross(unsigned ox, const Rational& oy, unsigned ax, const Rational& ay, unsigned bx,
                      const Rational& by) {
  return Rational(static_cast<std::int64_t>(ax) - ox) * (by - oy) -
         (ay - oy) * Rational(static_cast<std::int64_t>(bx) - ox);
}

}  // namespace detail

/// Newton polygon of f. The lowest and highest stored coefficients must have
/// Exact valuation; every censored coefficient must sit strictly above the
/// hull of the Exact points, otherwise PrecisionInsufficient.
inline NewtonPolygon polygon(const UniPoly& f) {
  if (f.empty()) fail(errc::invalid_argument, "the zero polynomial has no Newton polygon");
  struct Point {
    unsigned x;
    ExtValuation v;
  };
  std::vector<Point> exact, censored;
  for (const auto& [i, c] : f.terms()) {
    auto v = c.valuation();
    (v.is_exact() ? exact : censored).push_back({i, v});
  }
  const unsigned lo = f.lowest_degree(), hi = f.degree();
  if (exact.empty() || exact.front().x != lo)
    fail(errc::precision_insufficient,
         "coefficient of X^" + std::to_string(lo) + " is censored; the order of vanishing is not determined");
  if (exact.back().x != hi)
    fail(errc::precision_insufficient, "leading coefficient of X^" + std::to_string(hi) + " is censored");

  std::vector<Point> hull;
  for (const auto& pt : exact) {
    while (hull.size() >= 2) {
      const auto& o = hull[hull.size() - 2];
      const auto& a = hull.back();
      // drop a unless o->a->pt is a strict left turn
      if (detail::cross(o.x, o.v.value, a.x, a.v.value, pt.x, pt.v.value) <= 0) hull.pop_back();
      else break;
    }
    hull.push_back(pt);
  }

  NewtonPolygon np;
  np.order_at_zero = lo;
  np.degree = hi;
  for (const auto& pt : hull) np.vertices.push_back({pt.x, pt.v});
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    unsigned len = hull[k + 1].x - hull[k].x;
    np.segments.push_back({(hull[k + 1].v.value - hull[k].v.value) / Rational(len), len});
  }

  for (const auto& c : censored) {
    Rational h = np.height_at(c.x);
    if (!(c.v.value > h))
      fail(errc::precision_insufficient, "censored coefficient of X^" + std::to_string(c.x) + " (" +
                                             to_string(c.v) + ") could lie on or below the hull at height " +
                                             to_string(h));
  }
  return np;
}

/// Each segment of slope -s and length l contributes (s, l); the order of
/// vanishing at 0 contributes (inf, ord0). Sorted by valuation, inf last.
inline RootValuations root_valuations(const NewtonPolygon& np, unsigned ord0) {
  RootValuations out;
  for (auto it = np.segments.rbegin(); it != np.segments.rend(); ++it) out.push_back({-it->slope, it->length});
  if (ord0 > 0) out.push_back({std::nullopt, ord0});
  return out;
}

inline RootValuations root_valuations(const NewtonPolygon& np) { return root_valuations(np, np.order_at_zero); }

/// Continuous concave piecewise-linear function on [0, inf). Piece k covers
/// [breakpoints[k-1], breakpoints[k]] with breakpoints[-1] = 0 and
/// breakpoints[size] = inf.
struct PiecewiseLinear {
  struct Piece {
    Rational slope;
    Rational intercept;
    friend bool operator==(const Piece&, const Piece&) = default;
  };

  std::vector<Rational> breakpoints;
  std::vector<Piece> pieces;

  Rational operator()(const Rational& t) const {
    std::size_t k = 0;
    while (k < breakpoints.size() && t > breakpoints[k]) ++k;
    return pieces[k].slope * t + pieces[k].intercept;
  }

  friend bool operator==(const PiecewiseLinear&, const PiecewiseLinear&) = default;
};

/// N_f(t) = min over Exact terms of v(a_i) + i t, after validating that the
/// censored terms cannot matter.
inline Rational tropical_eval(const UniPoly& f, const Rational& t) {
  polygon(f);
  std::optional<Rational> best;
  for (const auto& [i, c] : f.terms()) {
    auto v = c.valuation();
    if (!v.is_exact()) continue;
    Rational val = v.value + Rational(static_cast<std::int64_t>(i)) * t;
    if (!best || val < *best) best = val;
  }
  return *best;
}

/// The same function assembled from the hull: on [-s_{j+1}, -s_j] the
/// minimising term is vertex j.
inline PiecewiseLinear tropical_function(const NewtonPolygon& np) {
  PiecewiseLinear n;
  std::size_t j = 0;
  while (j < np.segments.size() && np.segments[j].slope < 0) ++j;
  // vertex j is the minimiser just to the right of t = 0
  for (std::size_t k = j + 1; k-- > 0;) {
    const auto& v = np.vertices[k];
    n.pieces.push_back({Rational(static_cast<std::int64_t>(v.degree)), v.valuation.value});
    if (k > 0) n.breakpoints.push_back(-np.segments[k - 1].slope);
  }
  return n;
}

inline PiecewiseLinear tropical_function(const UniPoly& f) { return tropical_function(polygon(f)); }

/// min { t >= 0 : N(t) >= a }.
inline Rational first_crossing(const PiecewiseLinear& n, const Rational& a) {
  if (n(Rational(0)) >= a) return Rational(0);
  for (std::size_t k = 0; k < n.pieces.size(); ++k) {
    const Rational left = k == 0 ? Rational(0) : n.breakpoints[k - 1];
    const bool last = k + 1 == n.pieces.size();
    const auto& piece = n.pieces[k];
    if (!last && n(n.breakpoints[k]) < a) continue;
    if (piece.slope <= 0) {
      if (last) break;
      return left;
    }
    return std::max(left, (a - piece.intercept) / piece.slope);
  }
  fail(errc::not_attained, "the tropical function stays below " + to_string(a));
}

}  // namespace asfilt
