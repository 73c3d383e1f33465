#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "asfilt/error.hpp"
#include "asfilt/presentation.hpp"

// Exhaustive checks over F_q[u]/(u^M). Points of the maximal ideal are
// enumerated digit by digit; a "disk of radius r" is every representable point
// whose coordinates all have valuation >= r.

namespace asfilt {

using Point = std::vector<TruncElement>;

struct EnumerationOptions {
  std::uint64_t budget = 10'000'000;
  unsigned shards = 1;
};

enum class Membership { Member, NonMember, Undecidable };

inline std::string to_string(Membership m) {
  switch (m) {
    case Membership::Member: return "member";
    case Membership::NonMember: return "non-member";
    case Membership::Undecidable: return "undecidable";
  }
  return "?";
}

inline Rational min_valuation(std::span<const TruncElement> x) {
  Rational best = x.empty() ? Rational(0) : x[0].ring().horizon();
  for (const auto& c : x) best = std::min(best, c.valuation().value);
  return best;
}

inline unsigned min_order(std::span<const TruncElement> x) {
  unsigned best = std::numeric_limits<unsigned>::max();
  for (const auto& c : x) best = std::min(best, c.order());
  return best;
}

/// Points of R^d whose digits at indices [first, end) are free and all other
/// digits are zero.
class PointSet {
 public:
  PointSet(RingModel ring, unsigned dimension, unsigned first, unsigned end)
      : ring_(ring), dimension_(dimension), first_(first), end_(std::max(first, end)) {
    if (!ring.is_equal_char()) fail(errc::model_mismatch, "enumeration needs an equal-characteristic model");
    if (end_ > ring.precision()) end_ = ring.precision();
    if (first_ > end_) first_ = end_;
  }

  /// v(x_i) >= radius for every coordinate, inside the maximal ideal.
  static PointSet disk(RingModel ring, unsigned dimension, const Rational& radius) {
    std::int64_t first = std::max<std::int64_t>(1, ceil(radius * Rational(ring.ramification())));
    first = std::min<std::int64_t>(first, ring.precision());
    return PointSet(ring, dimension, static_cast<unsigned>(first), ring.precision());
  }

  const RingModel& ring() const { return ring_; }
  unsigned dimension() const { return dimension_; }
  unsigned first_index() const { return first_; }
  unsigned end_index() const { return end_; }
  unsigned free_digits() const { return (end_ - first_) * dimension_; }

  /// q^((end - first) d), saturating at uint64 max.
  std::uint64_t cardinality() const {
    std::uint64_t n = 1;
    for (unsigned i = 0; i < free_digits(); ++i) {
      if (n > std::numeric_limits<std::uint64_t>::max() / ring_.q()) return std::numeric_limits<std::uint64_t>::max();
      n *= ring_.q();
    }
    return n;
  }

  /// Visit the points whose first free digit c has c % shards == shard.
  template <class Fn>
  void for_each(unsigned shard, unsigned shards, Fn&& fn) const {
    Point x(dimension_, ring_.zero());
    const unsigned width = end_ - first_;
    const unsigned total = free_digits();
    if (total == 0) {
      if (shard == 0) fn(std::span<const TruncElement>(x));
      return;
    }
    const unsigned q = ring_.q();
    std::vector<std::uint8_t> digits(total, 0);
    auto place = [&](unsigned pos, std::uint8_t value) {
      digits[pos] = value;
      x[pos / width].set_digit(first_ + pos % width, value);
    };
    for (unsigned lead = shard; lead < q; lead += shards) {
      place(0, static_cast<std::uint8_t>(lead));
      for (unsigned pos = 1; pos < total; ++pos) place(pos, 0);
      for (;;) {
        fn(std::span<const TruncElement>(x));
        unsigned pos = 1;
        while (pos < total && digits[pos] + 1u == q) place(pos++, 0);
        if (pos >= total) break;
        place(pos, static_cast<std::uint8_t>(digits[pos] + 1));
      }
    }
  }

 private:
  RingModel ring_;
  unsigned dimension_;
  unsigned first_;
  unsigned end_;
};

namespace detail {

inline void check_budget(const PointSet& set, const EnumerationOptions& opts) {
  if (set.cardinality() > opts.budget)
    fail(errc::enumeration_too_large, std::to_string(set.free_digits()) + " free digits over F_" +
                                          std::to_string(set.ring().q()) + " exceed the budget of " +
                                          std::to_string(opts.budget) + " points");
}

/// Run fn(shard) -> R on every shard concurrently and fold with merge.
template <class R, class Fn, class Merge>
R run_sharded(unsigned shards, Fn fn, Merge merge) {
  shards = std::max(1u, shards);
  if (shards == 1) return fn(0u);
  std::vector<std::future<R>> parts;
  for (unsigned s = 0; s < shards; ++s) parts.push_back(std::async(std::launch::async, fn, s));
  R acc = parts[0].get();
  for (unsigned s = 1; s < shards; ++s) merge(acc, parts[s].get());
  return acc;
}

/// Polynomial system with coefficients pre-embedded into the evaluation
/// model and reusable power tables. Not thread-safe; copy per shard.
class CompiledSystem {
 public:
  CompiledSystem(const std::vector<MultiPoly>& polys, const RingModel& target) : target_(target) {
    vars_ = polys.empty() ? 0 : polys[0].variables();
    max_exp_.assign(vars_, 0);
    for (const auto& f : polys) {
      std::vector<Term> terms;
      for (const auto& [e, c] : f.terms()) {
        terms.push_back({embed_into(c, target), e});
        for (unsigned k = 0; k < vars_; ++k) max_exp_[k] = std::max(max_exp_[k], e[k]);
      }
      systems_.push_back(std::move(terms));
    }
    powers_.resize(vars_);
    for (unsigned k = 0; k < vars_; ++k) powers_[k].assign(max_exp_[k] + 1, target.one());
  }

  std::size_t size() const { return systems_.size(); }

  void evaluate(std::span<const TruncElement> x, std::span<TruncElement> out) {
    for (unsigned k = 0; k < vars_; ++k)
      for (unsigned j = 1; j <= max_exp_[k]; ++j) powers_[k][j] = powers_[k][j - 1] * x[k];
    for (std::size_t i = 0; i < systems_.size(); ++i) {
      TruncElement acc = target_.zero();
      for (const auto& t : systems_[i]) {
        TruncElement v = t.c;
        for (unsigned k = 0; k < vars_; ++k)
          if (t.e[k] > 0) v = v * powers_[k][t.e[k]];
        acc += v;
      }
      out[i] = acc;
    }
  }

 private:
  struct Term {
    TruncElement c;
    Exponent e;
  };
  RingModel target_;
  unsigned vars_ = 0;
  std::vector<unsigned> max_exp_;
  std::vector<std::vector<Term>> systems_;
  std::vector<std::vector<TruncElement>> powers_;
};

inline void check_enumeration_model(const Presentation& pres, const RingModel& target) {
  if (!target.is_equal_char() || !pres.ring().is_equal_char())
    fail(errc::model_mismatch, "exhaustive enumeration is equal-characteristic only");
  if (!embeddable(pres.ring(), target))
    fail(errc::model_mismatch, "presentation over " + describe(pres.ring()) + " does not embed into " +
                                   describe(target));
}

inline Point truncate_point(std::span<const TruncElement> x, unsigned digits) {
  Point r(x.begin(), x.end());
  for (auto& c : r)
    for (unsigned i = digits; i < c.ring().precision(); ++i) c.set_digit(i, 0);
  return r;
}

inline Point apply_linear(const Matrix& v, std::span<const TruncElement> x) {
  Point y(v.size(), x[0].ring().zero());
  for (std::size_t j = 0; j < v.size(); ++j)
    for (std::size_t k = 0; k < v.size(); ++k) y[j] += v(j, k) * x[k];
  return y;
}

inline Matrix embed_matrix(const Matrix& m, const RingModel& target) {
  Matrix r(target, m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) r(i, j) = embed_into(m(i, j), target);
  return r;
}

}  // namespace detail

/// Decide v(f_i(x)) >= a for all i from censored valuations.
inline Membership tubular_membership(const Presentation& pres, std::span<const TruncElement> x,
                                     const Rational& a) {
  if (x.size() != pres.dimension()) fail(errc::invalid_argument, "point has the wrong dimension");
  const RingModel target = x[0].ring();
  for (const auto& c : x)
    if (!(c.ring() == target)) fail(errc::model_mismatch, "point coordinates live in different models");
  if (!embeddable(pres.ring(), target))
    fail(errc::model_mismatch, "presentation over " + describe(pres.ring()) + " does not embed into " +
                                   describe(target));
  bool undecided = false;
  for (const auto& f : pres.equations()) {
    auto v = f(x).valuation();
    if (v.certainly_lt(a)) return Membership::NonMember;
    if (!v.certainly_ge(a)) undecided = true;
  }
  return undecided ? Membership::Undecidable : Membership::Member;
}

struct ZeroSet {
  RingModel ring;
  unsigned dimension = 0;
  std::vector<Point> points;           // class representatives, sorted
  Rational artifact_threshold;         // differences of valuation >= this are not resolved
  unsigned representative_digits = 0;  // digits kept per coordinate
  std::uint64_t artifact_points = 0;   // nonzero points with every coordinate past the threshold
  std::uint64_t enumerated = 0;
};

/// Zeros of the f_i at the model's precision, one representative per class
/// modulo the artifact threshold horizon - deg(G). Every exactly representable
/// zero with valuation below the threshold appears; the list is a superset
/// of the true zeros up to that resolution.
inline ZeroSet zero_set(const Presentation& pres, const RingModel& target, const EnumerationOptions& opts = {}) {
  detail::check_enumeration_model(pres, target);
  const Rational deg = degree(pres);
  const Rational threshold = target.horizon() - deg;
  if (threshold <= 0)
    fail(errc::precision_insufficient, "horizon " + to_string(target.horizon()) + " does not exceed deg(G) = " +
                                           to_string(deg));
  const auto digits = static_cast<unsigned>(ceil(threshold * Rational(target.ramification())));
  PointSet set(target, pres.dimension(), 1, digits);
  detail::check_budget(set, opts);

  using Found = std::vector<Point>;
  auto shard_fn = [&](unsigned shard) {
    detail::CompiledSystem sys(pres.equations(), target);
    std::vector<TruncElement> out(sys.size());
    Found found;
    set.for_each(shard, opts.shards, [&](std::span<const TruncElement> x) {
      sys.evaluate(x, out);
      for (const auto& z : out)
        if (!z.is_zero()) return;
      found.emplace_back(x.begin(), x.end());
    });
    return found;
  };
  Found all = detail::run_sharded<Found>(opts.shards, shard_fn, [](Found& acc, Found&& part) {
    acc.insert(acc.end(), part.begin(), part.end());
  });
  std::sort(all.begin(), all.end());

  ZeroSet zs;
  zs.ring = target;
  zs.dimension = pres.dimension();
  zs.points = std::move(all);
  zs.artifact_threshold = threshold;
  zs.representative_digits = digits;
  zs.artifact_points = PointSet(target, pres.dimension(), digits, target.precision()).cardinality() - 1;
  zs.enumerated = set.cardinality();
  return zs;
}

struct AdjugateTransform {
  LinearPart linear;
  std::vector<MultiPoly> g;  // g_j(x) = sum_k V_jk x_k
  std::vector<MultiPoly> h;  // h_i = f_i o g = det(U) x_i + R_i
  bool shape_preserved = true;  // no terms of total degree in [2, p - 1]
};

inline constexpr std::size_t kCompositionBudget = 200'000;

inline AdjugateTransform adjugate_transform(const Presentation& pres) {
  AdjugateTransform t{linear_part(pres), {}, {}, true};
  const unsigned d = pres.dimension();
  const RingModel ring = pres.ring();
  for (unsigned j = 0; j < d; ++j) {
    std::vector<TruncElement> row;
    for (unsigned k = 0; k < d; ++k) row.push_back(t.linear.v(j, k));
    t.g.push_back(MultiPoly::linear_form(ring, row));
  }
  std::vector<std::vector<MultiPoly>> powers(d);
  auto power = [&](unsigned j, unsigned n) -> const MultiPoly& {
    auto& pw = powers[j];
    if (pw.empty()) pw.push_back(MultiPoly::constant(ring, d, ring.one()));
    while (pw.size() <= n) {
      pw.push_back(pw.back() * t.g[j]);
      if (pw.back().size() > kCompositionBudget)
        fail(errc::composition_overflow, "power of a linear form exceeds the term budget");
    }
    return pw[n];
  };
  for (const auto& f : pres.equations()) {
    MultiPoly hi(ring, d);
    for (const auto& [e, c] : f.terms()) {
      MultiPoly term = MultiPoly::constant(ring, d, c);
      for (unsigned j = 0; j < d; ++j)
        if (e[j] > 0) term = term * power(j, e[j]);
      hi = hi + term;
      if (hi.size() > kCompositionBudget) fail(errc::composition_overflow, "composite exceeds the term budget");
    }
    t.h.push_back(std::move(hi));
  }
  const unsigned p = ring.p();
  if (p > 2)
    for (const auto& hi : t.h) {
      const MultiPoly low = hi.degree_range(2, p - 1);
      for (const auto& [e, c] : low.terms())
        if (!c.is_zero()) t.shape_preserved = false;
    }
  return t;
}

struct HPreimageReport {
  Rational a;
  Rational bound;
  Rational degree;
  Rational radius;  // a - deg(G)
  bool theorem_applies = false;
  RingModel ring;
  std::uint64_t enumerated = 0;
  Rational artifact_threshold;
  std::uint64_t artifacts = 0;      // zeros with every coordinate past the threshold
  std::uint64_t resolved = 0;       // enumerated points with some coordinate below the threshold
  std::vector<Point> nonzero_zeros;  // class representatives
  bool pass = false;
};

/// Enumerate the disk of radius a - deg(G) and list the points other than 0
/// where h = f o g vanishes at precision.
inline HPreimageReport verify_h_preimage(const Presentation& pres, const Rational& a, const RingModel& target,
                                         const EnumerationOptions& opts = {}) {
  detail::check_enumeration_model(pres, target);
  HPreimageReport r;
  r.a = a;
  r.degree = degree(pres);
  r.bound = bound(pres);
  r.radius = a - r.degree;
  r.theorem_applies = a > r.bound;
  r.ring = target;
  r.artifact_threshold = target.horizon() - r.degree;
  if (r.artifact_threshold <= 0)
    fail(errc::precision_insufficient, "horizon " + to_string(target.horizon()) + " does not exceed deg(G)");
  if (r.theorem_applies && target.horizon() < a)
    fail(errc::precision_insufficient, "horizon " + to_string(target.horizon()) + " is below a = " + to_string(a));
  const auto artifact_digits = static_cast<unsigned>(ceil(r.artifact_threshold * Rational(target.ramification())));

  const auto transform = adjugate_transform(pres);
  PointSet set = PointSet::disk(target, pres.dimension(), r.radius);
  detail::check_budget(set, opts);
  r.enumerated = set.cardinality();

  struct Partial {
    std::uint64_t artifacts = 0;
    std::uint64_t resolved = 0;
    std::set<Point> zeros;
  };
  auto shard_fn = [&](unsigned shard) {
    detail::CompiledSystem h(transform.h, target);
    std::vector<TruncElement> out(h.size());
    Partial part;
    set.for_each(shard, opts.shards, [&](std::span<const TruncElement> x) {
      const bool artifact = min_order(x) >= artifact_digits;
      if (!artifact) ++part.resolved;
      h.evaluate(x, out);
      for (const auto& z : out)
        if (!z.is_zero()) return;
      if (artifact) ++part.artifacts;
      else part.zeros.insert(detail::truncate_point(x, artifact_digits));
    });
    return part;
  };
  auto merged = detail::run_sharded<Partial>(opts.shards, shard_fn, [](Partial& acc, Partial&& p) {
    acc.artifacts += p.artifacts;
    acc.resolved += p.resolved;
    acc.zeros.insert(p.zeros.begin(), p.zeros.end());
  });
  r.artifacts = merged.artifacts;
  r.resolved = merged.resolved;
  r.nonzero_zeros.assign(merged.zeros.begin(), merged.zeros.end());
  // a run that resolves no point at all certifies nothing
  r.pass = !r.theorem_applies || (r.nonzero_zeros.empty() && r.resolved > 0);
  return r;
}

struct DiskImageReport {
  Rational a;
  Rational bound;
  Rational degree;
  Rational radius;
  Rational epsilon;
  RingModel ring;
  std::uint64_t inclusion_checked = 0;
  std::uint64_t inclusion_failures = 0;
  std::uint64_t inclusion_undecidable = 0;
  std::uint64_t composite_mismatches = 0;  // h(x) != f(g(x))
  std::uint64_t det_estimate_checked = 0;
  std::uint64_t det_estimate_failures = 0;
  std::uint64_t tail_estimate_checked = 0;
  std::uint64_t tail_estimate_failures = 0;
  std::uint64_t tail_estimate_undecided = 0;
  RingModel sample_ring;
  std::uint64_t exclusion_samples = 0;
  std::uint64_t exclusion_failures = 0;
  std::uint64_t exclusion_undecidable = 0;
  bool linear_part_ok = false;
  bool shape_preserved = false;
  bool pass = false;
};

struct DiskImageOptions {
  EnumerationOptions enumeration;
  std::optional<Rational> epsilon;
  unsigned samples = 200;
  std::uint64_t seed = 1;
};

namespace detail {

// Smallest ramification (a multiple of m0) that can represent a valuation in
// [lo, hi), with the digits needed to keep valuations below `a` exact.
inline RingModel sampling_model(const RingModel& base, const Rational& lo, const Rational& hi, const Rational& a) {
  const unsigned m0 = base.ramification();
  for (unsigned m = m0; m <= kMaxDigits; m += m0) {
    const Rational rm(m);
    const std::int64_t k = ceil(lo * rm);
    if (!(Rational(k) < hi * rm)) continue;
    const std::int64_t digits = std::max<std::int64_t>(ceil(a * rm), k + 1);
    if (digits > static_cast<std::int64_t>(kMaxDigits)) break;
    if (static_cast<std::uint64_t>(digits) > static_cast<std::uint64_t>(base.precision()) * (m / m0)) break;
    return RingModel::equal_char(base.p(), base.q(), static_cast<unsigned>(digits), m);
  }
  fail(errc::precision_insufficient, "no model within " + std::to_string(kMaxDigits) +
                                         " digits represents a valuation in [" + to_string(lo) + ", " +
                                         to_string(hi) + ")");
}

}  // namespace detail

/// Both inclusions of g(D(a - deg)) = X^a_0 at finite precision, plus the two
/// valuation estimates on det(U) x_i and R_i at every enumerated point.
inline DiskImageReport verify_disk_image(const Presentation& pres, const Rational& a, const RingModel& target,
                                         const DiskImageOptions& opts = {}) {
  detail::check_enumeration_model(pres, target);
  DiskImageReport r;
  r.a = a;
  r.degree = degree(pres);
  r.bound = bound(pres);
  if (!(a > r.bound))
    fail(errc::invalid_argument, "a = " + to_string(a) + " must exceed the bound " + to_string(r.bound));
  r.radius = a - r.degree;
  const auto p = static_cast<std::int64_t>(pres.ring().p());
  const Rational eps_max = Rational(p - 1, p) * a - r.degree;
  r.epsilon = opts.epsilon.value_or(eps_max / 2);
  if (!(r.epsilon > 0 && r.epsilon < eps_max))
    fail(errc::no_valid_epsilon, "epsilon must lie in (0, " + to_string(eps_max) + "), got " + to_string(r.epsilon));
  if (target.horizon() < a)
    fail(errc::precision_insufficient, "horizon " + to_string(target.horizon()) + " is below a = " + to_string(a));
  r.ring = target;

  const auto transform = adjugate_transform(pres);
  r.shape_preserved = transform.shape_preserved;
  {
    auto uv = transform.linear.u * transform.linear.v;
    r.linear_part_ok = uv == Matrix::identity(pres.ring(), pres.dimension()).scaled(transform.linear.det);
    const unsigned d = pres.dimension();
    for (unsigned i = 0; i < d; ++i)
      for (unsigned j = 0; j < d; ++j) {
        Exponent e(d, 0);
        e[j] = 1;
        auto expect = i == j ? transform.linear.det : pres.ring().zero();
        if (!(transform.h[i].coefficient(e) == expect)) r.linear_part_ok = false;
      }
  }

  // inclusion: every point of the disk lands in X^a under g
  PointSet set = PointSet::disk(target, pres.dimension(), r.radius);
  detail::check_budget(set, opts.enumeration);
  const unsigned d = pres.dimension();
  std::vector<MultiPoly> tails;
  for (const auto& hi : transform.h) tails.push_back(hi.degree_range(2, std::numeric_limits<unsigned>::max()));
  const Matrix v = detail::embed_matrix(transform.linear.v, target);
  const TruncElement det = embed_into(transform.linear.det, target);
  const Rational horizon = target.horizon();

  auto shard_fn = [&](unsigned shard) {
    detail::CompiledSystem f(pres.equations(), target), h(transform.h, target), tail(tails, target);
    std::vector<TruncElement> fz(d), hz(d), rz(d);
    DiskImageReport part;
    set.for_each(shard, opts.enumeration.shards, [&](std::span<const TruncElement> x) {
      const Point y = detail::apply_linear(v, x);
      f.evaluate(y, fz);
      h.evaluate(x, hz);
      tail.evaluate(x, rz);
      ++part.inclusion_checked;
      bool member = true, undecided = false;
      for (unsigned i = 0; i < d; ++i) {
        auto val = fz[i].valuation();
        if (val.certainly_lt(a)) member = false;
        else if (!val.certainly_ge(a)) undecided = true;
        if (!(fz[i] == hz[i])) ++part.composite_mismatches;
      }
      if (!member) ++part.inclusion_failures;
      else if (undecided) ++part.inclusion_undecidable;

      const Rational mv = min_valuation(x);
      for (unsigned i = 0; i < d; ++i) {
        auto vx = x[i].valuation();
        if (vx.is_exact() && r.degree + vx.value < horizon) {
          ++part.det_estimate_checked;
          auto vd = (det * x[i]).valuation();
          if (!(vd.is_exact() && vd.value == r.degree + vx.value)) ++part.det_estimate_failures;
        }
        if (mv < horizon) {
          const Rational need = Rational(p) * mv;
          auto vr = rz[i].valuation();
          if (vr.is_exact()) {
            ++part.tail_estimate_checked;
            if (vr.value < need) ++part.tail_estimate_failures;
          } else if (vr.value >= need) {
            ++part.tail_estimate_checked;
          } else {
            ++part.tail_estimate_undecided;
          }
        }
      }
    });
    return part;
  };
  auto merged = detail::run_sharded<DiskImageReport>(
      opts.enumeration.shards, shard_fn, [](DiskImageReport& acc, DiskImageReport&& p) {
        acc.inclusion_checked += p.inclusion_checked;
        acc.inclusion_failures += p.inclusion_failures;
        acc.inclusion_undecidable += p.inclusion_undecidable;
        acc.composite_mismatches += p.composite_mismatches;
        acc.det_estimate_checked += p.det_estimate_checked;
        acc.det_estimate_failures += p.det_estimate_failures;
        acc.tail_estimate_checked += p.tail_estimate_checked;
        acc.tail_estimate_failures += p.tail_estimate_failures;
        acc.tail_estimate_undecided += p.tail_estimate_undecided;
      });
  r.inclusion_checked = merged.inclusion_checked;
  r.inclusion_failures = merged.inclusion_failures;
  r.inclusion_undecidable = merged.inclusion_undecidable;
  r.composite_mismatches = merged.composite_mismatches;
  r.det_estimate_checked = merged.det_estimate_checked;
  r.det_estimate_failures = merged.det_estimate_failures;
  r.tail_estimate_checked = merged.tail_estimate_checked;
  r.tail_estimate_failures = merged.tail_estimate_failures;
  r.tail_estimate_undecided = merged.tail_estimate_undecided;

  // exclusion: sampled points with a - deg - eps <= min v(x_i) < a - deg
  const Rational lo = r.radius - r.epsilon;
  r.sample_ring = detail::sampling_model(pres.ring(), lo, r.radius, a);
  const RingModel& s = r.sample_ring;
  const Matrix vs = detail::embed_matrix(transform.linear.v, s);
  const Rational ms(s.ramification());
  const auto lo_digit = static_cast<unsigned>(std::max<std::int64_t>(1, ceil(lo * ms)));
  const auto hi_digit = static_cast<unsigned>(ceil(r.radius * ms));  // exclusive
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<unsigned> residue(0, s.q() - 1), nonzero(1, s.q() - 1);
  std::uniform_int_distribution<unsigned> low_index(lo_digit, hi_digit - 1), coord(0, d - 1);
  for (unsigned n = 0; n < opts.samples; ++n) {
    Point x(d, s.zero());
    for (auto& c : x)
      for (unsigned i = lo_digit; i < s.precision(); ++i) c.set_digit(i, static_cast<std::uint8_t>(residue(rng)));
    const unsigned j = coord(rng), k = low_index(rng);
    for (unsigned i = 0; i < k; ++i) x[j].set_digit(i, 0);
    x[j].set_digit(k, static_cast<std::uint8_t>(nonzero(rng)));
    const Point y = detail::apply_linear(vs, x);
    ++r.exclusion_samples;
    switch (tubular_membership(pres, y, a)) {
      case Membership::Member: ++r.exclusion_failures; break;
      case Membership::Undecidable: ++r.exclusion_undecidable; break;
      case Membership::NonMember: break;
    }
  }

  r.pass = r.linear_part_ok && r.inclusion_failures == 0 && r.inclusion_undecidable == 0 &&
           r.composite_mismatches == 0 && r.det_estimate_failures == 0 && r.tail_estimate_failures == 0 &&
           r.exclusion_failures == 0 && r.exclusion_undecidable == 0 && r.det_estimate_checked > 0;
  return r;
}

}  // namespace asfilt
