#pragma once

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "asfilt/asfilt.hpp"
#include "json.hpp"

namespace testsupport {

using namespace asfilt;

inline std::string data_path(const std::string& name) { return std::string(ASFILT_DATA_DIR) + "/" + name; }

inline Presentation load(const std::string& name) {
  std::ifstream in(data_path(name));
  return parse_presentation(nlohmann::json::parse(in));
}

inline TruncElement random_element(const RingModel& ring, std::mt19937_64& rng, unsigned min_order = 0) {
  TruncElement x(ring);
  if (!ring.is_equal_char()) {
    std::uint64_t mod = 1;
    for (unsigned i = 0; i < ring.precision(); ++i) mod *= ring.p();
    x = ring.from_integer(static_cast<long long>(rng() % mod));
    for (unsigned i = 0; i < min_order; ++i) x = x * ring.from_integer(ring.p());
    return x;
  }
  std::uniform_int_distribution<unsigned> residue(0, ring.q() - 1);
  for (unsigned i = min_order; i < ring.precision(); ++i) x.set_digit(i, static_cast<std::uint8_t>(residue(rng)));
  return x;
}

inline TruncElement random_unit(const RingModel& ring, std::mt19937_64& rng) {
  for (;;) {
    auto x = random_element(ring, rng);
    if (x.order() == 0) return x;
  }
}

/// Element with exact valuation k/m (a unit times u^k).
inline TruncElement element_of_order(const RingModel& ring, unsigned k, std::mt19937_64& rng) {
  auto unit = random_unit(ring, rng);
  if (!ring.is_equal_char()) {
    TruncElement r = unit;
    for (unsigned i = 0; i < k; ++i) r = r * ring.from_integer(ring.p());
    return r;
  }
  return unit.shift_up(k);
}

/// Minimum over exact coefficients of v(a_i) + i t, computed term by term.
inline Rational naive_tropical(const UniPoly& f, const Rational& t) {
  bool first = true;
  Rational best;
  for (const auto& [i, c] : f.terms()) {
    auto v = c.valuation();
    if (!v.is_exact()) continue;
    Rational val = v.value + Rational(i) * t;
    if (first || val < best) best = val;
    first = false;
  }
  return best;
}

/// X * prod (X - c_i u^{k_i}) with residues c_i != 0.
struct SplitRoot {
  std::uint8_t residue;
  unsigned index;
};

inline UniPoly split_poly(const RingModel& ring, const std::vector<SplitRoot>& roots) {
  UniPoly f = UniPoly::variable(ring);
  for (const auto& r : roots) {
    UniPoly factor = UniPoly::variable(ring) - UniPoly::constant(ring.monomial(r.residue, r.index));
    f = f * factor;
  }
  return f;
}

/// X^p - u^c X over F_p[u]/(u^precision).
inline Presentation tate_oort(unsigned p, unsigned c, unsigned precision) {
  RingModel ring = RingModel::equal_char(p, p, precision);
  UniPoly f(ring);
  f.set(p, ring.one());
  f.set(1, -ring.monomial(1, c));
  return Presentation::monogenic(f);
}

/// Monogenic f = X * (unit) + ... with every monomial degree = 1 mod (p-1),
/// unit leading coefficient and linear coefficient of exact valuation
/// 1..max_c over the base model.
inline Presentation random_good_shape(const RingModel& ring, unsigned max_terms, unsigned max_c, std::mt19937_64& rng) {
  const unsigned p = ring.p();
  const unsigned top = 1 + (p - 1) * (1 + static_cast<unsigned>(rng() % max_terms));
  MultiPoly f(ring, 1);
  const unsigned c = 1 + static_cast<unsigned>(rng() % max_c);
  f.set({1}, element_of_order(ring, c, rng));
  for (unsigned deg = p; deg < top; deg += p - 1)
    if (rng() % 2) f.set({deg}, random_element(ring, rng, static_cast<unsigned>(rng() % (ring.precision() + 1))));
  f.set({top}, random_unit(ring, rng));
  return Presentation(ring, {"X"}, {f});
}

// Determinants by the Leibniz formula; independent of the Laplace expansion
// in the library.
inline TruncElement leibniz_det(const std::vector<std::vector<TruncElement>>& a, const RingModel& ring) {
  const std::size_t n = a.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  TruncElement total = ring.zero();
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    TruncElement term = ring.one();
    for (std::size_t i = 0; i < n; ++i) term = term * a[i][perm[i]];
    if (inversions % 2) total -= term;
    else total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<long>(k), true);
  do {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask[i]) s.push_back(i);
    out.push_back(s);
  } while (std::prev_permutation(mask.begin(), mask.end()));
}

/// Elementary divisor valuations via determinantal divisors:
/// e_k = d_k - d_{k-1}, d_k = min v over k x k minors. Empty result when
/// some d_k is not exact at the model precision.
inline std::vector<Rational> determinantal_snf(const Matrix& m) {
  const std::size_t n = m.size();
  std::vector<Rational> d(n + 1, Rational(0));
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::vector<std::size_t>> rows, cols;
    subsets(n, k, rows);
    subsets(n, k, cols);
    bool exact = false;
    Rational best;
    for (const auto& r : rows)
      for (const auto& c : cols) {
        std::vector<std::vector<TruncElement>> sub(k);
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) sub[i].push_back(m(r[i], c[j]));
        auto v = leibniz_det(sub, m.ring()).valuation();
        if (v.is_exact() && (!exact || v.value < best)) {
          best = v.value;
          exact = true;
        }
      }
    if (!exact) return {};
    d[k] = best;
  }
  std::vector<Rational> e;
  for (std::size_t k = 1; k <= n; ++k) e.push_back(d[k] - d[k - 1]);
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace testsupport
