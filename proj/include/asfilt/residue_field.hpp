#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "asfilt/error.hpp"

namespace asfilt {

inline bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace detail {

struct ConwayEntry {
  unsigned p;
  unsigned degree;
  std::array<unsigned, 6> coefficients;  // low to high, monic term included
};

// Conway polynomials C_{p,r}; the residue generator g is a root.
inline constexpr std::array<ConwayEntry, 12> kConwayTable{{
    {2, 2, {1, 1, 1}},
    {2, 3, {1, 1, 0, 1}},
    {2, 4, {1, 1, 0, 0, 1}},
    {2, 5, {1, 0, 1, 0, 0, 1}},
    {3, 2, {2, 2, 1}},
    {3, 3, {1, 2, 0, 1}},
    {3, 4, {2, 0, 0, 2, 1}},
    {5, 2, {2, 4, 1}},
    {5, 3, {3, 3, 0, 1}},
    {7, 2, {3, 6, 1}},
    {11, 2, {2, 7, 1}},
    {13, 2, {2, 12, 1}},
}};

}  // namespace detail

/// The residue field F_q, q = p^r <= 256. Elements are codes in [0, q): the
/// base-p digits of a code are the coefficients of a polynomial in the
/// generator g, reduced modulo the Conway polynomial for (p, r).
class ResidueField {
 public:
  ResidueField() = default;

  ResidueField(unsigned p, unsigned degree) : p_(p), degree_(degree) {
    if (!is_prime(p)) fail(errc::invalid_argument, "residue characteristic must be prime");
    if (degree == 0) fail(errc::invalid_argument, "residue degree must be positive");
    q_ = 1;
    for (unsigned i = 0; i < degree; ++i) q_ *= p;
    if (q_ > 256) fail(errc::invalid_argument, "residue field larger than 256 elements");
    if (degree > 1) {
      const detail::ConwayEntry* entry = nullptr;
      for (const auto& e : detail::kConwayTable)
        if (e.p == p && e.degree == degree) entry = &e;
      if (entry == nullptr)
        fail(errc::invalid_argument, "no Conway polynomial tabulated for F_" + std::to_string(q_));
      modulus_.assign(entry->coefficients.begin(), entry->coefficients.begin() + degree + 1);
    } else {
      modulus_ = {0, 1};
    }
    build_tables();
  }

  unsigned characteristic() const { return p_; }
  unsigned degree() const { return degree_; }
  unsigned size() const { return q_; }
  bool is_prime_field() const { return degree_ == 1; }
  const std::vector<unsigned>& modulus() const { return modulus_; }

  std::uint8_t add(std::uint8_t a, std::uint8_t b) const { return add_[a * q_ + b]; }
  std::uint8_t mul(std::uint8_t a, std::uint8_t b) const { return mul_[a * q_ + b]; }
  std::uint8_t neg(std::uint8_t a) const { return neg_[a]; }
  std::uint8_t inv(std::uint8_t a) const {
    if (a == 0) fail(errc::invalid_argument, "zero has no inverse in the residue field");
    return inv_[a];
  }
  std::uint8_t sub(std::uint8_t a, std::uint8_t b) const { return add(a, neg(b)); }

  std::uint8_t from_integer(long long n) const {
    long long r = n % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return static_cast<std::uint8_t>(r);
  }

  /// Code of the generator g (equals p, i.e. the polynomial g, when r > 1).
  std::uint8_t generator() const {
    return degree_ == 1 ? static_cast<std::uint8_t>(primitive_root()) : static_cast<std::uint8_t>(p_);
  }

  std::uint8_t pow(std::uint8_t a, unsigned e) const {
    std::uint8_t r = 1 % q_;
    for (; e > 0; e >>= 1, a = mul(a, a))
      if (e & 1) r = mul(r, a);
    return r;
  }

  unsigned multiplicative_order(std::uint8_t a) const {
    if (a == 0) return 0;
    std::uint8_t x = a;
    unsigned k = 1;
    while (x != 1) {
      x = mul(x, a);
      ++k;
    }
    return k;
  }

  /// Digits of the polynomial in g representing a code (low to high).
  std::vector<unsigned> digits(std::uint8_t code) const {
    std::vector<unsigned> out(degree_);
    unsigned c = code;
    for (unsigned i = 0; i < degree_; ++i, c /= p_) out[i] = c % p_;
    return out;
  }

 private:
  unsigned primitive_root() const {
    for (unsigned g = 1; g < p_; ++g) {
      unsigned x = g, k = 1;
      while (x != 1) {
        x = x * g % p_;
        ++k;
      }
      if (k == p_ - 1) return g;
    }
    return 1;
  }

  unsigned encode(const std::vector<unsigned>& poly) const {
    unsigned c = 0;
    for (unsigned i = degree_; i-- > 0;) c = c * p_ + poly[i];
    return c;
  }

  void build_tables() {
    add_.assign(q_ * q_, 0);
    mul_.assign(q_ * q_, 0);
    neg_.assign(q_, 0);
    inv_.assign(q_, 0);
    for (unsigned a = 0; a < q_; ++a) {
      auto da = digits(static_cast<std::uint8_t>(a));
      std::vector<unsigned> n(degree_);
      for (unsigned i = 0; i < degree_; ++i) n[i] = (p_ - da[i]) % p_;
      neg_[a] = static_cast<std::uint8_t>(encode(n));
      for (unsigned b = 0; b < q_; ++b) {
        auto db = digits(static_cast<std::uint8_t>(b));
        std::vector<unsigned> s(degree_);
        for (unsigned i = 0; i < degree_; ++i) s[i] = (da[i] + db[i]) % p_;
        add_[a * q_ + b] = static_cast<std::uint8_t>(encode(s));

        std::vector<unsigned> prod(2 * degree_, 0);
        for (unsigned i = 0; i < degree_; ++i)
          for (unsigned j = 0; j < degree_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
        // reduce by the monic modulus
        for (unsigned k = 2 * degree_ - 1; k >= degree_ && k > 0; --k) {
          unsigned c = prod[k];
          if (c == 0) continue;
          prod[k] = 0;
          for (unsigned i = 0; i < degree_; ++i) {
            unsigned idx = k - degree_ + i;
            prod[idx] = (prod[idx] + (p_ - c) * modulus_[i]) % p_;
          }
        }
        prod.resize(degree_);
        mul_[a * q_ + b] = static_cast<std::uint8_t>(encode(prod));
      }
    }
    for (unsigned a = 1; a < q_; ++a)
      for (unsigned b = 1; b < q_; ++b)
        if (mul_[a * q_ + b] == 1) inv_[a] = static_cast<std::uint8_t>(b);
  }

  unsigned p_ = 2;
  unsigned degree_ = 1;
  unsigned q_ = 2;
  std::vector<unsigned> modulus_;
  std::vector<std::uint8_t> add_, mul_, neg_, inv_;
};

}  // namespace asfilt
