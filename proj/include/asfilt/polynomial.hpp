#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "asfilt/error.hpp"
#include "asfilt/ring.hpp"

namespace asfilt {

/// One-variable polynomial over a RingModel, stored sparsely. A degree absent
/// from the map is an exact zero; a stored coefficient that is zero at
/// precision is a censored value whose true valuation is only bounded below.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(RingModel ring) : ring_(ring) {}

  const RingModel& ring() const { return ring_; }
  const std::map<unsigned, TruncElement>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void set(unsigned degree, const TruncElement& c) {
    if (!(c.ring() == ring_)) fail(errc::model_mismatch, "coefficient model differs from polynomial model");
    terms_[degree] = c;
  }
  void erase(unsigned degree) { terms_.erase(degree); }

  bool has(unsigned degree) const { return terms_.count(degree) != 0; }
  TruncElement coefficient(unsigned degree) const {
    auto it = terms_.find(degree);
    return it == terms_.end() ? ring_.zero() : it->second;
  }

  unsigned degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }
  unsigned lowest_degree() const { return terms_.empty() ? 0 : terms_.begin()->first; }

  static UniPoly variable(RingModel ring) {
    UniPoly x(ring);
    x.set(1, ring.one());
    return x;
  }

  static UniPoly constant(const TruncElement& c) {
    UniPoly r(c.ring());
    r.set(0, c);
    return r;
  }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    UniPoly r = a;
    for (const auto& [k, c] : b.terms_) {
      auto it = r.terms_.find(k);
      if (it == r.terms_.end()) r.terms_.emplace(k, c);
      else it->second += c;
    }
    return r;
  }

  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
    UniPoly nb = b;
    for (auto& [k, c] : nb.terms_) c = -c;
    return a + nb;
  }

  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    UniPoly r(a.ring_);
    for (const auto& [i, ci] : a.terms_)
      for (const auto& [j, cj] : b.terms_) {
        auto it = r.terms_.find(i + j);
        if (it == r.terms_.end()) r.terms_.emplace(i + j, ci * cj);
        else it->second += ci * cj;
      }
    return r;
  }

  TruncElement operator()(const TruncElement& x) const {
    TruncElement acc = x.ring().zero();
    unsigned prev = degree();
    bool first = true;
    // Horner over the sparse support, highest degree first
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      if (!first)
        for (unsigned k = it->first; k < prev; ++k) acc = acc * x;
      acc += embed_into(it->second, x.ring());
      prev = it->first;
      first = false;
    }
    for (unsigned k = 0; k < prev && !first; ++k) acc = acc * x;
    return acc;
  }

  friend bool operator==(const UniPoly&, const UniPoly&) = default;

 private:
  RingModel ring_;
  std::map<unsigned, TruncElement> terms_;
};

using Exponent = std::vector<unsigned>;

inline unsigned total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0u); }

/// Sparse multivariate polynomial; same absent-versus-censored convention as
/// UniPoly.
class MultiPoly {
 public:
  MultiPoly() = default;
  MultiPoly(RingModel ring, unsigned variables) : ring_(ring), variables_(variables) {}

  const RingModel& ring() const { return ring_; }
  unsigned variables() const { return variables_; }
  const std::map<Exponent, TruncElement>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  void set(const Exponent& e, const TruncElement& c) {
    if (e.size() != variables_) fail(errc::invalid_argument, "exponent arity differs from variable count");
    if (!(c.ring() == ring_)) fail(errc::model_mismatch, "coefficient model differs from polynomial model");
    terms_[e] = c;
  }

  void add_term(const Exponent& e, const TruncElement& c) {
    auto it = terms_.find(e);
    if (it == terms_.end()) set(e, c);
    else it->second += c;
  }

  TruncElement coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? ring_.zero() : it->second;
  }

  unsigned max_total_degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return d;
  }

  static MultiPoly linear_form(RingModel ring, std::span<const TruncElement> coefficients) {
    MultiPoly r(ring, static_cast<unsigned>(coefficients.size()));
    for (unsigned k = 0; k < coefficients.size(); ++k) {
      Exponent e(coefficients.size(), 0);
      e[k] = 1;
      r.set(e, coefficients[k]);
    }
    return r;
  }

  static MultiPoly constant(RingModel ring, unsigned variables, const TruncElement& c) {
    MultiPoly r(ring, variables);
    r.set(Exponent(variables, 0), c);
    return r;
  }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly r(a.ring_, a.variables_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponent e(ea.size());
        for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
        r.add_term(e, ca * cb);
      }
    return r;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
  }

  /// The part of total degree in [lo, hi].
  MultiPoly degree_range(unsigned lo, unsigned hi) const {
    MultiPoly r(ring_, variables_);
    for (const auto& [e, c] : terms_) {
      unsigned d = total_degree(e);
      if (d >= lo && d <= hi) r.terms_.emplace(e, c);
    }
    return r;
  }

  /// Evaluate at a point whose coordinates live in a model this polynomial
  /// embeds into.
  TruncElement operator()(std::span<const TruncElement> x) const {
    if (x.size() != variables_) fail(errc::invalid_argument, "point arity differs from variable count");
    const RingModel target = x.empty() ? ring_ : x[0].ring();
    std::vector<unsigned> max_exp(variables_, 0);
    for (const auto& [e, c] : terms_)
      for (unsigned k = 0; k < variables_; ++k) max_exp[k] = std::max(max_exp[k], e[k]);
    std::vector<std::vector<TruncElement>> powers(variables_);
    for (unsigned k = 0; k < variables_; ++k) {
      powers[k].reserve(max_exp[k] + 1);
      powers[k].push_back(target.one());
      for (unsigned j = 1; j <= max_exp[k]; ++j) powers[k].push_back(powers[k].back() * x[k]);
    }
    TruncElement acc = target.zero();
    for (const auto& [e, c] : terms_) {
      TruncElement t = embed_into(c, target);
      for (unsigned k = 0; k < variables_; ++k)
        if (e[k] > 0) t = t * powers[k][e[k]];
      acc += t;
    }
    return acc;
  }

  /// Coefficients of this polynomial mapped into another model.
  MultiPoly embedded(const RingModel& target) const {
    MultiPoly r(target, variables_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, embed_into(c, target));
    return r;
  }

  UniPoly to_univariate() const {
    if (variables_ != 1) fail(errc::not_monogenic, "polynomial has " + std::to_string(variables_) + " variables");
    UniPoly r(ring_);
    for (const auto& [e, c] : terms_) r.set(e[0], c);
    return r;
  }

  friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

 private:
  RingModel ring_;
  unsigned variables_ = 0;
  std::map<Exponent, TruncElement> terms_;
};

}  // namespace asfilt
