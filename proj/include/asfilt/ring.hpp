#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>

#include "asfilt/error.hpp"
#include "asfilt/rational.hpp"
#include "asfilt/residue_field.hpp"

namespace asfilt {

enum class RingKind { EqualChar, Padic };

/// Upper limit on the number of u-digits an equal-characteristic model keeps.
inline constexpr unsigned kMaxDigits = 64;

namespace detail {

struct ModelData {
  RingKind kind;
  unsigned p;
  unsigned residue_degree;
  unsigned q;
  unsigned precision;
  unsigned ramification;
  std::uint64_t modulus;  // p^precision for Padic, unused otherwise
  ResidueField field;
};

// Models are interned for the life of the process, so elements can refer to
// them through a plain pointer and two handles with equal parameters compare
// equal.
inline const ModelData* intern_model(RingKind kind, unsigned p, unsigned degree, unsigned precision,
                                     unsigned ramification) {
  static std::mutex mutex;
  static std::map<std::tuple<int, unsigned, unsigned, unsigned, unsigned>, std::unique_ptr<ModelData>>
      registry;
  std::lock_guard lock(mutex);
  auto key = std::make_tuple(static_cast<int>(kind), p, degree, precision, ramification);
  auto it = registry.find(key);
  if (it != registry.end()) return it->second.get();

  auto data = std::make_unique<ModelData>();
  data->kind = kind;
  data->p = p;
  data->residue_degree = degree;
  data->precision = precision;
  data->ramification = ramification;
  data->field = ResidueField(p, degree);
  data->q = data->field.size();
  data->modulus = 0;
  if (kind == RingKind::Padic) {
    unsigned __int128 m = 1;
    for (unsigned i = 0; i < precision; ++i) {
      m *= p;
      if (m > (static_cast<unsigned __int128>(1) << 62))
        fail(errc::invalid_argument, "p^precision exceeds 2^62 for a p-adic model");
    }
    data->modulus = static_cast<std::uint64_t>(m);
  }
  return registry.emplace(key, std::move(data)).first->second.get();
}

}  // namespace detail

/// A censored valuation in base-normalized units: Exact(v) or AtLeast(v).
struct ExtValuation {
  enum class Tag { Exact, AtLeast };

  Tag tag = Tag::AtLeast;
  Rational value{0};

  static ExtValuation exact(Rational v) { return {Tag::Exact, v}; }
  static ExtValuation at_least(Rational v) { return {Tag::AtLeast, v}; }

  bool is_exact() const { return tag == Tag::Exact; }
  /// True when the true valuation is provably >= a.
  bool certainly_ge(const Rational& a) const { return value >= a; }
  /// True when the true valuation is provably < a.
  bool certainly_lt(const Rational& a) const { return is_exact() && value < a; }

  friend bool operator==(const ExtValuation&, const ExtValuation&) = default;
};

inline std::string to_string(const ExtValuation& v) {
  return (v.is_exact() ? "Exact(" : "AtLeast(") + to_string(v.value) + ")";
}

inline std::ostream& operator<<(std::ostream& os, const ExtValuation& v) { return os << to_string(v); }

class TruncElement;

/// Handle to a truncated DVR model: F_q[u]/(u^M) with v(u) = 1/m, or Z/p^M.
class RingModel {
 public:
  RingModel() = default;

  static RingModel equal_char(unsigned p, unsigned q, unsigned precision, unsigned ramification = 1) {
    if (!is_prime(p)) fail(errc::invalid_argument, "p must be prime");
    if (precision == 0) fail(errc::invalid_argument, "precision must be positive");
    if (ramification == 0) fail(errc::invalid_argument, "ramification must be positive");
    if (precision > kMaxDigits)
      fail(errc::invalid_argument, "precision above " + std::to_string(kMaxDigits) + " digits");
    unsigned degree = 0;
    for (unsigned x = q; x > 1; x /= p) {
      if (x % p != 0) fail(errc::invalid_argument, "q must be a power of p");
      ++degree;
    }
    if (degree == 0) fail(errc::invalid_argument, "q must be a power of p");
    return RingModel(detail::intern_model(RingKind::EqualChar, p, degree, precision, ramification));
  }

  static RingModel padic(unsigned p, unsigned precision) {
    if (!is_prime(p)) fail(errc::invalid_argument, "p must be prime");
    if (precision == 0) fail(errc::invalid_argument, "precision must be positive");
    return RingModel(detail::intern_model(RingKind::Padic, p, 1, precision, 1));
  }

  bool valid() const { return data_ != nullptr; }
  RingKind kind() const { return data_->kind; }
  bool is_equal_char() const { return data_->kind == RingKind::EqualChar; }
  unsigned p() const { return data_->p; }
  unsigned q() const { return data_->q; }
  unsigned residue_degree() const { return data_->residue_degree; }
  unsigned precision() const { return data_->precision; }
  unsigned ramification() const { return data_->ramification; }
  std::uint64_t modulus() const { return data_->modulus; }
  const ResidueField& field() const { return data_->field; }

  /// precision / ramification: every valuation at or above it is censored.
  Rational horizon() const { return Rational(data_->precision, data_->ramification); }

  inline TruncElement zero() const;
  inline TruncElement one() const;
  inline TruncElement from_integer(long long n) const;
  /// u for EqualChar, p for Padic.
  inline TruncElement uniformizer() const;
  /// residue * u^index (EqualChar only).
  inline TruncElement monomial(std::uint8_t residue, unsigned index) const;

  const detail::ModelData* data() const { return data_; }

  friend bool operator==(const RingModel& a, const RingModel& b) { return a.data_ == b.data_; }

 private:
  explicit RingModel(const detail::ModelData* data) : data_(data) {}
  friend class TruncElement;

  const detail::ModelData* data_ = nullptr;
};

inline std::string describe(const RingModel& ring) {
  if (!ring.valid()) return "<no model>";
  if (ring.is_equal_char())
    return "F_" + std::to_string(ring.q()) + "[u]/(u^" + std::to_string(ring.precision()) + "), v(u)=1/" +
           std::to_string(ring.ramification());
  return "Z/" + std::to_string(ring.p()) + "^" + std::to_string(ring.precision());
}

/// An element of a RingModel. Trivially copyable; arithmetic is exact modulo
/// the precision ideal.
class TruncElement {
 public:
  TruncElement() = default;
  explicit TruncElement(const RingModel& ring) : model_(ring.data_) {}

  RingModel ring() const { return RingModel(model_); }

  bool is_zero() const {
    if (model_->kind == RingKind::Padic) return value_ == 0;
    for (unsigned i = 0; i < model_->precision; ++i)
      if (digits_[i] != 0) return false;
    return true;
  }

  /// Index of the lowest nonzero digit (u-units or p-adic order); precision
  /// when the element is zero.
  unsigned order() const {
    if (model_->kind == RingKind::Padic) {
      if (value_ == 0) return model_->precision;
      unsigned k = 0;
      for (std::uint64_t v = value_; v % model_->p == 0; v /= model_->p) ++k;
      return k;
    }
    for (unsigned i = 0; i < model_->precision; ++i)
      if (digits_[i] != 0) return i;
    return model_->precision;
  }

  ExtValuation valuation() const {
    unsigned k = order();
    if (k >= model_->precision) return ExtValuation::at_least(Rational(model_->precision, model_->ramification));
    return ExtValuation::exact(Rational(k, model_->ramification));
  }

  /// EqualChar residue digit at index i.
  std::uint8_t digit(unsigned i) const { return i < model_->precision ? digits_[i] : 0; }
  void set_digit(unsigned i, std::uint8_t residue) { digits_[i] = residue; }
  /// Padic representative in [0, p^M).
  std::uint64_t value() const { return value_; }

  TruncElement operator-() const {
    TruncElement r(*this);
    if (model_->kind == RingKind::Padic) {
      r.value_ = value_ == 0 ? 0 : model_->modulus - value_;
    } else {
      const auto& f = model_->field;
      for (unsigned i = 0; i < model_->precision; ++i) r.digits_[i] = f.neg(digits_[i]);
    }
    return r;
  }

  TruncElement& operator+=(const TruncElement& o) {
    check_same(o);
    if (model_->kind == RingKind::Padic) {
      value_ = static_cast<std::uint64_t>((static_cast<unsigned __int128>(value_) + o.value_) % model_->modulus);
    } else if (model_->residue_degree == 1) {
      const unsigned p = model_->p;
      for (unsigned i = 0; i < model_->precision; ++i) {
        unsigned s = digits_[i] + o.digits_[i];
        digits_[i] = static_cast<std::uint8_t>(s >= p ? s - p : s);
      }
    } else {
      const auto& f = model_->field;
      for (unsigned i = 0; i < model_->precision; ++i) digits_[i] = f.add(digits_[i], o.digits_[i]);
    }
    return *this;
  }

  TruncElement& operator-=(const TruncElement& o) { return *this += -o; }

  TruncElement& operator*=(const TruncElement& o) {
    *this = *this * o;
    return *this;
  }

  friend TruncElement operator+(TruncElement a, const TruncElement& b) { return a += b; }
  friend TruncElement operator-(TruncElement a, const TruncElement& b) { return a -= b; }

  friend TruncElement operator*(const TruncElement& a, const TruncElement& b) {
    a.check_same(b);
    TruncElement r(a.ring());
    const auto* m = a.model_;
    if (m->kind == RingKind::Padic) {
      r.value_ = static_cast<std::uint64_t>(static_cast<unsigned __int128>(a.value_) * b.value_ % m->modulus);
      return r;
    }
    const unsigned n = m->precision;
    const unsigned la = a.order(), lb = b.order();
    if (la + lb >= n) return r;
    if (m->residue_degree == 1) {
      std::array<std::uint32_t, kMaxDigits> acc{};
      for (unsigned i = la; i + lb < n; ++i) {
        const std::uint32_t ai = a.digits_[i];
        if (ai == 0) continue;
        for (unsigned j = lb; i + j < n; ++j) acc[i + j] += ai * b.digits_[j];
      }
      for (unsigned k = la + lb; k < n; ++k) r.digits_[k] = static_cast<std::uint8_t>(acc[k] % m->p);
    } else {
      const auto& f = m->field;
      for (unsigned i = la; i + lb < n; ++i) {
        const std::uint8_t ai = a.digits_[i];
        if (ai == 0) continue;
        for (unsigned j = lb; i + j < n; ++j) r.digits_[i + j] = f.add(r.digits_[i + j], f.mul(ai, b.digits_[j]));
      }
    }
    return r;
  }

  /// Multiplication by a residue-field element (EqualChar) or by an integer
  /// residue mod p (Padic).
  TruncElement scale(std::uint8_t residue) const {
    TruncElement r(ring());
    if (model_->kind == RingKind::Padic) {
      r.value_ = static_cast<std::uint64_t>(static_cast<unsigned __int128>(value_) * (residue % model_->p) %
                                            model_->modulus);
      return r;
    }
    const auto& f = model_->field;
    for (unsigned i = 0; i < model_->precision; ++i) r.digits_[i] = f.mul(residue, digits_[i]);
    return r;
  }

  /// Multiplication by u^k (resp. p^k).
  TruncElement shift_up(unsigned k) const {
    TruncElement r(ring());
    if (model_->kind == RingKind::Padic) {
      unsigned __int128 v = value_;
      for (unsigned i = 0; i < k; ++i) v = v * model_->p % model_->modulus;
      r.value_ = static_cast<std::uint64_t>(v);
      return r;
    }
    for (unsigned i = 0; i + k < model_->precision; ++i) r.digits_[i + k] = digits_[i];
    return r;
  }

  /// Exact division by u^k (resp. p^k); requires order() >= k. The quotient is
  /// only determined modulo u^(M-k): the top k digits are returned as zero.
  TruncElement shift_down(unsigned k) const {
    if (order() < k) fail(errc::invalid_argument, "shift_down: element not divisible by the uniformizer power");
    TruncElement r(ring());
    if (model_->kind == RingKind::Padic) {
      std::uint64_t v = value_;
      for (unsigned i = 0; i < k && v != 0; ++i) v /= model_->p;
      r.value_ = v;
      return r;
    }
    for (unsigned i = k; i < model_->precision; ++i) r.digits_[i - k] = digits_[i];
    return r;
  }

  /// Inverse of a unit (valuation Exact(0)).
  TruncElement unit_inverse() const {
    if (order() != 0) fail(errc::invalid_argument, "unit_inverse: element is not a unit");
    TruncElement r(ring());
    if (model_->kind == RingKind::Padic) {
      // extended Euclid modulo p^M
      __int128 g0 = static_cast<__int128>(model_->modulus), g1 = value_, s0 = 0, s1 = 1;
      while (g1 != 0) {
        __int128 q = g0 / g1;
        std::tie(g0, g1) = std::make_tuple(g1, g0 - q * g1);
        std::tie(s0, s1) = std::make_tuple(s1, s0 - q * s1);
      }
      __int128 m = static_cast<__int128>(model_->modulus);
      r.value_ = static_cast<std::uint64_t>(((s0 % m) + m) % m);
      return r;
    }
    const auto& f = model_->field;
    const std::uint8_t inv0 = f.inv(digits_[0]);
    r.digits_[0] = inv0;
    for (unsigned k = 1; k < model_->precision; ++k) {
      std::uint8_t s = 0;
      for (unsigned i = 1; i <= k; ++i) s = f.add(s, f.mul(digits_[i], r.digits_[k - i]));
      r.digits_[k] = f.neg(f.mul(inv0, s));
    }
    return r;
  }

  friend bool operator==(const TruncElement& a, const TruncElement& b) {
    if (a.model_ != b.model_) return false;
    if (a.model_ == nullptr) return true;
    if (a.model_->kind == RingKind::Padic) return a.value_ == b.value_;
    return std::equal(a.digits_.begin(), a.digits_.begin() + a.model_->precision, b.digits_.begin());
  }

  friend bool operator<(const TruncElement& a, const TruncElement& b) {
    if (a.model_->kind == RingKind::Padic) return a.value_ < b.value_;
    return std::lexicographical_compare(a.digits_.begin(), a.digits_.begin() + a.model_->precision,
                                        b.digits_.begin(), b.digits_.begin() + b.model_->precision);
  }

 private:
  friend class RingModel;

  void check_same(const TruncElement& o) const {
    if (model_ != o.model_)
      fail(errc::model_mismatch, "operands live in " + describe(ring()) + " and " + describe(o.ring()));
  }

  const detail::ModelData* model_ = nullptr;
  std::array<std::uint8_t, kMaxDigits> digits_{};
  std::uint64_t value_ = 0;
};

inline TruncElement RingModel::zero() const { return TruncElement(*this); }

inline TruncElement RingModel::one() const { return from_integer(1); }

inline TruncElement RingModel::from_integer(long long n) const {
  TruncElement r(*this);
  if (kind() == RingKind::Padic) {
    __int128 m = static_cast<__int128>(modulus());
    __int128 v = static_cast<__int128>(n) % m;
    if (v < 0) v += m;
    r.value_ = static_cast<std::uint64_t>(v);
  } else {
    r.digits_[0] = field().from_integer(n);
  }
  return r;
}

inline TruncElement RingModel::uniformizer() const {
  if (kind() == RingKind::Padic) return from_integer(p());
  return monomial(1, 1);
}

inline TruncElement RingModel::monomial(std::uint8_t residue, unsigned index) const {
  if (kind() != RingKind::EqualChar) fail(errc::model_mismatch, "monomial() needs an equal-characteristic model");
  TruncElement r(*this);
  if (index < precision()) r.digits_[index] = residue;
  return r;
}

/// The model obtained by adjoining a k-th root of the uniformizer, with the
/// embedding of the source model into it.
class Ramification {
 public:
  Ramification(RingModel source, unsigned factor) : source_(source), factor_(factor) {
    if (source.kind() != RingKind::EqualChar)
      fail(errc::model_mismatch, "ramified p-adic extensions are not supported");
    if (factor == 0) fail(errc::invalid_argument, "ramification factor must be positive");
    target_ = RingModel::equal_char(source.p(), source.q(), source.precision() * factor,
                                    source.ramification() * factor);
  }

  const RingModel& source() const { return source_; }
  const RingModel& target() const { return target_; }
  unsigned factor() const { return factor_; }

  TruncElement embed(const TruncElement& x) const {
    if (!(x.ring() == source_)) fail(errc::model_mismatch, "element is not in the source model");
    TruncElement r(target_);
    for (unsigned i = 0; i < source_.precision(); ++i) r.set_digit(i * factor_, x.digit(i));
    return r;
  }

 private:
  RingModel source_;
  RingModel target_;
  unsigned factor_;
};

inline Ramification ramify(const RingModel& ring, unsigned k) { return Ramification(ring, k); }

/// Whether elements of `source` embed soundly into `target`: same residue
/// field, ramification a multiple, and no digits claimed beyond what the
/// source knows.
inline bool embeddable(const RingModel& source, const RingModel& target) {
  if (source == target) return true;
  if (!source.is_equal_char() || !target.is_equal_char()) return false;
  if (source.p() != target.p() || source.q() != target.q()) return false;
  if (target.ramification() % source.ramification() != 0) return false;
  unsigned factor = target.ramification() / source.ramification();
  return target.precision() <= source.precision() * factor;
}

/// Index-scaling embedding into a compatible model, truncating when the
/// target keeps fewer digits.
inline TruncElement embed_into(const TruncElement& x, const RingModel& target) {
  const RingModel source = x.ring();
  if (source == target) return x;
  if (!embeddable(source, target))
    fail(errc::model_mismatch, "cannot embed " + describe(source) + " into " + describe(target));
  unsigned factor = target.ramification() / source.ramification();
  TruncElement r(target);
  for (unsigned i = 0; i * factor < target.precision(); ++i) r.set_digit(i * factor, x.digit(i));
  return r;
}

// ---------------------------------------------------------------------------
// Element literals.
//
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := power ('*' power)*
//   power  := atom ['^' INT]
//   atom   := INT | 'u' | 't' | 'pi' | 'g' | '(' expr ')'
//
// u, t and pi all denote the model's uniformizer; g is the residue-field
// generator (only when q > p). Integers are reduced into the model. Padic
// models accept the same grammar without identifiers.

namespace detail {

class LiteralParser {
 public:
  LiteralParser(const RingModel& ring, std::string_view text) : ring_(ring), text_(text) {}

  TruncElement parse() {
    TruncElement v = expr();
    skip_ws();
    if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(errc::schema_error, "element literal '" + std::string(text_) + "': " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  TruncElement expr() {
    bool negate = false;
    if (accept('-')) negate = true;
    else accept('+');
    TruncElement acc = term();
    if (negate) acc = -acc;
    for (;;) {
      if (accept('+')) acc += term();
      else if (accept('-')) acc -= term();
      else return acc;
    }
  }

  TruncElement term() {
    TruncElement acc = power();
    while (accept('*')) acc = acc * power();
    return acc;
  }

  TruncElement power() {
    TruncElement base = atom();
    if (!accept('^')) return base;
    skip_ws();
    unsigned long long e = 0;
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      e = e * 10 + static_cast<unsigned>(text_[pos_] - '0');
      if (e > 1'000'000) error("exponent too large");
      ++pos_;
    }
    if (start == pos_) error("expected exponent");
    TruncElement r = ring_.one();
    for (; e > 0; e >>= 1, base = base * base)
      if (e & 1) r = r * base;
    return r;
  }

  TruncElement atom() {
    skip_ws();
    if (pos_ >= text_.size()) error("unexpected end");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      TruncElement v = expr();
      if (!accept(')')) error("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return integer();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string_view id = text_.substr(start, pos_ - start);
      if (ring_.kind() != RingKind::EqualChar) error("identifiers are not allowed in p-adic literals");
      if (id == "u" || id == "t" || id == "pi") return ring_.uniformizer();
      if (id == "g") {
        if (ring_.residue_degree() == 1) error("'g' needs a residue field larger than F_p");
        return ring_.monomial(ring_.field().generator(), 0);
      }
      error("unknown identifier '" + std::string(id) + "'");
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  TruncElement integer() {
    // reduce digit by digit so arbitrarily long decimals are accepted
    const unsigned __int128 m = ring_.kind() == RingKind::Padic ? ring_.modulus() : ring_.p();
    unsigned __int128 v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = (v * 10 + static_cast<unsigned>(text_[pos_] - '0')) % m;
      ++pos_;
    }
    return ring_.from_integer(static_cast<long long>(v));
  }

  RingModel ring_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

inline std::string format_residue(const ResidueField& field, std::uint8_t code) {
  if (field.is_prime_field()) return std::to_string(code);
  auto d = field.digits(code);
  std::string out;
  int terms = 0;
  for (unsigned i = 0; i < d.size(); ++i) {
    if (d[i] == 0) continue;
    std::string t;
    if (i == 0) t = std::to_string(d[i]);
    else {
      if (d[i] != 1) t = std::to_string(d[i]) + "*";
      t += "g";
      if (i > 1) t += "^" + std::to_string(i);
    }
    out += (terms++ ? " + " : "") + t;
  }
  return terms > 1 ? "(" + out + ")" : out;
}

}  // namespace detail

inline TruncElement parse_element(const RingModel& ring, std::string_view text) {
  return detail::LiteralParser(ring, text).parse();
}

/// Canonical literal; parse_element(ring, format_element(x)) == x.
inline std::string format_element(const TruncElement& x) {
  const RingModel ring = x.ring();
  if (ring.kind() == RingKind::Padic) return std::to_string(x.value());
  std::string out;
  int terms = 0;
  for (unsigned i = 0; i < ring.precision(); ++i) {
    std::uint8_t c = x.digit(i);
    if (c == 0) continue;
    std::string coef = detail::format_residue(ring.field(), c);
    std::string t;
    if (i == 0) t = coef;
    else {
      t = coef == "1" ? "u" : coef + "*u";
      if (i > 1) t += "^" + std::to_string(i);
    }
    out += (terms++ ? " + " : "") + t;
  }
  return terms ? out : "0";
}

inline std::ostream& operator<<(std::ostream& os, const TruncElement& x) { return os << format_element(x); }

}  // namespace asfilt
