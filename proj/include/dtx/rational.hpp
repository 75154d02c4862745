#pragma once

#include <compare>
#include <concepts>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "dtx/errors.hpp"

namespace dtx {

/// Exact rational number, always stored in lowest terms with a positive
/// denominator. Thin value wrapper over GMP's mpq_class.
class Rat {
 public:
  Rat() = default;

  template <std::integral I>
  Rat(I v) : v_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)

  Rat(long num, long den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }

  explicit Rat(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Parses "p/q" or an integer literal, with optional sign.
  static Rat parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw ParseError("empty rational literal");
    auto valid_int = [](std::string_view t) {
      if (!t.empty() && (t[0] == '-' || t[0] == '+')) t.remove_prefix(1);
      if (t.empty()) return false;
      for (char c : t)
        if (c < '0' || c > '9') return false;
      return true;
    };
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
      throw ParseError("bad rational literal '" + s + "'");
    if (num[0] == '+') num.erase(0, 1);
    mpz_class n(num, 10), d(den, 10);
    if (d == 0) throw ParseError("zero denominator in '" + s + "'");
    return Rat(mpq_class(n, d));
  }

  const mpq_class& raw() const { return v_; }
  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  /// Canonical text form: "p/q", or "p" for integers.
  std::string str() const { return v_.get_str(10); }

  double to_double() const { return v_.get_d(); }

  Rat operator-() const { return Rat(mpq_class(-v_)); }

  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (sgn(o.v_) == 0) throw DomainError("division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

 private:
  mpq_class v_{0};
};

inline Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }
inline const Rat& min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& max(const Rat& a, const Rat& b) { return a < b ? b : a; }

/// A rational extended by the two infinities, as returned by generalized
/// inverses.
class ExtendedRat {
 public:
  enum class Kind { NegInf, Finite, PosInf };

  ExtendedRat(Rat v) : kind_(Kind::Finite), v_(std::move(v)) {}  // NOLINT
  static ExtendedRat neg_inf() { return ExtendedRat(Kind::NegInf); }
  static ExtendedRat pos_inf() { return ExtendedRat(Kind::PosInf); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  /// Finite value; throws DomainError on an infinity.
  const Rat& value() const {
    if (!is_finite()) throw DomainError("infinite value has no rational representation");
    return v_;
  }

  std::string str() const {
    switch (kind_) {
      case Kind::NegInf: return "-inf";
      case Kind::PosInf: return "+inf";
      default: return v_.str();
    }
  }

  friend bool operator==(const ExtendedRat& a, const ExtendedRat& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.v_ == b.v_);
  }
  friend std::strong_ordering operator<=>(const ExtendedRat& a, const ExtendedRat& b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
    if (a.kind_ != Kind::Finite) return std::strong_ordering::equal;
    return a.v_ <=> b.v_;
  }
  friend std::ostream& operator<<(std::ostream& os, const ExtendedRat& r) { return os << r.str(); }

 private:
  explicit ExtendedRat(Kind k) : kind_(k) {}
  Kind kind_;
  Rat v_;
};

}  // namespace dtx
