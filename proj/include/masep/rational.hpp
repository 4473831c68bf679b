#pragma once

#include <gmpxx.h>

#include <Eigen/Core>

#include <compare>
#include <concepts>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace masep {

/// Arbitrary-precision rational number.
///
/// Always stored in canonical form: positive denominator, numerator and
/// denominator coprime, zero as 0/1. Wraps mpq_class without exposing its
/// expression templates, so it can serve as an Eigen scalar.
class Rat {
 public:
  Rat() = default;

  template <std::integral I>
  Rat(I n) : v_(static_cast<long>(n)) {}  // NOLINT(google-explicit-constructor)

  template <std::integral I, std::integral J>
  Rat(I num, J den) {
    set_ratio(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
  }

  Rat(const mpz_class& num, const mpz_class& den) { set_ratio(num, den); }

  explicit Rat(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Parses "p/q" or "p" (optional leading sign on p). Decimal notation is
  /// rejected on purpose. Throws Error{InvalidRational}.
  static Rat parse(std::string_view text);

  /// "p/q", or "p" when the denominator is 1.
  std::string str() const;

  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }
  const mpq_class& value() const { return v_; }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  double to_double() const { return v_.get_d(); }

  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.v_)); }
  friend Rat operator+(const Rat& a) { return a; }

  friend bool operator==(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

 private:
  void set_ratio(const mpz_class& num, const mpz_class& den);

  mpq_class v_{0};
};

Rat abs(const Rat& r);

/// Integer power, negative exponents allowed for nonzero bases.
Rat pow(const Rat& base, int exponent);

}  // namespace masep

template <>
struct std::hash<masep::Rat> {
  std::size_t operator()(const masep::Rat& r) const noexcept {
    return std::hash<std::string>{}(r.str());
  }
};

namespace Eigen {

template <>
struct NumTraits<masep::Rat> : GenericNumTraits<masep::Rat> {
  using Real = masep::Rat;
  using NonInteger = masep::Rat;
  using Literal = masep::Rat;
  using Nested = masep::Rat;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 8,
    MulCost = 16,
  };

  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
