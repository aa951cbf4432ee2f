#ifndef SEIFERT_NUMERIC_HPP
#define SEIFERT_NUMERIC_HPP

// Exact scalar types shared by the whole library.
//
// Integer wraps boost::multiprecision::cpp_int so that it can be used as an
// Eigen scalar: Boost 1.74's number<> template confuses Eigen 3.4's scalar
// promotion machinery, a plain class does not.

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace seifert {

class Integer {
 public:
  using Rep = boost::multiprecision::cpp_int;

  Integer() = default;
  Integer(long long v) : v_(v) {}  // NOLINT: implicit on purpose, literals
  explicit Integer(Rep v) : v_(std::move(v)) {}

  /// Parses an optionally signed decimal literal. Throws std::invalid_argument.
  static Integer parse(std::string_view text);

  const Rep& rep() const { return v_; }
  std::string str() const { return v_.str(); }
  int sign() const { return v_.sign(); }
  bool is_zero() const { return v_.is_zero(); }
  bool fits_int64() const;
  std::int64_t to_int64() const;  // throws std::overflow_error
  double to_double() const { return v_.convert_to<double>(); }

  Integer operator-() const { return Integer(Rep(-v_)); }
  Integer& operator+=(const Integer& o) { v_ += o.v_; return *this; }
  Integer& operator-=(const Integer& o) { v_ -= o.v_; return *this; }
  Integer& operator*=(const Integer& o) { v_ *= o.v_; return *this; }
  /// Truncating division, like the built-in integer types.
  Integer& operator/=(const Integer& o) { v_ /= o.v_; return *this; }
  Integer& operator%=(const Integer& o) { v_ %= o.v_; return *this; }

  friend Integer operator+(Integer a, const Integer& b) { return a += b; }
  friend Integer operator-(Integer a, const Integer& b) { return a -= b; }
  friend Integer operator*(Integer a, const Integer& b) { return a *= b; }
  friend Integer operator/(Integer a, const Integer& b) { return a /= b; }
  friend Integer operator%(Integer a, const Integer& b) { return a %= b; }

  friend bool operator==(const Integer& a, const Integer& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Integer& a, const Integer& b) {
    const int c = a.v_.compare(b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Integer& a);

 private:
  Rep v_;
};

Integer abs(const Integer& a);
Integer gcd(const Integer& a, const Integer& b);

/// Quotient of an exact division; throws std::domain_error on a nonzero remainder.
Integer exact_div(const Integer& num, const Integer& den);

/// Reduced fraction with positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long long v) : num_(v) {}  // NOLINT
  Rational(Integer v) : num_(std::move(v)) {}  // NOLINT
  Rational(Integer num, Integer den);  // throws std::domain_error on den == 0

  /// Exact value of a finite double (every double is a dyadic rational).
  static Rational from_double(double x);
  /// Parses "p" or "p/q".
  static Rational parse(std::string_view text);

  const Integer& num() const { return num_; }
  const Integer& den() const { return den_; }
  int sign() const { return num_.sign(); }
  bool is_integer() const { return den_ == Integer(1); }
  double to_double() const;
  std::string str() const;

  /// Largest integer not exceeding the value.
  Integer floor() const;
  /// Value minus floor, in [0, 1).
  Rational frac() const;

  Rational operator-() const { return Rational(-num_, den_); }
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  void normalize();

  Integer num_{0};
  Integer den_{1};
};

Rational abs(const Rational& r);

using IntMatrix = Eigen::Matrix<Integer, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<Integer, Eigen::Dynamic, 1>;

}  // namespace seifert

namespace Eigen {

template <>
struct NumTraits<seifert::Integer> : GenericNumTraits<seifert::Integer> {
  using Real = seifert::Integer;
  using NonInteger = seifert::Integer;
  using Nested = seifert::Integer;
  using Literal = seifert::Integer;
  enum {
    IsInteger = 1,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 8,
    MulCost = 16
  };
};

}  // namespace Eigen

#endif  // SEIFERT_NUMERIC_HPP
