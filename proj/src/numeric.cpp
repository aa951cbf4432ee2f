#include "seifert/numeric.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace seifert {

Integer Integer::parse(std::string_view text) {
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
  if (i == text.size()) throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  for (std::size_t j = i; j < text.size(); ++j) {
    if (text[j] < '0' || text[j] > '9') {
      throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    }
  }
  std::string digits(text.substr(i));
  Rep v(digits);
  if (text[0] == '-') v = -v;
  return Integer(std::move(v));
}

bool Integer::fits_int64() const {
  return v_ >= std::numeric_limits<std::int64_t>::min() &&
         v_ <= std::numeric_limits<std::int64_t>::max();
}

std::int64_t Integer::to_int64() const {
  if (!fits_int64()) throw std::overflow_error("integer does not fit in 64 bits: " + str());
  return v_.convert_to<std::int64_t>();
}

std::ostream& operator<<(std::ostream& os, const Integer& a) { return os << a.v_; }

Integer abs(const Integer& a) { return a.sign() < 0 ? -a : a; }

Integer gcd(const Integer& a, const Integer& b) {
  return Integer(Integer::Rep(boost::multiprecision::gcd(a.rep(), b.rep())));
}

Integer exact_div(const Integer& num, const Integer& den) {
  if (den.is_zero()) throw std::domain_error("division by zero");
  if (!(num % den).is_zero()) {
    throw std::domain_error("inexact division " + num.str() + " / " + den.str());
  }
  return num / den;
}

Rational::Rational(Integer num, Integer den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("zero denominator");
  normalize();
}

void Rational::normalize() {
  if (den_.sign() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  Integer g = gcd(abs(num_), den_);
  if (!g.is_zero() && g != Integer(1)) {
    num_ /= g;
    den_ /= g;
  }
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("non-finite value has no rational form");
  if (x == 0.0) return Rational();
  int exp = 0;
  const double mant = std::frexp(x, &exp);  // x = mant * 2^exp, 0.5 <= |mant| < 1
  constexpr int kBits = std::numeric_limits<double>::digits;
  const auto scaled = static_cast<long long>(std::ldexp(mant, kBits));
  exp -= kBits;
  Integer::Rep num(scaled);
  Integer::Rep den(1);
  if (exp >= 0) {
    num <<= exp;
  } else {
    den <<= -exp;
  }
  return Rational(Integer(std::move(num)), Integer(std::move(den)));
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(Integer::parse(text));
  return Rational(Integer::parse(text.substr(0, slash)), Integer::parse(text.substr(slash + 1)));
}

double Rational::to_double() const {
  using boost::multiprecision::cpp_rational;
  cpp_rational q(num_.rep(), den_.rep());
  return q.convert_to<double>();
}

std::string Rational::str() const {
  if (is_integer()) return num_.str();
  return num_.str() + "/" + den_.str();
}

Integer Rational::floor() const {
  Integer q = num_ / den_;  // truncates toward zero
  if (num_.sign() < 0 && !(num_ % den_).is_zero()) q -= Integer(1);
  return q;
}

Rational Rational::frac() const { return *this - Rational(floor()); }

Rational& Rational::operator+=(const Rational& o) {
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ *= o.den_;
  normalize();
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  num_ *= o.num_;
  den_ *= o.den_;
  normalize();
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_.is_zero()) throw std::domain_error("division by zero");
  num_ *= o.den_;
  den_ *= o.num_;
  normalize();
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

}  // namespace seifert
