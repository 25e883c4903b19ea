#include "regen/rational.hpp"

#include <limits>
#include <utility>

#include "regen/errors.hpp"

namespace regen {

namespace {

mpz_class pow10(long exponent) {
  mpz_class result;
  mpz_ui_pow_ui(result.get_mpz_t(), 10, static_cast<unsigned long>(exponent));
  return result;
}

// x * 10^shift as an exact rational, shift may be negative.
mpq_class scale10(const mpq_class& x, long shift) {
  mpq_class out = x;
  if (shift >= 0) {
    out *= mpq_class(pow10(shift));
  } else {
    out /= mpq_class(pow10(-shift));
  }
  return out;
}

std::string strip_trailing_zeros(std::string digits) {
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  return digits;
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw DivisionByZeroError("rational with zero denominator");
  value_ = mpq_class(mpz_class(std::to_string(numerator)), mpz_class(std::to_string(denominator)));
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) {
  if (value_.get_den() == 0) throw DivisionByZeroError("rational with zero denominator");
  value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InputError("empty rational literal");
  const auto slash = s.find('/');
  auto parse_int = [&](const std::string& part) {
    if (part.empty()) throw InputError("malformed rational literal '" + s + "'");
    std::size_t start = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (start == part.size()) throw InputError("malformed rational literal '" + s + "'");
    for (std::size_t i = start; i < part.size(); ++i) {
      if (part[i] < '0' || part[i] > '9') throw InputError("malformed rational literal '" + s + "'");
    }
    return mpz_class(part[0] == '+' ? part.substr(1) : part);
  };
  if (slash == std::string::npos) return Rational(parse_int(s));
  mpz_class num = parse_int(s.substr(0, slash));
  mpz_class den = parse_int(s.substr(slash + 1));
  if (den == 0) throw DivisionByZeroError("rational literal '" + s + "' has zero denominator");
  return Rational(mpq_class(num, den));
}

Rational Rational::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return Rational(q);
}

Rational Rational::ceil() const {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return Rational(q);
}

Rational Rational::round_half_up() const { return (*this + Rational(1, 2)).floor(); }

std::int64_t Rational::to_int64() const {
  if (!is_integer()) throw InputError("rational " + to_string() + " is not an integer");
  const mpz_class& n = value_.get_num();
  if (!n.fits_slong_p()) throw RangeError("integer " + to_string() + " does not fit in 64 bits");
  static_assert(sizeof(long) == sizeof(std::int64_t));
  return n.get_si();
}

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

Rational& Rational::operator+=(const Rational& rhs) {
  value_ += rhs.value_;
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  value_ -= rhs.value_;
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  value_ *= rhs.value_;
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.sign() == 0) throw DivisionByZeroError("rational division by zero");
  value_ /= rhs.value_;
  return *this;
}

Rational Rational::operator-() const { return Rational(mpq_class(-value_)); }

std::string Rational::to_string() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::to_decimal(int significant) const {
  if (significant < 1) throw InputError("decimal rendering needs at least one significant digit");
  if (sign() == 0) return "0";
  const mpq_class x = abs().value_;

  long exponent = static_cast<long>(mpz_sizeinbase(x.get_num_mpz_t(), 10)) -
                  static_cast<long>(mpz_sizeinbase(x.get_den_mpz_t(), 10));
  while (scale10(x, -exponent) < 1) --exponent;
  while (scale10(x, -exponent) >= 10) ++exponent;

  const mpq_class scaled = scale10(x, significant - 1 - exponent) + mpq_class(1, 2);
  mpz_class mantissa;
  mpz_fdiv_q(mantissa.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  if (mantissa == pow10(significant)) {
    mantissa /= 10;
    ++exponent;
  }
  const std::string digits = mantissa.get_str();  // exactly `significant` digits

  std::string out = sign() < 0 ? "-" : "";
  if (exponent < -5 || exponent >= significant) {
    std::string frac = strip_trailing_zeros(digits.substr(1));
    out += digits.substr(0, 1);
    if (!(frac.size() == 1 && frac[0] == '0')) out += "." + frac;
    const long e = exponent < 0 ? -exponent : exponent;
    out += std::string("e") + (exponent < 0 ? "-" : "+") + (e < 10 ? "0" : "") + std::to_string(e);
    return out;
  }
  std::string int_part;
  std::string frac_part;
  if (exponent >= 0) {
    int_part = digits.substr(0, static_cast<std::size_t>(exponent + 1));
    frac_part = digits.substr(static_cast<std::size_t>(exponent + 1));
  } else {
    int_part = "0";
    frac_part = std::string(static_cast<std::size_t>(-exponent - 1), '0') + digits;
  }
  while (!frac_part.empty() && frac_part.back() == '0') frac_part.pop_back();
  out += int_part;
  if (!frac_part.empty()) out += "." + frac_part;
  return out;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace regen
