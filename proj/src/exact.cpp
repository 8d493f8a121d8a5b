#include "hyperlab/exact.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hyperlab {

namespace mp = boost::multiprecision;

namespace {

// Strips trailing zero bits from a positive integer, returning the count.
std::int64_t strip_twos(BigInt& value) {
    if (value == 0) return 0;
    const auto shift = static_cast<std::int64_t>(mp::lsb(value));
    value >>= shift;
    return shift;
}

}  // namespace

long double big_log2(const BigInt& value) {
    if (value <= 0) throw std::domain_error("big_log2: non-positive argument");
    const auto msb = static_cast<std::int64_t>(mp::msb(value));
    if (msb < 60) return std::log2(static_cast<long double>(value.convert_to<unsigned long long>()));
    const std::int64_t shift = msb - 60;
    const BigInt top = value >> shift;
    return std::log2(static_cast<long double>(top.convert_to<unsigned long long>())) +
           static_cast<long double>(shift);
}

Exact2Exp::Exact2Exp(BigRational mantissa, BigInt exp2)
    : mantissa_(std::move(mantissa)), exp2_(std::move(exp2)) {
    normalize();
}

void Exact2Exp::normalize() {
    if (mantissa_ <= 0) throw std::domain_error("Exact2Exp: mantissa must be positive");
    BigInt num = mp::numerator(mantissa_);
    BigInt den = mp::denominator(mantissa_);
    const auto up = strip_twos(num);
    const auto down = strip_twos(den);
    if (up != 0 || down != 0) {
        mantissa_ = BigRational(num, den);
        exp2_ += up - down;
    }
}

Exact2Exp Exact2Exp::pow2(const BigInt& exponent) { return Exact2Exp(BigRational(1), exponent); }

Exact2Exp Exact2Exp::from_integer(const BigInt& value) { return Exact2Exp(BigRational(value), 0); }

Exact2Exp Exact2Exp::from_rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::domain_error("Exact2Exp: zero denominator");
    return Exact2Exp(BigRational(num, den), 0);
}

Exact2Exp Exact2Exp::from_rational(const BigRational& value) { return Exact2Exp(value, 0); }

Exact2Exp Exact2Exp::from_double(double value) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw std::domain_error("Exact2Exp: value must be finite and positive");
    int e = 0;
    const double frac = std::frexp(value, &e);  // value = frac * 2^e, frac in [0.5, 1)
    const auto scaled = static_cast<std::int64_t>(std::ldexp(frac, 53));
    return Exact2Exp(BigRational(BigInt(scaled)), BigInt(e - 53));
}

Exact2Exp Exact2Exp::operator*(const Exact2Exp& rhs) const {
    Exact2Exp out = *this;
    out *= rhs;
    return out;
}

Exact2Exp Exact2Exp::operator/(const Exact2Exp& rhs) const {
    Exact2Exp out = *this;
    out /= rhs;
    return out;
}

Exact2Exp& Exact2Exp::operator*=(const Exact2Exp& rhs) {
    exp2_ += rhs.exp2_;
    // Odd * odd stays odd; the common pure-power-of-two case skips the gcd.
    if (rhs.mantissa_ != 1) mantissa_ *= rhs.mantissa_;
    return *this;
}

Exact2Exp& Exact2Exp::operator/=(const Exact2Exp& rhs) {
    exp2_ -= rhs.exp2_;
    if (rhs.mantissa_ != 1) mantissa_ /= rhs.mantissa_;
    return *this;
}

Exact2Exp Exact2Exp::inverse() const {
    return Exact2Exp(BigRational(mp::denominator(mantissa_), mp::numerator(mantissa_)), -exp2_);
}

Exact2Exp Exact2Exp::pow(std::int64_t k) const {
    if (k < 0) return inverse().pow(-k);
    const auto uk = static_cast<unsigned>(k);
    if (static_cast<std::int64_t>(uk) != k) throw std::overflow_error("Exact2Exp::pow: exponent too large");
    BigInt num = mp::pow(BigInt(mp::numerator(mantissa_)), uk);
    BigInt den = mp::pow(BigInt(mp::denominator(mantissa_)), uk);
    Exact2Exp out;
    out.mantissa_ = BigRational(num, den);
    out.exp2_ = exp2_ * k;
    return out;
}

std::strong_ordering Exact2Exp::operator<=>(const Exact2Exp& rhs) const {
    if (*this == rhs) return std::strong_ordering::equal;
    const long double a = log2();
    const long double b = rhs.log2();
    if (a - b > 2.0L) return std::strong_ordering::greater;
    if (b - a > 2.0L) return std::strong_ordering::less;
    // Close in magnitude: the exponent difference is bounded by the mantissa
    // sizes, so an exact integer comparison is affordable.
    BigInt lhs_int = mp::numerator(mantissa_) * mp::denominator(rhs.mantissa_);
    BigInt rhs_int = mp::numerator(rhs.mantissa_) * mp::denominator(mantissa_);
    const BigInt d = exp2_ - rhs.exp2_;
    if (d > 0)
        lhs_int <<= d.convert_to<unsigned>();
    else if (d < 0)
        rhs_int <<= BigInt(-d).convert_to<unsigned>();
    if (lhs_int < rhs_int) return std::strong_ordering::less;
    if (lhs_int > rhs_int) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

long double Exact2Exp::log2() const {
    return big_log2(mp::numerator(mantissa_)) - big_log2(mp::denominator(mantissa_)) +
           exp2_.convert_to<long double>();
}

double Exact2Exp::ln() const { return static_cast<double>(log2() * std::log(2.0L)); }

double Exact2Exp::to_double() const {
    const long double l2 = log2();
    if (l2 > std::numeric_limits<double>::max_exponent + 1) return std::numeric_limits<double>::infinity();
    if (l2 < std::numeric_limits<double>::min_exponent - 60) return 0.0;
    const long double m = mantissa_.convert_to<long double>();
    return static_cast<double>(std::ldexp(m, exp2_.convert_to<int>()));
}

std::string Exact2Exp::str() const {
    std::ostringstream os;
    os << mp::numerator(mantissa_);
    if (mp::denominator(mantissa_) != 1) os << '/' << mp::denominator(mantissa_);
    if (exp2_ != 0) os << "*2^" << exp2_;
    return os.str();
}

}  // namespace hyperlab
