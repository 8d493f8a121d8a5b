#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>

namespace hyperlab {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Exact positive number r * 2^e with r a rational and e an arbitrary
/// precision integer.
///
/// The representation is canonical: every factor of two is moved out of the
/// mantissa into the exponent, so the mantissa is odd/odd in lowest terms.
/// Two values are equal iff their fields are equal.
class Exact2Exp {
public:
    Exact2Exp() = default;  // 1

    static Exact2Exp one() { return {}; }
    static Exact2Exp pow2(const BigInt& exponent);
    static Exact2Exp from_integer(const BigInt& value);
    static Exact2Exp from_rational(const BigInt& num, const BigInt& den);
    static Exact2Exp from_rational(const BigRational& value);
    /// Exact conversion; every finite positive double is a dyadic rational.
    static Exact2Exp from_double(double value);

    const BigRational& mantissa() const { return mantissa_; }
    const BigInt& exp2() const { return exp2_; }

    Exact2Exp operator*(const Exact2Exp& rhs) const;
    Exact2Exp operator/(const Exact2Exp& rhs) const;
    Exact2Exp& operator*=(const Exact2Exp& rhs);
    Exact2Exp& operator/=(const Exact2Exp& rhs);
    Exact2Exp inverse() const;
    Exact2Exp pow(std::int64_t k) const;

    bool operator==(const Exact2Exp& rhs) const = default;
    std::strong_ordering operator<=>(const Exact2Exp& rhs) const;

    long double log2() const;
    double ln() const;
    /// Rounded value; under/overflows to 0 or +inf for extreme exponents.
    double to_double() const;
    std::string str() const;

private:
    Exact2Exp(BigRational mantissa, BigInt exp2);
    void normalize();

    BigRational mantissa_{1};
    BigInt exp2_{0};
};

/// log2 of a positive big integer, accurate to long double precision.
long double big_log2(const BigInt& value);

}  // namespace hyperlab
