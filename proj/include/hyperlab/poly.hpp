#pragma once

#include <complex>
#include <vector>

namespace hyperlab {

using Complex = std::complex<double>;

/// Complex polynomial, lowest degree first. Trailing zeros are dropped, so
/// the zero polynomial has no coefficients and degree -1.
class PolyC {
public:
    PolyC() = default;
    explicit PolyC(std::vector<Complex> coeffs);

    static PolyC constant(Complex c) { return PolyC({c}); }
    static PolyC monomial(int degree, Complex c = 1.0);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<Complex>& coeffs() const { return coeffs_; }
    Complex coeff(int j) const;
    Complex leading() const;

    /// Horner evaluation.
    Complex operator()(Complex z) const;

    PolyC derivative() const;

    PolyC& operator+=(const PolyC& rhs);
    PolyC& operator-=(const PolyC& rhs);
    PolyC& operator*=(Complex s);

    friend PolyC operator+(PolyC a, const PolyC& b) { return a += b; }
    friend PolyC operator-(PolyC a, const PolyC& b) { return a -= b; }
    friend PolyC operator*(PolyC a, Complex s) { return a *= s; }
    friend PolyC operator*(Complex s, PolyC a) { return a *= s; }
    friend PolyC operator*(const PolyC& a, const PolyC& b);

    /// Multiply by the variable.
    PolyC shifted_up() const;

    /// Roots from the eigenvalues of the companion matrix.
    std::vector<Complex> roots() const;

private:
    void trim();
    std::vector<Complex> coeffs_;
};

/// g(z) = f(z - a), by repeated synthetic division (Taylor shift).
PolyC translate(const PolyC& f, Complex a);

/// Upper bound on the moduli of the roots (Cauchy bound).
double cauchy_root_bound(const PolyC& f);

}  // namespace hyperlab
