#include "hyperlab/poly.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>

namespace hyperlab {

PolyC::PolyC(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

PolyC PolyC::monomial(int degree, Complex c) {
    if (degree < 0) throw std::invalid_argument("monomial degree must be >= 0");
    std::vector<Complex> v(static_cast<std::size_t>(degree) + 1, 0.0);
    v.back() = c;
    return PolyC(std::move(v));
}

void PolyC::trim() {
    while (!coeffs_.empty() && coeffs_.back() == Complex(0.0)) coeffs_.pop_back();
}

Complex PolyC::coeff(int j) const {
    if (j < 0 || j > degree()) return 0.0;
    return coeffs_[static_cast<std::size_t>(j)];
}

Complex PolyC::leading() const { return coeffs_.empty() ? Complex(0.0) : coeffs_.back(); }

Complex PolyC::operator()(Complex z) const {
    Complex s = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) s = s * z + *it;
    return s;
}

PolyC PolyC::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<Complex> d(coeffs_.size() - 1);
    for (std::size_t j = 1; j < coeffs_.size(); ++j) d[j - 1] = static_cast<double>(j) * coeffs_[j];
    return PolyC(std::move(d));
}

PolyC& PolyC::operator+=(const PolyC& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) coeffs_[j] += rhs.coeffs_[j];
    trim();
    return *this;
}

PolyC& PolyC::operator-=(const PolyC& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) coeffs_[j] -= rhs.coeffs_[j];
    trim();
    return *this;
}

PolyC& PolyC::operator*=(Complex s) {
    for (auto& c : coeffs_) c *= s;
    trim();
    return *this;
}

PolyC operator*(const PolyC& a, const PolyC& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Complex> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return PolyC(std::move(out));
}

PolyC PolyC::shifted_up() const {
    if (is_zero()) return {};
    std::vector<Complex> v(coeffs_.size() + 1, 0.0);
    std::copy(coeffs_.begin(), coeffs_.end(), v.begin() + 1);
    return PolyC(std::move(v));
}

std::vector<Complex> PolyC::roots() const {
    const int n = degree();
    if (n < 1) return {};
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
    const Complex lead = leading();
    for (int i = 1; i < n; ++i) c(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) c(i, n - 1) = -coeffs_[static_cast<std::size_t>(i)] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(c, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("companion eigenvalue solve failed");
    const auto& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

PolyC translate(const PolyC& f, Complex a) {
    if (a == Complex(0.0) || f.degree() < 1) return f;
    // f(z - a): Taylor coefficients at -a, i.e. repeated Horner division by (z + a).
    std::vector<Complex> c = f.coeffs();
    const Complex t = -a;
    const std::size_t n = c.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = n - 1; j-- > i;) c[j] += t * c[j + 1];
    return PolyC(std::move(c));
}

double cauchy_root_bound(const PolyC& f) {
    if (f.degree() < 1) return 0.0;
    const double lead = std::abs(f.leading());
    double m = 0.0;
    for (int j = 0; j < f.degree(); ++j) m = std::max(m, std::abs(f.coeff(j)) / lead);
    return 1.0 + m;
}

}  // namespace hyperlab
