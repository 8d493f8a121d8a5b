#include "hyperlab/shift.hpp"

#include "hyperlab/errors.hpp"
#include "hyperlab/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hyperlab {

// ------------------------------------------------------------ LatticeVector

LatticeVector LatticeVector::basis(std::int64_t n, Complex value) {
    LatticeVector v;
    v.set(n, value);
    return v;
}

LatticeVector LatticeVector::from_dense(const Eigen::VectorXcd& dense, std::int64_t first_index) {
    LatticeVector v;
    for (Eigen::Index i = 0; i < dense.size(); ++i) v.set(first_index + i, dense[i]);
    return v;
}

void LatticeVector::set(std::int64_t n, Complex value) {
    if (value == Complex(0.0))
        entries_.erase(n);
    else
        entries_[n] = value;
}

Complex LatticeVector::operator[](std::int64_t n) const {
    const auto it = entries_.find(n);
    return it == entries_.end() ? Complex(0.0) : it->second;
}

std::int64_t LatticeVector::min_index() const {
    if (entries_.empty()) throw std::logic_error("empty lattice vector has no support");
    return entries_.begin()->first;
}

std::int64_t LatticeVector::max_index() const {
    if (entries_.empty()) throw std::logic_error("empty lattice vector has no support");
    return entries_.rbegin()->first;
}

double LatticeVector::norm2() const {
    double s = 0.0;
    for (const auto& [n, v] : entries_) s += std::norm(v);
    return s;
}

double LatticeVector::norm() const { return std::sqrt(norm2()); }

Complex inner(const LatticeVector& a, const LatticeVector& b) {
    Complex s = 0.0;
    const LatticeVector& small = a.support_size() <= b.support_size() ? a : b;
    for (const auto& [n, v] : small.entries_) s += std::conj(a[n]) * b[n];
    return s;
}

LatticeVector& LatticeVector::operator+=(const LatticeVector& rhs) {
    for (const auto& [n, v] : rhs.entries_) set(n, (*this)[n] + v);
    return *this;
}

LatticeVector& LatticeVector::operator-=(const LatticeVector& rhs) {
    for (const auto& [n, v] : rhs.entries_) set(n, (*this)[n] - v);
    return *this;
}

LatticeVector& LatticeVector::operator*=(Complex s) {
    if (s == Complex(0.0)) {
        entries_.clear();
        return *this;
    }
    for (auto& [n, v] : entries_) v *= s;
    return *this;
}

Eigen::VectorXcd LatticeVector::to_dense(std::int64_t first, std::int64_t last) const {
    if (last < first) throw std::invalid_argument("to_dense: empty window");
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(last - first + 1);
    for (const auto& [n, v] : entries_) {
        if (n < first || n > last) throw std::out_of_range("to_dense: support outside window");
        out[n - first] = v;
    }
    return out;
}

// ----------------------------------------------------------------- MatrixOp

MatrixOp MatrixOp::identity(int dim) { return MatrixOp(Eigen::MatrixXcd::Identity(dim, dim)); }

MatrixOp MatrixOp::backward_shift(int dim) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 1; i < dim; ++i) m(i - 1, i) = 1.0;
    return MatrixOp(std::move(m));
}

MatrixOp MatrixOp::forward_shift(int dim) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 1; i < dim; ++i) m(i, i - 1) = 1.0;
    return MatrixOp(std::move(m));
}

Eigen::VectorXcd MatrixOp::power_apply(const Eigen::VectorXcd& x, int n) const {
    if (n < 0) throw std::invalid_argument("MatrixOp::power_apply: negative power");
    Eigen::VectorXcd v = x;
    for (int i = 0; i < n; ++i) v = entries * v;
    return v;
}

// ----------------------------------------------------------- weight products

double WeightProduct::value() const {
    if (exact) return exact->to_double();
    return std::exp(log_value);
}

WeightProduct weight_product(const WeightRule& w, std::int64_t a, std::int64_t b) {
    if (a > b) throw std::invalid_argument("weight_product: requires a <= b");
    const std::int64_t count = b - a + 1;
    WeightProduct out;
    if (w.has_exact_weights()) {
        switch (w.kind()) {
            case RuleKind::constant:
                out.exact = Exact2Exp::from_double(w.constant_value()).pow(count);
                break;
            case RuleKind::family_a: out.exact = families::family_a_product(a, b); break;
            case RuleKind::family_b: out.exact = families::family_b_product(a, b); break;
            case RuleKind::custom_table: break;
        }
        out.log_value = out.exact->ln();
        return out;
    }
    const double log_scale = std::log(w.scale());
    switch (w.kind()) {
        case RuleKind::constant: out.log_value = count * std::log(w.constant_value()); break;
        case RuleKind::family_a: out.log_value = families::family_a_product(a, b).ln(); break;
        case RuleKind::family_b: out.log_value = families::family_b_product(a, b).ln(); break;
        case RuleKind::custom_table: {
            double s = 0.0;
            for (std::int64_t j = a; j <= b; ++j) s += std::log(w.weight(j) / w.scale());
            out.log_value = s;
            break;
        }
    }
    out.log_value += static_cast<double>(count) * log_scale;
    return out;
}

LatticeVector apply_power(const WeightRule& w, const LatticeVector& x, std::int64_t n) {
    if (n < 0 && !w.invertible())
        throw InvertibilityError("negative power of a weighted shift with inf w_n = 0");
    if (n == 0) return x;
    LatticeVector out;
    for (const auto& [j, v] : x.entries()) {
        if (n > 0)
            out.set(j - n, v * weight_product(w, j - n + 1, j).value());
        else
            out.set(j - n, v / weight_product(w, j + 1, j - n).value());
    }
    return out;
}

// ------------------------------------------------------------ phase distance

double min_phase_distance(const LatticeVector& v, const LatticeVector& x) {
    const Complex s = inner(v, x);
    if (std::abs(s) == 0.0) return std::sqrt(v.norm2() + x.norm2());
    LatticeVector d = (s / std::abs(s)) * v;
    d -= x;
    return d.norm();
}

double min_phase_distance(const Eigen::VectorXcd& v, const Eigen::VectorXcd& x) {
    if (v.size() != x.size()) throw std::invalid_argument("min_phase_distance: size mismatch");
    const Complex s = v.dot(x);  // Eigen conjugates the first argument
    if (std::abs(s) == 0.0) return std::sqrt(v.squaredNorm() + x.squaredNorm());
    return ((s / std::abs(s)) * v - x).norm();
}

// ----------------------------------------------------------------- hit sets

HitSet hit_set(const HitQuery& q) {
    if (!(q.radius > 0.0)) throw std::invalid_argument("hit_set: target radius must be positive");
    for (auto n : q.exponents)
        if (n < 0) throw std::invalid_argument("hit_set: exponents must be non-negative");

    std::vector<std::int64_t> exps = q.exponents;
    std::sort(exps.begin(), exps.end());
    exps.erase(std::unique(exps.begin(), exps.end()), exps.end());

    // Orbit points T^n u for n in Lambda, as dense vectors on a common window.
    std::vector<Eigen::VectorXcd> orbit;
    Eigen::VectorXcd center;
    if (const auto* rule = std::get_if<WeightRule>(&q.op)) {
        std::vector<LatticeVector> pts;
        for (auto n : exps) pts.push_back(apply_power(*rule, q.u, n));
        std::int64_t lo = 0, hi = 0;
        bool first = true;
        auto widen = [&](const LatticeVector& v) {
            if (v.empty()) return;
            if (first) {
                lo = v.min_index();
                hi = v.max_index();
                first = false;
            }
            lo = std::min(lo, v.min_index());
            hi = std::max(hi, v.max_index());
        };
        widen(q.center);
        for (const auto& p : pts) widen(p);
        center = q.center.to_dense(lo, hi);
        for (const auto& p : pts) orbit.push_back(p.to_dense(lo, hi));
    } else {
        const auto& m = std::get<MatrixOp>(q.op);
        const std::int64_t last = m.dim() - 1;
        center = q.center.to_dense(0, last);
        Eigen::VectorXcd v = q.u.to_dense(0, last);
        std::int64_t at = 0;
        for (auto n : exps) {
            for (; at < n; ++at) v = m.apply(v);
            orbit.push_back(v);
        }
    }

    HitSet out;
    out.points.reserve(q.t_grid.size());
    for (double t : q.t_grid) {
        HitPoint p;
        p.t = t;
        p.distance = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < exps.size(); ++i) {
            const double scale = std::exp(t * static_cast<double>(exps[i]));
            const double d = min_phase_distance(Eigen::VectorXcd(scale * orbit[i]), center);
            if (d < p.distance) {
                p.distance = d;
                p.best_n = exps[i];
            }
        }
        p.hit = p.distance < q.radius;
        if (p.hit) out.hits.push_back(t);
        out.points.push_back(p);
    }
    return out;
}

}  // namespace hyperlab
