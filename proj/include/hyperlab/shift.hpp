#pragma once

#include "hyperlab/exact.hpp"
#include "hyperlab/weights.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <variant>
#include <vector>

namespace hyperlab {

using Complex = std::complex<double>;

/// Finitely supported vector on Z, kept sorted by index. Explicit zeros are
/// dropped.
class LatticeVector {
public:
    LatticeVector() = default;

    static LatticeVector basis(std::int64_t n, Complex value = 1.0);
    /// Entry i of `dense` goes to index first_index + i.
    static LatticeVector from_dense(const Eigen::VectorXcd& dense, std::int64_t first_index = 0);

    void set(std::int64_t n, Complex value);
    Complex operator[](std::int64_t n) const;

    const std::map<std::int64_t, Complex>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }
    std::int64_t min_index() const;
    std::int64_t max_index() const;

    double norm2() const;
    double norm() const;
    /// <a, b> = sum conj(a_n) b_n.
    friend Complex inner(const LatticeVector& a, const LatticeVector& b);

    LatticeVector& operator+=(const LatticeVector& rhs);
    LatticeVector& operator-=(const LatticeVector& rhs);
    LatticeVector& operator*=(Complex s);
    friend LatticeVector operator+(LatticeVector a, const LatticeVector& b) { return a += b; }
    friend LatticeVector operator-(LatticeVector a, const LatticeVector& b) { return a -= b; }
    friend LatticeVector operator*(Complex s, LatticeVector a) { return a *= s; }

    bool operator==(const LatticeVector& rhs) const = default;

    /// Dense window [first, last].
    Eigen::VectorXcd to_dense(std::int64_t first, std::int64_t last) const;

private:
    std::map<std::int64_t, Complex> entries_;
};

/// Dense truncation of an operator on coordinates 0..dim-1.
struct MatrixOp {
    Eigen::MatrixXcd entries;

    MatrixOp() = default;
    explicit MatrixOp(Eigen::MatrixXcd m) : entries(std::move(m)) {}

    static MatrixOp identity(int dim);
    /// B e_i = e_{i-1}, B e_0 = 0.
    static MatrixOp backward_shift(int dim);
    /// S e_i = e_{i+1}, last coordinate dropped.
    static MatrixOp forward_shift(int dim);

    int dim() const { return static_cast<int>(entries.rows()); }
    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const { return entries * x; }
    Eigen::VectorXcd power_apply(const Eigen::VectorXcd& x, int n) const;
    MatrixOp adjoint() const { return MatrixOp(entries.adjoint()); }
};

/// Product prod_{j=a}^b w_j; `exact` is present for exact rules.
struct WeightProduct {
    std::optional<Exact2Exp> exact;
    double log_value = 0.0;  // natural log

    double value() const;
};

/// w(a, b) for a <= b. Family rules use closed forms; custom tables and
/// scaled rules sum logs in ascending index order.
WeightProduct weight_product(const WeightRule& w, std::int64_t a, std::int64_t b);

/// T_w^n x; negative n requires an invertible rule.
LatticeVector apply_power(const WeightRule& w, const LatticeVector& x, std::int64_t n);

/// min over |w| = 1 of ||w v - x||. The optimal phase is applied explicitly
/// instead of expanding the square, so tiny distances keep full accuracy.
double min_phase_distance(const LatticeVector& v, const LatticeVector& x);
double min_phase_distance(const Eigen::VectorXcd& v, const Eigen::VectorXcd& x);

/// Parameterised orbit query: which t in the grid admit n in Lambda and a
/// unimodular w with ||w e^{tn} T^n u - center|| < radius.
struct HitQuery {
    std::variant<WeightRule, MatrixOp> op = WeightRule::constant(1.0);
    LatticeVector u;
    std::vector<std::int64_t> exponents;
    LatticeVector center;
    double radius = 1.0;
    std::vector<double> t_grid;
};

struct HitPoint {
    double t = 0.0;
    double distance = 0.0;       // best over n in Lambda
    std::int64_t best_n = -1;    // -1 when Lambda is empty
    bool hit = false;
};

struct HitSet {
    std::vector<double> hits;
    std::vector<HitPoint> points;  // one per grid value

    bool contains_all() const { return hits.size() == points.size(); }
};

HitSet hit_set(const HitQuery& q);

}  // namespace hyperlab
