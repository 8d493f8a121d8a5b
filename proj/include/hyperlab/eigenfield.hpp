#pragma once

// Truncated eigenvectors and eigenfields: backward shift eigenvectors, the
// scaled hit construction built on one of them, eigenfields of p(D) and of
// adjoint multipliers, the two-sided series for invertible weighted shifts,
// and rank checks for dual iterates.

#include "hyperlab/poly.hpp"
#include "hyperlab/shift.hpp"

#include <Eigen/Dense>

#include <vector>

namespace hyperlab {

/// A truncated eigen-relation T x ~ lambda x.
///
/// `residual` is ||T x - lambda x|| / ||x|| evaluated in 50-digit arithmetic
/// for the exact truncated vector, so truncation tails far below double
/// round-off stay visible. `working_residual` is the same quantity for the
/// stored double data. `tail_bound` is the a priori bound on `residual`
/// (0 when none is known).
struct EigenWitness {
    MatrixOp op;
    Eigen::VectorXcd x;
    Complex lambda;
    double residual = 0.0;
    double working_residual = 0.0;
    double tail_bound = 0.0;
    int dim = 0;

    /// residual <= factor * tail_bound (with a tiny absolute floor).
    bool within_budget(double factor = 10.0) const;
};

/// x = (1, l, l^2, ...) on dim coordinates for the backward shift.
/// Requires |l| < 1.
EigenWitness shift_eigenvector(Complex lambda, int dim);

struct ExactHit {
    int j = 0;
    std::int64_t n = 0;
    double theta = 0.0;
    double distance = 0.0;
    double budget = 0.0;  // 10 * (propagated truncation residual + rounding floor)
    bool ok = false;
};

struct Sm2Report {
    double alpha = 0.0, delta = 0.0, ball_radius = 0.0;
    int k = 1, p = 1;
    double c = 0.0;       // ||x|| / ball_radius
    double u_norm = 0.0;  // ||u_p||
    std::vector<std::int64_t> exponents;
    HitSet grid;  // over the theta grid of [alpha + delta, alpha + 2 delta]
    std::vector<ExactHit> exact;
    bool all_hit = false;
    bool exact_ok = false;
    bool ok() const { return all_hit && exact_ok; }
};

/// Given T^k x = w e^{-alpha k} x (w unimodular), builds u_p = e^{-2 delta k p} x
/// and Lambda_p = {(p + j) k : 0 <= j <= p} and checks that every point of a
/// grid_points grid of [alpha + delta, alpha + 2 delta] admits a hit of the
/// ball x + ball_radius B. Requires delta <= 1 / (2 c k), c = ||x|| / ball_radius.
Sm2Report sm2_construct_and_verify(const EigenWitness& x, int k, double alpha, double delta, int p,
                                   double ball_radius, int grid_points = 101);

/// f = sum_{n < deg} w^n / n! z^n against T = p(D) on polynomials of degree
/// < deg; lambda = p(w). Requires deg >= 10.
EigenWitness pD_eigencheck(const std::vector<Complex>& p, Complex w, int deg);

/// k_z = (1, conj z, conj z^2, ...) against the adjoint of the lower
/// triangular Toeplitz matrix of phi; lambda = conj(phi(z)). Requires |z| < 1.
EigenWitness hardy_adjoint_check(const std::vector<Complex>& phi, Complex z, int dim);

struct KitaiSeries {
    EigenWitness witness;  // op is T on the index window [first_index, first_index + dim)
    LatticeVector u;
    std::int64_t first_index = 0;
    double t_ratio = 0.0;  // sup ||T^{n+1}x|| / ||T^n x||
    double s_ratio = 0.0;  // inf ||S^n x|| / ||S^{n+1}x||
};

/// u = x + sum_{n=1}^N (w^{-n} T^n x + w^n S^n x) with S e_n = e_{n+1} / w_{n+1}.
/// Throws DivergenceError unless t_ratio < |w| < s_ratio on the first N terms.
KitaiSeries kitai_series(const WeightRule& rule, const LatticeVector& x, Complex w, int N);

struct RankReport {
    int rank = 0;
    int rows = 0;
    double threshold = 0.0;
    Eigen::VectorXd singular_values;
    Eigen::MatrixXcd iterates;  // row j is f T^j
};

/// Numerical rank of f, f T, ..., f T^n (as functionals). Requires n < dim.
RankReport independence_check(const MatrixOp& T, const Eigen::RowVectorXcd& f, int n);

/// Residual of the least-squares projection of `target` onto the span of the
/// first m vectors, for m = 0..vectors.size().
std::vector<double> span_residuals(const std::vector<Eigen::VectorXcd>& vectors, const Eigen::VectorXcd& target);

}  // namespace hyperlab
