#include "hyperlab/eigenfield.hpp"

#include "hyperlab/errors.hpp"

#include <boost/multiprecision/cpp_complex.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hyperlab {

namespace {

namespace mp = boost::multiprecision;
using MpC = mp::cpp_complex_50;
using MpR = mp::cpp_bin_float_50;
using MpVec = std::vector<MpC>;

MpC to_mp(Complex c) { return MpC(MpR(c.real()), MpR(c.imag())); }
Complex to_double(const MpC& c) { return {static_cast<double>(c.real()), static_cast<double>(c.imag())}; }

MpR mp_norm(const MpVec& v) {
    MpR s = 0;
    for (const auto& c : v) s += c.real() * c.real() + c.imag() * c.imag();
    return mp::sqrt(s);
}

Eigen::VectorXcd to_double(const MpVec& v) {
    Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = to_double(v[i]);
    return out;
}

// ||A x - l x|| / ||x|| in extended precision; A's double entries are exact.
double mp_residual(const Eigen::MatrixXcd& A, const MpVec& x, const MpC& l) {
    const auto n = static_cast<Eigen::Index>(x.size());
    MpVec y(x.size());
    for (Eigen::Index r = 0; r < n; ++r) {
        MpC s = -l * x[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < n; ++c) {
            const Complex a = A(r, c);
            if (a != Complex(0.0)) s += to_mp(a) * x[static_cast<std::size_t>(c)];
        }
        y[static_cast<std::size_t>(r)] = s;
    }
    const MpR nx = mp_norm(x);
    if (nx == 0) throw DegenerateInputError("eigen residual of the zero vector");
    return static_cast<double>(mp_norm(y) / nx);
}

double working_residual(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& x, Complex l) {
    return (A * x - l * x).norm() / x.norm();
}

// sqrt(sum_{i in [a, b)} |v_i|^2)
MpR block_norm(const MpVec& v, std::size_t a, std::size_t b) {
    MpR s = 0;
    for (std::size_t i = a; i < b && i < v.size(); ++i) s += v[i].real() * v[i].real() + v[i].imag() * v[i].imag();
    return mp::sqrt(s);
}

}  // namespace

bool EigenWitness::within_budget(double factor) const { return residual <= factor * tail_bound + 1e-40; }

EigenWitness shift_eigenvector(Complex lambda, int dim) {
    if (!(std::abs(lambda) < 1.0)) throw std::invalid_argument("shift_eigenvector: requires |lambda| < 1");
    if (dim < 1) throw std::invalid_argument("shift_eigenvector: dim must be >= 1");
    const MpC l = to_mp(lambda);
    MpVec x(static_cast<std::size_t>(dim));
    x[0] = MpC(1);
    for (std::size_t i = 1; i < x.size(); ++i) x[i] = x[i - 1] * l;

    EigenWitness w;
    w.op = MatrixOp::backward_shift(dim);
    w.x = to_double(x);
    w.lambda = lambda;
    w.dim = dim;
    w.residual = mp_residual(w.op.entries, x, l);
    w.working_residual = working_residual(w.op.entries, w.x, lambda);
    // Only the last coordinate misses: |lambda|^dim.
    w.tail_bound = static_cast<double>(mp::pow(MpR(std::abs(lambda)), dim) / mp_norm(x));
    return w;
}

Sm2Report sm2_construct_and_verify(const EigenWitness& x, int k, double alpha, double delta, int p,
                                   double ball_radius, int grid_points) {
    if (k < 1 || p < 1) throw std::invalid_argument("sm2: k and p must be >= 1");
    if (!(ball_radius > 0.0)) throw std::invalid_argument("sm2: ball_radius must be positive");
    if (!(delta > 0.0)) throw std::invalid_argument("sm2: delta must be positive");
    if (grid_points < 2) throw std::invalid_argument("sm2: grid needs at least two points");
    const double xn = x.x.norm();
    if (xn == 0.0) throw DegenerateInputError("sm2: zero eigenvector");

    Sm2Report rep;
    rep.alpha = alpha;
    rep.delta = delta;
    rep.k = k;
    rep.p = p;
    rep.ball_radius = ball_radius;
    rep.c = xn / ball_radius;
    if (delta > 1.0 / (2.0 * rep.c * k))
        throw std::invalid_argument("sm2: delta exceeds 1/(2ck) = " + std::to_string(1.0 / (2.0 * rep.c * k)));

    // T^k x = lambda^k x must have modulus e^{-alpha k}.
    const double mod = std::abs(x.lambda);
    if (!(mod > 0.0) || std::abs(std::log(mod) + alpha) > 1e-9 * std::max(1.0, std::abs(alpha)))
        throw std::invalid_argument("sm2: |lambda| does not match e^{-alpha}");

    // ||T^n x - lambda^n x|| <= sum_{i<n} q^{n-1-i} |lambda|^i ||T x - lambda x||,
    // rescaled by e^{n theta_j} e^{-2 delta k p} = |lambda|^{-n}.
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(x.op.entries);
    const double q = svd.singularValues()(0);
    const double abs_res = x.residual * xn;
    const double eps = std::numeric_limits<double>::epsilon();
    auto propagated = [&](std::int64_t n) {
        // sum_{i<n} (q/|l|)^{n-1-i} / |l|, summed in logs term by term.
        double s = 0.0;
        for (std::int64_t i = 0; i < n; ++i)
            s += std::exp(static_cast<double>(n - 1 - i) * std::log(q / mod) - std::log(mod));
        return s * abs_res;
    };

    const double scale = std::exp(-2.0 * delta * k * p);
    LatticeVector u = LatticeVector::from_dense(scale * x.x);
    LatticeVector center = LatticeVector::from_dense(x.x);
    rep.u_norm = u.norm();
    for (int j = 0; j <= p; ++j) rep.exponents.push_back(static_cast<std::int64_t>(p + j) * k);

    double worst = 0.0;
    for (auto n : rep.exponents) worst = std::max(worst, propagated(n));
    if (worst > 0.1 * ball_radius)
        throw std::invalid_argument("sm2: eigen residual too large for the ball (propagated " + std::to_string(worst) +
                                    ")");

    HitQuery hq;
    hq.op = x.op;
    hq.u = u;
    hq.exponents = rep.exponents;
    hq.center = center;
    hq.radius = ball_radius;
    for (int i = 0; i < grid_points; ++i)
        hq.t_grid.push_back(alpha + delta + delta * static_cast<double>(i) / (grid_points - 1));
    rep.grid = hit_set(hq);
    rep.all_hit = rep.grid.contains_all();

    rep.exact_ok = true;
    for (int j = 0; j <= p; ++j) {
        ExactHit e;
        e.j = j;
        e.n = rep.exponents[static_cast<std::size_t>(j)];
        e.theta = alpha + 2.0 * delta * p / static_cast<double>(p + j);
        HitQuery one = hq;
        one.exponents = {e.n};
        one.t_grid = {e.theta};
        e.distance = hit_set(one).points.front().distance;
        e.budget = 10.0 * (propagated(e.n) + static_cast<double>(e.n + 2) * eps * xn);
        e.ok = e.distance <= e.budget;
        rep.exact_ok = rep.exact_ok && e.ok;
        rep.exact.push_back(e);
    }
    return rep;
}

EigenWitness pD_eigencheck(const std::vector<Complex>& p, Complex w, int deg) {
    if (deg < 10) throw std::invalid_argument("pD_eigencheck: deg must be >= 10");
    const auto d = static_cast<Eigen::Index>(deg);
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index n = 1; n < d; ++n) D(n - 1, n) = static_cast<double>(n);
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(d, d);
    Eigen::MatrixXcd Dk = Eigen::MatrixXcd::Identity(d, d);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i > 0) Dk = Dk * D;
        P += p[i] * Dk;
    }

    const MpC wm = to_mp(w);
    MpVec f(static_cast<std::size_t>(deg));
    f[0] = MpC(1);
    for (std::size_t n = 1; n < f.size(); ++n) f[n] = f[n - 1] * wm / MpR(static_cast<double>(n));
    MpC lm(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) lm = lm * wm + to_mp(*it);

    EigenWitness out;
    out.op = MatrixOp(P);
    out.x = to_double(f);
    out.lambda = to_double(lm);
    out.dim = deg;
    // The double matrix P rounds a_i * n!/(n-i)!, so the extended residual
    // applies p(D) to the coefficients directly.
    MpVec y(f.size(), MpC(0)), dkf = f;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i > 0) {
            for (std::size_t n = 0; n + 1 < dkf.size(); ++n) dkf[n] = dkf[n + 1] * MpR(static_cast<double>(n + 1));
            dkf.back() = MpC(0);
        }
        const MpC a = to_mp(p[i]);
        for (std::size_t n = 0; n < y.size(); ++n) y[n] += a * dkf[n];
    }
    for (std::size_t n = 0; n < y.size(); ++n) y[n] -= lm * f[n];
    out.residual = static_cast<double>(mp_norm(y) / mp_norm(f));
    out.working_residual = working_residual(P, out.x, out.lambda);
    // p(D) f - p(w) f = -sum_i a_i w^i (top i coefficients of f).
    MpR bound = 0;
    MpR wp = 1;
    for (std::size_t i = 1; i < p.size(); ++i) {
        wp *= MpR(std::abs(w));
        const std::size_t from = i >= f.size() ? 0 : f.size() - i;
        bound += MpR(std::abs(p[i])) * wp * block_norm(f, from, f.size());
    }
    out.tail_bound = static_cast<double>(bound / mp_norm(f));
    return out;
}

EigenWitness hardy_adjoint_check(const std::vector<Complex>& phi, Complex z, int dim) {
    if (!(std::abs(z) < 1.0)) throw std::invalid_argument("hardy_adjoint_check: requires |z| < 1");
    if (dim < 1) throw std::invalid_argument("hardy_adjoint_check: dim must be >= 1");
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c <= r; ++c) {
            const auto i = static_cast<std::size_t>(r - c);
            if (i < phi.size()) M(r, c) = phi[i];
        }
    const Eigen::MatrixXcd A = M.adjoint();

    const MpC zc = to_mp(std::conj(z));
    MpVec kz(static_cast<std::size_t>(dim));
    kz[0] = MpC(1);
    for (std::size_t n = 1; n < kz.size(); ++n) kz[n] = kz[n - 1] * zc;
    const MpC zm = to_mp(z);
    MpC val(0);
    for (auto it = phi.rbegin(); it != phi.rend(); ++it) val = val * zm + to_mp(*it);
    const MpC lm = MpC(val.real(), -val.imag());

    EigenWitness out;
    out.op = MatrixOp(A);
    out.x = to_double(kz);
    out.lambda = to_double(lm);
    out.dim = dim;
    out.residual = mp_residual(A, kz, lm);
    out.working_residual = working_residual(A, out.x, out.lambda);
    // Row n of the truncated adjoint loses conj(phi_i) conj(z)^{n+i} for n + i >= dim.
    MpR bound = 0;
    const MpR az = MpR(std::abs(z));
    for (std::size_t i = 1; i < phi.size(); ++i) {
        MpR s = 0;
        for (std::size_t n = (i >= kz.size() ? 0 : kz.size() - i); n < kz.size(); ++n) {
            const MpR t = mp::pow(az, static_cast<int>(n + i));
            s += t * t;
        }
        bound += MpR(std::abs(phi[i])) * mp::sqrt(s);
    }
    out.tail_bound = static_cast<double>(bound / mp_norm(kz));
    return out;
}

namespace {

// S e_n = e_{n+1} / w_{n+1}, the right inverse of T_w.
LatticeVector apply_right_inverse(const WeightRule& rule, const LatticeVector& v) {
    LatticeVector out;
    for (const auto& [n, c] : v.entries()) out.set(n + 1, c / rule.weight(n + 1));
    return out;
}

}  // namespace

KitaiSeries kitai_series(const WeightRule& rule, const LatticeVector& x, Complex w, int N) {
    if (!rule.invertible()) throw InvertibilityError("kitai_series: weights not bounded below");
    if (x.empty()) throw DegenerateInputError("kitai_series: x = 0 gives u = 0");
    if (N < 1) throw std::invalid_argument("kitai_series: N must be >= 1");
    if (w == Complex(0.0)) throw std::invalid_argument("kitai_series: w must be nonzero");

    std::vector<LatticeVector> tn{x}, sn{x};
    for (int n = 1; n <= N + 1; ++n) {
        tn.push_back(apply_power(rule, tn.back(), 1));
        sn.push_back(apply_right_inverse(rule, sn.back()));
    }
    KitaiSeries out;
    out.t_ratio = 0.0;
    out.s_ratio = std::numeric_limits<double>::infinity();
    for (int n = 0; n < N; ++n) {
        out.t_ratio = std::max(out.t_ratio, tn[n + 1].norm() / tn[n].norm());
        out.s_ratio = std::min(out.s_ratio, sn[n].norm() / sn[n + 1].norm());
    }
    const double aw = std::abs(w);
    if (!(out.t_ratio < aw && aw < out.s_ratio))
        throw DivergenceError("kitai_series: |w| = " + std::to_string(aw) + " outside the convergence window (" +
                              std::to_string(out.t_ratio) + ", " + std::to_string(out.s_ratio) + ")");

    LatticeVector u = x;
    for (int n = 1; n <= N; ++n) {
        u += std::pow(w, -n) * tn[static_cast<std::size_t>(n)];
        u += std::pow(w, n) * sn[static_cast<std::size_t>(n)];
    }
    out.u = u;

    const double un = u.norm();
    const LatticeVector diff = apply_power(rule, u, 1) - w * u;
    // T u - w u = w^{-N} T^{N+1} x - w^{N+1} S^N x.
    const double tail = std::pow(aw, -N) * tn[static_cast<std::size_t>(N + 1)].norm() +
                        std::pow(aw, N + 1) * sn[static_cast<std::size_t>(N)].norm();

    const std::int64_t lo = u.min_index() - 1, hi = u.max_index();
    const auto dim = static_cast<Eigen::Index>(hi - lo + 1);
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::int64_t i = lo + 1; i <= hi; ++i) A(i - 1 - lo, i - lo) = rule.weight(i);
    out.first_index = lo;
    out.witness.op = MatrixOp(A);
    out.witness.x = u.to_dense(lo, hi);
    out.witness.lambda = w;
    out.witness.dim = static_cast<int>(dim);
    out.witness.residual = diff.norm() / un;
    out.witness.working_residual = working_residual(A, out.witness.x, w);
    out.witness.tail_bound = tail / un;
    return out;
}

RankReport independence_check(const MatrixOp& T, const Eigen::RowVectorXcd& f, int n) {
    const int dim = T.dim();
    if (f.size() != dim) throw std::invalid_argument("independence_check: f has the wrong length");
    if (n < 0 || n >= dim) throw std::invalid_argument("independence_check: requires 0 <= n < dim");
    RankReport r;
    r.rows = n + 1;
    r.iterates.resize(n + 1, dim);
    r.iterates.row(0) = f;
    for (int j = 1; j <= n; ++j) r.iterates.row(j) = r.iterates.row(j - 1) * T.entries;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(r.iterates);
    r.singular_values = svd.singularValues();
    const double smax = r.singular_values.size() ? r.singular_values(0) : 0.0;
    r.threshold = dim * std::numeric_limits<double>::epsilon() * smax;
    r.rank = 0;
    if (smax > 0.0)
        for (Eigen::Index i = 0; i < r.singular_values.size(); ++i)
            if (r.singular_values(i) > r.threshold) ++r.rank;
    return r;
}

std::vector<double> span_residuals(const std::vector<Eigen::VectorXcd>& vectors, const Eigen::VectorXcd& target) {
    std::vector<Eigen::VectorXcd> basis;
    Eigen::VectorXcd r = target;
    std::vector<double> out{r.norm()};
    for (const auto& v : vectors) {
        if (v.size() != target.size()) throw std::invalid_argument("span_residuals: length mismatch");
        Eigen::VectorXcd q = v;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) q -= b * b.dot(q);
        const double qn = q.norm();
        if (qn > 1e-13 * v.norm()) {
            q /= qn;
            basis.push_back(q);
            r -= q * q.dot(r);
        }
        out.push_back(r.norm());
    }
    return out;
}

}  // namespace hyperlab
