#include "hyperlab/translation.hpp"

#include "hyperlab/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace hyperlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class F>
double boundary_max(F&& fn, Complex center, double r, int samples) {
    double best = 0.0;
    for (int i = 0; i < samples; ++i) {
        const Complex w = center + std::polar(r, kTwoPi * i / samples);
        best = std::max(best, std::abs(fn(w)));
    }
    return best;
}

}  // namespace

double disk_sup(const PolyC& f, const DiskSpec& d, int samples) {
    if (!(d.radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
    if (samples < 8 * std::max(f.degree(), 1))
        throw std::invalid_argument("disk_sup needs at least 8 samples per degree");
    return boundary_max([&](Complex w) { return f(w); }, d.center, d.radius, samples);
}

double seminorm(const PolyC& f, const SeminormSpec& p) {
    const int s = std::max(p.samples, 8 * std::max(f.degree(), 1));
    return p.radius * disk_sup(f, {0.0, p.radius}, s);
}

// ------------------------------------------------------------------ lattice

namespace {

// sin x >= x - x^3/6 for x >= 0.
double sin_lower(double x) { return x - x * x * x / 6.0; }

double brute_min_distance(const std::vector<LatticePoint>& pts, double cell) {
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> grid;
    grid.reserve(pts.size());
    auto key = [](std::int64_t ix, std::int64_t iy) {
        return (static_cast<std::uint64_t>(ix + (1 << 30)) << 32) ^ static_cast<std::uint64_t>(iy + (1 << 30));
    };
    auto cell_of = [&](Complex z) {
        return std::pair{static_cast<std::int64_t>(std::floor(z.real() / cell)),
                         static_cast<std::int64_t>(std::floor(z.imag() / cell))};
    };
    for (std::uint32_t i = 0; i < pts.size(); ++i) {
        const auto [ix, iy] = cell_of(pts[i].z);
        grid[key(ix, iy)].push_back(i);
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t i = 0; i < pts.size(); ++i) {
        const auto [ix, iy] = cell_of(pts[i].z);
        for (std::int64_t dx = -1; dx <= 1; ++dx)
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                const auto it = grid.find(key(ix + dx, iy + dy));
                if (it == grid.end()) continue;
                for (std::uint32_t j : it->second)
                    if (j > i) best = std::min(best, std::abs(pts[i].z - pts[j].z));
            }
    }
    return best;
}

}  // namespace

LatticePointSet lattice_construct(double delta, double c, std::int64_t n) {
    if (!(delta > 0.0)) throw std::invalid_argument("lattice: delta must be positive");
    if (!(c > 0.0)) throw std::invalid_argument("lattice: c must be positive");
    if (n < 1) throw std::invalid_argument("lattice: n must be >= 1");

    LatticePointSet s;
    if (delta >= 1.0) {
        s.warnings.push_back("delta >= 1 replaced by 0.99");
        delta = 0.99;
    }
    s.delta = delta;
    s.c = c;
    s.n = n;
    s.m = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(c / 2.0)));
    s.h = static_cast<std::int64_t>(std::ceil(40.0 * static_cast<double>(s.m) / delta));
    s.R = s.h * s.m;
    s.k = static_cast<std::int64_t>(std::floor(std::numbers::pi * static_cast<double>((n + 1) * s.m) /
                                               (2.0 * delta * static_cast<double>(n)))) + 1;

    for (std::int64_t j = 1; j <= s.k; ++j) s.radii.push_back(n * s.R + 2 * j * s.m);

    const std::int64_t per_ring = 2 * n * s.h;
    const std::int64_t total = per_ring * s.k;  // all angles are multiples of 2 pi / total
    s.points.reserve(static_cast<std::size_t>(total));
    for (std::int64_t j = 1; j <= s.k; ++j) {
        const double r = static_cast<double>(s.radii[static_cast<std::size_t>(j - 1)]);
        for (std::int64_t l = 0; l < per_ring; ++l) {
            const std::int64_t t = (l * s.k + j) % total;
            const double theta = kTwoPi * static_cast<double>(t) / static_cast<double>(total);
            s.points.push_back({static_cast<int>(j), l, std::polar(r, theta), s.radii[static_cast<std::size_t>(j - 1)]});
        }
    }

    auto& ck = s.checks;
    // Moduli are integers by construction; confirm the floating points sit on them.
    ck.integer_moduli = std::all_of(s.points.begin(), s.points.end(), [](const LatticePoint& p) {
        return p.modulus > 0 && std::abs(std::abs(p.z) - static_cast<double>(p.modulus)) <= 1e-9 * p.modulus;
    });
    const double lo = static_cast<double>(n * s.R) + c;
    const double hi = static_cast<double>((n + 1) * s.R) - c;
    ck.modulus_window = std::all_of(s.radii.begin(), s.radii.end(), [&](std::int64_t r) {
        return static_cast<double>(r) >= lo && static_cast<double>(r) <= hi;
    });

    const double chord = 2.0 * static_cast<double>(s.radii.front()) *
                         sin_lower(std::numbers::pi / (2.0 * static_cast<double>(n * s.h)));
    ck.separation_lower_bound = std::min(static_cast<double>(2 * s.m), chord);
    ck.min_distance = brute_min_distance(s.points, c);
    ck.separation = ck.separation_lower_bound >= c && ck.min_distance >= c;

    // Angular coverage: open arcs of angular half-width 2 asin(delta / (2|z|))
    // around each direction must overlap consecutively around the circle.
    std::vector<std::pair<std::int64_t, double>> dirs;  // (angle index, half width)
    dirs.reserve(s.points.size());
    for (const auto& p : s.points) {
        const std::int64_t t = (p.l * s.k + p.j) % total;
        dirs.emplace_back(t, 2.0 * std::asin(delta / (2.0 * static_cast<double>(p.modulus))));
    }
    std::sort(dirs.begin(), dirs.end());
    bool covered = true;
    double max_gap = 0.0;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        const auto& a = dirs[i];
        const auto& b = dirs[(i + 1) % dirs.size()];
        std::int64_t steps = b.first - a.first;
        if (i + 1 == dirs.size()) steps += total;
        const double gap = kTwoPi * static_cast<double>(steps) / static_cast<double>(total);
        max_gap = std::max(max_gap, gap);
        covered = covered && gap < a.second + b.second;
    }
    ck.max_angular_gap = 2.0 * std::sin(max_gap / 4.0);
    ck.density_bound = delta / static_cast<double>(s.radii.front());
    ck.angular_density = covered && ck.max_angular_gap < ck.density_bound;
    return s;
}

void write_lattice_csv(const LatticePointSet& s, std::ostream& os) {
    os << "j,l,re,im,n_j\n";
    char buf[128];
    for (const auto& p : s.points) {
        std::snprintf(buf, sizeof buf, "%d,%lld,%.17g,%.17g,%lld\n", p.j, static_cast<long long>(p.l), p.z.real(),
                      p.z.imag(), static_cast<long long>(p.modulus));
        os << buf;
    }
}

// -------------------------------------------------------------------- Runge

namespace {

struct Fit {
    PolyC f;
    double worst = std::numeric_limits<double>::infinity();
    std::vector<double> errors;
};

// Least squares fit of degree d on the stacked boundary samples. The basis is
// built by Arnoldi (twice-orthogonalised Gram-Schmidt against the discrete
// inner product); the recurrence is then replayed on monomial coefficients.
PolyC arnoldi_fit(const Eigen::VectorXcd& x, const Eigen::VectorXcd& b, int d) {
    const Eigen::Index N = x.size();
    const double sqrtN = std::sqrt(static_cast<double>(N));
    Eigen::MatrixXcd Q(N, d + 1);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(d + 1, std::max(d, 1));
    Q.col(0).setOnes();
    for (int k = 0; k < d; ++k) {
        Eigen::VectorXcd q = x.cwiseProduct(Q.col(k));
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXcd h = (Q.leftCols(k + 1).adjoint() * q) / static_cast<double>(N);
            q.noalias() -= Q.leftCols(k + 1) * h;
            H.col(k).head(k + 1) += h;
        }
        const double nq = q.norm() / sqrtN;
        if (!(nq > 0.0)) throw ApproximationError("Arnoldi breakdown: too few distinct sample points");
        H(k + 1, k) = nq;
        Q.col(k + 1) = q / nq;
    }
    const Eigen::VectorXcd coef = Q.adjoint() * b / static_cast<double>(N);

    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(d + 1, d + 1);  // column k: monomial coefficients of q_k
    P(0, 0) = 1.0;
    for (int k = 0; k < d; ++k) {
        Eigen::VectorXcd next = Eigen::VectorXcd::Zero(d + 1);
        next.segment(1, k + 1) = P.col(k).head(k + 1);
        for (int j = 0; j <= k; ++j) next -= H(j, k) * P.col(j);
        P.col(k + 1) = next / H(k + 1, k);
    }
    const Eigen::VectorXcd mono = P * coef;
    return PolyC(std::vector<Complex>(mono.data(), mono.data() + mono.size()));
}

std::vector<double> certify(const PolyC& f, const std::vector<Complex>& centers, double a,
                            const std::vector<PolyC>& targets, int samples) {
    std::vector<double> err(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const Complex z = centers[i];
        const PolyC& t = targets[i];
        err[i] = boundary_max([&](Complex w) { return f(w - z) - t(w); }, 0.0, a, samples);
    }
    return err;
}

}  // namespace

RungeResult runge_simultaneous(const std::vector<Complex>& centers, double a, const std::vector<PolyC>& targets,
                               double eps, int degree_cap, int degree_step) {
    if (centers.empty()) throw DegenerateInputError("runge: no centres");
    if (centers.size() != targets.size()) throw std::invalid_argument("runge: one target per centre");
    if (!(a > 0.0)) throw std::invalid_argument("runge: radius must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("runge: eps must be positive");
    if (degree_cap < 0 || degree_step < 1) throw std::invalid_argument("runge: bad degree schedule");
    for (std::size_t i = 0; i < centers.size(); ++i)
        for (std::size_t j = i + 1; j < centers.size(); ++j)
            if (!(std::abs(centers[i] - centers[j]) > 2.0 * a))
                throw DegenerateInputError("runge: disks overlap (need |z - z'| > 2a)");

    RungeResult r;
    int max_target = 0;
    for (const auto& t : targets) max_target = std::max(max_target, t.degree());

    if (centers.size() == 1) {
        // f(v) = f_0(v + z) solves the problem exactly.
        r.f = translate(targets[0], -centers[0]);
        r.degree = std::max(r.f.degree(), 0);
        r.fit_samples = 8 * std::max(r.degree, 1);
        r.cert_samples = 4 * r.fit_samples;
        r.errors = certify(r.f, centers, a, targets, r.cert_samples);
        const double worst = *std::max_element(r.errors.begin(), r.errors.end());
        r.degree_trace.push_back(r.degree);
        r.error_trace.push_back(worst);
        r.success = worst < eps;
        return r;
    }

    const std::size_t nd = centers.size();
    Fit best;
    int best_degree = 0, best_samples = 0;
    std::vector<int> schedule;
    for (int d = std::min(std::max(max_target, degree_step), degree_cap); d < degree_cap; d += degree_step)
        schedule.push_back(d);
    schedule.push_back(degree_cap);

    for (int d : schedule) {
        const int M = 8 * std::max(d, 1);
        Eigen::VectorXcd x(static_cast<Eigen::Index>(nd) * M), b(static_cast<Eigen::Index>(nd) * M);
        for (std::size_t i = 0; i < nd; ++i)
            for (int s = 0; s < M; ++s) {
                const Complex w = std::polar(a, kTwoPi * s / M);
                const auto row = static_cast<Eigen::Index>(i) * M + s;
                x[row] = w - centers[i];
                b[row] = targets[i](w);
            }
        Fit fit;
        fit.f = arnoldi_fit(x, b, d);
        fit.errors = certify(fit.f, centers, a, targets, 4 * M);
        fit.worst = *std::max_element(fit.errors.begin(), fit.errors.end());
        r.degree_trace.push_back(d);
        r.error_trace.push_back(fit.worst);
        const bool improved = fit.worst < best.worst;
        if (improved) {
            best = std::move(fit);
            best_degree = d;
            best_samples = M;
        }
        if (best.worst < eps) break;
    }
    r.f = std::move(best.f);
    r.errors = std::move(best.errors);
    r.degree = best_degree;
    r.fit_samples = best_samples;
    r.cert_samples = 4 * best_samples;
    r.success = best.worst < eps;
    return r;
}

// ---------------------------------------------------------- common vector

double hit_distance(const PolyC& y, const PolyC& x, Complex h, double b, const SeminormSpec& p) {
    const int samples = std::max(p.samples, 8 * std::max({y.degree(), x.degree(), 1}));
    const double scale = std::exp(b * std::abs(h));
    return p.radius * boundary_max([&](Complex w) { return x(w) - scale * y(w - h); }, 0.0, p.radius, samples);
}

namespace {

bool perturbed_hits(const PolyC& y, const CommonVectorConfig& cfg, const std::vector<CellHit>& cells, double delta) {
    for (const auto& cell : cells) {
        const Complex z = cfg.points[cell.best_point].z;
        const double r = std::abs(z);
        const double dphi = 2.0 * std::asin(std::min(1.0, delta / (2.0 * r)));
        const double db = delta / r;
        for (int i = -1; i <= 1; ++i)
            for (int j = -1; j <= 1; ++j) {
                const Complex h = std::polar(r, cell.phase + 0.999 * i * dphi);
                if (!(hit_distance(y, cfg.x, h, cell.b + 0.999 * j * db, cfg.p) < 1.0)) return false;
            }
    }
    return true;
}

}  // namespace

CommonVectorReport common_vector_stage(const CommonVectorConfig& cfg) {
    if (cfg.points.empty()) throw DegenerateInputError("common vector stage: empty point set");
    if (cfg.u.is_zero() && cfg.x.is_zero()) throw DegenerateInputError("common vector stage: u = x = 0");
    if (cfg.points.size() > 30) throw std::invalid_argument("common vector stage: toy set limited to 30 points");
    if (cfg.phase_count < 1 || cfg.b_values.empty()) throw std::invalid_argument("common vector stage: empty grid");
    if (!(cfg.p.radius > 0.0) || cfg.fit_radius < cfg.p.radius)
        throw std::invalid_argument("common vector stage: need 0 < p radius <= fit radius");

    double dmax = 0.0, nmax = 0.0;
    std::vector<Complex> centers{0.0};
    std::vector<PolyC> targets{cfg.u};
    for (const auto& tp : cfg.points) {
        if (std::abs(tp.z) > 60.0) throw std::invalid_argument("common vector stage: toy moduli limited to 60");
        dmax = std::max(dmax, std::abs(tp.b));
        nmax = std::max(nmax, std::abs(tp.z));
        centers.push_back(tp.z);
        targets.push_back(std::exp(-tp.b * std::abs(tp.z)) * cfg.x);
    }
    for (double b : cfg.b_values) dmax = std::max(dmax, std::abs(b));

    CommonVectorReport rep;
    // q(T_z y - e^{-b|z|} x) < e^{-dN} gives q(x - e^{b|z|} T_z y) < 1; q is the
    // fit-radius seminorm, so the sup-norm target carries a 1/fit_radius.
    rep.fit_eps = std::exp(-dmax * nmax) / cfg.fit_radius;
    rep.fit = runge_simultaneous(centers, cfg.fit_radius, targets, rep.fit_eps, cfg.degree_cap, cfg.degree_step);
    const PolyC& y = rep.fit.f;
    rep.u_distance = seminorm(cfg.u - y, cfg.p);

    rep.all_hit = true;
    for (int l = 0; l < cfg.phase_count; ++l) {
        const double phase = kTwoPi * (l + cfg.phase_offset) / cfg.phase_count;
        for (double b : cfg.b_values) {
            CellHit cell;
            cell.phase = phase;
            cell.b = b;
            cell.distance = std::numeric_limits<double>::infinity();
            // The distance depends on |z| only; ties go to the point whose
            // direction is closest to the grid phase.
            double best_angle = INFINITY;
            const Complex a = std::polar(1.0, phase);
            for (std::size_t i = 0; i < cfg.points.size(); ++i) {
                const Complex z = cfg.points[i].z;
                const double dist = hit_distance(y, cfg.x, std::abs(z) * a, b, cfg.p);
                const double angle = std::abs(a - z / std::abs(z));
                const bool tie = std::abs(dist - cell.distance) <= 1e-12 * (1.0 + dist);
                if ((!tie && dist < cell.distance) || (tie && angle < best_angle)) {
                    cell.distance = std::min(dist, cell.distance);
                    cell.best_point = i;
                    best_angle = angle;
                }
            }
            cell.hit = cell.distance < 1.0;
            rep.all_hit = rep.all_hit && cell.hit;
            rep.cells.push_back(cell);
        }
    }

    if (rep.all_hit) {
        double lo = 0.0, hi = 1.0;
        if (perturbed_hits(y, cfg, rep.cells, hi)) {
            lo = hi;
        } else {
            for (int it = 0; it < 20; ++it) {
                const double mid = 0.5 * (lo + hi);
                (perturbed_hits(y, cfg, rep.cells, mid) ? lo : hi) = mid;
            }
        }
        rep.stability_radius = lo;
    }
    return rep;
}

}  // namespace hyperlab
