#include "hyperlab/measure.hpp"

#include "hyperlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace hyperlab {

// ------------------------------------------------------------------ family

PnFamily pn_family(const MatrixOp& T, const Eigen::VectorXcd& x, const Eigen::RowVectorXcd& f, int N) {
    const int dim = T.dim();
    if (x.size() != dim || f.size() != dim) throw std::invalid_argument("pn_family: dimension mismatch");
    if (N < 0) throw std::invalid_argument("pn_family: N must be >= 0");
    PnFamily fam;
    fam.T = T;
    fam.x = x;
    fam.f = f;
    const Complex fx = (f * x)(0);
    if (fx == Complex(0.0)) throw DegenerateInputError("pn_family: f(x) = 0 cannot be normalised");
    if (fx != Complex(1.0)) {
        fam.f = f / fx;
        fam.normalized = true;
    }

    Eigen::MatrixXcd V = x;  // column j = coefficient of b^j in (T + bI)^n x
    fam.p.reserve(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) {
        if (n > 0) {
            Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(dim, n + 1);
            next.leftCols(n) = T.entries * V;
            next.rightCols(n) += V;
            V = std::move(next);
        }
        const Eigen::RowVectorXcd c = fam.f * V;
        fam.p.emplace_back(std::vector<Complex>(c.data(), c.data() + c.size()));
    }
    return fam;
}

PnIdentityReport pn_identity_checks(const PnFamily& fam, const std::vector<Complex>& b_samples) {
    const int N = fam.N();
    if (N < 2) throw std::invalid_argument("pn_identity_checks: requires N >= 2");
    constexpr double eps = std::numeric_limits<double>::epsilon();
    PnIdentityReport rep;

    rep.monic_ok = true;
    for (int n = 0; n <= N; ++n) {
        const auto& p = fam.p[static_cast<std::size_t>(n)];
        if (p.degree() != n || std::abs(p.leading() - Complex(1.0)) > 4 * eps) rep.monic_ok = false;
    }

    for (int n = 1; n <= N; ++n) {
        const PolyC d = fam.p[static_cast<std::size_t>(n)].derivative();
        const PolyC r = static_cast<double>(n) * fam.p[static_cast<std::size_t>(n) - 1];
        double scale = 0.0, err = 0.0;
        for (int j = 0; j <= std::max(d.degree(), r.degree()); ++j) {
            scale = std::max(scale, std::abs(r.coeff(j)));
            err = std::max(err, std::abs(d.coeff(j) - r.coeff(j)));
        }
        rep.derivative_rel_error = std::max(rep.derivative_rel_error, scale > 0 ? err / scale : err);
    }
    rep.derivative_ok = rep.derivative_rel_error <= 1e-12;

    for (int n = 2; n <= N; ++n) {
        const auto& pn = fam.p[static_cast<std::size_t>(n)];
        const PolyC d1 = pn.derivative();
        const PolyC d2 = d1.derivative();
        const auto& pm1 = fam.p[static_cast<std::size_t>(n) - 1];
        const auto& pm2 = fam.p[static_cast<std::size_t>(n) - 2];
        const double nn = static_cast<double>(n);
        for (Complex b : b_samples) {
            const Complex v = pn(b);
            if (std::abs(v) < 1e-300) {
                ++rep.skipped;
                rep.notes.push_back("n=" + std::to_string(n) + ": sample at a root of p_n skipped");
                continue;
            }
            const Complex v1 = d1(b), v2 = d2(b);
            const Complex lhs = (v2 * v - v1 * v1) / (v * v);
            const Complex r1 = pm1(b) / v, r2 = pm2(b) / v;
            const Complex rhs = nn * nn * ((1.0 - 1.0 / nn) * r2 - r1 * r1);
            const double scale = std::max((std::abs(v2) * std::abs(v) + std::norm(v1)) / std::norm(v),
                                          nn * nn * ((1.0 - 1.0 / nn) * std::abs(r2) + std::norm(r1)));
            rep.log_derivative_residual = std::max(rep.log_derivative_residual, std::abs(lhs - rhs) / scale);
            const double lower = nn * nn * ((1.0 - 1.0 / nn) * std::abs(r2) - std::norm(r1));
            if (std::abs(lhs) < lower - 1e-9 * scale) ++rep.lower_bound_violations;
            ++rep.evaluated;
        }
    }
    return rep;
}

// ------------------------------------------------------------------ boxes

bool Box::contains(Complex z, double margin) const {
    return z.real() - margin >= re_min && z.real() + margin <= re_max && z.imag() - margin >= im_min &&
           z.imag() + margin <= im_max;
}

Box Box::around(const std::vector<Complex>& pts, double margin) {
    if (pts.empty()) return {-margin, margin, -margin, margin};
    Box b{pts[0].real(), pts[0].real(), pts[0].imag(), pts[0].imag()};
    for (const auto& z : pts) {
        b.re_min = std::min(b.re_min, z.real());
        b.re_max = std::max(b.re_max, z.real());
        b.im_min = std::min(b.im_min, z.imag());
        b.im_max = std::max(b.im_max, z.imag());
    }
    b.re_min -= margin;
    b.re_max += margin;
    b.im_min -= margin;
    b.im_max += margin;
    return b;
}

// ------------------------------------------------------------- Monte Carlo

namespace {

double unit(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

// Partition i draws from mt19937_64 seeded with seed_seq{seed lo, seed hi, i}
// and handles samples [i S / P, (i + 1) S / P).
std::mt19937_64 partition_rng(std::uint64_t seed, int i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i)};
    return std::mt19937_64(seq);
}

struct PartitionResult {
    std::int64_t samples = 0, hits = 0, rejected = 0;
    std::vector<std::pair<Complex, bool>> trace;
};

// draw(rng, index) -> point; member(point) -> optional<bool>, nullopt resamples.
template <class Draw, class Member>
McEstimate run_mc(const McOptions& opt, const Box& box, Draw draw, Member member,
                  std::vector<std::pair<Complex, bool>>* trace) {
    if (opt.samples < 1) throw std::invalid_argument("Monte Carlo: samples must be >= 1");
    const int P = std::max(1, opt.partitions);
    std::vector<PartitionResult> parts(static_cast<std::size_t>(P));

    auto work = [&](int i) {
        auto& r = parts[static_cast<std::size_t>(i)];
        auto rng = partition_rng(opt.seed, i);
        const std::int64_t from = opt.samples * i / P, to = opt.samples * (i + 1) / P;
        for (std::int64_t s = from; s < to; ++s) {
            for (int attempt = 0;; ++attempt) {
                if (attempt > 1000) throw std::runtime_error("Monte Carlo: rejection sampling did not terminate");
                const Complex b = draw(rng, s);
                const std::optional<bool> m = member(b);
                if (!m) {
                    ++r.rejected;
                    continue;
                }
                ++r.samples;
                if (*m) ++r.hits;
                if (r.trace.size() < opt.trace_limit) r.trace.emplace_back(b, *m);
                break;
            }
        }
    };

    int threads = opt.threads > 0 ? opt.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, P);
    if (threads == 1) {
        for (int i = 0; i < P; ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                try {
                    for (int i = t; i < P; i += threads) work(i);
                } catch (...) {
                    errors[static_cast<std::size_t>(t)] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    McEstimate est;
    est.seed = opt.seed;
    est.partitions = P;
    est.box = box;
    for (const auto& r : parts) {
        est.samples += r.samples;
        est.hits += r.hits;
        est.rejected += r.rejected;
        if (trace)
            for (const auto& t : r.trace)
                if (trace->size() < opt.trace_limit) trace->push_back(t);
    }
    const double frac = static_cast<double>(est.hits) / static_cast<double>(est.samples);
    const double area = box.area();
    est.mean = area * frac;
    est.std_error = area * std::sqrt(frac * (1.0 - frac) / static_cast<double>(est.samples));
    est.half_width = 1.96 * est.std_error;
    return est;
}

auto uniform_in(const Box& box) {
    return [box](std::mt19937_64& g, std::int64_t) {
        const double re = box.re_min + (box.re_max - box.re_min) * unit(g);
        const double im = box.im_min + (box.im_max - box.im_min) * unit(g);
        return Complex(re, im);
    };
}

void require_index(const PnFamily& fam, int n) {
    if (n < 2 || n > fam.N()) throw std::invalid_argument("requires 2 <= n <= N");
}

}  // namespace

bool in_Bn(const PnFamily& fam, int n, Complex b) {
    const Complex v = fam.p[static_cast<std::size_t>(n)](b);
    return std::abs(fam.p[static_cast<std::size_t>(n) - 1](b)) < std::abs(v) &&
           std::abs(fam.p[static_cast<std::size_t>(n) - 2](b)) > 8.0 * std::abs(v);
}

SetVolumeReport cn_volume(const PnFamily& fam, int n, std::optional<Box> box, const McOptions& opt) {
    require_index(fam, n);
    const auto& pn = fam.p[static_cast<std::size_t>(n)];
    const std::vector<Complex> roots = pn.roots();
    // B_n lies within 1/sqrt(3n) of the roots of p_n.
    const double reach = 1.0 / std::sqrt(3.0 * n);
    if (box) {
        for (const auto& z : roots)
            if (!box->contains(z, reach))
                throw CoverageError("cn_volume: root (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) +
                                    ") of p_n not covered by the box");
    } else {
        box = Box::around(roots, 2.0);
    }

    SetVolumeReport rep;
    auto member = [&](Complex b) -> std::optional<bool> {
        if (std::abs(pn(b)) < 1e-300) return std::nullopt;
        return in_Bn(fam, n, b);
    };
    rep.estimate = run_mc(opt, *box, uniform_in(*box), member, &rep.trace);
    // The a-direction contributes exactly 1/n.
    const double inv_n = 1.0 / n;
    rep.estimate.mean *= inv_n;
    rep.estimate.std_error *= inv_n;
    rep.estimate.half_width *= inv_n;
    rep.bound = 4.0 * std::numbers::pi * std::pow(static_cast<double>(n), -5.0 / 3.0);
    rep.within_bound = rep.estimate.mean <= rep.bound + 3.0 * rep.estimate.std_error;
    return rep;
}

InclusionReport bn_inclusion_check(const PnFamily& fam, int n, const McOptions& opt) {
    require_index(fam, n);
    const auto& pn = fam.p[static_cast<std::size_t>(n)];
    const PolyC d1 = pn.derivative(), d2 = d1.derivative();
    const std::vector<Complex> roots = pn.roots();
    const Box box = Box::around(roots, 2.0);
    const double disk = 2.0 / std::sqrt(3.0 * n);
    const double target = 3.0 * n * static_cast<double>(n);

    auto draw = [&, uni = uniform_in(box)](std::mt19937_64& g, std::int64_t s) mutable {
        if (s % 2 == 0 || roots.empty()) return uni(g, s);
        const auto& z = roots[static_cast<std::size_t>(g() % roots.size())];
        return z + std::polar(disk * std::sqrt(unit(g)), 2.0 * std::numbers::pi * unit(g));
    };

    InclusionReport rep;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    std::vector<std::pair<Complex, bool>> members;
    McOptions o = opt;
    o.trace_limit = static_cast<std::size_t>(opt.samples);
    auto member = [&](Complex b) -> std::optional<bool> {
        if (std::abs(pn(b)) < 1e-300) return std::nullopt;
        return in_Bn(fam, n, b);
    };
    const McEstimate est = run_mc(o, box, draw, member, &members);
    rep.sampled = est.samples;
    for (const auto& [b, in] : members) {
        if (!in) continue;
        ++rep.in_set;
        const Complex v = pn(b), v1 = d1(b);
        const double lhs = std::abs((d2(b) * v - v1 * v1) / (v * v));
        rep.min_ratio = std::min(rep.min_ratio, lhs / target);
        if (lhs < target * (1.0 - 1e-6)) ++rep.violations;
    }
    if (rep.in_set == 0) rep.min_ratio = 0.0;
    return rep;
}

SetVolumeReport mf_badset_area(const std::vector<Complex>& roots, double d, const McOptions& opt) {
    if (roots.empty()) throw std::invalid_argument("mf_badset_area: needs at least one root");
    if (!(d > 0.0)) throw std::invalid_argument("mf_badset_area: d must be positive");
    const double n = static_cast<double>(roots.size());
    const double threshold = n * (1.0 + std::log(n)) / (d * d);
    const Box box = Box::around(roots, std::max(2.0, d));

    SetVolumeReport rep;
    auto member = [&](Complex b) -> std::optional<bool> {
        double s = 0.0;
        for (const auto& z : roots) {
            const double r2 = std::norm(b - z);
            if (r2 == 0.0) return std::nullopt;
            s += 1.0 / r2;
        }
        return s >= threshold;
    };
    rep.estimate = run_mc(opt, box, uniform_in(box), member, &rep.trace);
    rep.bound = 4.0 * std::numbers::pi * d * d;
    rep.within_bound = rep.estimate.mean <= rep.bound + 3.0 * rep.estimate.std_error;
    return rep;
}

ThresholdReport threshold_check(std::int64_t n_max) {
    if (n_max < 1) throw std::invalid_argument("threshold_check: n_max must be >= 1");
    ThresholdReport rep;
    rep.n_max = n_max;
    rep.all_ok = true;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        const double x = static_cast<double>(n);
        const double lhs = 1.0 + std::log(x), rhs = 3.0 * std::cbrt(x);
        if (!(lhs <= rhs)) rep.all_ok = false;
        const double r = lhs / std::cbrt(x);
        if (r > rep.max_ratio) {
            rep.max_ratio = r;
            rep.argmax = n;
        }
    }
    // (1 + ln t) / t^{1/3} peaks where 3 = 1 + ln t.
    const double e2 = std::exp(2.0);
    rep.analytic_max = (1.0 + std::log(e2)) / std::cbrt(e2);
    rep.analytic_ok = rep.analytic_max <= 3.0;
    return rep;
}

}  // namespace hyperlab
