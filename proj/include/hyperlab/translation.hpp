#pragma once

// Translation operators on polynomials, disk seminorms, the circular lattice
// point sets and simultaneous polynomial approximation on disjoint disks.

#include "hyperlab/poly.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hyperlab {

struct DiskSpec {
    Complex center = 0.0;
    double radius = 1.0;
};

/// p(f) = radius * max_{|w| <= radius} |f(w)|, evaluated on `samples`
/// equispaced boundary points.
struct SeminormSpec {
    double radius = 1.0;
    int samples = 256;
};

/// Maximum of |f| over `samples` equispaced points of the boundary circle.
/// Requires samples >= 8 * max(degree, 1).
double disk_sup(const PolyC& f, const DiskSpec& d, int samples);

double seminorm(const PolyC& f, const SeminormSpec& p);

// ------------------------------------------------------------------ lattice

struct LatticePoint {
    int j = 0;
    std::int64_t l = 0;
    Complex z;
    std::int64_t modulus = 0;  // n_j
};

struct LatticeChecks {
    bool integer_moduli = false;
    bool modulus_window = false;
    bool separation = false;
    bool angular_density = false;
    double min_distance = 0.0;          // brute force over neighbouring cells
    double separation_lower_bound = 0.0;  // analytic: min(2m, chord lower bound)
    double max_angular_gap = 0.0;       // sup_w min_z |w - z/|z||
    double density_bound = 0.0;         // delta / min |z|
    bool ok() const { return integer_moduli && modulus_window && separation && angular_density; }
};

struct LatticePointSet {
    double delta = 0.0;
    double c = 0.0;
    std::int64_t n = 1;
    std::int64_t m = 0, h = 0, R = 0, k = 0;
    std::vector<std::int64_t> radii;  // n_1..n_k
    std::vector<LatticePoint> points;
    std::vector<std::string> warnings;
    LatticeChecks checks;

    std::int64_t expected_count() const { return k * 2 * n * h; }
};

/// Builds S for the given (delta, c, n) and verifies its four properties.
/// delta >= 1 is replaced by 0.99 with a warning.
LatticePointSet lattice_construct(double delta, double c, std::int64_t n);

/// CSV with header j,l,re,im,n_j.
void write_lattice_csv(const LatticePointSet& s, std::ostream& os);

// -------------------------------------------------------------------- Runge

struct RungeResult {
    PolyC f;
    std::vector<double> errors;  // sup_{|w| <= a} |f(w - z) - f_z(w)| per centre, certified
    int degree = 0;
    int fit_samples = 0;   // per disk
    int cert_samples = 0;  // per disk
    bool success = false;
    std::vector<int> degree_trace;
    std::vector<double> error_trace;  // worst certified error per tried degree
};

/// One polynomial f with T_z f close to f_z on |w| <= a for every centre z
/// (T_z f(w) = f(w - z)). Least squares on boundary samples with an
/// Arnoldi-orthonormalised basis, escalating the degree up to degree_cap.
/// Requires |z - z'| > 2a for distinct centres.
RungeResult runge_simultaneous(const std::vector<Complex>& centers, double a, const std::vector<PolyC>& targets,
                               double eps, int degree_cap, int degree_step = 4);

// ---------------------------------------------------------- common vector

struct ToyPoint {
    Complex z;
    double b = 0.0;
};

struct CommonVectorConfig {
    PolyC u;
    PolyC x;
    int phase_count = 8;
    double phase_offset = 0.0;  // grid phases exp(2 pi i (l + offset) / phase_count)
    std::vector<double> b_values;
    SeminormSpec p;
    double fit_radius = 1.0;  // radius of the stronger seminorm used for fitting
    std::vector<ToyPoint> points;
    int degree_cap = 120;
    int degree_step = 8;
};

struct CellHit {
    double phase = 0.0;  // argument of the grid phase
    double b = 0.0;
    std::size_t best_point = 0;
    double distance = 0.0;  // p(x - e^{b|z|} T_{a|z|} y)
    bool hit = false;
};

struct CommonVectorReport {
    RungeResult fit;
    double fit_eps = 0.0;
    double u_distance = 0.0;  // p(u - y)
    std::vector<CellHit> cells;
    bool all_hit = false;
    double stability_radius = 0.0;  // largest delta found with perturbations < delta/|z| still hitting
    bool ok() const { return fit.success && u_distance < 1.0 && all_hit; }
};

/// Toy run of the common hypercyclic vector stage: fit y with y ~ u near 0 and
/// T_z y ~ e^{-b(z)|z|} x near each z, then check every (phase, b) grid cell.
CommonVectorReport common_vector_stage(const CommonVectorConfig& cfg);

/// p(x - e^{b|h|} T_h y) with h = a|z| for unimodular a.
double hit_distance(const PolyC& y, const PolyC& x, Complex h, double b, const SeminormSpec& p);

}  // namespace hyperlab
