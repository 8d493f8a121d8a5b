#pragma once

// The polynomials p_n(b) = f((T + bI)^n x), their derivative identities, and
// Monte-Carlo area/volume bounds for the parameter sets built from them.

#include "hyperlab/poly.hpp"
#include "hyperlab/shift.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hyperlab {

struct PnFamily {
    MatrixOp T;
    Eigen::VectorXcd x;
    Eigen::RowVectorXcd f;  // f(v) = f * v, no conjugation
    std::vector<PolyC> p;   // p_0 .. p_N
    bool normalized = false;  // f was divided by f(x)

    int N() const { return static_cast<int>(p.size()) - 1; }
};

/// Tracks (T + bI)^n x as a dim x (n + 1) coefficient array in b. If f(x) != 1
/// f is rescaled; f(x) = 0 throws DegenerateInputError.
PnFamily pn_family(const MatrixOp& T, const Eigen::VectorXcd& x, const Eigen::RowVectorXcd& f, int N);

struct PnIdentityReport {
    double derivative_rel_error = 0.0;  // max over n, coefficients of |p_n' - n p_{n-1}| / scale
    bool derivative_ok = false;         // <= 1e-12
    bool monic_ok = false;              // leading coefficient 1, degree n
    double log_derivative_residual = 0.0;  // max relative residual of the second log-derivative identity
    int evaluated = 0;
    int skipped = 0;
    int lower_bound_violations = 0;  // reported, not asserted
    std::vector<std::string> notes;
};

/// Checks p_n' = n p_{n-1} on coefficients, and at each sample b and each
/// 2 <= n <= N:
///   (p_n'/p_n)' = n^2 ((1 - 1/n) p_{n-2}/p_n - (p_{n-1}/p_n)^2)
/// against the direct form (p_n'' p_n - p_n'^2) / p_n^2, plus the reverse
/// triangle lower bound on its modulus.
PnIdentityReport pn_identity_checks(const PnFamily& fam, const std::vector<Complex>& b_samples);

struct Box {
    double re_min = -1, re_max = 1, im_min = -1, im_max = 1;

    double area() const { return (re_max - re_min) * (im_max - im_min); }
    bool contains(Complex z, double margin = 0.0) const;
    /// Bounding box of the points enlarged by margin on every side.
    static Box around(const std::vector<Complex>& pts, double margin);
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    double half_width = 0.0;  // 1.96 * std_error
    std::int64_t samples = 0;
    std::int64_t hits = 0;
    std::int64_t rejected = 0;  // resampled draws
    std::uint64_t seed = 0;
    int partitions = 0;
    Box box;
};

struct McOptions {
    std::int64_t samples = 100000;
    std::uint64_t seed = 0;
    int partitions = 8;  // fixed split; the estimate does not depend on thread count
    int threads = 0;     // 0 = hardware concurrency
    std::size_t trace_limit = 0;  // keep this many (b, member) pairs for CSV output
};

struct SetVolumeReport {
    McEstimate estimate;
    double bound = 0.0;
    bool within_bound = false;  // estimate <= bound + 3 std_error
    std::vector<std::pair<Complex, bool>> trace;
};

/// Volume of C_n = {(a, b) : 1 < |e^{an} p_n(b)| < e, b in B_n} with
/// B_n = {|p_{n-1}/p_n| < 1, |p_{n-2}/p_n| > 8}, as (area of B_n) / n.
/// Without a box one is built around the roots of p_n with margin 2; a given
/// box must contain every root with margin 1/sqrt(3n) (CoverageError).
/// Bound 4 pi n^{-5/3}. Requires 2 <= n <= N.
SetVolumeReport cn_volume(const PnFamily& fam, int n, std::optional<Box> box, const McOptions& opt);

bool in_Bn(const PnFamily& fam, int n, Complex b);

struct InclusionReport {
    std::int64_t sampled = 0;
    std::int64_t in_set = 0;
    std::int64_t violations = 0;
    double min_ratio = 0.0;  // min over B_n samples of |(p_n'/p_n)'| / (3 n^2); 0 if none
    bool ok() const { return violations == 0; }
};

/// Samples b (half uniformly in the root box, half in disks around the roots)
/// and checks |(p_n'/p_n)'(b)| >= 3 n^2 (1 - 1e-6) wherever b lies in B_n.
InclusionReport bn_inclusion_check(const PnFamily& fam, int n, const McOptions& opt);

/// Area of {b : sum |b - z_j|^{-2} >= n (1 + ln n) / d^2} over the root box with
/// margin max(2, d). Bound 4 pi d^2.
SetVolumeReport mf_badset_area(const std::vector<Complex>& roots, double d, const McOptions& opt);

struct ThresholdReport {
    std::int64_t n_max = 0;
    bool all_ok = false;
    double max_ratio = 0.0;  // max (1 + ln n) / n^{1/3} over 1..n_max
    std::int64_t argmax = 0;
    double analytic_max = 0.0;  // value at n = e^2, i.e. 3 / e^{2/3}
    bool analytic_ok = false;
};

/// Checks 1 + ln n <= 3 n^{1/3} for 1 <= n <= n_max and at n = e^2.
ThresholdReport threshold_check(std::int64_t n_max);

}  // namespace hyperlab
