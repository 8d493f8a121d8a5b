#pragma once

#include "hyperlab/weights.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hyperlab::criteria {

/// Finite-horizon outcome. Never a statement about the full liminf.
enum class Verdict { hypercyclic, not_hypercyclic, inconclusive };

std::string to_string(Verdict v);

struct Witness {
    std::int64_t n = 0;
    double score = 0.0;
    double log_score = 0.0;
};

/// Running minimum of the weight-product score for one k (or one analytic
/// subsequence). `new_minima` lists every n at which the minimum dropped.
struct KTrace {
    std::int64_t k = 0;
    std::vector<Witness> new_minima;
    double min_score = 0.0;
    double log_min_score = 0.0;
    /// The later half of the horizon did not improve on the earlier half.
    bool stalled = false;
};

struct CriterionReport {
    std::string rule_id;
    std::string path;  // "direct" or "analytic"
    bool invertible_mode = false;
    std::int64_t horizon = 0;
    double tolerance = 1e-6;
    std::vector<KTrace> traces;
    Verdict verdict = Verdict::inconclusive;
};

/// log of w(k-n+1, k) + w(k+1, k+n)^{-1}.
double log_salas_score(const WeightRule& w, std::int64_t k, std::int64_t n);
/// log of w(-n, 0) + w(0, n)^{-1}.
double log_salas_score_invertible(const WeightRule& w, std::int64_t n);

/// Scores for n = 1..N at fixed k (k ignored in invertible mode).
std::vector<double> salas_scores(const WeightRule& w, std::int64_t k, std::int64_t N, bool invertible_mode);

/// General mode scans k = 0..K; invertible mode uses the k-free form.
CriterionReport salas_verdict(const WeightRule& w, int K, std::int64_t N, double tau, bool invertible_mode);

/// Scores of a*T_w along the analytically known minimising subsequence:
/// n = m_k (k = 1..k_max) for family A, n in {5^k, 3*5^k} for family B.
/// Returns nullopt for rules without closed-form products.
std::optional<CriterionReport> analytic_multiple_report(const WeightRule& w, double a, int k_max, double tau);

struct ScanEntry {
    double a = 1.0;
    CriterionReport direct;
    std::optional<CriterionReport> analytic;
    Verdict verdict = Verdict::inconclusive;
};

std::vector<ScanEntry> multiples_scan(const WeightRule& w, const std::vector<double>& a_grid, std::int64_t N,
                                      double tau, int analytic_k_max = 6);

struct CoverInterval {
    std::int64_t n = 0;
    double alpha = 0.0;
    double beta = 0.0;
};

struct CoverReport {
    std::vector<CoverInterval> intervals;
    double total_length = 0.0;
    std::vector<std::pair<double, double>> hausdorff_sums;  // (s, sum n^{-s})
};

/// Intervals (-ln p_n / n, (1 - ln p_n) / n) for n in Q and the sums
/// sum_{n in Q} n^{-s}, accumulated in ascending n.
CoverReport cover_and_sums(const std::vector<std::int64_t>& Q, const std::map<std::int64_t, double>& p_values,
                           const std::vector<double>& s_list);

}  // namespace hyperlab::criteria
