#include "hyperlab/criteria.hpp"

#include "hyperlab/errors.hpp"
#include "hyperlab/families.hpp"
#include "hyperlab/shift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

namespace hyperlab::criteria {

namespace {

double log_add_exp(double x, double y) {
    if (x < y) std::swap(x, y);
    if (std::isinf(x)) return x;
    return x + std::log1p(std::exp(y - x));
}

// Builds a trace from a sequence of (n, log score) pairs in horizon order.
KTrace make_trace(std::int64_t k, const std::vector<std::pair<std::int64_t, double>>& seq) {
    KTrace t;
    t.k = k;
    double best = std::numeric_limits<double>::infinity();
    const std::size_t half = seq.size() / 2;
    double first_half = std::numeric_limits<double>::infinity();
    double second_half = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto& [n, ls] = seq[i];
        if (ls < best) {
            best = ls;
            t.new_minima.push_back({n, std::exp(ls), ls});
        }
        if (i < half)
            first_half = std::min(first_half, ls);
        else
            second_half = std::min(second_half, ls);
    }
    t.log_min_score = best;
    t.min_score = std::exp(best);
    t.stalled = seq.size() < 2 || second_half >= first_half;
    return t;
}

Verdict decide(const std::vector<KTrace>& traces, double tau) {
    const double log_tau = std::log(tau);
    bool all_small = true;
    bool some_stalled_large = false;
    for (const auto& t : traces) {
        const bool small = t.log_min_score < log_tau;
        all_small = all_small && small;
        some_stalled_large = some_stalled_large || (!small && t.stalled);
    }
    if (all_small) return Verdict::hypercyclic;
    if (some_stalled_large) return Verdict::not_hypercyclic;
    return Verdict::inconclusive;
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::hypercyclic: return "numerically-hypercyclic";
        case Verdict::not_hypercyclic: return "numerically-not";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

double log_salas_score(const WeightRule& w, std::int64_t k, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("score requires n >= 1");
    const double left = weight_product(w, k - n + 1, k).log_value;
    const double right = weight_product(w, k + 1, k + n).log_value;
    return log_add_exp(left, -right);
}

double log_salas_score_invertible(const WeightRule& w, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("score requires n >= 1");
    const double left = weight_product(w, -n, 0).log_value;
    const double right = weight_product(w, 0, n).log_value;
    return log_add_exp(left, -right);
}

std::vector<double> salas_scores(const WeightRule& w, std::int64_t k, std::int64_t N, bool invertible_mode) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(N, 0)));
    for (std::int64_t n = 1; n <= N; ++n)
        out.push_back(std::exp(invertible_mode ? log_salas_score_invertible(w, n) : log_salas_score(w, k, n)));
    return out;
}

CriterionReport salas_verdict(const WeightRule& w, int K, std::int64_t N, double tau, bool invertible_mode) {
    if (N < 1) throw std::invalid_argument("salas_verdict: horizon N must be >= 1");
    if (K < 0) throw std::invalid_argument("salas_verdict: K must be >= 0");
    if (!(tau > 0.0)) throw std::invalid_argument("salas_verdict: tolerance must be positive");
    if (invertible_mode && !w.invertible())
        throw InvertibilityError("salas_verdict: invertible mode on a non-invertible rule");

    CriterionReport r;
    r.rule_id = w.id();
    r.path = "direct";
    r.invertible_mode = invertible_mode;
    r.horizon = N;
    r.tolerance = tau;
    const int k_last = invertible_mode ? 0 : K;
    for (int k = 0; k <= k_last; ++k) {
        std::vector<std::pair<std::int64_t, double>> seq;
        seq.reserve(static_cast<std::size_t>(N));
        for (std::int64_t n = 1; n <= N; ++n)
            seq.emplace_back(n, invertible_mode ? log_salas_score_invertible(w, n) : log_salas_score(w, k, n));
        r.traces.push_back(make_trace(k, seq));
    }
    r.verdict = decide(r.traces, tau);
    return r;
}

std::optional<CriterionReport> analytic_multiple_report(const WeightRule& w, double a, int k_max, double tau) {
    if (!(a > 0.0)) throw std::invalid_argument("multiplier must be positive");
    if (k_max < 1) throw std::invalid_argument("analytic subsequence needs k_max >= 1");
    if (w.scale() != 1.0) return std::nullopt;

    const double log_a = std::log(a);
    std::vector<std::pair<std::int64_t, double>> seq;
    if (w.kind() == RuleKind::family_a) {
        // Scaled rule a*w: w_a(-n,0) = a^{n+1}/beta(n), w_a(0,n) = a^{n+1} beta(n).
        for (int k = 1; k <= k_max; ++k) {
            // beta(m_k) = r 2^e with e close to m_k + 1; expanding (m_k + 1) ln a - ln beta
            // around e keeps the cancellation exact at n ~ 2^108.
            const BigInt m = families::family_a_m(k);
            const Exact2Exp beta = families::family_a_beta(m);
            const double e = beta.exp2().convert_to<double>();
            const double rest = BigInt(m + 1 - beta.exp2()).convert_to<double>();
            const double log_r = std::log(beta.mantissa().convert_to<double>());
            const double up = e * (log_a - std::numbers::ln2) + rest * log_a - log_r;
            const double down = e * (-log_a - std::numbers::ln2) - rest * log_a - log_r;
            const double ls = log_add_exp(up, down);
            // Witness index stores k; the subsequence value m_k may overflow int64.
            seq.emplace_back(k, ls);
        }
    } else if (w.kind() == RuleKind::family_b) {
        std::int64_t p = 5;
        for (int k = 1; k <= k_max; ++k, p *= 5) {
            for (std::int64_t n : {p, 3 * p}) {
                const double n1 = static_cast<double>(n + 1);
                const double lm = families::family_b_beta_minus(n).ln();
                const double lp = families::family_b_beta_plus(n).ln();
                seq.emplace_back(n, log_add_exp(n1 * log_a + lm, -n1 * log_a - lp));
            }
        }
        std::sort(seq.begin(), seq.end());
    } else {
        return std::nullopt;
    }

    CriterionReport r;
    r.rule_id = w.scaled(a).id();
    r.path = "analytic";
    r.invertible_mode = true;
    r.horizon = w.kind() == RuleKind::family_a ? k_max : seq.back().first;
    r.tolerance = tau;
    r.traces.push_back(make_trace(0, seq));
    r.verdict = decide(r.traces, tau);
    return r;
}

std::vector<ScanEntry> multiples_scan(const WeightRule& w, const std::vector<double>& a_grid, std::int64_t N,
                                      double tau, int analytic_k_max) {
    if (!w.invertible()) throw InvertibilityError("multiples_scan requires an invertible rule");
    std::vector<ScanEntry> out;
    out.reserve(a_grid.size());
    for (double a : a_grid) {
        if (!(a > 0.0)) throw std::invalid_argument("multiples_scan: grid values must be positive");
        ScanEntry e;
        e.a = a;
        e.direct = salas_verdict(w.scaled(a), 0, N, tau, true);
        e.analytic = analytic_multiple_report(w, a, analytic_k_max, tau);
        e.verdict = e.analytic ? e.analytic->verdict : e.direct.verdict;
        out.push_back(std::move(e));
    }
    return out;
}

CoverReport cover_and_sums(const std::vector<std::int64_t>& Q, const std::map<std::int64_t, double>& p_values,
                           const std::vector<double>& s_list) {
    const std::set<std::int64_t> q(Q.begin(), Q.end());
    for (double s : s_list)
        if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("cover_and_sums: s must lie in (0, 1]");
    CoverReport r;
    for (std::int64_t n : q) {
        if (n < 1) throw std::invalid_argument("cover_and_sums: indices must be positive");
        const auto it = p_values.find(n);
        if (it == p_values.end()) throw std::invalid_argument("cover_and_sums: missing p value");
        if (!(it->second > 0.0)) throw std::invalid_argument("cover_and_sums: p values must be positive");
        const double lp = std::log(it->second);
        const double nn = static_cast<double>(n);
        r.intervals.push_back({n, -lp / nn, (1.0 - lp) / nn});
        r.total_length += 1.0 / nn;
    }
    for (double s : s_list) {
        double sum = 0.0;
        for (std::int64_t n : q) sum += std::pow(static_cast<double>(n), -s);
        r.hausdorff_sums.emplace_back(s, sum);
    }
    return r;
}

}  // namespace hyperlab::criteria
