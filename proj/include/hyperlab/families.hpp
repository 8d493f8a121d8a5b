#pragma once

// Closed forms for the two counterexample weight families, the dyadic
// interval system of family A, the limit functions lambda_+/- of family B and
// the reconstruction of the scalar-multiple sets {c : cT hypercyclic}.

#include "hyperlab/exact.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hyperlab::families {

// ---------------------------------------------------------------- family A

/// m_k = 2^{3k^2}; m_0 = 1.
BigInt family_a_m(int k);

/// Interval level k of family A with integer bounds (all inclusive).
/// I_k^- = [7m_k/8, m_k - 1], I_k^+ = [m_k + 1, 9m_k/8].
struct IntervalSystemA {
    int k = 0;
    BigInt m;
    BigInt minus_lo, minus_hi;
    BigInt plus_lo, plus_hi;

    BigInt minus_size() const { return minus_hi - minus_lo + 1; }
    BigInt plus_size() const { return plus_hi - plus_lo + 1; }
};

IntervalSystemA interval_system_a(int k);

/// The level k >= 1 with 7m_k/8 <= n <= 9m_k/8, if any.
std::optional<int> family_a_level(const BigInt& n);

/// beta(n) = prod_{j=0}^n w_j for n >= 0, from the closed form. The I_k^+
/// branch is extended to n = m_k, where it equals the direct product 2^{m_k}.
Exact2Exp family_a_beta(const BigInt& n);

/// Weight w_n from the closed-form level structure (valid for big n).
Exact2Exp family_a_weight(const BigInt& n);

/// w(j, n) = prod_{i=j}^n w_i via the beta identities; requires j <= n.
Exact2Exp family_a_product(const BigInt& j, const BigInt& n);

struct FamilyAValue {
    Exact2Exp weight;
    std::optional<Exact2Exp> beta;  // n >= 0 only
};

FamilyAValue family_a_eval(const BigInt& n);

struct GapLevel {
    int k = 0;
    BigInt m;
    BigInt max_gap;          // max |m - n| over m, n in I_k
    BigInt gap_bound;        // m_k / 4
    BigInt min_interval;     // 7 m_k / 8
    BigInt prev_max;         // max of I_{k-1} (0 for k = 1)
    BigInt prev_bound;       // 2 m_{k-1}
    BigRational density;     // 4 m_{k-1} / m_k
    BigRational density_bound;  // 2^{-k}
    bool divisible = false;  // 8 | m_k
    bool ok = false;
};

struct GapReport {
    std::vector<GapLevel> levels;
    bool ok = false;
};

/// Exact integer verification of the gap/cardinality argument for k <= k_max.
GapReport family_a_gap_checks(int k_max);

// ---------------------------------------------------------------- family B

/// a_n as an exact power of two (direct from the definition).
Exact2Exp family_b_a(std::int64_t n);

/// gamma_+(n) = prod_{j=0}^n a_j and gamma_-(n) = prod_{j=-n}^0 a_j, closed form, n >= 0.
Exact2Exp family_b_gamma_plus(std::int64_t n);
Exact2Exp family_b_gamma_minus(std::int64_t n);

/// beta_+(n) = w(0, n) = n gamma_+(n), beta_-(n) = w(-n, 0) = gamma_-(n) / n, n >= 1.
Exact2Exp family_b_beta_plus(std::int64_t n);
Exact2Exp family_b_beta_minus(std::int64_t n);

/// w(j, n) for family B from the beta closed forms; requires j <= n.
Exact2Exp family_b_product(std::int64_t j, std::int64_t n);

struct FamilyBValue {
    Exact2Exp a;
    Exact2Exp weight;
    std::optional<Exact2Exp> gamma_plus;   // n >= 0
    std::optional<Exact2Exp> gamma_minus;  // n >= 0
};

FamilyBValue family_b_eval(std::int64_t n);

struct LambdaPair {
    double plus = 1.0;
    double minus = 1.0;
};

/// Piecewise limit functions on [1, 5]. Exponents are formed as integer
/// multiples of rationals in b so that integer b gives exact powers of two.
LambdaPair lambda_pm(double b);

/// Empirical gamma_+/-(n)^{1/n} at n = floor(b * 5^j).
LambdaPair gamma_root(double b, int j);

struct AdmissibleC {
    double c = 0.0;
    double witness_b = 0.0;
};

struct AdmissibleReport {
    std::vector<AdmissibleC> admissible;
    std::vector<double> b_grid;
    double slack = 0.0;
};

/// b-grid on [1, 5] with `resolution` points; resolution - 1 must be a
/// multiple of 4 so that the breakpoints 1, 2, 3, 4, 5 are grid points.
std::vector<double> lambda_b_grid(int resolution);

/// {c : exists b with lambda_-(b) <= (1+slack)/c and 1/c <= (1+slack) lambda_+(b)}.
AdmissibleReport admissible_c_set(const std::vector<double>& c_grid, int b_resolution, double slack);

struct MsIdentity {
    int k = 0;
    std::int64_t n = 0;  // 5^k
    Exact2Exp beta_plus_inv;       // beta_+(5^k)^{-1}
    Exact2Exp beta_minus;          // beta_-(5^k)
    Exact2Exp target;              // 5^{-k}
    Exact2Exp scaled_minus;        // 2^{3*5^k} beta_-(3*5^k)
    Exact2Exp scaled_plus_inv;     // (2^{3*5^k} beta_+(3*5^k))^{-1}
    Exact2Exp target3;             // 3^{-1} 5^{-k}
    bool direct_agrees = false;    // closed forms match direct products
    bool ok = false;
};

struct MsReport {
    std::vector<MsIdentity> levels;
    bool ok = false;
};

MsReport reproduce_ms_identities(int k_max);

// ------------------------------------------------------- closed-form checks

struct ClosedFormCheck {
    std::int64_t limit = 0;
    std::int64_t compared = 0;    // number of exact comparisons made
    std::int64_t mismatches = 0;
    std::int64_t first_mismatch = 0;
    bool ok() const { return mismatches == 0; }
};

/// Closed forms against running products of the defining weights for
/// 0 <= n <= limit: beta(n), w(0, n) and w(-n, 0).
ClosedFormCheck family_a_closed_form_check(std::int64_t limit);
/// gamma_+/-(n), beta_+/-(n), w(0, n) and w(-n, 0) for 1 <= n <= limit.
ClosedFormCheck family_b_closed_form_check(std::int64_t limit);

}  // namespace hyperlab::families
