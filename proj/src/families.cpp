#include "hyperlab/families.hpp"

#include "hyperlab/weights.hpp"

#include <cmath>
#include <stdexcept>

namespace hyperlab::families {

namespace mp = boost::multiprecision;

// ---------------------------------------------------------------- family A

BigInt family_a_m(int k) {
    if (k < 0) throw std::invalid_argument("family_a_m: negative level");
    return BigInt(1) << (3 * k * k);
}

IntervalSystemA interval_system_a(int k) {
    if (k < 1) throw std::invalid_argument("interval_system_a: level must be >= 1");
    IntervalSystemA s;
    s.k = k;
    s.m = family_a_m(k);
    s.minus_lo = s.m / 8 * 7;
    s.minus_hi = s.m - 1;
    s.plus_lo = s.m + 1;
    s.plus_hi = s.m / 8 * 9;
    return s;
}

std::optional<int> family_a_level(const BigInt& n) {
    if (n <= 0) return std::nullopt;
    for (int k = 1;; ++k) {
        const BigInt m = family_a_m(k);
        if (n * 8 < m * 7) return std::nullopt;
        if (n * 8 <= m * 9) return k;
    }
}

Exact2Exp family_a_beta(const BigInt& n) {
    if (n < 0) throw std::invalid_argument("family_a_beta: n must be >= 0");
    const auto k = family_a_level(n);
    if (!k) return Exact2Exp::one();
    const BigInt m = family_a_m(*k);
    if (n < m) return Exact2Exp::pow2(8 * n - 7 * m + 8);
    return Exact2Exp::pow2(9 * m - 8 * n);
}

Exact2Exp family_a_weight(const BigInt& n) {
    const BigInt a = n < 0 ? BigInt(-n) : n;
    const auto k = family_a_level(a);
    if (!k) return Exact2Exp::one();
    const BigInt m = family_a_m(*k);
    if (a == m) return Exact2Exp::one();
    const int sign = (a < m) == (n > 0) ? 1 : -1;
    return Exact2Exp::pow2(8 * sign);
}

Exact2Exp family_a_product(const BigInt& j, const BigInt& n) {
    if (j > n) throw std::invalid_argument("weight product requires a <= b");
    if (j >= 1) return family_a_beta(n) / family_a_beta(j - 1);
    if (n <= -1) return family_a_beta(-1 - n) / family_a_beta(-j);
    return family_a_beta(n) / family_a_beta(-j);
}

FamilyAValue family_a_eval(const BigInt& n) {
    FamilyAValue v{family_a_weight(n), std::nullopt};
    if (n >= 0) v.beta = family_a_beta(n);
    return v;
}

GapReport family_a_gap_checks(int k_max) {
    if (k_max < 1) throw std::invalid_argument("family_a_gap_checks: k_max must be >= 1");
    GapReport report;
    report.ok = true;
    for (int k = 1; k <= k_max; ++k) {
        const IntervalSystemA s = interval_system_a(k);
        GapLevel g;
        g.k = k;
        g.m = s.m;
        g.divisible = (s.m % 8) == 0;
        g.max_gap = s.plus_hi - s.minus_lo;
        g.gap_bound = s.m / 4;
        g.min_interval = s.minus_lo;
        const BigInt prev_m = family_a_m(k - 1);
        g.prev_max = k == 1 ? BigInt(0) : interval_system_a(k - 1).plus_hi;
        g.prev_bound = 2 * prev_m;
        g.density = BigRational(4 * prev_m, s.m);
        g.density_bound = BigRational(BigInt(1), BigInt(1) << k);
        g.ok = g.divisible && g.max_gap <= g.gap_bound && g.gap_bound < g.min_interval &&
               g.prev_max < g.prev_bound && g.prev_max < g.min_interval && g.density <= g.density_bound &&
               8 * s.minus_size() == s.m && 8 * s.plus_size() == s.m;
        report.ok = report.ok && g.ok;
        report.levels.push_back(std::move(g));
    }
    return report;
}

// ---------------------------------------------------------------- family B

namespace {

// Largest 5^k (k >= 1) with 5^k < n; requires n > 5.
std::int64_t five_block(std::int64_t n) {
    std::int64_t p = 5;
    while (p * 5 < n) p *= 5;
    return p;
}

std::int64_t pow5(int k) {
    std::int64_t p = 1;
    for (int i = 0; i < k; ++i) p *= 5;
    return p;
}

}  // namespace

Exact2Exp family_b_a(std::int64_t n) { return Exact2Exp::pow2(detail::family_b_a_exponent(n)); }

Exact2Exp family_b_gamma_plus(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("gamma_+ requires n >= 0");
    if (n <= 5) return Exact2Exp::one();
    const std::int64_t p = five_block(n);
    if (n <= 2 * p) return Exact2Exp::pow2(2 * (p - n));
    if (n <= 4 * p) return Exact2Exp::pow2(-n);
    return Exact2Exp::pow2(4 * (n - 5 * p));
}

Exact2Exp family_b_gamma_minus(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("gamma_- requires n >= 0");
    if (n <= 5) return Exact2Exp::one();
    const std::int64_t p = five_block(n);
    if (n <= 2 * p || n > 4 * p) return Exact2Exp::one();
    if (n <= 3 * p) return Exact2Exp::pow2(3 * (2 * p - n));
    return Exact2Exp::pow2(3 * (n - 4 * p));
}

Exact2Exp family_b_beta_plus(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("beta_+ requires n >= 0");
    if (n == 0) return Exact2Exp::one();
    return Exact2Exp::from_integer(n) * family_b_gamma_plus(n);
}

Exact2Exp family_b_beta_minus(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("beta_- requires n >= 0");
    if (n == 0) return Exact2Exp::one();
    return family_b_gamma_minus(n) / Exact2Exp::from_integer(n);
}

Exact2Exp family_b_product(std::int64_t j, std::int64_t n) {
    if (j > n) throw std::invalid_argument("weight product requires a <= b");
    if (j >= 1) return family_b_beta_plus(n) / family_b_beta_plus(j - 1);
    if (n <= -1) return family_b_beta_minus(-j) / family_b_beta_minus(-n - 1);
    return family_b_beta_plus(n) * family_b_beta_minus(-j);
}

FamilyBValue family_b_eval(std::int64_t n) {
    FamilyBValue v{family_b_a(n), detail::family_b_weight(n), std::nullopt, std::nullopt};
    if (n >= 0) {
        v.gamma_plus = family_b_gamma_plus(n);
        v.gamma_minus = family_b_gamma_minus(n);
    }
    return v;
}

LambdaPair lambda_pm(double b) {
    if (!(b >= 1.0 && b <= 5.0)) throw std::out_of_range("lambda_pm: b must lie in [1, 5]");
    LambdaPair l;
    if (b < 2.0)
        l.plus = std::exp2(2.0 * (1.0 - b) / b);
    else if (b <= 4.0)
        l.plus = 0.5;
    else
        l.plus = std::exp2(4.0 * (b - 5.0) / b);

    if (b <= 2.0 || b >= 4.0)
        l.minus = 1.0;
    else if (b <= 3.0)
        l.minus = std::exp2(3.0 * (2.0 - b) / b);
    else
        l.minus = std::exp2(3.0 * (b - 4.0) / b);
    return l;
}

LambdaPair gamma_root(double b, int j) {
    const auto n = static_cast<std::int64_t>(std::floor(b * static_cast<double>(pow5(j))));
    LambdaPair l;
    l.plus = std::exp2(static_cast<double>(family_b_gamma_plus(n).log2()) / static_cast<double>(n));
    l.minus = std::exp2(static_cast<double>(family_b_gamma_minus(n).log2()) / static_cast<double>(n));
    return l;
}

std::vector<double> lambda_b_grid(int resolution) {
    if (resolution < 5 || (resolution - 1) % 4 != 0)
        throw std::invalid_argument("b-grid resolution must be 4q + 1 with q >= 1");
    std::vector<double> grid(static_cast<std::size_t>(resolution));
    const double steps = resolution - 1;
    for (int i = 0; i < resolution; ++i) grid[static_cast<std::size_t>(i)] = 1.0 + 4.0 * i / steps;
    return grid;
}

AdmissibleReport admissible_c_set(const std::vector<double>& c_grid, int b_resolution, double slack) {
    if (c_grid.empty()) throw std::invalid_argument("admissible_c_set: empty c grid");
    if (slack < 0.0) throw std::invalid_argument("admissible_c_set: slack must be >= 0");
    AdmissibleReport report;
    report.slack = slack;
    report.b_grid = lambda_b_grid(b_resolution);
    std::vector<LambdaPair> lambdas;
    lambdas.reserve(report.b_grid.size());
    for (double b : report.b_grid) lambdas.push_back(lambda_pm(b));

    for (double c : c_grid) {
        if (!(c > 0.0)) throw std::invalid_argument("admissible_c_set: c must be positive");
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            const bool upper = c * lambdas[i].minus <= 1.0 + slack;
            const bool lower = 1.0 <= (1.0 + slack) * c * lambdas[i].plus;
            if (upper && lower) {
                report.admissible.push_back({c, report.b_grid[i]});
                break;
            }
        }
    }
    return report;
}

MsReport reproduce_ms_identities(int k_max) {
    if (k_max < 1) throw std::invalid_argument("reproduce_ms_identities: k_max must be >= 1");
    MsReport report;
    report.ok = true;
    for (int k = 1; k <= k_max; ++k) {
        MsIdentity id;
        id.k = k;
        id.n = pow5(k);
        const std::int64_t n3 = 3 * id.n;
        const Exact2Exp shift = Exact2Exp::pow2(3 * id.n);

        id.beta_plus_inv = family_b_beta_plus(id.n).inverse();
        id.beta_minus = family_b_beta_minus(id.n);
        id.target = Exact2Exp::from_rational(1, id.n);
        id.scaled_minus = shift * family_b_beta_minus(n3);
        id.scaled_plus_inv = (shift * family_b_beta_plus(n3)).inverse();
        id.target3 = Exact2Exp::from_rational(1, n3);

        // Direct products from the weight definition.
        Exact2Exp plus = Exact2Exp::one();
        Exact2Exp minus = Exact2Exp::one();
        bool agree = true;
        for (std::int64_t i = 1; i <= n3; ++i) {
            plus *= detail::family_b_weight(i);
            minus *= detail::family_b_weight(-i);
            if (i == id.n || i == n3)
                agree = agree && plus == family_b_beta_plus(i) && minus == family_b_beta_minus(i);
        }
        id.direct_agrees = agree;
        id.ok = agree && id.beta_plus_inv == id.target && id.beta_minus == id.target &&
                id.scaled_minus == id.target3 && id.scaled_plus_inv == id.target3;
        report.ok = report.ok && id.ok;
        report.levels.push_back(std::move(id));
    }
    return report;
}

// ------------------------------------------------------- closed-form checks

ClosedFormCheck family_a_closed_form_check(std::int64_t limit) {
    ClosedFormCheck c;
    c.limit = limit;
    auto cmp = [&](const Exact2Exp& a, const Exact2Exp& b, std::int64_t n) {
        ++c.compared;
        if (a != b && c.mismatches++ == 0) c.first_mismatch = n;
    };
    Exact2Exp up, down;  // prod_{j=0}^n w_j and prod_{j=-n}^0 w_j
    for (std::int64_t n = 0; n <= limit; ++n) {
        up *= Exact2Exp::pow2(detail::family_a_weight_exponent(n));
        if (n == 0)
            down = up;
        else
            down *= Exact2Exp::pow2(detail::family_a_weight_exponent(-n));
        cmp(family_a_beta(n), up, n);
        cmp(family_a_product(0, n), up, n);
        cmp(family_a_product(-n, 0), down, -n);
    }
    return c;
}

ClosedFormCheck family_b_closed_form_check(std::int64_t limit) {
    ClosedFormCheck c;
    c.limit = limit;
    auto cmp = [&](const Exact2Exp& a, const Exact2Exp& b, std::int64_t n) {
        ++c.compared;
        if (a != b && c.mismatches++ == 0) c.first_mismatch = n;
    };
    Exact2Exp ga_up = Exact2Exp::pow2(detail::family_b_a_exponent(0)), ga_down = ga_up;
    Exact2Exp w_up = detail::family_b_weight(0), w_down = w_up;
    for (std::int64_t n = 1; n <= limit; ++n) {
        ga_up *= Exact2Exp::pow2(detail::family_b_a_exponent(n));
        ga_down *= Exact2Exp::pow2(detail::family_b_a_exponent(-n));
        w_up *= detail::family_b_weight(n);
        w_down *= detail::family_b_weight(-n);
        cmp(family_b_gamma_plus(n), ga_up, n);
        cmp(family_b_gamma_minus(n), ga_down, -n);
        cmp(family_b_beta_plus(n), w_up, n);
        cmp(family_b_beta_minus(n), w_down, -n);
        cmp(family_b_product(0, n), w_up, n);
        cmp(family_b_product(-n, 0), w_down, -n);
    }
    return c;
}

}  // namespace hyperlab::families
