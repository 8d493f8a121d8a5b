#include "hyperlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hyperlab {

std::string to_string(RuleKind kind) {
    switch (kind) {
        case RuleKind::constant: return "constant";
        case RuleKind::family_a: return "family_a";
        case RuleKind::family_b: return "family_b";
        case RuleKind::custom_table: return "custom_table";
    }
    return "unknown";
}

namespace detail {

int family_a_weight_exponent(std::int64_t n) {
    if (n == 0) return 0;
    const std::int64_t m = n > 0 ? n : -n;
    // m_k = 2^{3k^2}; k = 4 is the last level reachable with 64-bit indices.
    for (int k = 1; k <= 4; ++k) {
        const std::int64_t mk = std::int64_t{1} << (3 * k * k);
        const std::int64_t lo = mk / 8 * 7;
        const std::int64_t hi = mk / 8 * 9;
        if (m < lo) break;
        if (m < mk) return n > 0 ? 8 : -8;  // I_k^-  (or -I_k^- for n < 0)
        if (m > mk && m <= hi) return n > 0 ? -8 : 8;
    }
    return 0;
}

int family_b_a_exponent(std::int64_t n) {
    if (n >= -5 && n <= 5) return 0;
    const std::int64_t m = n > 0 ? n : -n;
    std::int64_t p = 5;  // 5^k with 5^k < m <= 5^{k+1}
    while (p * 5 < m) p *= 5;
    if (n > 0) {
        if (m <= 2 * p) return -2;
        if (m <= 4 * p) return -1;
        return 4;
    }
    if (m <= 2 * p) return 0;
    if (m <= 3 * p) return -3;
    if (m <= 4 * p) return 3;
    return 0;
}

Exact2Exp family_b_weight(std::int64_t n) {
    const Exact2Exp a = Exact2Exp::pow2(family_b_a_exponent(n));
    if (n >= -1 && n <= 1) return Exact2Exp::one();
    if (n >= 2) return a * Exact2Exp::from_rational(n, n - 1);
    return a * Exact2Exp::from_rational(-(n + 1), -n);
}

}  // namespace detail

WeightRule WeightRule::constant(double value) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw std::invalid_argument("constant weight must be finite and positive");
    WeightRule r;
    r.kind_ = RuleKind::constant;
    r.constant_ = value;
    r.inf_ = r.sup_ = value;
    return r;
}

WeightRule WeightRule::family_a() {
    WeightRule r;
    r.kind_ = RuleKind::family_a;
    r.inf_ = std::ldexp(1.0, -8);
    r.sup_ = std::ldexp(1.0, 8);
    return r;
}

WeightRule WeightRule::family_b() {
    WeightRule r;
    r.kind_ = RuleKind::family_b;
    // Extremes are attained near the first dyadic blocks; the tails approach
    // 1/8 and 16 monotonically.
    double lo = 1.0;
    double hi = 1.0;
    for (std::int64_t n = -2000; n <= 2000; ++n) {
        const double w = detail::family_b_weight(n).to_double();
        lo = std::min(lo, w);
        hi = std::max(hi, w);
    }
    r.inf_ = lo;
    r.sup_ = hi;
    return r;
}

WeightRule WeightRule::custom_table(std::int64_t first_index, std::vector<double> values, TableTail below,
                                    TableTail above) {
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("table weights must be finite and positive");
    for (const TableTail& t : {below, above}) {
        if (!(t.value > 0.0) || !std::isfinite(t.value))
            throw std::invalid_argument("tail value must be finite and positive");
        if (!(t.ratio > 0.0) || t.ratio > 1.0) throw std::invalid_argument("tail ratio must lie in (0, 1]");
    }
    WeightRule r;
    r.kind_ = RuleKind::custom_table;
    r.first_ = first_index;
    r.table_ = std::move(values);
    r.below_ = below;
    r.above_ = above;
    double lo = std::min(below.ratio < 1.0 ? 0.0 : below.value, above.ratio < 1.0 ? 0.0 : above.value);
    double hi = std::max(below.value, above.value);
    for (double v : r.table_) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    r.inf_ = lo;
    r.sup_ = hi;
    return r;
}

WeightRule WeightRule::scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor)) throw std::invalid_argument("scale factor must be positive");
    WeightRule r = *this;
    r.scale_ *= factor;
    return r;
}

double WeightRule::base_weight(std::int64_t n) const {
    switch (kind_) {
        case RuleKind::constant: return constant_;
        case RuleKind::family_a: return std::ldexp(1.0, detail::family_a_weight_exponent(n));
        case RuleKind::family_b: return detail::family_b_weight(n).to_double();
        case RuleKind::custom_table: {
            const auto size = static_cast<std::int64_t>(table_.size());
            if (n < first_) return below_.value * std::pow(below_.ratio, static_cast<double>(first_ - 1 - n));
            if (n >= first_ + size)
                return above_.value * std::pow(above_.ratio, static_cast<double>(n - first_ - size));
            return table_[static_cast<std::size_t>(n - first_)];
        }
    }
    return 1.0;
}

double WeightRule::weight(std::int64_t n) const { return base_weight(n) * scale_; }

double WeightRule::log_weight(std::int64_t n) const {
    if (kind_ == RuleKind::family_a)
        return detail::family_a_weight_exponent(n) * std::log(2.0) + std::log(scale_);
    return std::log(base_weight(n)) + std::log(scale_);
}

std::optional<Exact2Exp> WeightRule::weight_exact(std::int64_t n) const {
    if (!has_exact_weights()) return std::nullopt;
    switch (kind_) {
        case RuleKind::constant: return Exact2Exp::from_double(constant_);
        case RuleKind::family_a: return Exact2Exp::pow2(detail::family_a_weight_exponent(n));
        case RuleKind::family_b: return detail::family_b_weight(n);
        case RuleKind::custom_table: break;
    }
    return std::nullopt;
}

std::string WeightRule::id() const {
    std::ostringstream os;
    os << to_string(kind_);
    if (kind_ == RuleKind::constant) os << '(' << constant_ << ')';
    if (scale_ != 1.0) os << "*" << scale_;
    return os.str();
}

}  // namespace hyperlab
