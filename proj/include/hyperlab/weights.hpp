#pragma once

#include "hyperlab/exact.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hyperlab {

enum class RuleKind { constant, family_a, family_b, custom_table };

std::string to_string(RuleKind kind);

/// Tail of a custom table: w = value * ratio^d where d counts steps away
/// from the table edge. ratio < 1 makes the weights decay to zero.
struct TableTail {
    double value = 1.0;
    double ratio = 1.0;
};

/// Positive weight sequence {w_n}, n in Z, of a bilateral weighted shift
/// T e_n = w_n e_{n-1}.
///
/// family_a and family_b are the two counterexample families; their weights
/// are powers of two times index ratios and are available exactly. Custom
/// tables and scaled rules only offer double precision.
class WeightRule {
public:
    static WeightRule constant(double value);
    static WeightRule family_a();
    static WeightRule family_b();
    static WeightRule custom_table(std::int64_t first_index, std::vector<double> values,
                                   TableTail below = {}, TableTail above = {});

    /// The rule a*w (so that a*T_w = T_{a w}).
    WeightRule scaled(double factor) const;

    RuleKind kind() const { return kind_; }
    double scale() const { return scale_; }
    bool has_exact_weights() const { return kind_ != RuleKind::custom_table && scale_ == 1.0; }

    double weight(std::int64_t n) const;
    double log_weight(std::int64_t n) const;
    /// Exact weight, or nullopt for custom tables and scaled rules.
    std::optional<Exact2Exp> weight_exact(std::int64_t n) const;

    double inf_weight() const { return inf_ * scale_; }
    double sup_weight() const { return sup_ * scale_; }
    bool invertible() const { return inf_ > 0.0; }

    std::string id() const;

    // Rule parameters, exposed for reports.
    double constant_value() const { return constant_; }
    std::int64_t table_first_index() const { return first_; }
    const std::vector<double>& table_values() const { return table_; }
    const TableTail& tail_below() const { return below_; }
    const TableTail& tail_above() const { return above_; }

private:
    WeightRule() = default;
    double base_weight(std::int64_t n) const;

    RuleKind kind_ = RuleKind::constant;
    double constant_ = 1.0;
    std::int64_t first_ = 0;
    std::vector<double> table_;
    TableTail below_;
    TableTail above_;
    double scale_ = 1.0;
    double inf_ = 1.0;
    double sup_ = 1.0;
};

namespace detail {

/// Exponent e with w_n = 2^e for family A: +8, -8 or 0.
int family_a_weight_exponent(std::int64_t n);

/// Exponent e with a_n = 2^e for family B: one of 0, -3, 3, -1, -2, 4.
int family_b_a_exponent(std::int64_t n);

/// Family B weight w_n = a_n * (index ratio) straight from the definition.
Exact2Exp family_b_weight(std::int64_t n);

}  // namespace detail

}  // namespace hyperlab
