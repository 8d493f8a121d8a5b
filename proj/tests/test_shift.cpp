#include "doctest.h"

#include "hyperlab/errors.hpp"
#include "hyperlab/shift.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace hyperlab;

namespace {

// Direct product oracle over the per-index definition.
Exact2Exp direct_product(const WeightRule& w, std::int64_t a, std::int64_t b) {
    Exact2Exp p = Exact2Exp::one();
    for (std::int64_t j = a; j <= b; ++j) p *= *w.weight_exact(j);
    return p;
}

double brute_phase_distance(const Eigen::VectorXcd& v, const Eigen::VectorXcd& x, int phases) {
    double best = INFINITY;
    for (int i = 0; i < phases; ++i) {
        const Complex w = std::polar(1.0, 2.0 * std::numbers::pi * i / phases);
        best = std::min(best, (w * v - x).norm());
    }
    return best;
}

Eigen::VectorXcd random_vector(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> g;
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = Complex(g(rng), g(rng));
    return v;
}

}  // namespace

TEST_CASE("apply_power examples") {
    const auto one = WeightRule::constant(1.0);
    CHECK(apply_power(one, LatticeVector::basis(0), 3) == LatticeVector::basis(-3));

    const auto fa = WeightRule::family_a();
    CHECK(apply_power(fa, LatticeVector::basis(7), 1) == LatticeVector::basis(6, 256.0));
    CHECK(apply_power(fa, LatticeVector::basis(8), 1) == LatticeVector::basis(7, 1.0));
    CHECK(apply_power(fa, LatticeVector::basis(9), 1) == LatticeVector::basis(8, 1.0 / 256.0));
}

TEST_CASE("negative powers need an invertible rule") {
    const auto decaying = WeightRule::custom_table(0, {1.0, 1.0}, {1.0, 0.5}, {1.0, 1.0});
    CHECK_FALSE(decaying.invertible());
    CHECK_THROWS_AS(apply_power(decaying, LatticeVector::basis(0), -1), InvertibilityError);
    CHECK_NOTHROW(apply_power(decaying, LatticeVector::basis(0), 2));
    CHECK(WeightRule::family_a().invertible());
    CHECK(WeightRule::family_b().invertible());
    CHECK(WeightRule::family_b().inf_weight() > 0.11);
}

TEST_CASE("weight_product examples") {
    const auto fa = WeightRule::family_a();
    CHECK(*weight_product(fa, 0, 8).exact == Exact2Exp::pow2(8));
    CHECK(*weight_product(fa, 0, 8).exact == direct_product(fa, 0, 8));
    CHECK(*weight_product(WeightRule::constant(1.0), -40, 77).exact == Exact2Exp::one());

    // w_6 .. w_10 = (10/5) * (1/4)^5 = 2 * 2^-10
    const auto fb = WeightRule::family_b();
    const Exact2Exp p = *weight_product(fb, 6, 10).exact;
    CHECK(p == Exact2Exp::from_integer(2) * Exact2Exp::pow2(-10));
    CHECK(p == direct_product(fb, 6, 10));
    CHECK(weight_product(fb, 6, 10).value() == doctest::Approx(std::ldexp(1.0, -9)));

    CHECK_THROWS_AS(weight_product(fa, 3, 2), std::invalid_argument);
}

TEST_CASE("weight products are multiplicative and match direct products") {
    for (const auto& rule : {WeightRule::family_a(), WeightRule::family_b(), WeightRule::constant(0.75)}) {
        for (std::int64_t a = -30; a <= 30; a += 3)
            for (std::int64_t b = a; b <= 30; b += 2)
                for (std::int64_t c = b + 1; c <= 31; c += 5) {
                    const Exact2Exp whole = *weight_product(rule, a, c).exact;
                    CHECK(whole == *weight_product(rule, a, b).exact * *weight_product(rule, b + 1, c).exact);
                    CHECK(whole == direct_product(rule, a, c));
                }
    }
    // Around the second family A level.
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::int64_t> idx(-4700, 4700);
    const auto fa = WeightRule::family_a();
    for (int i = 0; i < 40; ++i) {
        std::int64_t a = idx(rng), c = idx(rng);
        if (a > c) std::swap(a, c);
        if (a == c) continue;
        const std::int64_t b = (a + c) / 2;
        CHECK(*weight_product(fa, a, c).exact == *weight_product(fa, a, b).exact * *weight_product(fa, b + 1, c).exact);
        CHECK(*weight_product(fa, a, c).exact == direct_product(fa, a, c));
    }
}

TEST_CASE("custom tables sum logs") {
    const auto t = WeightRule::custom_table(-2, {2.0, 3.0, 0.5}, {1.0, 1.0}, {4.0, 1.0});
    CHECK_FALSE(weight_product(t, -3, 2).exact.has_value());
    CHECK(weight_product(t, -3, 2).value() == doctest::Approx(1.0 * 2 * 3 * 0.5 * 4 * 4));
    CHECK(t.inf_weight() == 0.5);
    CHECK(t.sup_weight() == 4.0);
    const auto s = WeightRule::family_a().scaled(0.5);
    CHECK(weight_product(s, 0, 8).value() == doctest::Approx(std::ldexp(1.0, 8) * std::pow(0.5, 9)));
}

TEST_CASE("shift identity T^{-n} T^n x = x") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    LatticeVector x;
    for (std::int64_t i = -6; i <= 6; ++i) x.set(i, Complex(g(rng), g(rng)));

    for (const auto& rule : {WeightRule::family_a(), WeightRule::constant(2.0), WeightRule::constant(0.5)}) {
        for (std::int64_t n = -50; n <= 50; n += 7) CHECK(apply_power(rule, apply_power(rule, x, n), -n) == x);
    }
    // family B weights carry index ratios, so the round trip is exact up to rounding.
    const auto fb = WeightRule::family_b();
    for (std::int64_t n = -50; n <= 50; n += 7) {
        const LatticeVector back = apply_power(fb, apply_power(fb, x, n), -n);
        for (const auto& [i, v] : x.entries()) CHECK(std::abs(back[i] - v) <= 4e-16 * std::abs(v));
    }
}

TEST_CASE("min_phase_distance examples") {
    const LatticeVector x = LatticeVector::basis(3);
    CHECK(min_phase_distance(x, x) == 0.0);
    CHECK(min_phase_distance(Complex(0, 1) * x, x) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(min_phase_distance(LatticeVector::basis(4), x) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("min_phase_distance matches a brute-force phase search") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 100; ++i) {
        const Eigen::VectorXcd v = random_vector(rng, 6);
        const Eigen::VectorXcd x = random_vector(rng, 6);
        const double closed = min_phase_distance(v, x);
        const double expanded = std::sqrt(v.squaredNorm() + x.squaredNorm() - 2.0 * std::abs(v.dot(x)));
        CHECK(closed >= 0.0);
        CHECK(std::abs(closed - brute_phase_distance(v, x, 10000)) < 1e-6);
        CHECK(closed == doctest::Approx(expanded).epsilon(1e-10));
        CHECK(min_phase_distance(LatticeVector::from_dense(v, -3), LatticeVector::from_dense(x, -3)) ==
              doctest::Approx(closed).epsilon(1e-14));
    }
}

TEST_CASE("hit set of a scalar operator") {
    // T = [2], u = 1. The ball centred at (1+e)/2 with radius (e-1)/2 is, up to
    // phase, the annulus 1 < |v| < e, so t is hit iff t in (-ln 2, -ln 2 + 1/n).
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = 2.0;
    HitQuery q;
    q.op = MatrixOp(m);
    q.u = LatticeVector::basis(0);
    q.center = LatticeVector::basis(0, (1.0 + std::numbers::e) / 2.0);
    q.radius = (std::numbers::e - 1.0) / 2.0;
    q.exponents = {2, 3, 5};
    for (int i = 0; i < 150; ++i) q.t_grid.push_back(-1.0 + 0.0123 * i);

    const HitSet h = hit_set(q);
    std::vector<double> expected;
    for (double t : q.t_grid) {
        bool in = false;
        for (auto n : q.exponents) in = in || (t > -std::log(2.0) && t < -std::log(2.0) + 1.0 / n);
        if (in) expected.push_back(t);
    }
    CHECK(h.hits == expected);
    CHECK_FALSE(expected.empty());

    q.exponents.clear();
    CHECK(hit_set(q).hits.empty());
    q.radius = 0.0;
    CHECK_THROWS_AS(hit_set(q), std::invalid_argument);
}

TEST_CASE("hit sets are monotone in radius and exponent set") {
    const auto fa = WeightRule::family_a();
    HitQuery q;
    q.op = fa;
    q.u = LatticeVector::basis(9, 0.01);
    q.center = LatticeVector::basis(0);
    q.radius = 0.5;
    q.exponents = {3, 9};
    for (int i = 0; i < 200; ++i) q.t_grid.push_back(-1.0 + 0.01 * i);
    const auto base = hit_set(q).hits;

    HitQuery wider = q;
    wider.radius = 0.9;
    HitQuery more = q;
    more.exponents = {1, 3, 5, 9};
    for (const auto& bigger : {hit_set(wider).hits, hit_set(more).hits})
        for (double t : base) CHECK(std::find(bigger.begin(), bigger.end(), t) != bigger.end());
    CHECK_FALSE(base.empty());
}
