#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "casdev/conjugate.hpp"
#include "casdev/errors.hpp"
#include "casdev/rng.hpp"
#include "casdev/weight_model.hpp"

using casdev::conjugate_point;
using casdev::cramer_transform;
using casdev::h_cost;
using casdev::WeightModel;

namespace {

// Brute-force conjugate: dense maximization of t x - cgf(t).  Kept
// independent of the production root-finding path.
double brute_cramer(const WeightModel& m, double x, double t_lo, double t_hi,
                    long steps = 200000) {
    double best = -std::numeric_limits<double>::infinity();
    for (long i = 0; i <= steps; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / static_cast<double>(steps);
        const double f = t * x - m.cgf(t);
        if (std::isfinite(f)) best = std::max(best, f);
    }
    return best;
}

// Brute-force inner supremum of the h cost: sup_{1<=s<=a} [c s / z - cramer(s)].
double brute_h(const WeightModel& m, double a, double z, long steps = 20000) {
    const double c = m.tail_rate();
    double sup = -std::numeric_limits<double>::infinity();
    for (long i = 0; i <= steps; ++i) {
        const double s = 1.0 + (a - 1.0) * i / static_cast<double>(steps);
        sup = std::max(sup, c * s / z - cramer_transform(m, s).value);
    }
    return c * a / z - sup;
}

} // namespace

TEST_CASE("cramer transform: exponential closed form x - 1 - log x") {
    const auto m = WeightModel::exponential();
    CHECK(cramer_transform(m, 1.0).value == 0.0);
    CHECK(cramer_transform(m, 2.0).value ==
          doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-10));
    CHECK(cramer_transform(m, 0.5).value ==
          doctest::Approx(0.5 - 1.0 - std::log(0.5)).epsilon(1e-10));
    for (double x : {0.05, 0.3, 0.9, 1.1, 3.0, 10.0, 50.0})
        CHECK(cramer_transform(m, x).value ==
              doctest::Approx(x - 1.0 - std::log(x)).epsilon(1e-10));
    // maximizer is t = 1 - 1/x
    CHECK(cramer_transform(m, 2.0).argmax_t == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("cramer transform: gamma closed form k (x - 1 - log x)") {
    const auto m = WeightModel::gamma(2.0);
    for (double x : {0.2, 0.8, 1.5, 4.0})
        CHECK(cramer_transform(m, x).value ==
              doctest::Approx(2.0 * (x - 1.0 - std::log(x))).epsilon(1e-9));
}

TEST_CASE("cramer transform: two-point boundary and atom") {
    const auto m = WeightModel::two_point(0.5);
    // x = v: supremum reached only as t -> inf, value -log(1-p)
    CHECK(cramer_transform(m, 2.0).value ==
          doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(std::isinf(cramer_transform(m, 2.0).argmax_t));
    // x = 0: -log p
    CHECK(cramer_transform(m, 0.0).value ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    // beyond the essential sup
    CHECK(std::isinf(cramer_transform(m, 2.5).value));
    // interior values against dense maximization
    for (double x : {0.3, 0.9, 1.4, 1.9})
        CHECK(cramer_transform(m, x).value ==
              doctest::Approx(brute_cramer(m, x, -40.0, 40.0)).epsilon(1e-6));
}

TEST_CASE("cramer transform: degenerate and negative arguments") {
    const auto d = WeightModel::degenerate();
    CHECK(cramer_transform(d, 1.0).value == 0.0);
    CHECK(std::isinf(cramer_transform(d, 1.5).value));
    CHECK(std::isinf(cramer_transform(d, 0.5).value));
    const auto e = WeightModel::exponential();
    CHECK(std::isinf(cramer_transform(e, -1.0).value));
    CHECK(std::isinf(cramer_transform(e, 0.0).value)); // p_zero = 0
}

TEST_CASE("cramer transform invariants on a grid") {
    for (const auto& m : {WeightModel::exponential(), WeightModel::gamma(2.0),
                          WeightModel::two_point(0.5)}) {
        std::vector<double> xs, vals;
        for (int i = 0; i <= 200; ++i) xs.push_back(0.02 + i * 0.02);
        for (double x : xs) {
            const double v = cramer_transform(m, x).value;
            CHECK(v >= 0.0);
            if (x != 1.0 && std::isfinite(v)) CHECK(v > 0.0);
            vals.push_back(v);
        }
        // nonincreasing left of 1, nondecreasing right of 1
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            if (xs[i + 1] <= 1.0) CHECK(vals[i + 1] <= vals[i] + 1e-12);
            if (xs[i] >= 1.0) CHECK(vals[i + 1] + 1e-12 >= vals[i]);
        }
    }
}

TEST_CASE("cramer growth: value/w approaches the tail rate") {
    const auto m = WeightModel::exponential();
    for (double w : {1.0e2, 1.0e4, 1.0e6}) {
        const double ratio = cramer_transform(m, w).value / w;
        CHECK(std::fabs(ratio - 1.0) <= (1.0 + std::log(w)) / w);
    }
}

TEST_CASE("conjugate point") {
    const auto m = WeightModel::exponential();
    CHECK(conjugate_point(m, 1.0) == 0.0);
    CHECK(conjugate_point(m, 2.0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(conjugate_point(m, 4.0) == doctest::Approx(0.75).epsilon(1e-10));
    CHECK_THROWS_AS((void)conjugate_point(m, 0.5), casdev::DomainError);
    // bounded law: derivative never reaches a >= v
    const auto tp = WeightModel::two_point(0.5);
    CHECK(std::isinf(conjugate_point(tp, 2.0)));
    CHECK(conjugate_point(tp, 1.5) > 0.0);
    CHECK(std::isinf(conjugate_point(WeightModel::degenerate(), 1.5)));
}

TEST_CASE("a_W threshold") {
    // exponential: a a* = a - 1, so a_W = 2
    CHECK(casdev::a_w(WeightModel::exponential()) ==
          doctest::Approx(2.0).epsilon(1e-9));
    CHECK(std::isinf(casdev::a_w(WeightModel::two_point(0.5))));
}

TEST_CASE("h cost: exponential spec points") {
    const auto m = WeightModel::exponential();
    // a = 2: a* = 1/2, branch point c/a* = 2
    CHECK(h_cost(m, 2.0, 1.5) ==
          doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-9));
    // both branches agree at z = c/a*
    CHECK(h_cost(m, 2.0, 2.0) ==
          doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-9));
    // a = 4, z = 4: second branch a/z - cgf(1/z)
    CHECK(h_cost(m, 4.0, 4.0) ==
          doctest::Approx(1.0 + std::log(0.75)).epsilon(1e-9));
    CHECK_THROWS_AS((void)h_cost(m, 2.0, 0.5), casdev::DomainError);
    CHECK_THROWS_AS((void)h_cost(m, 2.0, 3.0), casdev::DomainError);
}

TEST_CASE("h cost: c = inf collapses to the first branch") {
    const auto m = WeightModel::two_point(0.5);
    const double expect = cramer_transform(m, 1.5).value;
    for (double z : {1.0, 1.2, 1.5})
        CHECK(h_cost(m, 1.5, z) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("h cost: continuity across the branch point") {
    const auto m = WeightModel::exponential();
    casdev::RngStream rng(7777, 0);
    for (int k = 0; k < 20; ++k) {
        const double a = 1.2 + 8.8 * rng.next_double();
        const double zb = m.tail_rate() / conjugate_point(m, a);
        if (zb <= 1.0 || zb >= a) continue;
        const double left = h_cost(m, a, zb * (1.0 - 1e-9));
        const double right = h_cost(m, a, zb * (1.0 + 1e-9));
        CHECK(std::fabs(left - right) < 1e-8);
    }
}

TEST_CASE("h cost: dominated by c a / z and bounded below past a_W") {
    const auto m = WeightModel::exponential();
    const double c = m.tail_rate();
    const double aw = casdev::a_w(m);
    const double rho = cramer_transform(m, aw).value;
    for (double a : {1.5, 2.0, 3.0, 5.0, 10.0}) {
        for (int i = 0; i <= 50; ++i) {
            const double z = 1.0 + (a - 1.0) * i / 50.0;
            CHECK(h_cost(m, a, z) <= c * a / z + 1e-10);
        }
        if (a >= aw) {
            const double haa = c - m.cgf(c / a);
            CHECK(h_cost(m, a, a) == doctest::Approx(haa).epsilon(1e-9));
            CHECK(haa >= rho - 1e-9);
        }
    }
}

TEST_CASE("h cost equals the brute-force inner supremum") {
    const auto m = WeightModel::exponential();
    for (double a : {1.5, 2.0, 4.0, 7.0}) {
        for (double frac : {0.0, 0.3, 0.7, 1.0}) {
            const double z = 1.0 + (a - 1.0) * frac;
            CHECK(h_cost(m, a, z) ==
                  doctest::Approx(brute_h(m, a, z)).epsilon(1e-5));
        }
    }
}
