#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "casdev/errors.hpp"
#include "casdev/rng.hpp"
#include "casdev/weight_model.hpp"

using casdev::RngStream;
using casdev::WeightModel;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEulerGamma = 0.5772156649015329;

double sample_mean(const WeightModel& m, long n, std::uint64_t seed) {
    RngStream rng(seed, 0);
    double s = 0.0;
    for (long i = 0; i < n; ++i) s += m.sample(rng);
    return s / static_cast<double>(n);
}

// Kolmogorov-Smirnov statistic against the model's analytic cdf.
double ks_stat(const WeightModel& m, long n, std::uint64_t seed) {
    RngStream rng(seed, 0);
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (auto& x : xs) x = m.sample(rng);
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    for (long i = 0; i < n; ++i) {
        const double f = m.cdf(xs[static_cast<std::size_t>(i)]);
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

} // namespace

TEST_CASE("rng streams are reproducible and splittable") {
    RngStream a(42, 7), b(42, 7), c(42, 8);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
    }
    bool any_diff = false;
    RngStream a2(42, 7);
    for (int i = 0; i < 100; ++i) any_diff |= (a2.next_u64() != c.next_u64());
    CHECK(any_diff);
    RngStream u(1, 0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.next_double();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("degenerate weight") {
    const auto m = WeightModel::degenerate();
    RngStream rng(1, 2);
    for (int i = 0; i < 10; ++i) CHECK(m.sample(rng) == 1.0);
    CHECK(m.cgf(0.0) == 0.0);
    CHECK(m.cgf_derivative(7.0) == 1.0);
    CHECK(m.raw_moment(5.0) == 1.0);
    CHECK(m.w_log_w_mean() == 0.0);
    CHECK(std::isinf(m.tail_rate()));
}

TEST_CASE("exponential weight closed forms") {
    const auto m = WeightModel::exponential();
    CHECK(m.cgf(0.0) == 0.0);
    CHECK(m.cgf(0.5) == doctest::Approx(-std::log(0.5)).epsilon(1e-12));
    CHECK(std::isinf(m.cgf(1.0)));
    CHECK(std::isinf(m.cgf(2.0)));
    CHECK(m.cgf_derivative(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.cgf_derivative(0.5) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)m.cgf_derivative(1.0), casdev::DomainError);
    CHECK(m.raw_moment(2.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(m.raw_moment(0.0) == 1.0);
    CHECK(m.w_log_w_mean() ==
          doctest::Approx(1.0 - kEulerGamma).epsilon(1e-12));
    CHECK(m.tail_rate() == 1.0);
    CHECK(m.variance() == 1.0);
}

TEST_CASE("two-point weight closed forms") {
    const auto m = WeightModel::two_point(0.5);
    CHECK(m.atom_value() == 2.0);
    CHECK(m.cgf(1.0) ==
          doctest::Approx(std::log(0.5 * (1.0 + std::exp(2.0)))).epsilon(1e-12));
    CHECK(m.raw_moment(3.0) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(m.w_log_w_mean() == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(m.ess_sup() == 2.0);
    CHECK(std::isinf(m.tail_rate()));
    // mean is exactly 1: p*0 + (1-p)*v
    CHECK(0.5 * m.atom_value() == 1.0);
    CHECK(m.cgf_derivative(0.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gamma weight closed forms") {
    const auto m = WeightModel::gamma(2.0);
    CHECK(m.cgf(0.0) == 0.0);
    CHECK(m.cgf_derivative(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.tail_rate() == 2.0);
    CHECK(m.variance() == doctest::Approx(0.5));
    // E[W^h] = Gamma(k+h) / (Gamma(k) k^h): k=2, h=2 -> 6/4
    CHECK(m.raw_moment(2.0) == doctest::Approx(1.5).epsilon(1e-12));
    // k=1 must agree with the exponential
    const auto e = WeightModel::gamma(1.0);
    CHECK(e.w_log_w_mean() ==
          doctest::Approx(1.0 - kEulerGamma).epsilon(1e-10));
    CHECK(e.cgf(0.5) == doctest::Approx(-std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("sampling matches the laws") {
    SUBCASE("exponential mean, CLT band") {
        const auto m = WeightModel::exponential();
        const double mean = sample_mean(m, 1000000, 2024);
        CHECK(std::fabs(mean - 1.0) <= 3.0e-3); // 3 / sqrt(1e6), Var = 1
    }
    SUBCASE("two-point zero fraction, binomial band") {
        const auto m = WeightModel::two_point(0.5);
        RngStream rng(5150, 0);
        long zeros = 0;
        const long n = 1000000;
        for (long i = 0; i < n; ++i) zeros += (m.sample(rng) == 0.0);
        const double se = std::sqrt(0.25 / static_cast<double>(n));
        CHECK(std::fabs(static_cast<double>(zeros) / n - 0.5) <= 3.0 * se);
    }
    SUBCASE("gamma mean") {
        const auto m = WeightModel::gamma(2.0);
        const double mean = sample_mean(m, 400000, 99);
        CHECK(std::fabs(mean - 1.0) <= 3.0 * std::sqrt(0.5 / 400000.0));
    }
}

TEST_CASE("empirical cdf agrees with analytic cdf (KS, level 1e-3)") {
    // critical value sqrt(ln(2/alpha)/2) / sqrt(n) with alpha = 1e-3
    const long n = 100000;
    const double crit = std::sqrt(std::log(2000.0) / 2.0) / std::sqrt((double)n);
    CHECK(ks_stat(WeightModel::exponential(), n, 11) < crit);
    CHECK(ks_stat(WeightModel::gamma(2.0), n, 12) < crit);
    CHECK(ks_stat(WeightModel::gamma(0.7), n, 13) < crit);
}

TEST_CASE("cgf convexity and derivative monotonicity") {
    const std::vector<WeightModel> models = {
        WeightModel::exponential(), WeightModel::gamma(2.0),
        WeightModel::gamma(0.5), WeightModel::two_point(0.5)};
    for (const auto& m : models) {
        const double c = std::min(m.tail_rate(), 10.0);
        std::vector<double> ts;
        for (int i = 0; i < 100; ++i)
            ts.push_back(-10.0 + (c * 0.999 + 10.0) * i / 100.0);
        for (std::size_t i = 0; i + 1 < ts.size(); ++i)
            CHECK(m.cgf_derivative(ts[i]) < m.cgf_derivative(ts[i + 1]));
        for (std::size_t i = 0; i + 2 < ts.size(); ++i) {
            const double mid = 0.5 * (ts[i] + ts[i + 2]);
            CHECK(m.cgf(mid) <= 0.5 * m.cgf(ts[i]) + 0.5 * m.cgf(ts[i + 2]) + 1e-10);
        }
        CHECK(m.cgf(0.0) == 0.0);
    }
}

TEST_CASE("raw moments: log-convexity and factorial normalization") {
    const auto models = {WeightModel::exponential(), WeightModel::gamma(2.0),
                         WeightModel::two_point(0.5)};
    for (const auto& m : models) {
        for (int h = 0; h + 2 <= 30; ++h) {
            const double mid = m.log_raw_moment(h + 1.0);
            const double avg =
                0.5 * (m.log_raw_moment(h) + m.log_raw_moment(h + 2.0));
            CHECK(mid <= avg + 1e-9);
        }
    }
    // (1/h) log(E[W^h]/h!) -> -log c; for the exponential it is identically 0
    const auto e = WeightModel::exponential();
    for (int h = 1; h <= 30; ++h)
        CHECK(e.log_raw_moment(h) - std::lgamma(h + 1.0) == 0.0);
}

TEST_CASE("model ids round-trip") {
    for (const auto& m :
         {WeightModel::degenerate(), WeightModel::exponential(),
          WeightModel::gamma(2.5), WeightModel::two_point(0.25)}) {
        CHECK(WeightModel::from_id(m.id()) == m);
    }
    CHECK_THROWS_AS(WeightModel::from_id("lognormal"), casdev::ConfigError);
    CHECK_THROWS_AS(WeightModel::from_id("gamma"), casdev::ConfigError);
    CHECK_THROWS_AS(WeightModel::two_point(1.0), casdev::ConfigError);
    CHECK_THROWS_AS(WeightModel::gamma(-1.0), casdev::ConfigError);
}
