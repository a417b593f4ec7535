#include "casdev/deviation_lab.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "casdev/conjugate.hpp"
#include "casdev/errors.hpp"
#include "casdev/rate_function.hpp"
#include "casdev/rng.hpp"

namespace casdev::devlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// two-sided normal quantile for the CI -> sigma conversion
double z_of(double confidence) {
    // only 0.95 is used in practice; solve otherwise
    if (confidence == 0.95) return 1.959963984540054;
    const boost::math::normal_distribution<> nd;
    return boost::math::quantile(nd, 0.5 * (1.0 + confidence));
}

double speed_of(Regime regime, TreeLevel level, int r, double alpha) {
    const double rd = static_cast<double>(r);
    switch (regime) {
        case Regime::left:
        case Regime::large_right:
            return rd;
        case Regime::moderate_left:
        case Regime::moderate_right:
            return std::pow(rd, 1.0 - 2.0 * alpha);
        case Regime::very_large_right:
            return level.is_infinite() ? rd * std::log(rd)
                                       : std::pow(rd, 1.0 + alpha / level.n());
    }
    return rd;
}

struct Event {
    double threshold;
    bool upper;
};

Event event_of(Regime regime, int r, double a, double alpha) {
    const double rd = static_cast<double>(r);
    switch (regime) {
        case Regime::left:
            return {a, false};
        case Regime::moderate_left:
            return {1.0 - a * std::pow(rd, -alpha), false};
        case Regime::moderate_right:
            return {1.0 + a * std::pow(rd, -alpha), true};
        case Regime::large_right:
            return {a, true};
        case Regime::very_large_right:
            return {std::pow(rd, alpha) * a, true};
    }
    return {a, true};
}

double theory_of(const WeightModel& m, Regime regime, TreeLevel level, double a,
                 double alpha, int r_max) {
    switch (regime) {
        case Regime::left:
            return rate::left_rate(m, a);
        case Regime::moderate_left:
        case Regime::moderate_right:
            return rate::moderate_rate(m, a);
        case Regime::large_right: {
            if (!level.is_infinite() && level.n() == 1)
                return cramer_transform(m, a).value;
            rate::GridParams params;
            params.a_max = std::max(50.0, 1.5 * a);
            if (level.is_infinite())
                return rate::rate_infinite(m, params).value_at(a);
            return rate::rate_finite(m, level.n(), params).value_at(a);
        }
        case Regime::very_large_right:
            (void)r_max;
            return level.is_infinite()
                       ? rate::very_large_rate_infinite(m, alpha, a)
                       : rate::very_large_rate_finite(m, level.n(), a);
    }
    return 0.0;
}

void validate_experiment(const WeightModel& m, Regime regime, double a,
                         double alpha, const std::vector<int>& r_list) {
    if (r_list.empty()) throw ConfigError("ldp_slope needs a nonempty r list");
    switch (regime) {
        case Regime::left:
            if (!(a >= 0.0 && a <= 1.0))
                throw DomainError("left regime needs a in [0, 1]");
            break;
        case Regime::moderate_left:
        case Regime::moderate_right:
            if (!(alpha > 0.0 && alpha < 0.5))
                throw ConfigError("moderate regimes need alpha in (0, 1/2)");
            if (!(m.variance() > 0.0))
                throw ConfigError("moderate regimes need Var(W) > 0");
            if (!(a > 0.0)) throw DomainError("moderate regimes need a > 0");
            break;
        case Regime::large_right:
            if (!(a > 1.0)) throw DomainError("large_right regime needs a > 1");
            break;
        case Regime::very_large_right:
            if (!(alpha > 0.0))
                throw ConfigError("very_large_right regime needs alpha > 0");
            if (std::isinf(m.tail_rate()))
                throw ConfigError(
                    "very_large_right is degenerate for bounded weights (c = inf)");
            if (!(a > 0.0)) throw DomainError("very_large_right needs a > 0");
            break;
    }
}

} // namespace

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::left: return "left";
        case Regime::moderate_left: return "moderate-left";
        case Regime::moderate_right: return "moderate-right";
        case Regime::large_right: return "large-right";
        case Regime::very_large_right: return "very-large-right";
    }
    return "left";
}

Regime regime_from_name(const std::string& name) {
    if (name == "left") return Regime::left;
    if (name == "moderate-left") return Regime::moderate_left;
    if (name == "moderate-right") return Regime::moderate_right;
    if (name == "large-right") return Regime::large_right;
    if (name == "very-large-right") return Regime::very_large_right;
    throw ConfigError("unknown deviation regime '" + name + "'");
}

TailEstimate tail_estimate(std::span<const double> samples, double a,
                           bool upper_tail, double confidence) {
    if (samples.empty()) throw DomainError("tail_estimate needs a nonempty batch");
    TailEstimate est;
    est.n = static_cast<long>(samples.size());
    for (double x : samples)
        est.hits += (upper_tail ? x >= a : x <= a) ? 1 : 0;

    using boost::math::binomial_distribution;
    const double n = static_cast<double>(est.n);
    const double k = static_cast<double>(est.hits);
    const double risk = 1.0 - confidence;
    if (est.hits == 0) {
        est.log_prob = -kInf;
        est.ci_log_lo = -kInf;
        est.ci_log_hi = std::log(
            binomial_distribution<>::find_upper_bound_on_p(n, 0.0, risk));
        return est;
    }
    est.log_prob = std::log(k / n);
    est.ci_log_lo =
        (est.hits == est.n)
            ? std::log(binomial_distribution<>::find_lower_bound_on_p(n, k, risk))
            : std::log(binomial_distribution<>::find_lower_bound_on_p(n, k, 0.5 * risk));
    est.ci_log_hi =
        (est.hits == est.n)
            ? 0.0
            : std::log(binomial_distribution<>::find_upper_bound_on_p(n, k, 0.5 * risk));
    return est;
}

SlopeFit fit_slope(const std::vector<ReportRow>& rows) {
    SlopeFit fit;
    double sw = 0.0, swv = 0.0, swy = 0.0, swvv = 0.0, swvy = 0.0;
    const double z = z_of(0.95);
    for (const auto& row : rows) {
        if (row.est.hits == 0 || !std::isfinite(row.est.log_prob)) continue;
        double hw = 0.5 * (row.est.ci_log_hi - row.est.ci_log_lo);
        if (!(hw > 0.0) || !std::isfinite(hw)) hw = 1.0;
        const double sigma = hw / z;
        const double w = 1.0 / (sigma * sigma);
        ++fit.points_used;
        sw += w;
        swv += w * row.speed;
        swy += w * row.est.log_prob;
        swvv += w * row.speed * row.speed;
        swvy += w * row.speed * row.est.log_prob;
    }
    if (fit.points_used >= 1 && swvv > 0.0)
        fit.slope_origin = -swvy / swvv;
    if (fit.points_used < 2) {
        fit.slope = std::numeric_limits<double>::quiet_NaN();
        fit.slope_se = kInf;
        return fit;
    }
    const double vbar = swv / sw;
    const double ybar = swy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& row : rows) {
        if (row.est.hits == 0 || !std::isfinite(row.est.log_prob)) continue;
        double hw = 0.5 * (row.est.ci_log_hi - row.est.ci_log_lo);
        if (!(hw > 0.0) || !std::isfinite(hw)) hw = 1.0;
        const double sigma = hw / z;
        const double w = 1.0 / (sigma * sigma);
        sxx += w * (row.speed - vbar) * (row.speed - vbar);
        sxy += w * (row.speed - vbar) * (row.est.log_prob - ybar);
    }
    fit.slope = -sxy / sxx;
    fit.intercept = ybar + fit.slope * vbar;
    fit.slope_se = std::sqrt(1.0 / sxx);
    return fit;
}

DeviationReport ldp_slope(const WeightModel& m, Regime regime, TreeLevel level,
                          double a, double alpha,
                          const std::vector<int>& r_list, long samples_per_r,
                          std::uint64_t seed, int threads) {
    validate_experiment(m, regime, a, alpha, r_list);
    if (samples_per_r < 10) throw ConfigError("ldp_slope needs samples_per_r >= 10");

    DeviationReport rep;
    rep.regime = regime;
    rep.level = level;
    rep.a = a;
    rep.alpha = alpha;
    rep.model_id = m.id();
    rep.seed = seed;
    rep.samples_per_r = samples_per_r;

    const int r_max = *std::max_element(r_list.begin(), r_list.end());
    rep.theory_value = theory_of(m, regime, level, a, alpha, r_max);

    // feasibility: the rarest event should produce >= ~10 hits
    const double rarest_log_p =
        -rep.theory_value * speed_of(regime, level, r_max, alpha);
    if (std::isfinite(rep.theory_value) &&
        rarest_log_p < std::log(10.0 / static_cast<double>(samples_per_r))) {
        std::ostringstream os;
        os << "feasibility: predicted P at r=" << r_max << " is exp("
           << rarest_log_p << "), below 10/samples; ";
        rep.notes += os.str();
    }

    int idx = 0;
    for (int r : r_list) {
        const std::uint64_t batch_seed =
            derive_seed(seed, static_cast<std::uint64_t>(idx++));
        cascade::SampleBatch batch =
            level.is_infinite()
                ? cascade::sample_infinite(m, r, samples_per_r, 30, batch_seed,
                                           threads)
                : cascade::sample_finite(m, r, level.n(), samples_per_r,
                                         batch_seed, threads);
        const Event ev = event_of(regime, r, a, alpha);
        ReportRow row;
        row.r = r;
        row.speed = speed_of(regime, level, r, alpha);
        row.threshold = ev.threshold;
        row.est = tail_estimate(batch.samples, ev.threshold, ev.upper);
        rep.rows.push_back(row);
    }

    rep.fit = fit_slope(rep.rows);
    const double theory = rep.theory_value;
    if (rep.fit.points_used < 2 || !std::isfinite(theory)) {
        rep.verdict = "inconclusive";
    } else {
        const double err = std::fabs(rep.fit.slope - theory);
        const double tol = std::max(0.25 * theory, 2.0 * rep.fit.slope_se);
        if (err <= tol)
            rep.verdict = "pass";
        else if (rep.fit.slope_se > 0.5 * theory)
            rep.verdict = "inconclusive";
        else
            rep.verdict = "fail";
    }
    return rep;
}

} // namespace casdev::devlab
