#ifndef CASDEV_WEIGHT_MODEL_HPP
#define CASDEV_WEIGHT_MODEL_HPP

#include <string>

#include "casdev/rng.hpp"

namespace casdev {

enum class WeightKind { degenerate, exponential, gamma, two_point };

// Law of the cascade weight W: nonnegative with E[W] = 1.  Four closed-form
// families are supported:
//
//   degenerate        W == 1
//   exponential       density e^{-w}, tail rate c = 1
//   gamma(k)          shape k, scale 1/k, tail rate c = k
//   two_point(p)      P(W=0) = p, P(W=v) = 1-p with v = 1/(1-p), bounded
//
// These cover bounded weights (c = inf) and exponential-tailed unbounded
// weights (c finite); heavier-than-exponential tails (c = 0) are out of
// scope by assumption.  Every quantity below has a closed form, so the model
// doubles as an exact oracle for the numerical layers built on top of it.
class WeightModel {
public:
    static WeightModel degenerate();
    static WeightModel exponential();
    static WeightModel gamma(double shape);
    static WeightModel two_point(double p_zero);

    WeightKind kind() const { return kind_; }
    double shape() const { return shape_; }
    double p_zero() const { return p_zero_; }
    double ess_sup() const { return ess_sup_; }
    double atom_value() const { return atom_; }

    // c = sup(dom cgf): decay rate of log P(W >= w); +inf for bounded kinds.
    double tail_rate() const { return tail_rate_; }

    double variance() const;

    // log E[e^{tW}]; +inf at and past tail_rate() when the boundary diverges.
    double cgf(double t) const;

    // d/dt log E[e^{tW}], strictly increasing; requires t < tail_rate().
    double cgf_derivative(double t) const;

    // E[W^h] for real h >= 0 (log version stays finite for large h).
    double raw_moment(double h) const;
    double log_raw_moment(double h) const;

    // E[W log W]; threshold quantity for the nondegeneracy condition
    // r > exp(E[W log W]).
    double w_log_w_mean() const;

    double cdf(double w) const;

    double sample(RngStream& rng) const;

    // Canonical id, e.g. "exp", "gamma:2", "twopoint:0.5".
    std::string id() const;

    // Parses the id syntax above (also accepts "exponential", "gamma:k",
    // "twopoint:p").
    static WeightModel from_id(const std::string& id);

    // Builds from config keys w.kind / w.shape / w.p_zero.
    static WeightModel from_config(const std::string& kind,
                                   double shape, double p_zero);

    friend bool operator==(const WeightModel&, const WeightModel&) = default;

private:
    WeightModel() = default;

    WeightKind kind_ = WeightKind::degenerate;
    double shape_ = 0.0;      // gamma only
    double p_zero_ = 0.0;     // P(W = 0)
    double atom_ = 1.0;       // two-point value v
    double ess_sup_ = 1.0;
    double tail_rate_ = 0.0;
};

} // namespace casdev

#endif
