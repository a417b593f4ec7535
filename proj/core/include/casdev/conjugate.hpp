#ifndef CASDEV_CONJUGATE_HPP
#define CASDEV_CONJUGATE_HPP

#include "casdev/weight_model.hpp"

namespace casdev {

struct ConjugateResult {
    // sup_t [t x - cgf(t)], always >= 0, zero exactly at x = 1.
    double value;
    // Maximizing t; +inf when the supremum is only attained in the limit at
    // the domain boundary, -inf when it is approached as t -> -inf.
    double argmax_t;
};

// Cramer / Fenchel-Legendre transform of the weight cgf, computed by solving
// cgf'(t) = x with bracketed bisection and falling back to golden-section
// maximization when the stationary point sits past the domain boundary.
ConjugateResult cramer_transform(const WeightModel& m, double x);

// a* = inf{s >= 0 : cgf'(s) = a} for a >= 1; +inf when a exceeds the
// derivative's supremum over the cgf domain.
double conjugate_point(const WeightModel& m, double a);

// Cost of pushing mass a through one tree level while routing the excess
// over a single heavy edge whose subtree carries z:
//
//   h(a, z) = c a / z - sup_{1<=s<=a} [c s / z - cramer(s)]
//           = cramer(a)              if z <= c / a*
//           = c a / z - cgf(c / z)   if z >= c / a*
//
// For c = inf the first branch applies for every z.  Requires 1 <= z <= a.
double h_cost(const WeightModel& m, double a, double z);

// a_W = inf{a >= 1 : a * a_star(a) >= c}: below it h(a, .) is constant in z.
// +inf when c = inf.
double a_w(const WeightModel& m);

// Per-a cache of the pieces of h(a, .) for tight inner loops.
class HCost {
public:
    HCost(const WeightModel& m, double a);
    double operator()(double z) const;
    double z_break() const { return z_break_; }
    double rate_at_a() const { return rate_at_a_; }

private:
    const WeightModel* model_;
    double a_;
    double c_;
    double rate_at_a_;
    double z_break_;
};

} // namespace casdev

#endif
