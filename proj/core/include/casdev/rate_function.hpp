#ifndef CASDEV_RATE_FUNCTION_HPP
#define CASDEV_RATE_FUNCTION_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "casdev/tree_level.hpp"
#include "casdev/weight_model.hpp"

namespace casdev::rate {

// Discretization of the threshold axis: linear on [0, 1], geometric on
// [1, a_max].  Geometric spacing tracks the a^{1/n} growth of the deep-tree
// rate functions.
struct GridParams {
    double linear_step = 0.01;
    double geometric_ratio = 1.02;
    double a_max = 50.0;
};

// Numerical tolerance of the level recursion scheme itself (exact identities
// such as the c = inf collapse hold to this precision, independent of grid
// spacing).
inline constexpr double kGridTol = 1.0e-9;

std::vector<double> make_grid(const GridParams& params);

struct RateGrid {
    TreeLevel level = TreeLevel::finite(1);
    std::vector<double> points;
    std::vector<double> values; // extended reals, +inf allowed
    std::string model_id;
    GridParams grid;
    double tol = 0.0;   // infinite-tree stopping tolerance (0 for finite levels)
    int terminal_n = 0; // level at which the infinite-tree iteration stopped

    // Piecewise-linear evaluation; +inf once either bracketing node is +inf.
    double value_at(double a) const;
    std::size_t index_of_one() const;
};

// Large-deviation rate function of the depth-n tree at speed r.  Level 1 is
// the Cramer transform; deeper levels apply
//
//   I^n(a) = inf_{1<=z<=a} [ I^{n-1}(z) + h(a, z) ],    a >= 1,
//   I^n(a) = cramer(a),                                 a <= 1,
//
// as a discrete minimum over the grid plus one golden-section refinement
// around the argmin (ties resolved toward the smallest z).
RateGrid rate_finite(const WeightModel& m, int n, const GridParams& params = {});

// All levels 1..n_max in one pass (each level needs the previous one anyway).
std::vector<RateGrid> rate_family(const WeightModel& m, int n_max,
                                  const GridParams& params = {});

// Monotone limit of the finite-level rate functions: iterate levels until the
// sup-norm change over the grid drops below tol, freezing the prefix of the
// grid that has already stabilized (for a below the current breakpoint the
// recursion is exactly stationary).  Throws NonConvergence if max_levels is
// hit with a nonempty unstable region.
RateGrid rate_infinite(const WeightModel& m, const GridParams& params = {},
                       double tol = 1.0e-6, int max_levels = 64);

// a^2 / (2 Var W): moderate-deviation rate at speed r^{1-2*alpha}.
double moderate_rate(const WeightModel& m, double a);

// Very-large-deviation rate of r^{-alpha} Z_r^n at speed r^{1+alpha/n}:
// inf for a < 0, c n a^{1/n} for a >= 0 (degenerate when c = inf).
double very_large_rate_finite(const WeightModel& m, int n, double a);

// Infinite-tree analogue at speed r log r: inf for a < 0, 0 at a = 0,
// c alpha e for a > 0.
double very_large_rate_infinite(const WeightModel& m, double alpha, double a);

// Left tail on [0, 1]: the rate is the Cramer transform at every level.
double left_rate(const WeightModel& m, double a);

struct Breakpoints {
    // a_n = inf{a >= 1 : I^{n+1}(a) < I^n(a)}, index 0 holding a_1.
    // +inf marks "no strict decrease found on [1, a_max]" (always the case
    // when c = inf).
    std::vector<double> a_n;
    std::vector<double> bracket_half_width;
    double drop_tol = 0.0;
    double a_max = 0.0;
};

Breakpoints breakpoints(const WeightModel& m, int n_max,
                        const GridParams& params = {},
                        double drop_tol = 1.0e-7);

} // namespace casdev::rate

#endif
