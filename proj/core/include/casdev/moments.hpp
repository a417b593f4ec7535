#ifndef CASDEV_MOMENTS_HPP
#define CASDEV_MOMENTS_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <utility>
#include <vector>

#include "casdev/tree_level.hpp"
#include "casdev/weight_model.hpp"

namespace casdev::moments {

using Rational = boost::multiprecision::cpp_rational;

enum class Mode { log_float, exact_rational };

struct MomentTable {
    int r = 0;
    TreeLevel level = TreeLevel::infinite();
    Mode mode = Mode::log_float;
    std::vector<double> values;       // E[Z^h] for h = 0..h_max
    std::vector<double> log_values;   // log E[Z^h]
    std::vector<Rational> exact_values; // populated in exact_rational mode

    int h_max() const { return static_cast<int>(values.size()) - 1; }
    bool exact() const { return mode == Mode::exact_rational; }
};

// Moment threshold: chi(r) = sup{h >= 1 : E[W^h] < r^{h-1}}.  The infinite
// tree has E[Z_r^h] < inf exactly for h < chi(r).  +inf for bounded weights
// with ess sup <= r.  Requires r >= 2 and r > exp(E[W log W]).
double chi(const WeightModel& m, int r);

// Exact moments of the infinite-tree mass from the fixed-point recursion
//
//   E[Z^h] = h! r! / (r^h (1 - E[W^h]/r^{h-1}))
//            * sum over multiplicity vectors m_0..m_{h-1}
//              (sum m_k = r, sum k m_k = h)
//              prod_k (1/m_k!) (E[W^k] E[Z^k] / k!)^{m_k}.
//
// Throws MomentDivergence when h_max >= chi(r) (the denominator is <= 0, the
// recursion formula itself breaks down).  In exact_rational mode the weight
// moments must be rational (all kinds but non-integer-shape gamma).
MomentTable cascade_moments(const WeightModel& m, int r, int h_max,
                            Mode mode = Mode::log_float);

// Moments of the depth-n tree by iterating the one-level multinomial
// identity (parts up to h allowed, no denominator) from E[(Z^0)^h] = 1.
MomentTable finite_tree_moments(const WeightModel& m, int r, int n, int h_max,
                                Mode mode = Mode::log_float);

// exp{ h^2/(2(r-h)) (Var W + delta + C/h) } with C = 2 E[W^2] + 13/12;
// upper bound on E[Z^h] for h up to a model-dependent fraction of r.
double moment_upper_bound(const WeightModel& m, int r, int h, double delta);

struct KappaPoint {
    int r;
    int h; // floor(eta * r)
    double value; // (1/r) log E[Z_r^h]
};

// Finite-r proxies for kappa(eta) = limsup (1/r) log E[Z_r^{eta r}].  These
// are raw finite-r values, not the limsup; no extrapolation is attempted.
std::vector<KappaPoint> kappa_estimate(const WeightModel& m, double eta,
                                       const std::vector<int>& r_list);

} // namespace casdev::moments

#endif
