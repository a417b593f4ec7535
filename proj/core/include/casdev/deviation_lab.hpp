#ifndef CASDEV_DEVIATION_LAB_HPP
#define CASDEV_DEVIATION_LAB_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "casdev/cascade.hpp"
#include "casdev/tree_level.hpp"
#include "casdev/weight_model.hpp"

namespace casdev::devlab {

enum class Regime {
    left,             // {Z <= a}, a in [0,1], speed r
    moderate_left,    // {r^alpha (Z-1) <= -a}, speed r^{1-2 alpha}
    moderate_right,   // {r^alpha (Z-1) >= a}, speed r^{1-2 alpha}
    large_right,      // {Z >= a}, a > 1, speed r
    very_large_right, // {Z >= r^alpha a}, speed r^{1+alpha/n} or r log r
};

std::string regime_name(Regime r);
Regime regime_from_name(const std::string& name);

struct TailEstimate {
    double log_prob = 0.0; // -inf when no hits
    double ci_log_lo = 0.0;
    double ci_log_hi = 0.0; // one-sided upper bound when no hits
    long hits = 0;
    long n = 0;
};

// log of the empirical tail proportion with an exact Clopper-Pearson
// interval mapped to the log scale.
TailEstimate tail_estimate(std::span<const double> samples, double a,
                           bool upper_tail, double confidence = 0.95);

struct ReportRow {
    int r = 0;
    double speed = 0.0;
    double threshold = 0.0;
    TailEstimate est;
};

struct SlopeFit {
    double slope = 0.0;        // weighted LS of log p on -speed, with intercept
    double intercept = 0.0;    // absorbs the sub-exponential prefactor
    double slope_se = 0.0;
    double slope_origin = 0.0; // intercept-free variant, reported alongside
    int points_used = 0;
};

// Weighted least-squares slope; weights are the inverse CI variances on the
// log scale.  Exposed separately so synthetic inputs can exercise it.
SlopeFit fit_slope(const std::vector<ReportRow>& rows);

struct DeviationReport {
    Regime regime = Regime::left;
    TreeLevel level = TreeLevel::finite(1);
    double a = 0.0;
    double alpha = 0.0; // moderate / very-large regimes only
    std::string model_id;
    std::uint64_t seed = 0;
    long samples_per_r = 0;
    std::vector<ReportRow> rows;
    SlopeFit fit;
    double theory_value = 0.0;
    std::string verdict; // pass | fail | inconclusive
    std::string notes;   // feasibility warnings etc.
};

// Runs one slope experiment: per r, estimate the regime's event probability
// from a fresh batch, then regress log p against -speed(r) and compare the
// slope to the theoretical rate.  Verdict is "pass" when
// |slope - theory| <= max(0.25 theory, 2 SE).
DeviationReport ldp_slope(const WeightModel& m, Regime regime, TreeLevel level,
                          double a, double alpha,
                          const std::vector<int>& r_list, long samples_per_r,
                          std::uint64_t seed, int threads = 0);

} // namespace casdev::devlab

#endif
