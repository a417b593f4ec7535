#ifndef CASDEV_CASCADE_HPP
#define CASDEV_CASCADE_HPP

#include <cstdint>
#include <vector>

#include "casdev/tree_level.hpp"
#include "casdev/weight_model.hpp"

namespace casdev::cascade {

struct GenParams {
    int n = 0;           // finite batches
    long pool_size = 0;  // population batches
    int iterations = 0;  // population batches
};

struct SampleBatch {
    int r = 0;
    TreeLevel level = TreeLevel::finite(1);
    std::vector<double> samples;
    std::uint64_t seed = 0;
    GenParams gen;
    // Advisory: |mean - 1| <= 5 sd / sqrt(N).  A violation is flagged, not
    // fatal (deep two-point trees can legitimately drift).
    bool mean_in_band = true;

    double mean() const;
    double moment(int k) const; // empirical E[X^k]
};

// Exact draws of the depth-n mass by depth-first recursion; the tree is
// never materialized (memory O(n) per worker).  Each sample owns the RNG
// substream (seed, sample index), so batches are reproducible bit-for-bit
// for any thread count.  Guards r^n <= 2^26 work per sample.
SampleBatch sample_finite(const WeightModel& m, int r, int n, long count,
                          std::uint64_t seed, int threads = 0);

// Population-dynamics approximation of the infinite-tree mass: a pool of
// size pool_size is repeatedly pushed through Z <- (1/r) sum W_i Z_i with
// ancestors resampled uniformly from the previous generation.  Requires
// r > exp(E[W log W]) so that the fixed point is the cascade limit.
SampleBatch sample_infinite(const WeightModel& m, int r, long pool_size,
                            int iterations, std::uint64_t seed,
                            int threads = 0);

// P(Z_r^n = 0) by the exact recursion q^1 = p^r, q^n = (p + (1-p) q^{n-1})^r.
double zero_mass_finite(const WeightModel& m, int r, int n);

// P(Z_r^inf = 0): the minimal fixed point of x -> (p + (1-p) x)^r on [0, 1),
// reached by monotone iteration from 0.  Requires r > exp(E[W log W]).
double zero_mass_infinite(const WeightModel& m, int r);

} // namespace casdev::cascade

#endif
