#ifndef CASDEV_RNG_HPP
#define CASDEV_RNG_HPP

#include <cstdint>

namespace casdev {

// Counter-based splittable generator (SplitMix64 core).  A stream is fully
// determined by the pair (master seed, stream index): identical pairs give
// bit-identical sequences on every run, and distinct indices give streams
// that can be handed to workers without coordination.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t next_u64();

    // Uniform on [0, 1), 53-bit resolution.
    double next_double();

    // Uniform on (0, 1]; safe to pass through log().
    double next_unit_open();

    // Standard normal via Box-Muller (two uniforms per draw, no cached state).
    double next_normal();

private:
    std::uint64_t state_;
};

// Stable derivation of a sub-seed from a master seed, for naming independent
// experiment batches (one level above the per-sample stream index).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t salt);

} // namespace casdev

#endif
