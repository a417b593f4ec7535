#include "casdev/rng.hpp"

#include <cmath>
#include <numbers>

namespace casdev {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index) {
    const std::uint64_t key = mix64(master_seed + kGolden * (stream_index + 1));
    state_ = mix64(key ^ 0xD1B54A32D192ED03ULL);
}

std::uint64_t RngStream::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double RngStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_unit_open() {
    return 1.0 - next_double();
}

double RngStream::next_normal() {
    const double u1 = next_unit_open();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t salt) {
    return mix64(mix64(master_seed ^ 0xA0761D6478BD642FULL) + kGolden * (salt + 1));
}

} // namespace casdev
