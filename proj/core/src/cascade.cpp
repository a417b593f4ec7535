#include "casdev/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>
#include <vector>

#include "casdev/errors.hpp"
#include "casdev/rng.hpp"

namespace casdev::cascade {

namespace {

double ipow(double base, int e) {
    double out = 1.0;
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

double subtree_mass(const WeightModel& m, int r, int depth, RngStream& rng) {
    if (depth == 0) return 1.0;
    double acc = 0.0;
    for (int i = 0; i < r; ++i) {
        const double w = m.sample(rng);
        if (w != 0.0) acc += w * subtree_mass(m, r, depth - 1, rng);
    }
    return acc / r;
}

int effective_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

void parallel_for(long count, int threads, const std::function<void(long, long)>& run) {
    const int workers = std::min<long>(effective_threads(threads), count);
    if (workers <= 1) {
        run(0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const long chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const long lo = w * chunk;
        const long hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(run, lo, hi);
    }
    for (auto& t : pool) t.join();
}

void flag_mean(SampleBatch& b) {
    const long n = static_cast<long>(b.samples.size());
    if (n < 2) return;
    double mean = 0.0, m2 = 0.0;
    for (double x : b.samples) mean += x;
    mean /= n;
    for (double x : b.samples) m2 += (x - mean) * (x - mean);
    const double sd = std::sqrt(m2 / (n - 1));
    b.mean_in_band = std::fabs(mean - 1.0) <= 5.0 * sd / std::sqrt(static_cast<double>(n));
}

void require_nondegenerate_r(const WeightModel& m, int r) {
    if (r < 2) throw DomainError("branching factor r must be >= 2");
    if (std::log(static_cast<double>(r)) <= m.w_log_w_mean())
        throw DomainError("need r > exp(E[W log W]) (got r = " +
                          std::to_string(r) + ")");
}

} // namespace

double SampleBatch::mean() const {
    double s = 0.0;
    for (double x : samples) s += x;
    return samples.empty() ? 0.0 : s / static_cast<double>(samples.size());
}

double SampleBatch::moment(int k) const {
    double s = 0.0;
    for (double x : samples) s += ipow(x, k);
    return samples.empty() ? 0.0 : s / static_cast<double>(samples.size());
}

SampleBatch sample_finite(const WeightModel& m, int r, int n, long count,
                          std::uint64_t seed, int threads) {
    if (r < 2) throw DomainError("branching factor r must be >= 2");
    if (n < 1) throw DomainError("sample_finite requires n >= 1");
    if (count < 1) throw DomainError("sample_finite requires count >= 1");
    if (static_cast<double>(n) * std::log2(static_cast<double>(r)) > 26.0)
        throw ResourceError("r^n exceeds the 2^26 per-sample guard");

    SampleBatch b;
    b.r = r;
    b.level = TreeLevel::finite(n);
    b.seed = seed;
    b.gen.n = n;
    b.samples.resize(static_cast<std::size_t>(count));
    parallel_for(count, threads, [&](long lo, long hi) {
        for (long i = lo; i < hi; ++i) {
            RngStream rng(seed, static_cast<std::uint64_t>(i));
            b.samples[static_cast<std::size_t>(i)] = subtree_mass(m, r, n, rng);
        }
    });
    flag_mean(b);
    return b;
}

SampleBatch sample_infinite(const WeightModel& m, int r, long pool_size,
                            int iterations, std::uint64_t seed, int threads) {
    require_nondegenerate_r(m, r);
    if (pool_size < 2) throw DomainError("population pool needs at least 2 members");
    if (iterations < 1) throw DomainError("population dynamics needs iterations >= 1");

    std::vector<double> pool(static_cast<std::size_t>(pool_size), 1.0);
    std::vector<double> next(pool.size());
    for (int t = 1; t <= iterations; ++t) {
        parallel_for(pool_size, threads, [&](long lo, long hi) {
            for (long j = lo; j < hi; ++j) {
                RngStream rng(seed, static_cast<std::uint64_t>(t) *
                                        static_cast<std::uint64_t>(pool_size) +
                                        static_cast<std::uint64_t>(j));
                double acc = 0.0;
                for (int i = 0; i < r; ++i) {
                    const double w = m.sample(rng);
                    if (w == 0.0) continue;
                    const auto pick = std::min<long>(
                        static_cast<long>(rng.next_double() * pool_size),
                        pool_size - 1);
                    acc += w * pool[static_cast<std::size_t>(pick)];
                }
                next[static_cast<std::size_t>(j)] = acc / r;
            }
        });
        pool.swap(next);
    }

    SampleBatch b;
    b.r = r;
    b.level = TreeLevel::infinite();
    b.seed = seed;
    b.gen.pool_size = pool_size;
    b.gen.iterations = iterations;
    b.samples = std::move(pool);
    flag_mean(b);
    return b;
}

double zero_mass_finite(const WeightModel& m, int r, int n) {
    if (r < 2) throw DomainError("branching factor r must be >= 2");
    if (n < 1) throw DomainError("zero_mass_finite requires n >= 1");
    const double p = m.p_zero();
    double q = ipow(p, r);
    for (int lvl = 2; lvl <= n; ++lvl) q = ipow(p + (1.0 - p) * q, r);
    return q;
}

double zero_mass_infinite(const WeightModel& m, int r) {
    require_nondegenerate_r(m, r);
    const double p = m.p_zero();
    if (p == 0.0) return 0.0;
    // monotone iteration from 0 converges upward to the minimal fixed point
    double x = 0.0;
    for (long it = 0; it < 1000000; ++it) {
        const double nx = ipow(p + (1.0 - p) * x, r);
        if (nx - x <= 1.0e-16 * nx + 1.0e-300) return nx;
        x = nx;
    }
    return x;
}

} // namespace casdev::cascade
