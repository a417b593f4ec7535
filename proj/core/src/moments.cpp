#include "casdev/moments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "casdev/errors.hpp"

namespace casdev::moments {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using boost::multiprecision::cpp_int;

void require_nondegenerate_r(const WeightModel& m, int r) {
    if (r < 2) throw DomainError("branching factor r must be >= 2");
    if (std::log(static_cast<double>(r)) <= m.w_log_w_mean())
        throw DomainError("need r > exp(E[W log W]) (got r = " +
                          std::to_string(r) + ")");
}

// One multiplicity vector of a partition: (part size, multiplicity) pairs.
using Parts = std::vector<std::pair<int, int>>;

// Visits every way to write h = sum k*m_k with parts of size 1..max_part and
// at most max_parts parts in total.
void for_each_partition(int h, int max_part, long max_parts,
                        const std::function<void(const Parts&)>& visit) {
    Parts acc;
    std::function<void(int, int, long)> rec = [&](int remaining, int part,
                                                  long used) {
        if (remaining == 0) {
            visit(acc);
            return;
        }
        if (part < 1) return;
        if (part == 1) {
            if (used + remaining <= max_parts) {
                acc.emplace_back(1, remaining);
                visit(acc);
                acc.pop_back();
            }
            return;
        }
        const int cap = remaining / part;
        for (int mult = cap; mult >= 0; --mult) {
            if (used + mult > max_parts) continue;
            if (mult > 0) acc.emplace_back(part, mult);
            rec(remaining - mult * part, part - 1, used + mult);
            if (mult > 0) acc.pop_back();
        }
    };
    rec(h, max_part, 0);
}

double log_sum_exp(const std::vector<double>& xs) {
    const double mx = *std::max_element(xs.begin(), xs.end());
    if (std::isinf(mx)) return mx;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - mx);
    return mx + std::log(s);
}

// log of the partition term shared by both tree recursions:
//   h! * r!/m0! / r^h * prod_k (1/m_k!) (E[W^k] T[k] / k!)^{m_k}
double log_partition_term(int h, int r, const Parts& parts,
                          const WeightModel& m,
                          const std::vector<double>& log_prev) {
    long used = 0;
    for (const auto& [k, mult] : parts) used += mult;
    const double m0 = static_cast<double>(r - used);
    double acc = std::lgamma(h + 1.0) + std::lgamma(r + 1.0) -
                 std::lgamma(m0 + 1.0) - h * std::log(static_cast<double>(r));
    for (const auto& [k, mult] : parts) {
        acc += mult * (m.log_raw_moment(k) + log_prev[static_cast<std::size_t>(k)] -
                       std::lgamma(k + 1.0));
        acc -= std::lgamma(mult + 1.0);
    }
    return acc;
}

cpp_int factorial(int n) {
    cpp_int f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

cpp_int falling_factorial(int r, long k) {
    cpp_int f = 1;
    for (long i = 0; i < k; ++i) f *= (r - i);
    return f;
}

cpp_int ipow(cpp_int base, int e) {
    cpp_int out = 1;
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

Rational rational_pow(const Rational& base, int e) {
    Rational out = 1;
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

Rational rational_raw_moment(const WeightModel& m, int h) {
    if (h == 0) return 1;
    switch (m.kind()) {
        case WeightKind::degenerate:
            return 1;
        case WeightKind::exponential:
            return Rational(factorial(h));
        case WeightKind::gamma: {
            const double shape = m.shape();
            const double rounded = std::nearbyint(shape);
            if (shape != rounded || shape <= 0.0 || shape > 1.0e6)
                throw ConfigError(
                    "exact_rational mode needs rational weight moments "
                    "(gamma supports integer shapes only)");
            const auto k = static_cast<int>(rounded);
            cpp_int rising = 1;
            for (int i = 0; i < h; ++i) rising *= (k + i);
            return Rational(rising) / Rational(ipow(cpp_int(k), h));
        }
        case WeightKind::two_point: {
            const Rational p(m.p_zero()); // doubles are exactly dyadic
            const Rational q = Rational(1) - p;
            const Rational v = Rational(1) / q;
            return q * rational_pow(v, h);
        }
    }
    return 1;
}

Rational rational_partition_term(int h, int r, const Parts& parts,
                                 const WeightModel& m,
                                 const std::vector<Rational>& prev) {
    long used = 0;
    for (const auto& [k, mult] : parts) used += mult;
    Rational acc = Rational(factorial(h) * falling_factorial(r, used)) /
                   Rational(ipow(cpp_int(r), h));
    for (const auto& [k, mult] : parts) {
        const Rational base = rational_raw_moment(m, k) *
                              prev[static_cast<std::size_t>(k)] /
                              Rational(factorial(k));
        acc *= rational_pow(base, mult) / Rational(factorial(mult));
    }
    return acc;
}

MomentTable table_from_logs(const WeightModel&, int r, TreeLevel level,
                            std::vector<double> logs) {
    MomentTable t;
    t.r = r;
    t.level = level;
    t.mode = Mode::log_float;
    t.log_values = std::move(logs);
    t.values.resize(t.log_values.size());
    for (std::size_t i = 0; i < t.values.size(); ++i)
        t.values[i] = std::exp(t.log_values[i]);
    return t;
}

MomentTable table_from_rationals(int r, TreeLevel level,
                                 std::vector<Rational> exact) {
    MomentTable t;
    t.r = r;
    t.level = level;
    t.mode = Mode::exact_rational;
    t.exact_values = std::move(exact);
    t.values.resize(t.exact_values.size());
    t.log_values.resize(t.exact_values.size());
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        t.values[i] = static_cast<double>(t.exact_values[i]);
        t.log_values[i] = std::log(t.values[i]);
    }
    return t;
}

} // namespace

double chi(const WeightModel& m, int r) {
    require_nondegenerate_r(m, r);
    const double log_r = std::log(static_cast<double>(r));
    // f(h) = log E[W^h] - (h-1) log r is convex with f(1) = 0; chi is its
    // upper root
    const auto f = [&](double h) { return m.log_raw_moment(h) - (h - 1.0) * log_r; };

    if (std::isinf(m.tail_rate()) && m.ess_sup() <= static_cast<double>(r))
        return kInf; // E[W^h]/r^{h-1} -> 0 for bounded weights below r

    double hi = 2.0;
    while (f(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 1.0e8)
            throw NonConvergence("chi: no crossing found below h = 1e8", 1.0, hi);
    }
    double lo = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1.0e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

MomentTable cascade_moments(const WeightModel& m, int r, int h_max, Mode mode) {
    require_nondegenerate_r(m, r);
    if (h_max < 1) throw DomainError("cascade_moments requires h_max >= 1");

    const double log_r = std::log(static_cast<double>(r));
    if (mode == Mode::log_float) {
        std::vector<double> logs(static_cast<std::size_t>(h_max) + 1, 0.0);
        for (int h = 2; h <= h_max; ++h) {
            const double ratio_log = m.log_raw_moment(h) - (h - 1.0) * log_r;
            if (ratio_log >= 0.0)
                throw MomentDivergence(
                    "E[Z_r^h] recursion invalid at h = " + std::to_string(h) +
                    " (needs h < chi(r))");
            const double denom = -std::expm1(ratio_log);
            std::vector<double> terms;
            for_each_partition(h, h - 1, r, [&](const Parts& parts) {
                terms.push_back(log_partition_term(h, r, parts, m, logs));
            });
            logs[static_cast<std::size_t>(h)] =
                log_sum_exp(terms) - std::log(denom);
        }
        return table_from_logs(m, r, TreeLevel::infinite(), std::move(logs));
    }

    std::vector<Rational> exact(static_cast<std::size_t>(h_max) + 1, Rational(1));
    for (int h = 2; h <= h_max; ++h) {
        const Rational ratio = rational_raw_moment(m, h) /
                               Rational(ipow(cpp_int(r), h - 1));
        const Rational denom = Rational(1) - ratio;
        if (denom <= 0)
            throw MomentDivergence(
                "E[Z_r^h] recursion invalid at h = " + std::to_string(h) +
                " (needs h < chi(r))");
        Rational sum = 0;
        for_each_partition(h, h - 1, r, [&](const Parts& parts) {
            sum += rational_partition_term(h, r, parts, m, exact);
        });
        exact[static_cast<std::size_t>(h)] = sum / denom;
    }
    return table_from_rationals(r, TreeLevel::infinite(), std::move(exact));
}

MomentTable finite_tree_moments(const WeightModel& m, int r, int n, int h_max,
                                Mode mode) {
    if (r < 2) throw DomainError("branching factor r must be >= 2");
    if (n < 1) throw DomainError("finite_tree_moments requires n >= 1");
    if (h_max < 1) throw DomainError("finite_tree_moments requires h_max >= 1");

    if (mode == Mode::log_float) {
        std::vector<double> prev(static_cast<std::size_t>(h_max) + 1, 0.0);
        for (int lvl = 1; lvl <= n; ++lvl) {
            std::vector<double> cur(prev.size(), 0.0);
            for (int h = 2; h <= h_max; ++h) {
                std::vector<double> terms;
                for_each_partition(h, h, r, [&](const Parts& parts) {
                    terms.push_back(log_partition_term(h, r, parts, m, prev));
                });
                cur[static_cast<std::size_t>(h)] = log_sum_exp(terms);
            }
            prev = std::move(cur);
        }
        return table_from_logs(m, r, TreeLevel::finite(n), std::move(prev));
    }

    std::vector<Rational> prev(static_cast<std::size_t>(h_max) + 1, Rational(1));
    for (int lvl = 1; lvl <= n; ++lvl) {
        std::vector<Rational> cur(prev.size(), Rational(1));
        for (int h = 2; h <= h_max; ++h) {
            Rational sum = 0;
            for_each_partition(h, h, r, [&](const Parts& parts) {
                sum += rational_partition_term(h, r, parts, m, prev);
            });
            cur[static_cast<std::size_t>(h)] = sum;
        }
        prev = std::move(cur);
    }
    return table_from_rationals(r, TreeLevel::finite(n), std::move(prev));
}

double moment_upper_bound(const WeightModel& m, int r, int h, double delta) {
    if (h < 1) throw DomainError("moment_upper_bound requires h >= 1");
    if (h >= r) throw DomainError("moment_upper_bound requires h < r");
    if (!(delta > 0.0)) throw DomainError("moment_upper_bound requires delta > 0");
    const double C = 2.0 * m.raw_moment(2.0) + 13.0 / 12.0;
    const double hh = static_cast<double>(h);
    return std::exp(hh * hh / (2.0 * (r - hh)) *
                    (m.variance() + delta + C / hh));
}

std::vector<KappaPoint> kappa_estimate(const WeightModel& m, double eta,
                                       const std::vector<int>& r_list) {
    const double ce = m.tail_rate() * std::numbers::e;
    if (!(eta > 0.0) || !(eta < ce))
        throw DomainError("kappa_estimate requires eta in (0, c*e)");
    std::vector<KappaPoint> out;
    out.reserve(r_list.size());
    for (int r : r_list) {
        const int h = static_cast<int>(std::floor(eta * r));
        if (h <= 1) {
            out.push_back({r, h, 0.0}); // E[Z_r] = 1
            continue;
        }
        const MomentTable t = cascade_moments(m, r, h, Mode::log_float);
        out.push_back({r, h, t.log_values[static_cast<std::size_t>(h)] / r});
    }
    return out;
}

} // namespace casdev::moments
