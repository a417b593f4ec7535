#include "casdev/rate_function.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "casdev/conjugate.hpp"
#include "casdev/errors.hpp"

namespace casdev::rate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const GridParams& p) {
    if (!(p.linear_step > 0.0 && p.linear_step <= 1.0))
        throw ConfigError("grid linear_step must be in (0, 1]");
    if (!(p.geometric_ratio > 1.0))
        throw ConfigError("grid geometric_ratio must be > 1");
    if (!(p.a_max > 1.0))
        throw ConfigError("grid a_max must be > 1");
}

// Linear interpolation that propagates +inf from either bracketing node.
double interp(const std::vector<double>& pts, const std::vector<double>& vals,
              double x) {
    if (x <= pts.front()) return vals.front();
    if (x >= pts.back()) return vals.back();
    const auto it = std::upper_bound(pts.begin(), pts.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - pts.begin()) - 1;
    if (x == pts[j]) return vals[j];
    if (std::isinf(vals[j]) || std::isinf(vals[j + 1]))
        return kInf;
    const double w = (x - pts[j]) / (pts[j + 1] - pts[j]);
    return vals[j] + w * (vals[j + 1] - vals[j]);
}

struct GoldenMin {
    double x;
    double f;
};

GoldenMin golden_min(const std::function<double(double)>& f, double lo,
                     double hi, int iters) {
    constexpr double phi = 0.6180339887498949;
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < iters; ++it) {
        if (f1 > f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        }
    }
    return f1 <= f2 ? GoldenMin{x1, f1} : GoldenMin{x2, f2};
}

std::vector<double> conjugate_level(const WeightModel& m,
                                    const std::vector<double>& pts) {
    std::vector<double> v(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        v[i] = cramer_transform(m, pts[i]).value;
    return v;
}

// Level n from level n-1 on a shared grid.  When the previous level is the
// Cramer transform it is evaluated exactly at off-grid refinement points,
// otherwise by interpolation.  Post-passes keep the two exact order
// relations of the family (I^n <= I^{n-1}, and monotone in a on [1, inf))
// from being broken by discretization noise.
std::vector<double> recursion_level(const WeightModel& m,
                                    const std::vector<double>& pts,
                                    const std::vector<double>& prev,
                                    bool prev_is_conjugate,
                                    std::size_t i_one,
                                    std::size_t start) {
    const auto eval_prev = [&](double z) {
        if (prev_is_conjugate) return cramer_transform(m, z).value;
        return interp(pts, prev, z);
    };

    start = std::max(start, i_one);
    std::vector<double> out(pts.size());
    // a <= 1 is the Cramer transform at every level, and the frozen prefix
    // [1, ...) is already stationary
    for (std::size_t i = 0; i < start; ++i) out[i] = prev[i];

    for (std::size_t i = start; i < pts.size(); ++i) {
        const double a = pts[i];
        const HCost hc(m, a);
        double best = kInf;
        std::size_t j_best = i_one;
        for (std::size_t j = i_one; j <= i; ++j) {
            const double cand = prev[j] + hc(pts[j]);
            if (cand < best) {
                best = cand;
                j_best = j;
            }
        }
        const double z_lo = pts[j_best > i_one ? j_best - 1 : i_one];
        const double z_hi = pts[std::min(j_best + 1, i)];
        if (z_hi > z_lo) {
            const auto objective = [&](double z) { return eval_prev(z) + hc(z); };
            const GoldenMin g = golden_min(objective, z_lo, z_hi, 60);
            best = std::min(best, g.f);
        }
        out[i] = best;
    }

    for (std::size_t i = start; i < pts.size(); ++i)
        out[i] = std::min(out[i], prev[i]);
    for (std::size_t i = i_one + 1; i < pts.size(); ++i)
        out[i] = std::max(out[i], out[i - 1]);
    return out;
}

std::size_t find_index_of_one(const std::vector<double>& pts) {
    const auto it = std::lower_bound(pts.begin(), pts.end(), 1.0);
    return static_cast<std::size_t>(it - pts.begin());
}

// One recursion step evaluated at an arbitrary threshold from a stored
// previous-level grid; used for breakpoint refinement between grid nodes.
double recursion_point(const WeightModel& m, double a,
                       const std::vector<double>& pts,
                       const std::vector<double>& prev,
                       bool prev_is_conjugate, std::size_t i_one) {
    if (a <= 1.0) return cramer_transform(m, a).value;
    const auto eval_prev = [&](double z) {
        if (prev_is_conjugate) return cramer_transform(m, z).value;
        return interp(pts, prev, z);
    };
    const HCost hc(m, a);
    double best = hc(1.0); // z = 1 with prev(1) = 0
    std::size_t j_best = i_one;
    for (std::size_t j = i_one; j < pts.size() && pts[j] <= a; ++j) {
        const double cand = prev[j] + hc(pts[j]);
        if (cand < best) {
            best = cand;
            j_best = j;
        }
    }
    const double z_lo = pts[j_best > i_one ? j_best - 1 : i_one];
    const double z_hi = std::min(a, pts[std::min(j_best + 1, pts.size() - 1)]);
    if (z_hi > z_lo) {
        const auto objective = [&](double z) { return eval_prev(z) + hc(z); };
        best = std::min(best, golden_min(objective, z_lo, z_hi, 60).f);
    }
    // the z = a endpoint is a candidate too
    best = std::min(best, eval_prev(a) + hc(a));
    return best;
}

} // namespace

std::vector<double> make_grid(const GridParams& params) {
    validate(params);
    std::vector<double> pts;
    const long count = std::lround(1.0 / params.linear_step);
    pts.reserve(static_cast<std::size_t>(count) + 64);
    for (long i = 0; i <= count; ++i)
        pts.push_back(static_cast<double>(i) / static_cast<double>(count));
    double v = 1.0;
    for (;;) {
        v *= params.geometric_ratio;
        if (v >= params.a_max) break;
        pts.push_back(v);
    }
    if (pts.back() < params.a_max) pts.push_back(params.a_max);
    return pts;
}

double RateGrid::value_at(double a) const {
    if (a < points.front() || a > points.back())
        throw DomainError("threshold outside the rate grid");
    return interp(points, values, a);
}

std::size_t RateGrid::index_of_one() const { return find_index_of_one(points); }

std::vector<RateGrid> rate_family(const WeightModel& m, int n_max,
                                  const GridParams& params) {
    if (n_max < 1) throw DomainError("rate_finite requires n >= 1");
    const std::vector<double> pts = make_grid(params);
    const std::size_t i_one = find_index_of_one(pts);

    std::vector<RateGrid> family;
    family.reserve(static_cast<std::size_t>(n_max));
    RateGrid g;
    g.level = TreeLevel::finite(1);
    g.points = pts;
    g.values = conjugate_level(m, pts);
    g.model_id = m.id();
    g.grid = params;
    family.push_back(g);

    for (int n = 2; n <= n_max; ++n) {
        RateGrid next = family.back();
        next.level = TreeLevel::finite(n);
        next.values = recursion_level(m, pts, family.back().values, n == 2, i_one, i_one);
        family.push_back(std::move(next));
    }
    return family;
}

RateGrid rate_finite(const WeightModel& m, int n, const GridParams& params) {
    return rate_family(m, n, params).back();
}

RateGrid rate_infinite(const WeightModel& m, const GridParams& params,
                       double tol, int max_levels) {
    if (!(tol > 0.0)) throw ConfigError("rate_infinite requires tol > 0");
    if (max_levels < 2) throw ConfigError("rate_infinite requires max_levels >= 2");
    const std::vector<double> pts = make_grid(params);
    const std::size_t i_one = find_index_of_one(pts);

    std::vector<double> prev = conjugate_level(m, pts);
    std::size_t frozen = i_one; // values below this index are stationary
    for (int n = 2; n <= max_levels; ++n) {
        std::vector<double> cur = recursion_level(m, pts, prev, n == 2, i_one, frozen);

        double diff = 0.0;
        std::size_t first_unstable = pts.size();
        std::size_t last_unstable = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double d =
                (std::isinf(prev[i]) && std::isinf(cur[i]))
                    ? 0.0
                    : std::fabs(prev[i] - cur[i]);
            diff = std::max(diff, d);
            if (d >= tol) {
                first_unstable = std::min(first_unstable, i);
                last_unstable = i;
            }
        }
        if (diff < tol) {
            RateGrid g;
            g.level = TreeLevel::infinite();
            g.points = pts;
            g.values = std::move(cur);
            g.model_id = m.id();
            g.grid = params;
            g.tol = tol;
            g.terminal_n = n;
            return g;
        }
        // extend the frozen prefix to the longest stable run starting at 1
        std::size_t new_frozen = i_one;
        while (new_frozen < pts.size() &&
               std::fabs(prev[new_frozen] - cur[new_frozen]) < tol)
            ++new_frozen;
        frozen = std::max(frozen, new_frozen);
        prev = std::move(cur);

        if (n == max_levels)
            throw NonConvergence(
                "rate_infinite: level cap " + std::to_string(max_levels) +
                    " reached with unstable region [" +
                    std::to_string(pts[first_unstable]) + ", " +
                    std::to_string(pts[last_unstable]) + "]",
                pts[first_unstable], pts[last_unstable]);
    }
    throw NonConvergence("rate_infinite: unreachable", 0.0, 0.0);
}

double moderate_rate(const WeightModel& m, double a) {
    const double var = m.variance();
    if (!(var > 0.0))
        throw DomainError("moderate_rate requires Var(W) > 0");
    return a * a / (2.0 * var);
}

double very_large_rate_finite(const WeightModel& m, int n, double a) {
    if (n < 1) throw DomainError("very_large_rate_finite requires n >= 1");
    if (a < 0.0) return kInf;
    if (a == 0.0) return 0.0;
    const double c = m.tail_rate();
    if (std::isinf(c)) return kInf; // degenerate at this speed
    return c * static_cast<double>(n) * std::pow(a, 1.0 / n);
}

double very_large_rate_infinite(const WeightModel& m, double alpha, double a) {
    if (!(alpha > 0.0)) throw DomainError("very_large_rate_infinite requires alpha > 0");
    if (a < 0.0) return kInf;
    if (a == 0.0) return 0.0;
    const double c = m.tail_rate();
    if (std::isinf(c)) return kInf;
    return c * alpha * std::numbers::e;
}

double left_rate(const WeightModel& m, double a) {
    if (!(a >= 0.0 && a <= 1.0))
        throw DomainError("left_rate requires a in [0, 1]");
    return cramer_transform(m, a).value;
}

Breakpoints breakpoints(const WeightModel& m, int n_max,
                        const GridParams& params, double drop_tol) {
    if (n_max < 1) throw DomainError("breakpoints requires n_max >= 1");
    Breakpoints bp;
    bp.drop_tol = drop_tol;
    bp.a_max = params.a_max;
    if (std::isinf(m.tail_rate())) {
        bp.a_n.assign(static_cast<std::size_t>(n_max), kInf);
        bp.bracket_half_width.assign(static_cast<std::size_t>(n_max), 0.0);
        return bp;
    }

    const auto family = rate_family(m, n_max + 1, params);
    const std::vector<double>& pts = family.front().points;
    const std::size_t i_one = family.front().index_of_one();

    for (int n = 1; n <= n_max; ++n) {
        const auto& up = family[static_cast<std::size_t>(n - 1)].values;
        const auto& dn = family[static_cast<std::size_t>(n)].values;
        std::size_t hit = pts.size();
        for (std::size_t i = i_one; i < pts.size(); ++i) {
            if (dn[i] < up[i] - drop_tol) {
                hit = i;
                break;
            }
        }
        if (hit == pts.size()) {
            bp.a_n.push_back(kInf);
            bp.bracket_half_width.push_back(0.0);
            continue;
        }
        double lo = pts[hit > i_one ? hit - 1 : i_one];
        double hi = pts[hit];
        // drop(a) = I^n(a) - I^{n+1}(a) crosses drop_tol inside (lo, hi]
        const auto drop = [&](double a) {
            const auto& prev_up = family[static_cast<std::size_t>(n >= 2 ? n - 2 : 0)].values;
            const auto& prev_dn = family[static_cast<std::size_t>(n - 1)].values;
            const double vn = (n == 1)
                                  ? cramer_transform(m, a).value
                                  : recursion_point(m, a, pts, prev_up, n == 2, i_one);
            const double vn1 = recursion_point(m, a, pts, prev_dn, n == 1, i_one);
            return vn - vn1;
        };
        for (int it = 0; it < 40 && hi - lo > 1.0e-9 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (drop(mid) < drop_tol)
                lo = mid;
            else
                hi = mid;
        }
        bp.a_n.push_back(0.5 * (lo + hi));
        bp.bracket_half_width.push_back(0.5 * (hi - lo));
    }
    return bp;
}

} // namespace casdev::rate
