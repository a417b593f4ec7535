#include "casdev/conjugate.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "casdev/errors.hpp"

namespace casdev {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTCap = 1.0e5; // search cap for c = inf models

// Bisection for cgf'(t) = x on a bracketed interval of the increasing
// derivative.  Caller guarantees cgf'(lo) <= x <= cgf'(hi).
double bisect_derivative(const WeightModel& m, double x, double lo, double hi,
                         double tol) {
    for (int it = 0; it < 200 && hi - lo > tol * std::max(1.0, std::fabs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (m.cgf_derivative(mid) < x)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  int iters) {
    constexpr double phi = 0.6180339887498949; // (sqrt(5)-1)/2
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < iters; ++it) {
        if (f1 < f2) {
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
    return std::max(f1, f2);
}

// Expands lo downward until cgf'(lo) <= x.  The derivative decays to
// P(W = 0)-weighted zero as t -> -inf, so this terminates for every x > 0.
double expand_lower(const WeightModel& m, double x, double start) {
    double lo = start;
    while (m.cgf_derivative(lo) > x) {
        lo *= 2.0;
        if (lo < -1.0e306) break;
    }
    return lo;
}

} // namespace

ConjugateResult cramer_transform(const WeightModel& m, double x) {
    if (x < 0.0) return {kInf, -kInf};
    if (x == 0.0) {
        const double p = m.p_zero();
        return {p > 0.0 ? -std::log(p) : kInf, -kInf};
    }
    if (x == 1.0) return {0.0, 0.0};
    if (m.kind() == WeightKind::degenerate)
        return {kInf, x > 1.0 ? kInf : -kInf};
    if (x > m.ess_sup()) return {kInf, kInf};

    const double c = m.tail_rate();
    double lo, hi;
    bool bracketed = true;
    if (x < 1.0) {
        lo = expand_lower(m, x, -1.0);
        hi = 0.0;
    } else {
        lo = 0.0;
        if (std::isfinite(c)) {
            // derivative blows up at c-, so walking toward c always brackets
            double delta = 0.5 * c;
            while (m.cgf_derivative(c - delta) < x && delta > c * 1.0e-17)
                delta *= 0.5;
            hi = c - delta;
        } else {
            hi = 1.0;
            while (m.cgf_derivative(hi) < x) {
                hi *= 2.0;
                if (hi > kTCap) {
                    bracketed = false;
                    break;
                }
            }
        }
    }

    if (!bracketed) {
        // stationary point past the boundary (x at the essential sup of a
        // bounded law): the sup is a limit, chase it by golden section
        const auto objective = [&](double t) { return t * x - m.cgf(t); };
        const double value = golden_max(objective, 0.0, 2.0 * kTCap, 120);
        return {std::max(value, 0.0), kInf};
    }

    const double t = bisect_derivative(m, x, lo, hi, 1.0e-15);
    const double value = t * x - m.cgf(t);
    return {std::max(value, 0.0), t};
}

double conjugate_point(const WeightModel& m, double a) {
    if (a < 1.0) throw DomainError("conjugate_point requires a >= 1");
    if (a == 1.0) return 0.0;
    if (m.kind() == WeightKind::degenerate) return kInf;
    if (a >= m.ess_sup()) return kInf; // derivative never reaches a

    const double c = m.tail_rate();
    double hi;
    if (std::isfinite(c)) {
        double delta = 0.5 * c;
        while (m.cgf_derivative(c - delta) < a && delta > c * 1.0e-17)
            delta *= 0.5;
        hi = c - delta;
    } else {
        hi = 1.0;
        while (m.cgf_derivative(hi) < a) {
            hi *= 2.0;
            if (hi > kTCap) return kInf;
        }
    }
    return bisect_derivative(m, a, 0.0, hi, 1.0e-12);
}

double a_w(const WeightModel& m) {
    const double c = m.tail_rate();
    if (std::isinf(c)) return kInf;
    // g(a) = a * a*(a) - c is increasing with g(1) = -c < 0
    double hi = 2.0;
    while (hi * conjugate_point(m, hi) < c) {
        hi *= 2.0;
        if (hi > 1.0e9) return kInf;
    }
    double lo = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1.0e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid * conjugate_point(m, mid) < c)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

HCost::HCost(const WeightModel& m, double a)
    : model_(&m), a_(a), c_(m.tail_rate()) {
    if (a < 1.0) throw DomainError("h_cost requires a >= 1");
    rate_at_a_ = cramer_transform(m, a).value;
    if (std::isinf(c_)) {
        z_break_ = kInf; // first branch everywhere
    } else {
        const double astar = conjugate_point(m, a);
        z_break_ = astar > 0.0 ? c_ / astar : kInf;
    }
}

double HCost::operator()(double z) const {
    constexpr double slack = 1.0 + 1.0e-12;
    if (z < 1.0 / slack || z > a_ * slack)
        throw DomainError("h_cost requires z in [1, a]");
    z = std::min(std::max(z, 1.0), a_);
    if (z <= z_break_) return rate_at_a_;
    return c_ * a_ / z - model_->cgf(c_ / z);
}

double h_cost(const WeightModel& m, double a, double z) {
    return HCost(m, a)(z);
}

} // namespace casdev
