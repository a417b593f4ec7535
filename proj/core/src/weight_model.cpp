#include "casdev/weight_model.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "casdev/errors.hpp"

namespace casdev {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double gamma_standard(double k, RngStream& rng) {
    // Marsaglia-Tsang; the k < 1 case boosts through k + 1.
    if (k < 1.0) {
        const double u = rng.next_unit_open();
        return gamma_standard(k + 1.0, rng) * std::pow(u, 1.0 / k);
    }
    const double d = k - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.next_normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.next_unit_open();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

} // namespace

WeightModel WeightModel::degenerate() {
    WeightModel m;
    m.kind_ = WeightKind::degenerate;
    m.ess_sup_ = 1.0;
    m.tail_rate_ = kInf;
    return m;
}

WeightModel WeightModel::exponential() {
    WeightModel m;
    m.kind_ = WeightKind::exponential;
    m.ess_sup_ = kInf;
    m.tail_rate_ = 1.0;
    return m;
}

WeightModel WeightModel::gamma(double shape) {
    if (!(shape > 0.0) || !std::isfinite(shape))
        throw ConfigError("gamma weight needs shape > 0");
    WeightModel m;
    m.kind_ = WeightKind::gamma;
    m.shape_ = shape;
    m.ess_sup_ = kInf;
    m.tail_rate_ = shape; // mean-1 gamma has scale 1/shape
    return m;
}

WeightModel WeightModel::two_point(double p_zero) {
    if (!(p_zero >= 0.0 && p_zero < 1.0))
        throw ConfigError("two-point weight needs p_zero in [0, 1)");
    WeightModel m;
    m.kind_ = WeightKind::two_point;
    m.p_zero_ = p_zero;
    m.atom_ = 1.0 / (1.0 - p_zero);
    m.ess_sup_ = m.atom_;
    m.tail_rate_ = kInf;
    return m;
}

double WeightModel::variance() const {
    switch (kind_) {
        case WeightKind::degenerate: return 0.0;
        case WeightKind::exponential: return 1.0;
        case WeightKind::gamma: return 1.0 / shape_;
        case WeightKind::two_point: return atom_ - 1.0;
    }
    return 0.0;
}

double WeightModel::cgf(double t) const {
    switch (kind_) {
        case WeightKind::degenerate:
            return t;
        case WeightKind::exponential:
            return t < 1.0 ? -std::log1p(-t) : kInf;
        case WeightKind::gamma:
            return t < shape_ ? -shape_ * std::log1p(-t / shape_) : kInf;
        case WeightKind::two_point: {
            const double q = 1.0 - p_zero_;
            const double vt = atom_ * t;
            // log(p + q e^{vt}), written so neither branch overflows
            if (vt > 0.0) return vt + std::log(q + p_zero_ * std::exp(-vt));
            return std::log(p_zero_ + q * std::exp(vt));
        }
    }
    return 0.0;
}

double WeightModel::cgf_derivative(double t) const {
    if (t >= tail_rate_)
        throw DomainError("cgf_derivative requires t < tail rate c");
    switch (kind_) {
        case WeightKind::degenerate:
            return 1.0;
        case WeightKind::exponential:
            return 1.0 / (1.0 - t);
        case WeightKind::gamma:
            return 1.0 / (1.0 - t / shape_);
        case WeightKind::two_point: {
            const double q = 1.0 - p_zero_;
            const double vt = atom_ * t;
            if (vt > 0.0) return atom_ / (1.0 + (p_zero_ / q) * std::exp(-vt));
            const double evt = std::exp(vt);
            return atom_ * q * evt / (p_zero_ + q * evt);
        }
    }
    return 1.0;
}

double WeightModel::log_raw_moment(double h) const {
    if (h < 0.0) throw DomainError("raw_moment requires h >= 0");
    if (h == 0.0) return 0.0;
    switch (kind_) {
        case WeightKind::degenerate:
            return 0.0;
        case WeightKind::exponential:
            return std::lgamma(h + 1.0);
        case WeightKind::gamma:
            return std::lgamma(shape_ + h) - std::lgamma(shape_) - h * std::log(shape_);
        case WeightKind::two_point:
            return std::log1p(-p_zero_) + h * std::log(atom_);
    }
    return 0.0;
}

double WeightModel::raw_moment(double h) const {
    return std::exp(log_raw_moment(h));
}

double WeightModel::w_log_w_mean() const {
    switch (kind_) {
        case WeightKind::degenerate:
            return 0.0;
        case WeightKind::exponential:
            return 1.0 - std::numbers::egamma;
        case WeightKind::gamma:
            // E[(G/k) log(G/k)] with G ~ Gamma(k,1)
            return boost::math::digamma(shape_ + 1.0) - std::log(shape_);
        case WeightKind::two_point:
            // (1-p) v log v = log v since (1-p) v = 1
            return std::log(atom_);
    }
    return 0.0;
}

double WeightModel::cdf(double w) const {
    if (w < 0.0) return 0.0;
    switch (kind_) {
        case WeightKind::degenerate:
            return w >= 1.0 ? 1.0 : 0.0;
        case WeightKind::exponential:
            return -std::expm1(-w);
        case WeightKind::gamma:
            return boost::math::gamma_p(shape_, shape_ * w);
        case WeightKind::two_point:
            return w >= atom_ ? 1.0 : p_zero_;
    }
    return 0.0;
}

double WeightModel::sample(RngStream& rng) const {
    switch (kind_) {
        case WeightKind::degenerate:
            return 1.0;
        case WeightKind::exponential:
            return -std::log(rng.next_unit_open());
        case WeightKind::gamma:
            return gamma_standard(shape_, rng) / shape_;
        case WeightKind::two_point:
            return rng.next_double() < p_zero_ ? 0.0 : atom_;
    }
    return 1.0;
}

namespace {

std::string num_str(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

} // namespace

std::string WeightModel::id() const {
    switch (kind_) {
        case WeightKind::degenerate: return "degenerate";
        case WeightKind::exponential: return "exp";
        case WeightKind::gamma: return "gamma:" + num_str(shape_);
        case WeightKind::two_point: return "twopoint:" + num_str(p_zero_);
    }
    return "degenerate";
}

WeightModel WeightModel::from_id(const std::string& id) {
    std::string kind = id;
    double param = std::numeric_limits<double>::quiet_NaN();
    if (const auto colon = id.find(':'); colon != std::string::npos) {
        kind = id.substr(0, colon);
        try {
            param = std::stod(id.substr(colon + 1));
        } catch (const std::exception&) {
            throw ConfigError("bad model parameter in '" + id + "'");
        }
    }
    if (kind == "degenerate" || kind == "const") return WeightModel::degenerate();
    if (kind == "exp" || kind == "exponential") return WeightModel::exponential();
    if (kind == "gamma") {
        if (std::isnan(param)) throw ConfigError("gamma model needs a shape, e.g. gamma:2");
        return WeightModel::gamma(param);
    }
    if (kind == "twopoint" || kind == "two_point") {
        if (std::isnan(param)) throw ConfigError("twopoint model needs p_zero, e.g. twopoint:0.5");
        return WeightModel::two_point(param);
    }
    throw ConfigError("unknown weight model kind '" + kind + "'");
}

WeightModel WeightModel::from_config(const std::string& kind, double shape, double p_zero) {
    if (kind == "degenerate" || kind == "const") return WeightModel::degenerate();
    if (kind == "exp" || kind == "exponential") return WeightModel::exponential();
    if (kind == "gamma") return WeightModel::gamma(shape);
    if (kind == "twopoint" || kind == "two_point") return WeightModel::two_point(p_zero);
    throw ConfigError("unknown weight model kind '" + kind + "'");
}

} // namespace casdev
