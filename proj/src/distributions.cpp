#include "gg1/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace gg1 {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double normal_ccdf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

[[noreturn]] void reject(DistributionKind kind, const std::string& what) {
    std::ostringstream os;
    os << "invalid " << to_string(kind) << " distribution: " << what;
    throw std::invalid_argument(os.str());
}

void require_count(DistributionKind kind, const std::vector<double>& p, std::size_t n) {
    if (p.size() != n) {
        std::ostringstream os;
        os << "expected " << n << " parameter(s), got " << p.size();
        reject(kind, os.str());
    }
    for (double v : p)
        if (!std::isfinite(v)) reject(kind, "non-finite parameter");
}

void require_positive(DistributionKind kind, const char* name, double v) {
    if (!(v > 0.0)) {
        std::ostringstream os;
        os << name << " must be positive, got " << v;
        reject(kind, os.str());
    }
}

}  // namespace

std::string_view to_string(DistributionKind kind) {
    switch (kind) {
    case DistributionKind::exponential: return "exponential";
    case DistributionKind::deterministic: return "deterministic";
    case DistributionKind::uniform: return "uniform";
    case DistributionKind::gamma: return "gamma";
    case DistributionKind::lognormal: return "lognormal";
    }
    return "unknown";
}

DistributionKind distribution_kind_from_string(std::string_view name) {
    for (auto k : {DistributionKind::exponential, DistributionKind::deterministic, DistributionKind::uniform,
                   DistributionKind::gamma, DistributionKind::lognormal})
        if (to_string(k) == name) return k;
    throw std::invalid_argument("unknown distribution kind '" + std::string(name) + "'");
}

DistributionSpec::DistributionSpec(DistributionKind kind, std::vector<double> params)
    : kind_(kind), params_(std::move(params)) {
    switch (kind_) {
    case DistributionKind::exponential:
        require_count(kind_, params_, 1);
        require_positive(kind_, "rate", params_[0]);
        break;
    case DistributionKind::deterministic:
        require_count(kind_, params_, 1);
        require_positive(kind_, "value", params_[0]);
        break;
    case DistributionKind::uniform:
        require_count(kind_, params_, 2);
        if (params_[0] < 0.0) reject(kind_, "lower bound must be nonnegative");
        if (!(params_[1] > params_[0])) reject(kind_, "upper bound must exceed lower bound");
        break;
    case DistributionKind::gamma:
        require_count(kind_, params_, 2);
        require_positive(kind_, "shape", params_[0]);
        require_positive(kind_, "scale", params_[1]);
        break;
    case DistributionKind::lognormal:
        require_count(kind_, params_, 2);
        require_positive(kind_, "log_sd", params_[1]);
        break;
    }
}

DistributionSpec DistributionSpec::exponential(double rate) { return {DistributionKind::exponential, {rate}}; }
DistributionSpec DistributionSpec::deterministic(double value) { return {DistributionKind::deterministic, {value}}; }
DistributionSpec DistributionSpec::uniform(double lower, double upper) {
    return {DistributionKind::uniform, {lower, upper}};
}
DistributionSpec DistributionSpec::gamma(double shape, double scale) { return {DistributionKind::gamma, {shape, scale}}; }
DistributionSpec DistributionSpec::lognormal(double log_mean, double log_sd) {
    return {DistributionKind::lognormal, {log_mean, log_sd}};
}

DistributionSpec DistributionSpec::with_mean(DistributionKind kind, double mean, double cv2) {
    if (!(mean > 0.0) || !std::isfinite(mean)) reject(kind, "mean must be positive and finite");
    switch (kind) {
    case DistributionKind::exponential: return exponential(1.0 / mean);
    case DistributionKind::deterministic: return deterministic(mean);
    case DistributionKind::uniform: return uniform(0.0, 2.0 * mean);
    case DistributionKind::gamma:
        require_positive(kind, "cv2", cv2);
        return gamma(1.0 / cv2, mean * cv2);
    case DistributionKind::lognormal: {
        require_positive(kind, "cv2", cv2);
        const double s2 = std::log1p(cv2);
        return lognormal(std::log(mean) - 0.5 * s2, std::sqrt(s2));
    }
    }
    reject(kind, "unsupported kind");
}

double DistributionSpec::sample(RandomStream& stream) const {
    auto& eng = stream.engine();
    switch (kind_) {
    case DistributionKind::exponential: return std::exponential_distribution<double>(params_[0])(eng);
    case DistributionKind::deterministic: return params_[0];
    case DistributionKind::uniform: return std::uniform_real_distribution<double>(params_[0], params_[1])(eng);
    case DistributionKind::gamma: return std::gamma_distribution<double>(params_[0], params_[1])(eng);
    case DistributionKind::lognormal: return std::lognormal_distribution<double>(params_[0], params_[1])(eng);
    }
    return 0.0;
}

double DistributionSpec::mean() const {
    const auto& p = params_;
    switch (kind_) {
    case DistributionKind::exponential: return 1.0 / p[0];
    case DistributionKind::deterministic: return p[0];
    case DistributionKind::uniform: return 0.5 * (p[0] + p[1]);
    case DistributionKind::gamma: return p[0] * p[1];
    case DistributionKind::lognormal: return std::exp(p[0] + 0.5 * p[1] * p[1]);
    }
    return 0.0;
}

double DistributionSpec::second_moment() const {
    const auto& p = params_;
    switch (kind_) {
    case DistributionKind::exponential: return 2.0 / (p[0] * p[0]);
    case DistributionKind::deterministic: return p[0] * p[0];
    case DistributionKind::uniform: return (p[0] * p[0] + p[0] * p[1] + p[1] * p[1]) / 3.0;
    case DistributionKind::gamma: return p[0] * (p[0] + 1.0) * p[1] * p[1];
    case DistributionKind::lognormal: return std::exp(2.0 * p[0] + 2.0 * p[1] * p[1]);
    }
    return 0.0;
}

double DistributionSpec::variance() const {
    const auto& p = params_;
    // closed forms avoid cancellation in E[X^2] - E[X]^2
    switch (kind_) {
    case DistributionKind::exponential: return 1.0 / (p[0] * p[0]);
    case DistributionKind::deterministic: return 0.0;
    case DistributionKind::uniform: return (p[1] - p[0]) * (p[1] - p[0]) / 12.0;
    case DistributionKind::gamma: return p[0] * p[1] * p[1];
    case DistributionKind::lognormal: return std::expm1(p[1] * p[1]) * std::exp(2.0 * p[0] + p[1] * p[1]);
    }
    return 0.0;
}

double DistributionSpec::cv2() const {
    const double m = mean();
    return variance() / (m * m);
}

double DistributionSpec::pdf(double t) const {
    const auto& p = params_;
    if (t < 0.0) return 0.0;
    switch (kind_) {
    case DistributionKind::exponential: return p[0] * std::exp(-p[0] * t);
    case DistributionKind::deterministic: return 0.0;
    case DistributionKind::uniform: return (t >= p[0] && t <= p[1]) ? 1.0 / (p[1] - p[0]) : 0.0;
    case DistributionKind::gamma:
        if (t == 0.0) return p[0] == 1.0 ? 1.0 / p[1] : 0.0;
        return boost::math::gamma_p_derivative(p[0], t / p[1]) / p[1];
    case DistributionKind::lognormal: {
        if (t == 0.0) return 0.0;
        const double z = (std::log(t) - p[0]) / p[1];
        return std::exp(-0.5 * z * z) / (t * p[1] * std::sqrt(2.0 * M_PI));
    }
    }
    return 0.0;
}

double DistributionSpec::cdf(double t) const {
    const auto& p = params_;
    if (t <= 0.0) return 0.0;
    switch (kind_) {
    case DistributionKind::exponential: return -std::expm1(-p[0] * t);
    case DistributionKind::deterministic: return t >= p[0] ? 1.0 : 0.0;
    case DistributionKind::uniform: return std::clamp((t - p[0]) / (p[1] - p[0]), 0.0, 1.0);
    case DistributionKind::gamma: return boost::math::gamma_p(p[0], t / p[1]);
    case DistributionKind::lognormal: return normal_cdf((std::log(t) - p[0]) / p[1]);
    }
    return 0.0;
}

double DistributionSpec::ccdf(double t) const {
    const auto& p = params_;
    if (t <= 0.0) return 1.0;
    switch (kind_) {
    case DistributionKind::exponential: return std::exp(-p[0] * t);
    case DistributionKind::deterministic: return t >= p[0] ? 0.0 : 1.0;
    case DistributionKind::uniform: return std::clamp((p[1] - t) / (p[1] - p[0]), 0.0, 1.0);
    case DistributionKind::gamma: return boost::math::gamma_q(p[0], t / p[1]);
    case DistributionKind::lognormal: return normal_ccdf((std::log(t) - p[0]) / p[1]);
    }
    return 1.0;
}

double DistributionSpec::quantile(double prob) const {
    if (!(prob >= 0.0 && prob <= 1.0)) throw std::domain_error("quantile probability outside [0, 1]");
    const auto& p = params_;
    switch (kind_) {
    case DistributionKind::exponential: return -std::log1p(-prob) / p[0];
    case DistributionKind::deterministic: return p[0];
    case DistributionKind::uniform: return p[0] + prob * (p[1] - p[0]);
    case DistributionKind::gamma: return p[1] * boost::math::gamma_p_inv(p[0], prob);
    case DistributionKind::lognormal:
        return std::exp(p[0] - p[1] * std::sqrt(2.0) * boost::math::erfc_inv(2.0 * prob));
    }
    return 0.0;
}

double DistributionSpec::limited_mean(double t) const {
    if (t <= 0.0) return 0.0;
    const auto& p = params_;
    switch (kind_) {
    case DistributionKind::exponential: return -std::expm1(-p[0] * t) / p[0];
    case DistributionKind::deterministic: return std::min(t, p[0]);
    case DistributionKind::uniform:
        if (t <= p[0]) return t;
        if (t >= p[1]) return mean();
        return t - (t - p[0]) * (t - p[0]) / (2.0 * (p[1] - p[0]));
    case DistributionKind::gamma:
    case DistributionKind::lognormal: return partial_mean(t) + t * ccdf(t);
    }
    return 0.0;
}

double DistributionSpec::partial_mean(double t) const {
    if (t <= 0.0) return 0.0;
    const auto& p = params_;
    switch (kind_) {
    case DistributionKind::exponential: {
        const double x = p[0] * t;
        return -(std::expm1(-x) + x * std::exp(-x)) / p[0];
    }
    case DistributionKind::deterministic: return t >= p[0] ? p[0] : 0.0;
    case DistributionKind::uniform: {
        if (t <= p[0]) return 0.0;
        const double u = std::min(t, p[1]);
        return (u * u - p[0] * p[0]) / (2.0 * (p[1] - p[0]));
    }
    case DistributionKind::gamma: return mean() * boost::math::gamma_p(p[0] + 1.0, t / p[1]);
    case DistributionKind::lognormal: return mean() * normal_cdf((std::log(t) - p[0] - p[1] * p[1]) / p[1]);
    }
    return 0.0;
}

}  // namespace gg1
