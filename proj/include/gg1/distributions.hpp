#ifndef GG1_DISTRIBUTIONS_HPP
#define GG1_DISTRIBUTIONS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "gg1/random.hpp"

namespace gg1 {

enum class DistributionKind { exponential, deterministic, uniform, gamma, lognormal };

std::string_view to_string(DistributionKind kind);
DistributionKind distribution_kind_from_string(std::string_view name);

struct Moments {
    double mean;
    double second_moment;
    double cv2;
};

/// A nonnegative duration distribution.
///
/// Parameters per kind:
///   exponential   {rate}
///   deterministic {value}
///   uniform       {lower, upper}, 0 <= lower < upper
///   gamma         {shape, scale}
///   lognormal     {log_mean, log_sd}
///
/// Parameters are validated on construction; an invalid set throws
/// std::invalid_argument with the offending value in the message.
class DistributionSpec {
public:
    DistributionSpec(DistributionKind kind, std::vector<double> params);

    static DistributionSpec exponential(double rate);
    static DistributionSpec deterministic(double value);
    static DistributionSpec uniform(double lower, double upper);
    static DistributionSpec gamma(double shape, double scale);
    static DistributionSpec lognormal(double log_mean, double log_sd);

    /// Member of `kind` with the given mean and squared coefficient of
    /// variation. Kinds with a fixed cv2 (exponential 1, deterministic 0)
    /// ignore the argument; uniform is placed on [0, 2 * mean].
    static DistributionSpec with_mean(DistributionKind kind, double mean, double cv2 = 1.0);

    DistributionKind kind() const { return kind_; }
    const std::vector<double>& params() const { return params_; }

    double sample(RandomStream& stream) const;

    double mean() const;
    double second_moment() const;
    double variance() const;
    double cv2() const;
    Moments moments() const { return {mean(), second_moment(), cv2()}; }

    /// False only for the deterministic point mass, which has no density.
    bool has_density() const { return kind_ != DistributionKind::deterministic; }

    double pdf(double t) const;
    double cdf(double t) const;
    double ccdf(double t) const;
    double quantile(double p) const;

    /// E[min(X, t)], the integral of the complementary cdf over [0, t].
    double limited_mean(double t) const;
    /// E[X; X <= t], the first moment restricted to [0, t].
    double partial_mean(double t) const;

    friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;

private:
    DistributionKind kind_;
    std::vector<double> params_;
};

/// Offered load E[service] / E[interarrival]; the queue is stable below 1.
inline double offered_load(const DistributionSpec& arrival, const DistributionSpec& service) {
    return service.mean() / arrival.mean();
}

}  // namespace gg1

#endif  // GG1_DISTRIBUTIONS_HPP
