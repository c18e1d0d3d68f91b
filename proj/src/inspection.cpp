#include "gg1/inspection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gg1 {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

struct ServiceInterval {
    double start;
    double end;
    double duration;
};

}  // namespace

std::vector<InspectionSample> sample_inspections(const CustomerLedger& ledger, const Trajectory& path,
                                                 std::span<const double> epochs) {
    std::vector<ServiceInterval> services;
    services.reserve(ledger.customers.size());
    for (const auto& c : ledger.customers) {
        if (!c.service_start) continue;
        const double end = c.departure_time ? *c.departure_time : std::numeric_limits<double>::infinity();
        services.push_back({*c.service_start, end, c.service_duration.value_or(end - *c.service_start)});
    }
    std::sort(services.begin(), services.end(),
              [](const ServiceInterval& a, const ServiceInterval& b) { return a.start < b.start; });

    std::vector<InspectionSample> out;
    out.reserve(epochs.size());
    for (double t : epochs) {
        if (t < path.initial_time || t > path.final_time)
            throw std::out_of_range("sample_inspections: epoch outside the observation window");
        InspectionSample s{t, false, nan, nan, nan};
        if (path.count_at(t) > 0) {
            auto it = std::upper_bound(services.begin(), services.end(), t,
                                       [](double x, const ServiceInterval& iv) { return x < iv.start; });
            if (it == services.begin() || !(t < std::prev(it)->end))
                throw std::logic_error("sample_inspections: ledger has no service covering a busy epoch");
            const auto& iv = *std::prev(it);
            if (!std::isfinite(iv.end))
                throw std::logic_error("sample_inspections: in-progress service has no recorded departure");
            s.busy = true;
            s.age = t - iv.start;
            s.residual = iv.end - t;
            // the sampled duration, so point masses stay exact
            s.total = iv.duration;
        }
        out.push_back(s);
    }
    return out;
}

std::vector<double> poisson_epochs(double rate, Window window, RandomStream& stream) {
    if (!(rate > 0.0)) throw std::invalid_argument("poisson_epochs: rate must be positive");
    std::vector<double> epochs;
    double t = window.initial_time + stream.exponential(rate);
    while (t <= window.final_time) {
        epochs.push_back(t);
        t += stream.exponential(rate);
    }
    return epochs;
}

double expected_age(const DistributionSpec& service) { return service.second_moment() / (2.0 * service.mean()); }

double expected_residual(const DistributionSpec& service) { return expected_age(service); }

double bias(const DistributionSpec& service) { return service.variance() / service.mean(); }

InspectionDensities analytic_pdfs(const DistributionSpec& service, double t) {
    if (t < 0.0) throw std::domain_error("analytic_pdfs: negative duration");
    const double rate = 1.0 / service.mean();
    InspectionDensities d;
    d.f_observed_total = rate * t * service.pdf(t);
    d.f_age = rate * service.ccdf(t);
    d.f_residual = d.f_age;
    return d;
}

double age_cdf(const DistributionSpec& service, double t) { return service.limited_mean(t) / service.mean(); }

double observed_total_cdf(const DistributionSpec& service, double t) {
    return service.partial_mean(t) / service.mean();
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_statistic: no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < samples.size()) {
        // ties are handled as one jump so step cdfs compare correctly
        std::size_t j = i;
        while (j < samples.size() && samples[j] == samples[i]) ++j;
        const double v = samples[i];
        const double below = cdf(std::nextafter(v, -std::numeric_limits<double>::infinity()));
        d = std::max({d, std::abs(static_cast<double>(j) / n - cdf(v)), std::abs(static_cast<double>(i) / n - below)});
        i = j;
    }
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

}  // namespace gg1
