#ifndef GG1_INSPECTION_HPP
#define GG1_INSPECTION_HPP

#include <functional>
#include <span>
#include <vector>

#include "gg1/distributions.hpp"
#include "gg1/metrics.hpp"
#include "gg1/simulator.hpp"

namespace gg1 {

/// State of the in-progress service at an inspection epoch. Age is measured
/// from service start. All durations are NaN when the server is idle.
struct InspectionSample {
    double inspect_time = 0.0;
    bool busy = false;
    double age = 0.0;
    double residual = 0.0;
    double total = 0.0;
};

/// Inspects the service in progress at each epoch. Epochs must lie in the
/// observation window (std::out_of_range otherwise).
std::vector<InspectionSample> sample_inspections(const CustomerLedger& ledger, const Trajectory& path,
                                                 std::span<const double> epochs);

/// Poisson inspection epochs over the window, independent of the queue.
std::vector<double> poisson_epochs(double rate, Window window, RandomStream& stream);

/// E[S^2] / (2 E[S]).
double expected_age(const DistributionSpec& service);
/// Equal to expected_age for every service distribution.
double expected_residual(const DistributionSpec& service);
/// Length bias of the inspected service, Var[S] / E[S].
double bias(const DistributionSpec& service);

struct InspectionDensities {
    double f_observed_total = 0.0;  ///< t f(t) / E[S]; zero for point masses
    double f_age = 0.0;             ///< (1 - F(t)) / E[S]
    double f_residual = 0.0;        ///< equal to f_age
};

InspectionDensities analytic_pdfs(const DistributionSpec& service, double t);

/// Cdf of the age (and residual): E[min(S, t)] / E[S].
double age_cdf(const DistributionSpec& service, double t);
/// Cdf of the length-biased inspected duration: E[S; S <= t] / E[S].
double observed_total_cdf(const DistributionSpec& service, double t);

/// One-sample Kolmogorov-Smirnov distance against a continuous or
/// step cdf; sorts a copy of the samples.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
double ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace gg1

#endif  // GG1_INSPECTION_HPP
