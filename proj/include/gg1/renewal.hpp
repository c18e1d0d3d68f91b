#ifndef GG1_RENEWAL_HPP
#define GG1_RENEWAL_HPP

#include <span>
#include <vector>

#include "gg1/simulator.hpp"

namespace gg1 {

/// Busy period [busy_start, busy_end) followed by idle period
/// [busy_end, idle_end). busy_start and idle_end are consecutive arrivals
/// into an empty system.
struct RenewalCycle {
    double busy_start = 0.0;
    double busy_end = 0.0;
    double idle_end = 0.0;

    double length() const { return idle_end - busy_start; }
    double busy_length() const { return busy_end - busy_start; }
    double idle_length() const { return idle_end - busy_end; }
};

/// Leading or trailing stretch of the window not bounded by two renewal points.
struct PathFragment {
    double start = 0.0;
    double end = 0.0;
    double busy_time = 0.0;
};

struct RenewalCycles {
    std::vector<RenewalCycle> cycles;   ///< complete cycles only
    std::vector<PathFragment> partial;  ///< excluded from the estimators
};

RenewalCycles detect_cycles(const Trajectory& path);

/// Reward per cycle: c times the queue-length integral over the cycle.
std::vector<double> cycle_holding_costs(const Trajectory& path, const RenewalCycles& cycles, double cost_weight);
/// Customers arriving inside each cycle.
std::vector<double> cycle_arrival_counts(const Trajectory& path, const RenewalCycles& cycles);
/// c times the summed sojourn of customers arriving inside each cycle.
std::vector<double> cycle_response_totals(const CustomerLedger& ledger, const RenewalCycles& cycles,
                                          double cost_weight);

/// Ratio of summed rewards to summed cycle lengths.
double renewal_time_average(const RenewalCycles& cycles, std::span<const double> rewards);
/// Ratio of summed rewards to summed per-cycle counts.
double renewal_count_average(const RenewalCycles& cycles, std::span<const double> rewards,
                             std::span<const double> counts);
/// Summed busy time over summed cycle length.
double utilization(const RenewalCycles& cycles);

struct UnobservedFinalEstimate {
    double verbatim = 0.0;  ///< rho*m*(cv2+1)/2 + (n_bar-1)*m
    double guarded = 0.0;   ///< same with (n_bar-1) floored at 0
};

/// Steady-state expected response still owed at a random stopping epoch by
/// the customer in service and those waiting behind it.
UnobservedFinalEstimate expected_unobserved_final(double rho, double mean_service, double cv2_service, double n_bar);

}  // namespace gg1

#endif  // GG1_RENEWAL_HPP
