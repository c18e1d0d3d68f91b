#ifndef GG1_METRICS_HPP
#define GG1_METRICS_HPP

#include <cstdint>
#include <optional>

#include "gg1/simulator.hpp"

namespace gg1 {

struct Window {
    double initial_time = 0.0;
    double final_time = 0.0;
    double length() const { return final_time - initial_time; }
};

inline Window window_of(const Trajectory& path) { return {path.initial_time, path.final_time}; }
inline Window window_of(const CustomerLedger& ledger) { return {ledger.initial_time, ledger.final_time}; }

/// Totals and long-run averages over one observation window.
///
/// Suffix _t is per unit time, _n per customer. Actual-response fields are
/// NaN when the ledger was not completed past the window end. Count averages
/// are 0 when no customer was seen.
struct MetricsReport {
    double cost_weight = 1.0;
    double H_total = 0.0;
    double R_obs_total = 0.0;
    double R_act_total = 0.0;
    double R_un_initial = 0.0;
    double R_un_final = 0.0;
    double H_bar_t = 0.0;
    double R_bar_t_obs = 0.0;
    double R_bar_t_act = 0.0;
    double H_bar_n = 0.0;
    double R_bar_n_obs = 0.0;
    double R_bar_n_act = 0.0;
    double n_bar_t = 0.0;
    double lambda_hat = 0.0;
    std::uint64_t N_total = 0;
    Window window;
};

/// c times the integral of the queue length over [initial_time, up_to],
/// integrated from the path alone.
double holding_cost(const Trajectory& path, double cost_weight, std::optional<double> up_to = std::nullopt);

/// Sum over customers of c * (min(departure, T_f) - max(arrival, T_i)),
/// computed from the ledger alone. Pending customers are clamped at T_f.
double observed_response(const CustomerLedger& ledger, Window window, double cost_weight);

struct ActualResponse {
    double total = 0.0;
    double unobserved_initial = 0.0;
    double unobserved_final = 0.0;
};

/// Full sojourn totals; throws std::logic_error if any departure is unknown.
ActualResponse actual_response(const CustomerLedger& ledger, double cost_weight);

double time_average(double total, Window window);
double count_average(double total, std::uint64_t customers);

/// Customers seen in the window: present at its start plus arrivals in it.
std::uint64_t customers_seen(const CustomerLedger& ledger);

MetricsReport compute_report(const Trajectory& path, const CustomerLedger& ledger, double cost_weight);

enum class ResponseVariant { actual, observed };

/// |H_bar_t - lambda * R_bar_n| / H_bar_t using the supplied rate, or
/// lambda_hat when none is given. Meaningless for unstable runs.
double verify_theorem(const MetricsReport& report, std::optional<double> lambda = std::nullopt,
                      ResponseVariant variant = ResponseVariant::actual);

/// Three routes to the time-average queue length.
struct LittlesChain {
    double n_bar_from_H = 0.0;   ///< H_bar_t / c
    double n_bar_from_Rn = 0.0;  ///< lambda * R_bar_n / c
    double n_bar_direct = 0.0;   ///< path integral over window length
    double max_relative_gap = 0.0;
};

LittlesChain littles_chain(const MetricsReport& report, double lambda);

/// R_bar_n inferred from a measured H_bar_t and a known arrival rate.
double indirect_estimate_Rn(double H_bar_t, double lambda_known);

}  // namespace gg1

#endif  // GG1_METRICS_HPP
