#include "gg1/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gg1/summation.hpp"

namespace gg1 {

double holding_cost(const Trajectory& path, double cost_weight, std::optional<double> up_to) {
    const double stop = up_to.value_or(path.final_time);
    if (stop < path.initial_time || stop > path.final_time)
        throw std::out_of_range("holding_cost: up_to lies outside the observation window");

    CompensatedSum<> area;
    double previous_time = path.initial_time;
    int previous_count = path.initial_count;
    for (const auto& e : path.events) {
        if (e.time > stop) break;
        area += previous_count * (e.time - previous_time);
        previous_time = e.time;
        previous_count = e.count;
    }
    area += previous_count * (stop - previous_time);
    return cost_weight * area.value();
}

double observed_response(const CustomerLedger& ledger, Window window, double cost_weight) {
    CompensatedSum<> total;
    for (const auto& c : ledger.customers) {
        if (c.arrival_time > window.final_time) continue;
        const double leave = std::min(c.departure_time.value_or(window.final_time), window.final_time);
        const double enter = std::max(c.arrival_time, window.initial_time);
        if (leave > enter) total += leave - enter;
    }
    return cost_weight * total.value();
}

ActualResponse actual_response(const CustomerLedger& ledger, double cost_weight) {
    CompensatedSum<> total, initial, final;
    for (const auto& c : ledger.customers) {
        if (!c.departure_time)
            throw std::logic_error("actual_response: customer " + std::to_string(c.id) +
                                   " has no departure; simulate with complete_pending");
        total += *c.departure_time - c.arrival_time;
        if (c.arrival_time < ledger.initial_time) initial += ledger.initial_time - c.arrival_time;
        if (*c.departure_time > ledger.final_time) final += *c.departure_time - ledger.final_time;
    }
    return {cost_weight * total.value(), cost_weight * initial.value(), cost_weight * final.value()};
}

double time_average(double total, Window window) {
    if (!(window.length() > 0.0)) throw std::invalid_argument("time_average: empty window");
    return total / window.length();
}

double count_average(double total, std::uint64_t customers) {
    if (customers == 0) throw std::invalid_argument("count_average: no customers");
    return total / static_cast<double>(customers);
}

std::uint64_t customers_seen(const CustomerLedger& ledger) {
    return static_cast<std::uint64_t>(std::count_if(ledger.customers.begin(), ledger.customers.end(),
                                                    [&](const CustomerRecord& c) {
                                                        return c.arrival_time <= ledger.final_time;
                                                    }));
}

MetricsReport compute_report(const Trajectory& path, const CustomerLedger& ledger, double cost_weight) {
    MetricsReport r;
    r.cost_weight = cost_weight;
    r.window = window_of(path);
    r.H_total = holding_cost(path, cost_weight);
    r.R_obs_total = observed_response(ledger, r.window, cost_weight);
    if (ledger.completed) {
        const auto act = actual_response(ledger, cost_weight);
        r.R_act_total = act.total;
        r.R_un_initial = act.unobserved_initial;
        r.R_un_final = act.unobserved_final;
    } else {
        r.R_act_total = r.R_un_initial = r.R_un_final = std::numeric_limits<double>::quiet_NaN();
    }
    r.N_total = customers_seen(ledger);

    r.H_bar_t = time_average(r.H_total, r.window);
    r.R_bar_t_obs = time_average(r.R_obs_total, r.window);
    r.R_bar_t_act = time_average(r.R_act_total, r.window);
    if (r.N_total > 0) {
        r.H_bar_n = count_average(r.H_total, r.N_total);
        r.R_bar_n_obs = count_average(r.R_obs_total, r.N_total);
        r.R_bar_n_act = count_average(r.R_act_total, r.N_total);
    }
    r.n_bar_t = time_average(holding_cost(path, 1.0), r.window);
    r.lambda_hat = static_cast<double>(r.N_total) / r.window.length();
    return r;
}

double verify_theorem(const MetricsReport& report, std::optional<double> lambda, ResponseVariant variant) {
    const double rate = lambda.value_or(report.lambda_hat);
    const double per_customer = variant == ResponseVariant::actual ? report.R_bar_n_act : report.R_bar_n_obs;
    const double gap = std::abs(report.H_bar_t - rate * per_customer);
    if (report.H_bar_t == 0.0) return gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return gap / report.H_bar_t;
}

LittlesChain littles_chain(const MetricsReport& report, double lambda) {
    LittlesChain chain;
    chain.n_bar_from_H = report.H_bar_t / report.cost_weight;
    chain.n_bar_from_Rn = lambda * report.R_bar_n_act / report.cost_weight;
    chain.n_bar_direct = report.n_bar_t;

    const double values[] = {chain.n_bar_from_H, chain.n_bar_from_Rn, chain.n_bar_direct};
    for (double a : values)
        for (double b : values) {
            const double scale = std::max(std::abs(a), std::abs(b));
            if (scale > 0.0) chain.max_relative_gap = std::max(chain.max_relative_gap, std::abs(a - b) / scale);
        }
    return chain;
}

double indirect_estimate_Rn(double H_bar_t, double lambda_known) {
    if (!(lambda_known > 0.0)) throw std::invalid_argument("indirect_estimate_Rn: arrival rate must be positive");
    return H_bar_t / lambda_known;
}

}  // namespace gg1
