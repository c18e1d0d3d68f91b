#include "gg1/renewal.hpp"

#include <algorithm>
#include <stdexcept>

#include "gg1/summation.hpp"

namespace gg1 {

RenewalCycles detect_cycles(const Trajectory& path) {
    RenewalCycles out;

    struct Mark {
        double time;
        bool renewal;  // 0 -> 1, otherwise 1 -> 0
    };
    std::vector<Mark> marks;
    int prev = path.initial_count;
    for (const auto& e : path.events) {
        if (prev == 0 && e.count == 1) marks.push_back({e.time, true});
        if (prev == 1 && e.count == 0) marks.push_back({e.time, false});
        prev = e.count;
    }

    auto busy_time_between = [&](double from, double to) {
        double busy = 0.0;
        double t = from;
        bool busy_now = path.count_at(from) > 0;
        for (const auto& m : marks) {
            if (m.time < from) continue;
            if (m.time >= to) break;
            if (busy_now) busy += m.time - t;
            t = m.time;
            busy_now = m.renewal;
        }
        if (busy_now) busy += to - t;
        return busy;
    };

    std::vector<std::size_t> renewals;
    for (std::size_t i = 0; i < marks.size(); ++i)
        if (marks[i].renewal) renewals.push_back(i);

    if (renewals.empty()) {
        if (path.length() > 0.0)
            out.partial.push_back({path.initial_time, path.final_time,
                                   busy_time_between(path.initial_time, path.final_time)});
        return out;
    }

    const double first = marks[renewals.front()].time;
    if (first > path.initial_time)
        out.partial.push_back({path.initial_time, first, busy_time_between(path.initial_time, first)});

    for (std::size_t k = 0; k + 1 < renewals.size(); ++k) {
        const std::size_t i = renewals[k];
        const std::size_t j = renewals[k + 1];
        // the mark right after a renewal is the emptying that ends its busy period
        RenewalCycle cycle;
        cycle.busy_start = marks[i].time;
        cycle.busy_end = marks[i + 1].time;
        cycle.idle_end = marks[j].time;
        out.cycles.push_back(cycle);
    }

    const double last = marks[renewals.back()].time;
    if (path.final_time > last || out.cycles.empty())
        out.partial.push_back({last, path.final_time, busy_time_between(last, path.final_time)});
    return out;
}

std::vector<double> cycle_holding_costs(const Trajectory& path, const RenewalCycles& cycles, double cost_weight) {
    std::vector<double> rewards(cycles.cycles.size(), 0.0);
    auto it = path.events.begin();
    for (std::size_t k = 0; k < cycles.cycles.size(); ++k) {
        const auto& cyc = cycles.cycles[k];
        it = std::lower_bound(it, path.events.end(), cyc.busy_start,
                              [](const PathEvent& e, double t) { return e.time < t; });
        CompensatedSum<> area;
        double t = cyc.busy_start;
        int n = 0;
        for (; it != path.events.end() && it->time < cyc.idle_end; ++it) {
            area += n * (it->time - t);
            t = it->time;
            n = it->count;
        }
        area += n * (cyc.idle_end - t);
        rewards[k] = cost_weight * area.value();
    }
    return rewards;
}

std::vector<double> cycle_arrival_counts(const Trajectory& path, const RenewalCycles& cycles) {
    std::vector<double> counts(cycles.cycles.size(), 0.0);
    if (cycles.cycles.empty()) return counts;
    std::size_t k = 0;
    int prev = path.initial_count;
    for (const auto& e : path.events) {
        const bool arrival = e.count > prev;
        prev = e.count;
        while (k < cycles.cycles.size() && e.time >= cycles.cycles[k].idle_end) ++k;
        if (k == cycles.cycles.size()) break;
        if (arrival && e.time >= cycles.cycles[k].busy_start) counts[k] += 1.0;
    }
    return counts;
}

std::vector<double> cycle_response_totals(const CustomerLedger& ledger, const RenewalCycles& cycles,
                                          double cost_weight) {
    std::vector<double> totals(cycles.cycles.size(), 0.0);
    std::vector<CompensatedSum<>> sums(cycles.cycles.size());
    for (const auto& c : ledger.customers) {
        auto it = std::upper_bound(cycles.cycles.begin(), cycles.cycles.end(), c.arrival_time,
                                   [](double t, const RenewalCycle& cyc) { return t < cyc.busy_start; });
        if (it == cycles.cycles.begin()) continue;
        --it;
        if (c.arrival_time >= it->idle_end) continue;
        sums[static_cast<std::size_t>(it - cycles.cycles.begin())] += c.response_time();
    }
    for (std::size_t k = 0; k < sums.size(); ++k) totals[k] = cost_weight * sums[k].value();
    return totals;
}

namespace {

void require_cycles(const RenewalCycles& cycles, std::size_t aligned, const char* who) {
    if (cycles.cycles.empty()) throw std::invalid_argument(std::string(who) + ": no complete renewal cycles");
    if (aligned != cycles.cycles.size())
        throw std::invalid_argument(std::string(who) + ": per-cycle values not aligned with cycles");
}

}  // namespace

double renewal_time_average(const RenewalCycles& cycles, std::span<const double> rewards) {
    require_cycles(cycles, rewards.size(), "renewal_time_average");
    CompensatedSum<> reward, length;
    for (std::size_t k = 0; k < rewards.size(); ++k) {
        reward += rewards[k];
        length += cycles.cycles[k].length();
    }
    return reward.value() / length.value();
}

double renewal_count_average(const RenewalCycles& cycles, std::span<const double> rewards,
                             std::span<const double> counts) {
    require_cycles(cycles, rewards.size(), "renewal_count_average");
    require_cycles(cycles, counts.size(), "renewal_count_average");
    CompensatedSum<> reward, count;
    for (std::size_t k = 0; k < rewards.size(); ++k) {
        reward += rewards[k];
        count += counts[k];
    }
    if (count.value() <= 0.0) throw std::invalid_argument("renewal_count_average: zero total count");
    return reward.value() / count.value();
}

double utilization(const RenewalCycles& cycles) {
    if (cycles.cycles.empty()) {
        // no renewal at all: an all-idle window has zero utilisation
        const bool idle = !cycles.partial.empty() &&
                          std::all_of(cycles.partial.begin(), cycles.partial.end(),
                                      [](const PathFragment& f) { return f.busy_time == 0.0; });
        if (idle) return 0.0;
        throw std::invalid_argument("utilization: no complete renewal cycles");
    }
    CompensatedSum<> busy, length;
    for (const auto& c : cycles.cycles) {
        busy += c.busy_length();
        length += c.length();
    }
    return busy.value() / length.value();
}

UnobservedFinalEstimate expected_unobserved_final(double rho, double mean_service, double cv2_service, double n_bar) {
    const double in_service = rho * mean_service * (cv2_service + 1.0) / 2.0;
    return {in_service + (n_bar - 1.0) * mean_service, in_service + std::max(n_bar - 1.0, 0.0) * mean_service};
}

}  // namespace gg1
