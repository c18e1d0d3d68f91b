#ifndef GG1_SIMULATOR_HPP
#define GG1_SIMULATOR_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "gg1/distributions.hpp"

namespace gg1 {

enum class ServiceDiscipline { fcfs, lcfs, random_order };

std::string_view to_string(ServiceDiscipline discipline);
ServiceDiscipline service_discipline_from_string(std::string_view name);

/// One customer's passage through the system. Pending times are empty.
struct CustomerRecord {
    std::uint64_t id = 0;
    double arrival_time = 0.0;
    std::optional<double> service_start;
    std::optional<double> service_duration;
    std::optional<double> departure_time;
    /// Present in the system at the start of the observation window.
    bool pre_window = false;

    double response_time() const { return departure_time.value() - arrival_time; }
};

/// Customers relevant to an observation window [initial_time, final_time]:
/// those present at its start and those arriving inside it.
struct CustomerLedger {
    double initial_time = 0.0;
    double final_time = 0.0;
    /// True when customers still present at final_time were followed to
    /// their actual departures.
    bool completed = false;
    std::vector<CustomerRecord> customers;
};

struct PathEvent {
    double time;
    int count;
};

/// Piecewise-constant queue length over [initial_time, final_time].
///
/// Each event changes the count by exactly one. Timestamps are
/// nondecreasing; equal timestamps only arise from simultaneous arrival and
/// departure under deterministic kinds, recorded arrival first.
struct Trajectory {
    double initial_time = 0.0;
    double final_time = 0.0;
    int initial_count = 0;
    std::vector<PathEvent> events;
    std::uint64_t seed = 0;

    double length() const { return final_time - initial_time; }
    /// Queue length holding on (t, next event); right-continuous.
    int count_at(double t) const;
    /// Up-steps inside the window.
    std::size_t arrival_count() const;
};

struct SimulationOptions {
    ServiceDiscipline discipline = ServiceDiscipline::fcfs;
    double warmup = 0.0;
    double horizon = 1.0;
    std::uint64_t seed = 0;
    std::uint64_t event_cap = 100'000'000;
    /// Keep simulating past the window end until every customer present at
    /// final_time has departed. Those extra events never enter the path.
    bool complete_pending = true;
};

struct SimulationStats {
    std::uint64_t events = 0;
    std::uint64_t arrivals = 0;
    std::uint64_t departures = 0;
    double clock = 0.0;
    int in_system = 0;
    double offered_load = 0.0;
    bool stable = true;
};

struct SimulationResult {
    Trajectory path;
    CustomerLedger ledger;
    SimulationStats stats;
};

/// Thrown when a replication exceeds its event cap, usually an unstable load.
class EventCapExceeded : public std::runtime_error {
public:
    EventCapExceeded(const std::string& what, SimulationStats partial)
        : std::runtime_error(what), partial_(partial) {}
    const SimulationStats& partial() const { return partial_; }

private:
    SimulationStats partial_;
};

/// Event-driven single-server queue started empty at time 0 and observed over
/// [warmup, warmup + horizon]. Service durations are drawn at service start
/// from their own sub-stream, so the queue-length path does not depend on
/// the discipline.
SimulationResult simulate(const DistributionSpec& arrival, const DistributionSpec& service,
                          const SimulationOptions& options);

/// FCFS buffer delays from the Lindley recursion
///   W_j = max(0, W_{j-1} + S_{j-1} - (A_j - A_{j-1})),  W_0 = 0.
std::vector<double> lindley_fcfs(std::span<const double> arrival_times, std::span<const double> service_durations);

}  // namespace gg1

#endif  // GG1_SIMULATOR_HPP
