#include "gg1/simulator.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>

namespace gg1 {

std::string_view to_string(ServiceDiscipline discipline) {
    switch (discipline) {
    case ServiceDiscipline::fcfs: return "fcfs";
    case ServiceDiscipline::lcfs: return "lcfs";
    case ServiceDiscipline::random_order: return "random";
    }
    return "unknown";
}

ServiceDiscipline service_discipline_from_string(std::string_view name) {
    for (auto d : {ServiceDiscipline::fcfs, ServiceDiscipline::lcfs, ServiceDiscipline::random_order})
        if (to_string(d) == name) return d;
    throw std::invalid_argument("unknown service discipline '" + std::string(name) + "'");
}

int Trajectory::count_at(double t) const {
    auto it = std::upper_bound(events.begin(), events.end(), t,
                               [](double x, const PathEvent& e) { return x < e.time; });
    return it == events.begin() ? initial_count : std::prev(it)->count;
}

std::size_t Trajectory::arrival_count() const {
    std::size_t up = 0;
    int prev = initial_count;
    for (const auto& e : events) {
        if (e.count > prev) ++up;
        prev = e.count;
    }
    return up;
}

namespace {

/// Buffer of waiting customer indices ordered by the discipline.
class Buffer {
public:
    Buffer(ServiceDiscipline discipline, RandomStream stream) : discipline_(discipline), stream_(stream) {}

    bool empty() const { return waiting_.empty(); }
    void push(std::size_t customer) { waiting_.push_back(customer); }

    std::size_t pop() {
        std::size_t chosen = 0;
        switch (discipline_) {
        case ServiceDiscipline::fcfs:
            chosen = waiting_.front();
            waiting_.pop_front();
            break;
        case ServiceDiscipline::lcfs:
            chosen = waiting_.back();
            waiting_.pop_back();
            break;
        case ServiceDiscipline::random_order: {
            const std::size_t k = stream_.index(waiting_.size());
            chosen = waiting_[k];
            waiting_[k] = waiting_.back();
            waiting_.pop_back();
            break;
        }
        }
        return chosen;
    }

private:
    ServiceDiscipline discipline_;
    RandomStream stream_;
    std::deque<std::size_t> waiting_;
};

}  // namespace

SimulationResult simulate(const DistributionSpec& arrival, const DistributionSpec& service,
                          const SimulationOptions& options) {
    if (!(options.horizon > 0.0)) throw std::invalid_argument("simulate: horizon must be positive");
    if (!(options.warmup >= 0.0)) throw std::invalid_argument("simulate: warmup must be nonnegative");

    constexpr double inf = std::numeric_limits<double>::infinity();
    const double t_begin = options.warmup;
    const double t_end = options.warmup + options.horizon;

    RandomStream arrivals_rng = RandomStream::substream(options.seed, StreamId::arrivals);
    RandomStream services_rng = RandomStream::substream(options.seed, StreamId::services);
    Buffer buffer(options.discipline, RandomStream::substream(options.seed, StreamId::discipline));

    SimulationResult result;
    SimulationStats& stats = result.stats;
    stats.offered_load = offered_load(arrival, service);
    stats.stable = stats.offered_load < 1.0;

    Trajectory& path = result.path;
    path.initial_time = t_begin;
    path.final_time = t_end;
    path.seed = options.seed;

    std::vector<CustomerRecord> all;
    std::optional<std::size_t> in_service;
    double next_arrival = arrival.sample(arrivals_rng);
    double next_departure = inf;
    int n = 0;
    bool window_open = false;
    int tracked = 0;  // customers arrived by t_end and not yet departed

    auto start_service = [&](std::size_t k, double now) {
        auto& c = all[k];
        const double d = service.sample(services_rng);
        c.service_start = now;
        c.service_duration = d;
        next_departure = now + d;
        c.departure_time.reset();
        in_service = k;
    };

    while (true) {
        const bool arrival_next = next_arrival <= next_departure;
        const double now = arrival_next ? next_arrival : next_departure;

        if (!window_open && now >= t_begin) {
            path.initial_count = n;
            window_open = true;
        }
        if (now > t_end && (!options.complete_pending || tracked == 0)) break;

        if (++stats.events > options.event_cap) {
            stats.clock = now;
            stats.in_system = n;
            std::ostringstream os;
            os << "event cap of " << options.event_cap << " exceeded at t=" << now << " with " << n
               << " customers in system (offered load " << stats.offered_load << ")";
            throw EventCapExceeded(os.str(), stats);
        }

        if (arrival_next) {
            ++n;
            ++stats.arrivals;
            CustomerRecord c;
            c.id = all.size();
            c.arrival_time = now;
            all.push_back(c);
            if (now <= t_end) ++tracked;
            if (!in_service)
                start_service(all.size() - 1, now);
            else
                buffer.push(all.size() - 1);
            next_arrival = now + arrival.sample(arrivals_rng);
        } else {
            --n;
            ++stats.departures;
            auto& c = all[*in_service];
            c.departure_time = now;
            if (c.arrival_time <= t_end) --tracked;
            in_service.reset();
            next_departure = inf;
            if (!buffer.empty()) start_service(buffer.pop(), now);
        }

        if (now >= t_begin && now <= t_end) path.events.push_back({now, n});
        stats.clock = now;
    }
    stats.in_system = n;

    CustomerLedger& ledger = result.ledger;
    ledger.initial_time = t_begin;
    ledger.final_time = t_end;
    ledger.completed = options.complete_pending;
    for (auto& c : all) {
        if (c.arrival_time > t_end) break;
        if (c.departure_time && *c.departure_time < t_begin) continue;
        c.pre_window = c.arrival_time < t_begin;
        ledger.customers.push_back(c);
    }
    return result;
}

std::vector<double> lindley_fcfs(std::span<const double> arrival_times, std::span<const double> service_durations) {
    if (arrival_times.size() != service_durations.size())
        throw std::invalid_argument("lindley_fcfs: arrival and service sequences differ in length");
    std::vector<double> delay(arrival_times.size());
    for (std::size_t j = 1; j < arrival_times.size(); ++j) {
        if (arrival_times[j] < arrival_times[j - 1])
            throw std::invalid_argument("lindley_fcfs: arrival times must be nondecreasing");
        // (A_{j-1} + W_{j-1}) + S_{j-1} is the previous departure
        const double previous_departure = (arrival_times[j - 1] + delay[j - 1]) + service_durations[j - 1];
        delay[j] = std::max(0.0, previous_departure - arrival_times[j]);
    }
    return delay;
}

}  // namespace gg1
