#include "gg1/mdp.hpp"

#include <deque>
#include <sstream>

namespace gg1 {

SimulationResult simulate_policy(const MdpInstance<double>& instance, const Policy& policy,
                                 const SimulationOptions& options) {
    if (policy.size() != instance.states()) throw std::invalid_argument("simulate_policy: policy size mismatch");
    if (!(options.horizon > 0.0)) throw std::invalid_argument("simulate_policy: horizon must be positive");

    const double t_begin = options.warmup;
    const double t_end = options.warmup + options.horizon;
    const double lambda = instance.arrival_rate;
    RandomStream rng = RandomStream::substream(options.seed, StreamId::control);

    SimulationResult result;
    result.stats.offered_load = lambda / instance.service_rates.maxCoeff();
    result.stats.stable = instance.stable;
    Trajectory& path = result.path;
    path.initial_time = t_begin;
    path.final_time = t_end;
    path.seed = options.seed;

    std::vector<CustomerRecord> all;
    std::deque<std::size_t> queue;  // head is in service
    double now = 0.0;
    bool window_open = false;
    int tracked = 0;

    while (true) {
        const int n = static_cast<int>(queue.size());
        const double mu = n > 0 ? instance.service_rates(policy(std::min(n, instance.truncation))) : 0.0;
        const double rate = lambda + mu;
        if (!(rate > 0.0)) throw std::invalid_argument("simulate_policy: no events possible");
        now += rng.exponential(rate);
        const bool is_arrival = rng.uniform() * rate < lambda;

        if (!window_open && now >= t_begin) {
            path.initial_count = n;
            window_open = true;
        }
        if (now > t_end && tracked == 0) break;
        if (++result.stats.events > options.event_cap) {
            result.stats.clock = now;
            result.stats.in_system = n;
            std::ostringstream os;
            os << "event cap of " << options.event_cap << " exceeded at t=" << now;
            throw EventCapExceeded(os.str(), result.stats);
        }

        if (is_arrival) {
            CustomerRecord c;
            c.id = all.size();
            c.arrival_time = now;
            if (queue.empty()) c.service_start = now;
            all.push_back(c);
            queue.push_back(all.size() - 1);
            if (now <= t_end) ++tracked;
            ++result.stats.arrivals;
        } else {
            auto& c = all[queue.front()];
            c.departure_time = now;
            c.service_duration = now - *c.service_start;
            if (c.arrival_time <= t_end) --tracked;
            queue.pop_front();
            if (!queue.empty()) all[queue.front()].service_start = now;
            ++result.stats.departures;
        }
        if (now >= t_begin && now <= t_end) path.events.push_back({now, static_cast<int>(queue.size())});
        result.stats.clock = now;
    }
    result.stats.in_system = static_cast<int>(queue.size());

    CustomerLedger& ledger = result.ledger;
    ledger.initial_time = t_begin;
    ledger.final_time = t_end;
    ledger.completed = true;
    for (auto& c : all) {
        if (c.arrival_time > t_end) break;
        if (c.departure_time && *c.departure_time < t_begin) continue;
        c.pre_window = c.arrival_time < t_begin;
        ledger.customers.push_back(c);
    }
    return result;
}

}  // namespace gg1
