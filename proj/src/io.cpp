#include "gg1/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gg1 {

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string optional_field(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

std::ofstream open_for_write(const std::filesystem::path& file) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + file.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& file) {
    out.flush();
    if (!out) throw std::runtime_error("write to '" + file.string() + "' failed");
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

json to_json(const DistributionSpec& spec) {
    return {{"kind", std::string(to_string(spec.kind()))}, {"params", spec.params()}};
}

DistributionSpec distribution_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("params"))
        throw std::invalid_argument("distribution must be an object with 'kind' and 'params'");
    return {distribution_kind_from_string(j.at("kind").get<std::string>()), j.at("params").get<std::vector<double>>()};
}

json to_json(const MetricsReport& r) {
    json j;
    j["cost_weight"] = r.cost_weight;
    j["H_total"] = number_or_null(r.H_total);
    j["R_obs_total"] = number_or_null(r.R_obs_total);
    j["R_act_total"] = number_or_null(r.R_act_total);
    j["R_un_initial"] = number_or_null(r.R_un_initial);
    j["R_un_final"] = number_or_null(r.R_un_final);
    j["H_bar_t"] = number_or_null(r.H_bar_t);
    j["R_bar_t_obs"] = number_or_null(r.R_bar_t_obs);
    j["R_bar_t_act"] = number_or_null(r.R_bar_t_act);
    j["H_bar_n"] = number_or_null(r.H_bar_n);
    j["R_bar_n_obs"] = number_or_null(r.R_bar_n_obs);
    j["R_bar_n_act"] = number_or_null(r.R_bar_n_act);
    j["n_bar_t"] = number_or_null(r.n_bar_t);
    j["lambda_hat"] = number_or_null(r.lambda_hat);
    j["N_total"] = r.N_total;
    j["window"] = {r.window.initial_time, r.window.final_time};
    return j;
}

json to_json(const MdpInstance<double>& m) {
    std::vector<double> grid(m.service_rates.data(), m.service_rates.data() + m.service_rates.size());
    return {{"lambda", m.arrival_rate},
            {"mu_grid", grid},
            {"truncation", m.truncation},
            {"states", m.states()},
            {"cost_weight", m.cost_weight},
            {"uniformization", m.uniformization},
            {"penalty", {{"k0", m.penalty.k0}, {"k1", m.penalty.k1}}},
            {"stable", m.stable}};
}

json to_json(const MdpSolution<double>& s, const MdpInstance<double>& m) {
    std::vector<int> policy(s.policy.data(), s.policy.data() + s.policy.size());
    std::vector<double> rates;
    for (int a : policy) rates.push_back(m.service_rates(a));
    std::vector<double> values(s.relative_values.data(), s.relative_values.data() + s.relative_values.size());
    json j = {{"method", std::string(to_string(s.method))},
              {"policy", policy},
              {"policy_rates", rates},
              {"J", values},
              {"rho_bar", s.rho_bar},
              {"cost_rate", cost_rate(m, s.rho_bar)},
              {"iterations", s.iterations},
              {"residual", s.residual},
              {"distinguished_state", s.distinguished}};
    if (m.arrival_rate > 0.0) j["implied_R_bar_n"] = implied_response(s, m);
    return j;
}

void write_customer_csv(const CustomerLedger& ledger, const std::filesystem::path& file) {
    auto out = open_for_write(file);
    out << "id,t_A,svc_start,t_mu,t_D,pre_window\n";
    for (const auto& c : ledger.customers)
        out << c.id << ',' << format_number(c.arrival_time) << ',' << optional_field(c.service_start) << ','
            << optional_field(c.service_duration) << ',' << optional_field(c.departure_time) << ','
            << (c.pre_window ? 1 : 0) << '\n';
    finish(out, file);
}

void write_path_csv(const Trajectory& path, const std::filesystem::path& file) {
    auto out = open_for_write(file);
    out << "tau,n\n";
    out << format_number(path.initial_time) << ',' << path.initial_count << '\n';
    for (const auto& e : path.events) out << format_number(e.time) << ',' << e.count << '\n';
    finish(out, file);
}

void write_cycles_csv(const RenewalCycles& cycles, std::span<const double> rewards, std::span<const double> counts,
                      const std::filesystem::path& file) {
    if (rewards.size() != cycles.cycles.size() || counts.size() != cycles.cycles.size())
        throw std::invalid_argument("write_cycles_csv: per-cycle values not aligned with cycles");
    auto out = open_for_write(file);
    out << "cycle_index,busy_len,idle_len,reward,count\n";
    for (std::size_t k = 0; k < cycles.cycles.size(); ++k) {
        const auto& c = cycles.cycles[k];
        out << k << ',' << format_number(c.busy_length()) << ',' << format_number(c.idle_length()) << ','
            << format_number(rewards[k]) << ',' << format_number(counts[k]) << '\n';
    }
    finish(out, file);
}

void write_inspections_csv(std::span<const InspectionSample> samples, const std::filesystem::path& file) {
    auto out = open_for_write(file);
    out << "epoch,busy,age,residual,total\n";
    for (const auto& s : samples) {
        out << format_number(s.inspect_time) << ',' << (s.busy ? 1 : 0) << ',';
        if (s.busy)
            out << format_number(s.age) << ',' << format_number(s.residual) << ',' << format_number(s.total);
        else
            out << ",,";
        out << '\n';
    }
    finish(out, file);
}

void write_pdf_csv(const DistributionSpec& service, std::span<const double> grid, const std::filesystem::path& file) {
    auto out = open_for_write(file);
    out << "t,f_observed_total,f_age,f_residual\n";
    for (double t : grid) {
        const auto d = analytic_pdfs(service, t);
        out << format_number(t) << ',' << format_number(d.f_observed_total) << ',' << format_number(d.f_age) << ','
            << format_number(d.f_residual) << '\n';
    }
    finish(out, file);
}

void write_text(const std::filesystem::path& file, const std::string& content) {
    auto out = open_for_write(file);
    out << content;
    finish(out, file);
}

json read_json(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open '" + file.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("'" + file.string() + "': " + e.what());
    }
}

}  // namespace gg1
