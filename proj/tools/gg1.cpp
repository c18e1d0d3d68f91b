#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

#include "criteria.hpp"
#include "gg1/experiments.hpp"
#include "gg1/inspection.hpp"
#include "gg1/io.hpp"
#include "gg1/renewal.hpp"

namespace fs = std::filesystem;
using namespace gg1;

namespace {

// Exit statuses: 1 runtime or config failure, 2 usage, 3 acceptance failure.
struct Failure : std::runtime_error {
    Failure(std::string kind, const std::string& what, int status)
        : std::runtime_error(what), kind(std::move(kind)), status(status) {}
    std::string kind;
    int status;
};

int report_error(const std::string& kind, const std::string& message, int status) {
    std::cerr << json{{"error", {{"type", kind}, {"message", message}, {"exit_code", status}}}}.dump() << std::endl;
    return status;
}

struct Overrides {
    std::string config;
    std::string out;
    std::vector<std::uint64_t> seeds;
    std::optional<double> horizon;
};

ExperimentConfig experiment_config(const Overrides& o) {
    auto c = load_config(o.config);
    if (!o.seeds.empty()) c.seeds = o.seeds;
    if (o.horizon) c.horizon = *o.horizon;
    if (!o.out.empty()) c.output_dir = o.out;
    c.validate();
    return c;
}

std::string run_name(std::size_t point, std::uint64_t seed) {
    return "mu" + std::to_string(point) + "_seed" + std::to_string(seed);
}

SimulationResult replicate(const ExperimentConfig& c, double mu, std::uint64_t seed) {
    SimulationOptions o;
    o.discipline = c.discipline;
    o.warmup = c.warmup;
    o.horizon = c.horizon;
    o.seed = seed;
    return simulate(c.arrival, c.service.at_rate(mu), o);
}

void simulate_verb(const Overrides& overrides) {
    const auto c = experiment_config(overrides);
    const fs::path out = c.output_dir;
    std::string jsonl;
    for (std::size_t i = 0; i < c.mu_grid.size(); ++i)
        for (auto seed : c.seeds) {
            const double mu = c.mu_grid[i];
            const auto run = replicate(c, mu, seed);
            const auto dir = out / run_name(i, seed);
            const auto report = compute_report(run.path, run.ledger, c.cost_weight);
            write_customer_csv(run.ledger, dir / "customer.csv");
            write_path_csv(run.path, dir / "path.csv");
            const auto cycles = detect_cycles(run.path);
            write_cycles_csv(cycles, cycle_holding_costs(run.path, cycles, c.cost_weight),
                             cycle_arrival_counts(run.path, cycles), dir / "cycles.csv");
            auto j = to_json(report);
            write_text(dir / "report.json", j.dump(2) + "\n");
            j["mu"] = mu;
            j["seed"] = seed;
            jsonl += j.dump() + "\n";
            std::cout << run_name(i, seed) << ": H_bar_t=" << format_number(report.H_bar_t)
                      << " R_bar_n_act=" << format_number(report.R_bar_n_act)
                      << " lambda_hat=" << format_number(report.lambda_hat) << "\n";
        }
    write_text(out / "reports.jsonl", jsonl);
    write_text(out / "config.echo.json", to_json(c).dump(2) + "\n");
}

void sweep_verb(const Overrides& overrides) {
    const auto c = experiment_config(overrides);
    const auto surface = run_sweep(c);
    emit_reports(c, surface, c.output_dir);
    for (const auto& name : surface_metrics()) {
        const auto& s = surface.surfaces.at(name);
        const int i = s.argmin();
        std::cout << name << ": argmin mu="
                  << (i < 0 ? std::string("none") : format_number(c.mu_grid[static_cast<std::size_t>(i)])) << "\n";
    }
}

void inspect_verb(const Overrides& overrides) {
    const auto c = experiment_config(overrides);
    const fs::path out = c.output_dir;
    std::string jsonl;
    for (std::size_t i = 0; i < c.mu_grid.size(); ++i) {
        const double mu = c.mu_grid[i];
        const auto service = c.service.at_rate(mu);
        std::vector<double> grid;
        const double top = 4.0 / mu;
        for (int k = 0; k <= 400; ++k) grid.push_back(top * k / 400.0);
        write_pdf_csv(service, grid, out / ("pdf_mu" + std::to_string(i) + ".csv"));
        for (auto seed : c.seeds) {
            const auto run = replicate(c, mu, seed);
            auto stream = RandomStream::substream(seed, StreamId::inspection);
            const auto epochs = poisson_epochs(c.inspection_rate, window_of(run.path), stream);
            const auto samples = sample_inspections(run.ledger, run.path, epochs);
            write_inspections_csv(samples, out / run_name(i, seed) / "inspections.csv");

            std::vector<double> age, residual, total;
            for (const auto& s : samples)
                if (s.busy) {
                    age.push_back(s.age);
                    residual.push_back(s.residual);
                    total.push_back(s.total);
                }
            auto mean = [](const std::vector<double>& v) {
                double sum = 0.0;
                for (double x : v) sum += x;
                return v.empty() ? std::nan("") : sum / static_cast<double>(v.size());
            };
            json j = {{"mu", mu},
                      {"seed", seed},
                      {"epochs", samples.size()},
                      {"busy_epochs", age.size()},
                      {"mean_age", mean(age)},
                      {"mean_residual", mean(residual)},
                      {"mean_total", mean(total)},
                      {"expected_age", expected_age(service)},
                      {"bias", bias(service)}};
            if (!age.empty()) {
                j["ks_age"] = ks_statistic(age, [&](double t) { return age_cdf(service, t); });
                j["ks_total"] = ks_statistic(total, [&](double t) { return observed_total_cdf(service, t); });
            }
            for (auto& [key, value] : j.items())
                if (value.is_number_float() && !std::isfinite(value.get<double>())) value = nullptr;
            jsonl += j.dump() + "\n";
        }
    }
    write_text(out / "inspections.jsonl", jsonl);
    write_text(out / "config.echo.json", to_json(c).dump(2) + "\n");
}

void mdp_solve_verb(const std::string& config, const std::string& out) {
    const auto c = load_mdp_config(config);
    const auto m = build_instance(c);
    const auto solution = solve_optimal(m, c.method, c.tol, c.max_iterations, c.distinguished);
    const json j = {{"instance", to_json(m)}, {"solution", to_json(solution, m)}};
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        write_text(fs::path(out) / "mdp_solution.json", j.dump(2) + "\n");
        std::cout << "rho_bar=" << format_number(solution.rho_bar)
                  << " cost_rate=" << format_number(cost_rate(m, solution.rho_bar)) << "\n";
    }
}

void verify_verb(const Overrides& o) {
    acceptance::SuiteOptions options;
    if (!o.seeds.empty()) options.master_seed = o.seeds.front();
    options.out_dir = o.out.empty() ? fs::path("acceptance_reports") : fs::path(o.out);
    std::vector<int> failed;
    for (const auto& r : acceptance::run_suite(options, std::cout))
        if (!r.passed) failed.push_back(r.id);
    if (!failed.empty()) {
        std::ostringstream ids;
        for (std::size_t i = 0; i < failed.size(); ++i) ids << (i ? "," : "") << failed[i];
        throw Failure("acceptance_failed", "criteria failed: " + ids.str(), 3);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"G/G/1 simulation and analysis toolkit"};
    app.require_subcommand(1);

    Overrides o;
    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", o.config, "Experiment config (JSON)")->check(CLI::ExistingFile);
        if (config_required) opt->required();
        sub->add_option("--out", o.out, "Output directory");
        sub->add_option("--seeds", o.seeds, "Seeds, replacing the config list")->delimiter(',');
        sub->add_option("--horizon", o.horizon, "Window end, replacing the config value");
    };
    auto* simulate_cmd = app.add_subcommand("simulate", "Single runs: customer, path, cycle tables and reports");
    auto* sweep_cmd = app.add_subcommand("sweep", "Response-surface sweep over the mu grid");
    auto* inspect_cmd = app.add_subcommand("inspect", "Inspection-epoch samples and analytic densities");
    auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance suite");
    add_common(simulate_cmd, true);
    add_common(sweep_cmd, true);
    add_common(inspect_cmd, true);
    verify_cmd->add_option("--out", o.out, "Report directory");
    verify_cmd->add_option("--seeds", o.seeds, "Master seed (first value)")->delimiter(',');

    auto* mdp_cmd = app.add_subcommand("mdp", "Service-rate control");
    mdp_cmd->require_subcommand(1);
    auto* solve_cmd = mdp_cmd->add_subcommand("solve", "Solve the average-cost MDP");
    solve_cmd->add_option("--config", o.config, "MDP config (JSON)")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--out", o.out, "Output directory; prints to stdout when absent");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("usage", e.what(), 2);
    }

    try {
        if (*simulate_cmd) simulate_verb(o);
        else if (*sweep_cmd) sweep_verb(o);
        else if (*inspect_cmd) inspect_verb(o);
        else if (*verify_cmd) verify_verb(o);
        else if (*solve_cmd) mdp_solve_verb(o.config, o.out);
    } catch (const Failure& e) {
        return report_error(e.kind, e.what(), e.status);
    } catch (const std::invalid_argument& e) {
        return report_error("invalid_input", e.what(), 1);
    } catch (const std::exception& e) {
        return report_error("runtime", e.what(), 1);
    }
    return 0;
}
