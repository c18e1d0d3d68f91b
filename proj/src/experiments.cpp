#include "gg1/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace gg1 {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

const std::set<std::string> known_keys = {"version", "arrival",     "service",  "mu_grid",         "discipline",
                                          "cost_weight", "penalty", "warmup",   "horizon",         "seeds",
                                          "output_dir",  "inspection_rate",      "workers"};

[[noreturn]] void config_error(const std::string& what) { throw std::invalid_argument("config: " + what); }

}  // namespace

void ExperimentConfig::validate() const {
    if (version != 1) config_error("unsupported version " + std::to_string(version));
    if (mu_grid.empty()) config_error("mu_grid is empty");
    for (std::size_t i = 0; i < mu_grid.size(); ++i) {
        if (!(mu_grid[i] > 0.0) || !std::isfinite(mu_grid[i])) config_error("mu_grid entries must be positive");
        if (i > 0 && !(mu_grid[i] > mu_grid[i - 1])) config_error("mu_grid must be strictly increasing");
    }
    if (seeds.empty()) config_error("seeds is empty");
    if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) config_error("seeds must be distinct");
    if (!(warmup >= 0.0)) config_error("warmup must be nonnegative");
    if (!(horizon > warmup)) config_error("horizon must exceed warmup");
    if (!(cost_weight > 0.0)) config_error("cost_weight must be positive");
    if (!(penalty.k0 >= 0.0)) config_error("penalty.k0 must be nonnegative");
    if (!(inspection_rate > 0.0)) config_error("inspection_rate must be positive");
    for (double mu : mu_grid) (void)service.at_rate(mu);
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) config_error("document must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!known_keys.count(key)) config_error("unknown key '" + key + "'");
    for (const char* key : {"version", "arrival", "service", "mu_grid", "horizon", "seeds"})
        if (!j.contains(key)) config_error(std::string("missing required key '") + key + "'");

    ExperimentConfig c;
    try {
        c.version = j.at("version").get<int>();
        c.arrival = distribution_from_json(j.at("arrival"));
        const auto& svc = j.at("service");
        c.service.kind = distribution_kind_from_string(svc.at("kind").get<std::string>());
        c.service.cv2 = svc.value("cv2", 1.0);
        c.mu_grid = j.at("mu_grid").get<std::vector<double>>();
        c.discipline = service_discipline_from_string(j.value("discipline", std::string("fcfs")));
        c.cost_weight = j.value("cost_weight", 1.0);
        if (j.contains("penalty")) {
            c.penalty.k0 = j.at("penalty").value("k0", 0.0);
            c.penalty.k1 = j.at("penalty").value("k1", 0.0);
        }
        c.warmup = j.value("warmup", 0.0);
        c.horizon = j.at("horizon").get<double>();
        c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        c.output_dir = j.value("output_dir", std::string("out"));
        c.inspection_rate = j.value("inspection_rate", 0.2);
        c.workers = j.value("workers", 0u);
    } catch (const json::exception& e) {
        config_error(e.what());
    }
    c.validate();
    return c;
}

json to_json(const ExperimentConfig& c) {
    json service = {{"kind", std::string(to_string(c.service.kind))}};
    if (c.service.kind == DistributionKind::gamma || c.service.kind == DistributionKind::lognormal)
        service["cv2"] = c.service.cv2;
    return {{"version", c.version},
            {"arrival", to_json(c.arrival)},
            {"service", service},
            {"mu_grid", c.mu_grid},
            {"discipline", std::string(to_string(c.discipline))},
            {"cost_weight", c.cost_weight},
            {"penalty", {{"k0", c.penalty.k0}, {"k1", c.penalty.k1}}},
            {"warmup", c.warmup},
            {"horizon", c.horizon},
            {"seeds", c.seeds},
            {"output_dir", c.output_dir},
            {"inspection_rate", c.inspection_rate},
            {"workers", c.workers}};
}

ExperimentConfig load_config(const std::filesystem::path& file) { return config_from_json(read_json(file)); }

int Surface::argmin() const {
    int best = -1;
    for (int i = 0; i < mean.size(); ++i)
        if (std::isfinite(mean(i)) && (best < 0 || mean(i) < mean(best))) best = i;
    return best;
}

Surface operator*(const Surface& s, double factor) {
    if (!(factor > 0.0)) throw std::invalid_argument("surface scaling factor must be positive");
    Surface out = s;
    out.mean *= factor;
    out.std_error *= factor;
    out.samples *= factor;
    return out;
}

Surface operator+(const Surface& s, double offset) {
    Surface out = s;
    out.mean.array() += offset;
    out.samples.array() += offset;
    return out;
}

Surface surface_from_samples(std::vector<double> grid, Eigen::MatrixXd samples) {
    Surface s;
    s.grid = std::move(grid);
    const auto points = static_cast<Eigen::Index>(s.grid.size());
    if (samples.rows() != points) throw std::invalid_argument("surface_from_samples: rows must match grid");
    s.mean = Eigen::VectorXd::Constant(points, nan);
    s.std_error = Eigen::VectorXd::Constant(points, nan);
    for (Eigen::Index i = 0; i < points; ++i) {
        const auto row = samples.row(i);
        const auto finite = row.array().isFinite();
        const auto n = finite.count();
        if (n == 0) continue;
        const double m = finite.select(row.array(), 0.0).sum() / static_cast<double>(n);
        s.mean(i) = m;
        if (n == 1) {
            s.std_error(i) = 0.0;
            continue;
        }
        const double ss = finite.select(row.array() - m, 0.0).square().sum();
        s.std_error(i) = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    }
    s.samples = std::move(samples);
    return s;
}

const std::vector<std::string>& surface_metrics() {
    static const std::vector<std::string> names = {"H_bar_t", "H_bar_n", "R_bar_n_obs", "R_bar_n_act"};
    return names;
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        task(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
    }
    if (failure) std::rethrow_exception(failure);
}

ResponseSurface run_sweep(const ExperimentConfig& config) {
    config.validate();
    const std::size_t points = config.mu_grid.size();
    const std::size_t seeds = config.seeds.size();

    ResponseSurface out;
    out.grid = config.mu_grid;
    out.seeds = config.seeds;
    out.reports.assign(points, {});
    out.stable.assign(points, false);
    for (std::size_t i = 0; i < points; ++i) {
        out.stable[i] = offered_load(config.arrival, config.service.at_rate(config.mu_grid[i])) < 1.0;
        if (out.stable[i]) out.reports[i].resize(seeds);
    }

    parallel_for(points * seeds, config.workers, [&](std::size_t task) {
        const std::size_t i = task / seeds;
        const std::size_t s = task % seeds;
        if (!out.stable[i]) return;
        SimulationOptions opts;
        opts.discipline = config.discipline;
        opts.warmup = config.warmup;
        opts.horizon = config.horizon;
        opts.seed = config.seeds[s];
        const auto run = simulate(config.arrival, config.service.at_rate(config.mu_grid[i]), opts);
        out.reports[i][s] = compute_report(run.path, run.ledger, config.cost_weight);
    });

    const double lambda = config.arrival_rate();
    using Extract = double (*)(const MetricsReport&);
    const std::vector<std::pair<Extract, bool>> extract = {
        {[](const MetricsReport& r) { return r.H_bar_t; }, true},
        {[](const MetricsReport& r) { return r.H_bar_n; }, false},
        {[](const MetricsReport& r) { return r.R_bar_n_obs; }, false},
        {[](const MetricsReport& r) { return r.R_bar_n_act; }, false},
    };
    const auto& names = surface_metrics();
    for (std::size_t m = 0; m < names.size(); ++m) {
        Eigen::MatrixXd samples = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(points),
                                                            static_cast<Eigen::Index>(seeds), nan);
        for (std::size_t i = 0; i < points; ++i) {
            if (!out.stable[i]) continue;
            const double wear = config.penalty(config.mu_grid[i]);
            const double added = extract[m].second ? wear : wear / lambda;
            for (std::size_t s = 0; s < seeds; ++s)
                samples(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s)) =
                    extract[m].first(out.reports[i][s]) + added;
        }
        out.surfaces[names[m]] = surface_from_samples(out.grid, std::move(samples));
    }
    return out;
}

EquivalenceVerdict check_equivalence(const Surface& a, const Surface& b, int tolerance_steps, int bootstrap_resamples,
                                     std::uint64_t bootstrap_seed) {
    if (a.grid != b.grid) throw std::invalid_argument("check_equivalence: surfaces are on different grids");
    EquivalenceVerdict v;
    v.argmin_a = a.argmin();
    v.argmin_b = b.argmin();
    v.equivalent = v.argmin_a >= 0 && v.argmin_b >= 0 && std::abs(v.argmin_a - v.argmin_b) <= tolerance_steps;

    const auto columns = a.samples.cols();
    if (columns == 0 || columns != b.samples.cols() || bootstrap_resamples <= 0) {
        v.bootstrap_agreement = v.equivalent ? 1.0 : 0.0;
        return v;
    }

    RandomStream rng(bootstrap_seed);
    const auto resampled_argmin = [](const Eigen::MatrixXd& samples, const std::vector<Eigen::Index>& pick) {
        int best = -1;
        double best_value = 0.0;
        for (Eigen::Index i = 0; i < samples.rows(); ++i) {
            double sum = 0.0;
            int n = 0;
            for (auto c : pick)
                if (std::isfinite(samples(i, c))) {
                    sum += samples(i, c);
                    ++n;
                }
            if (n == 0) continue;
            const double m = sum / n;
            if (best < 0 || m < best_value) {
                best = static_cast<int>(i);
                best_value = m;
            }
        }
        return best;
    };
    int agree = 0;
    std::vector<Eigen::Index> pick(static_cast<std::size_t>(columns));
    for (int r = 0; r < bootstrap_resamples; ++r) {
        for (auto& p : pick) p = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(columns)));
        const int ia = resampled_argmin(a.samples, pick);
        const int ib = resampled_argmin(b.samples, pick);
        if (ia >= 0 && ib >= 0 && std::abs(ia - ib) <= tolerance_steps) ++agree;
    }
    v.bootstrap_agreement = static_cast<double>(agree) / bootstrap_resamples;
    return v;
}

std::vector<std::filesystem::path> emit_reports(const ExperimentConfig& config, const ResponseSurface& surface,
                                                const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);
    std::vector<std::filesystem::path> written;

    std::ostringstream csv;
    csv << "mu,metric,mean,stderr\n";
    for (std::size_t i = 0; i < surface.grid.size(); ++i)
        for (const auto& name : surface_metrics()) {
            auto it = surface.surfaces.find(name);
            if (it == surface.surfaces.end()) continue;
            const auto k = static_cast<Eigen::Index>(i);
            csv << format_number(surface.grid[i]) << ',' << name << ',' << format_number(it->second.mean(k)) << ','
                << format_number(it->second.std_error(k)) << '\n';
        }
    written.push_back(directory / "surface.csv");
    write_text(written.back(), csv.str());

    std::ostringstream jsonl;
    for (std::size_t i = 0; i < surface.reports.size(); ++i)
        for (std::size_t s = 0; s < surface.reports[i].size(); ++s) {
            json line = to_json(surface.reports[i][s]);
            line["mu"] = surface.grid[i];
            line["seed"] = surface.seeds[s];
            jsonl << line.dump() << '\n';
        }
    written.push_back(directory / "reports.jsonl");
    write_text(written.back(), jsonl.str());

    written.push_back(directory / "config.echo.json");
    write_text(written.back(), to_json(config).dump(2) + "\n");
    return written;
}

MdpConfig mdp_config_from_json(const json& j) {
    static const std::set<std::string> keys = {"version", "arrival_rate", "mu_grid",  "truncation",     "cost_weight",
                                               "penalty", "method",       "tol",      "max_iterations", "distinguished"};
    if (!j.is_object()) config_error("document must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!keys.count(key)) config_error("unknown key '" + key + "'");
    for (const char* key : {"version", "arrival_rate", "mu_grid"})
        if (!j.contains(key)) config_error(std::string("missing required key '") + key + "'");

    MdpConfig c;
    try {
        c.version = j.at("version").get<int>();
        c.arrival_rate = j.at("arrival_rate").get<double>();
        c.mu_grid = j.at("mu_grid").get<std::vector<double>>();
        c.truncation = j.value("truncation", 200);
        c.cost_weight = j.value("cost_weight", 1.0);
        if (j.contains("penalty")) {
            c.penalty.k0 = j.at("penalty").value("k0", 0.0);
            c.penalty.k1 = j.at("penalty").value("k1", 0.0);
        }
        c.method = solver_method_from_string(j.value("method", std::string("policy-iteration")));
        c.tol = j.value("tol", 1e-10);
        c.max_iterations = j.value("max_iterations", 1'000'000);
        c.distinguished = j.value("distinguished", 0);
    } catch (const json::exception& e) {
        config_error(e.what());
    }
    if (c.version != 1) config_error("unsupported version " + std::to_string(c.version));
    if (!(c.tol > 0.0)) config_error("tol must be positive");
    if (c.max_iterations < 1) config_error("max_iterations must be positive");
    if (c.distinguished < 0 || c.distinguished > c.truncation) config_error("distinguished must be a state in 0..truncation");
    return c;
}

MdpConfig load_mdp_config(const std::filesystem::path& file) { return mdp_config_from_json(read_json(file)); }

MdpInstance<double> build_instance(const MdpConfig& c) {
    try {
        return build_instance<double>(c.arrival_rate, c.mu_grid, c.truncation, c.cost_weight, c.penalty);
    } catch (const std::invalid_argument& e) {
        config_error(e.what());
    }
}

}  // namespace gg1
