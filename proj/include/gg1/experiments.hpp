#ifndef GG1_EXPERIMENTS_HPP
#define GG1_EXPERIMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gg1/distributions.hpp"
#include "gg1/io.hpp"
#include "gg1/mdp.hpp"
#include "gg1/metrics.hpp"
#include "gg1/simulator.hpp"

namespace gg1 {

/// Service distributions of one kind indexed by their mean rate mu.
struct ServiceFamily {
    DistributionKind kind = DistributionKind::exponential;
    /// Squared coefficient of variation for gamma and lognormal kinds.
    double cv2 = 1.0;

    DistributionSpec at_rate(double mu) const { return DistributionSpec::with_mean(kind, 1.0 / mu, cv2); }
};

struct ExperimentConfig {
    int version = 1;
    DistributionSpec arrival = DistributionSpec::exponential(1.0);
    ServiceFamily service;
    std::vector<double> mu_grid;
    ServiceDiscipline discipline = ServiceDiscipline::fcfs;
    double cost_weight = 1.0;
    WearPenalty<double> penalty;
    double warmup = 0.0;
    double horizon = 1.0;
    std::vector<std::uint64_t> seeds;
    std::string output_dir = "out";
    /// Poisson rate of inspection epochs used by the `inspect` verb.
    double inspection_rate = 0.2;
    /// 0 picks the hardware concurrency.
    unsigned workers = 0;

    /// Throws std::invalid_argument naming the first violated constraint.
    void validate() const;
    double arrival_rate() const { return 1.0 / arrival.mean(); }
};

ExperimentConfig config_from_json(const json& j);
json to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& file);

/// One metric over a sweep grid: per-point means, standard errors, and the
/// per-seed values they came from (grid points x seeds).
struct Surface {
    std::vector<double> grid;
    Eigen::VectorXd mean;
    Eigen::VectorXd std_error;
    Eigen::MatrixXd samples;

    /// Index of the smallest finite mean; -1 if none.
    int argmin() const;
};

/// Constant positive product and additive constant transforms.
Surface operator*(const Surface& s, double factor);
Surface operator+(const Surface& s, double offset);

/// Builds a surface from a grid x seeds table, ignoring NaN entries.
Surface surface_from_samples(std::vector<double> grid, Eigen::MatrixXd samples);

/// Names of the per-sweep surfaces, in output order.
const std::vector<std::string>& surface_metrics();

struct ResponseSurface {
    std::vector<double> grid;
    std::map<std::string, Surface> surfaces;
    /// reports[i][s]: grid point i, seed s. Unstable points hold no reports.
    std::vector<std::vector<MetricsReport>> reports;
    std::vector<std::uint64_t> seeds;
    std::vector<bool> stable;
};

/// Runs every (mu, seed) pair and aggregates the penalised surfaces.
///
/// Time averages carry penalty(mu) per unit time and count averages carry
/// penalty(mu) / lambda per customer, so surfaces related by the arrival
/// rate stay related after the penalty is added. Unstable grid points are
/// skipped and left as NaN.
ResponseSurface run_sweep(const ExperimentConfig& config);

struct EquivalenceVerdict {
    bool equivalent = false;
    int argmin_a = -1;
    int argmin_b = -1;
    /// Fraction of paired seed bootstrap resamples whose argmins also agree.
    double bootstrap_agreement = 0.0;
};

/// Argmins of the two surfaces coincide within `tolerance_steps` grid steps.
/// Throws std::invalid_argument on mismatched grids.
EquivalenceVerdict check_equivalence(const Surface& a, const Surface& b, int tolerance_steps = 1,
                                     int bootstrap_resamples = 200, std::uint64_t bootstrap_seed = 0x5eed);

/// Writes surface.csv, reports.jsonl and config.echo.json into `directory`.
std::vector<std::filesystem::path> emit_reports(const ExperimentConfig& config, const ResponseSurface& surface,
                                                const std::filesystem::path& directory);

/// Runs task(i) for i in [0, count) on up to `workers` threads. Results must
/// be written to preallocated slots so aggregation order is fixed.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task);

/// Input for `mdp solve`: a uniformised M/M/1 control problem.
struct MdpConfig {
    int version = 1;
    double arrival_rate = 0.0;
    std::vector<double> mu_grid;
    int truncation = 200;
    double cost_weight = 1.0;
    WearPenalty<double> penalty;
    SolverMethod method = SolverMethod::policy_iteration;
    double tol = 1e-10;
    int max_iterations = 1'000'000;
    int distinguished = 0;
};

MdpConfig mdp_config_from_json(const json& j);
MdpConfig load_mdp_config(const std::filesystem::path& file);
MdpInstance<double> build_instance(const MdpConfig& config);

}  // namespace gg1

#endif  // GG1_EXPERIMENTS_HPP
