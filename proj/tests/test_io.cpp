#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gg1/io.hpp"

using namespace gg1;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "gg1_test_io";
    fs::create_directories(dir);
    return dir / name;
}

std::vector<std::string> lines_of(const fs::path& file) {
    std::ifstream in(file);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

SimulationResult small_run(bool complete = true) {
    SimulationOptions o;
    o.warmup = 3.5;
    o.horizon = 4.0;
    o.complete_pending = complete;
    return simulate(DistributionSpec::deterministic(1.0), DistributionSpec::deterministic(1.5), o);
}

}  // namespace

TEST_CASE("metrics report uses the documented field names") {
    const auto run = small_run();
    const auto j = to_json(compute_report(run.path, run.ledger, 2.0));
    for (const char* key : {"cost_weight", "H_total", "R_obs_total", "R_act_total", "R_un_initial", "R_un_final",
                            "H_bar_t", "R_bar_t_obs", "R_bar_t_act", "H_bar_n", "R_bar_n_obs", "R_bar_n_act", "n_bar_t",
                            "lambda_hat", "N_total", "window"})
        CHECK(j.contains(key));
    CHECK(j.size() == 16);
    CHECK(j["window"] == json::array({3.5, 7.5}));
    CHECK(j["cost_weight"] == 2.0);

    const auto open = small_run(false);
    const auto k = to_json(compute_report(open.path, open.ledger, 1.0));
    CHECK(k["R_act_total"].is_null());
    CHECK(k["R_bar_n_act"].is_null());
    CHECK(k["H_total"].is_number());
}

TEST_CASE("customer and path csv layouts") {
    const auto run = small_run(false);
    const auto customers = scratch("customer.csv");
    write_customer_csv(run.ledger, customers);
    const auto c = lines_of(customers);
    REQUIRE(c.size() == run.ledger.customers.size() + 1);
    CHECK(c[0] == "id,t_A,svc_start,t_mu,t_D,pre_window");
    // arrivals 1..7, services of 1.5; window [3.5, 7.5]
    CHECK(c[1] == "1,2,2.5,1.5,4,1");
    CHECK(c.back().substr(c.back().size() - 3) == ",,0");

    const auto path = scratch("path.csv");
    write_path_csv(run.path, path);
    const auto p = lines_of(path);
    CHECK(p[0] == "tau,n");
    CHECK(p[1] == "3.5," + std::to_string(run.path.initial_count));
    CHECK(p.size() == run.path.events.size() + 2);
}

TEST_CASE("cycle, inspection and density csv layouts") {
    RenewalCycles cycles;
    cycles.cycles = {{0.0, 1.0, 3.0}, {3.0, 3.5, 4.0}};
    const std::vector<double> rewards = {1.25, 0.5}, counts = {2, 1};
    const auto f = scratch("cycles.csv");
    write_cycles_csv(cycles, rewards, counts, f);
    const auto l = lines_of(f);
    CHECK(l[0] == "cycle_index,busy_len,idle_len,reward,count");
    CHECK(l[1] == "0,1,2,1.25,2");
    CHECK(l[2] == "1,0.5,0.5,0.5,1");
    const std::vector<double> short_counts = {1};
    CHECK_THROWS_AS(write_cycles_csv(cycles, rewards, short_counts, f), std::invalid_argument);

    const std::vector<InspectionSample> samples = {{1.0, false, NAN, NAN, NAN}, {2.0, true, 0.25, 0.75, 1.0}};
    const auto g = scratch("inspections.csv");
    write_inspections_csv(samples, g);
    const auto m = lines_of(g);
    CHECK(m[0] == "epoch,busy,age,residual,total");
    CHECK(m[1] == "1,0,,,");
    CHECK(m[2] == "2,1,0.25,0.75,1");

    const std::vector<double> grid = {0.0, 1.0};
    const auto h = scratch("pdf.csv");
    write_pdf_csv(DistributionSpec::exponential(1.0), grid, h);
    const auto n = lines_of(h);
    CHECK(n[0] == "t,f_observed_total,f_age,f_residual");
    CHECK(n[1] == "0,0,1,1");
}

TEST_CASE("numbers print in shortest round-trip form") {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5}) CHECK(std::stod(format_number(x)) == x);
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("distribution specs round-trip through json") {
    for (const auto& d : {DistributionSpec::exponential(0.5), DistributionSpec::uniform(0.0, 2.0),
                          DistributionSpec::lognormal(-0.3, 0.4)})
        CHECK(distribution_from_json(to_json(d)) == d);
    CHECK_THROWS_AS(distribution_from_json(json{{"kind", "exponential"}}), std::invalid_argument);
    CHECK_THROWS_AS(distribution_from_json(json{{"kind", "exponential"}, {"params", {-1.0}}}), std::invalid_argument);
    CHECK_THROWS_AS(distribution_from_json(json{{"kind", "weibull"}, {"params", {1.0}}}), std::invalid_argument);
}

TEST_CASE("mdp instance and solution serialise") {
    const std::vector<double> grid = {0.5, 1.0};
    const auto m = build_instance<double>(0.4, grid, 10);
    const auto s = solve_optimal(m, SolverMethod::policy_iteration);
    const auto ji = to_json(m);
    CHECK(ji["states"] == 11);
    CHECK(ji["mu_grid"] == json::array({0.5, 1.0}));
    const auto js = to_json(s, m);
    CHECK(js["policy"].size() == 11);
    CHECK(js["J"].size() == 11);
    CHECK(js["method"] == "policy-iteration");
    CHECK(js.contains("rho_bar"));
    CHECK(js.contains("implied_R_bar_n"));
}

TEST_CASE("io failures name the path") {
    const auto blocker = scratch("not_a_dir");
    { std::ofstream(blocker) << "x"; }
    try {
        write_text(blocker / "out.txt", "data");
        FAIL("expected an exception");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("not_a_dir") != std::string::npos);
    }
    try {
        read_json(scratch("missing.json"));
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("missing.json") != std::string::npos);
    }
    const auto bad = scratch("bad.json");
    { std::ofstream(bad) << "{ not json"; }
    CHECK_THROWS_AS(read_json(bad), std::runtime_error);
}
