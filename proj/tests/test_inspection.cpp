#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gg1/inspection.hpp"
#include "oracles.hpp"

using namespace gg1;

namespace {

struct Sampled {
    std::vector<double> age, residual, total;
};

Sampled inspect(const DistributionSpec& service, double lambda, std::size_t wanted, std::uint64_t seed) {
    SimulationOptions o;
    o.warmup = 50.0;
    o.horizon = static_cast<double>(wanted) / (0.2 * lambda * service.mean()) * 1.3;
    o.seed = seed;
    const auto run = simulate(DistributionSpec::exponential(lambda), service, o);
    auto stream = RandomStream::substream(seed, StreamId::inspection);
    const auto epochs = poisson_epochs(0.2, window_of(run.path), stream);
    Sampled out;
    for (const auto& s : sample_inspections(run.ledger, run.path, epochs)) {
        if (!s.busy) continue;
        out.age.push_back(s.age);
        out.residual.push_back(s.residual);
        out.total.push_back(s.total);
        if (out.age.size() == wanted) break;
    }
    REQUIRE(out.age.size() == wanted);
    return out;
}

}  // namespace

TEST_CASE("closed-form age, residual and bias") {
    CHECK(expected_age(DistributionSpec::exponential(1.0)) == doctest::Approx(1.0));
    CHECK(expected_age(DistributionSpec::deterministic(2.0)) == doctest::Approx(1.0));
    CHECK(expected_age(DistributionSpec::uniform(0.0, 2.0)) == doctest::Approx(2.0 / 3.0));
    for (const auto& d : {DistributionSpec::exponential(0.3), DistributionSpec::gamma(2.0, 0.4),
                          DistributionSpec::lognormal(0.1, 0.9)})
        CHECK(expected_residual(d) == expected_age(d));

    CHECK(bias(DistributionSpec::deterministic(3.0)) == 0.0);
    CHECK(bias(DistributionSpec::exponential(1.0)) == doctest::Approx(1.0));
    CHECK(bias(DistributionSpec::exponential(1.0)) > bias(DistributionSpec::uniform(0.0, 2.0)));
    CHECK(bias(DistributionSpec::uniform(0.0, 2.0)) > bias(DistributionSpec::deterministic(1.0)));
}

TEST_CASE("analytic densities") {
    const auto e = DistributionSpec::exponential(1.0);
    for (double t : {0.0, 0.5, 2.0, 7.0}) CHECK(analytic_pdfs(e, t).f_residual == doctest::Approx(std::exp(-t)));

    const auto d = DistributionSpec::deterministic(2.0);
    CHECK(analytic_pdfs(d, 0.0).f_age == 0.5);
    CHECK(analytic_pdfs(d, 1.99).f_age == 0.5);
    CHECK(analytic_pdfs(d, 2.5).f_age == 0.0);

    for (const auto& s : {e, DistributionSpec::uniform(0.0, 2.0), DistributionSpec::gamma(2.5, 0.4)})
        CHECK(analytic_pdfs(s, 0.0).f_observed_total == 0.0);

    CHECK_THROWS_AS(analytic_pdfs(e, -0.1), std::domain_error);
}

TEST_CASE("densities integrate to one") {
    const auto e = DistributionSpec::exponential(1.0);
    const auto u = DistributionSpec::uniform(0.0, 2.0);
    const auto g = DistributionSpec::gamma(2.0, 0.5);
    for (const auto& [spec, top] : {std::pair{e, 60.0}, std::pair{u, 2.0}, std::pair{g, 60.0}}) {
        const auto& s = spec;
        CHECK(oracle::simpson([&](double t) { return analytic_pdfs(s, t).f_age; }, 0.0, top) ==
              doctest::Approx(1.0).epsilon(1e-3));
        CHECK(oracle::simpson([&](double t) { return analytic_pdfs(s, t).f_residual; }, 0.0, top) ==
              doctest::Approx(1.0).epsilon(1e-3));
        CHECK(oracle::simpson([&](double t) { return analytic_pdfs(s, t).f_observed_total; }, 0.0, top) ==
              doctest::Approx(1.0).epsilon(1e-3));
    }
    const auto d = DistributionSpec::deterministic(2.0);
    CHECK(oracle::simpson([&](double t) { return analytic_pdfs(d, t).f_age; }, 0.0, 2.0 - 1e-12) ==
          doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("cdfs are the integrals of the densities") {
    const auto g = DistributionSpec::gamma(2.0, 0.5);
    for (double t : {0.2, 1.0, 3.0}) {
        CHECK(age_cdf(g, t) ==
              doctest::Approx(oracle::simpson([&](double s) { return analytic_pdfs(g, s).f_age; }, 0.0, t)).epsilon(1e-8));
        CHECK(observed_total_cdf(g, t) ==
              doctest::Approx(oracle::simpson([&](double s) { return analytic_pdfs(g, s).f_observed_total; }, 0.0, t))
                  .epsilon(1e-8));
    }
}

TEST_CASE("idle epochs and window bounds") {
    SimulationOptions o;
    o.horizon = 10.0;
    const auto run = simulate(DistributionSpec::deterministic(4.0), DistributionSpec::deterministic(1.0), o);
    // busy on [4,5) and [8,9)
    const std::vector<double> epochs = {1.0, 4.25, 8.5, 9.5};
    const auto s = sample_inspections(run.ledger, run.path, epochs);
    CHECK_FALSE(s[0].busy);
    CHECK(std::isnan(s[0].age));
    CHECK(s[1].busy);
    CHECK(s[1].age == doctest::Approx(0.25));
    CHECK(s[1].residual == doctest::Approx(0.75));
    CHECK(s[1].total == 1.0);
    CHECK(s[2].age == doctest::Approx(0.5));
    CHECK_FALSE(s[3].busy);

    const std::vector<double> outside = {10.5};
    CHECK_THROWS_AS(sample_inspections(run.ledger, run.path, outside), std::out_of_range);
}

TEST_CASE("poisson epochs stay in the window") {
    RandomStream r(4);
    const auto e = poisson_epochs(2.0, {10.0, 1010.0}, r);
    CHECK(e.size() == doctest::Approx(2000).epsilon(0.1));
    for (std::size_t i = 0; i < e.size(); ++i) {
        CHECK(e[i] >= 10.0);
        CHECK(e[i] <= 1010.0);
        if (i) CHECK(e[i] > e[i - 1]);
    }
    CHECK_THROWS_AS(poisson_epochs(0.0, {0.0, 1.0}, r), std::invalid_argument);
}

TEST_CASE("sample invariants") {
    const auto s = inspect(DistributionSpec::gamma(0.5, 2.0), 0.4, 2000, 6);
    // age and residual are clock differences, exact only up to the clock's ulp
    const double clock_ulp = std::numeric_limits<double>::epsilon() * 4e4;
    for (std::size_t i = 0; i < s.age.size(); ++i) {
        CHECK(s.age[i] >= 0.0);
        CHECK(s.residual[i] > 0.0);
        CHECK(std::abs(s.total[i] - (s.age[i] + s.residual[i])) <= 4.0 * clock_ulp);
    }
}

TEST_CASE("deterministic service: age is uniform on the service") {
    const auto s = inspect(DistributionSpec::deterministic(2.0), 0.25, 100000, 21);
    CHECK(std::abs(oracle::mean_of(s.age) - 1.0) < 0.02);
    for (double t : s.total) REQUIRE(t == 2.0);
    CHECK(ks_statistic(s.age, [](double t) { return std::clamp(t / 2.0, 0.0, 1.0); }) < 0.02);
}

TEST_CASE("exponential service: inspected duration is length biased") {
    const auto service = DistributionSpec::exponential(1.0);
    const auto s = inspect(service, 0.5, 100000, 22);
    CHECK(std::abs(oracle::mean_of(s.total) - 2.0) < 0.05);
    CHECK(oracle::mean_of(s.total) - service.mean() == doctest::Approx(bias(service)).epsilon(0.05));
    CHECK(ks_statistic(s.total, [&](double t) { return observed_total_cdf(service, t); }) < 0.02);
    CHECK(ks_two_sample(s.age, s.residual) < 0.02);
}

TEST_CASE("kolmogorov-smirnov distances") {
    const std::vector<double> grid = {0.1, 0.3, 0.5, 0.7, 0.9};
    CHECK(ks_statistic(grid, [](double t) { return std::clamp(t, 0.0, 1.0); }) == doctest::Approx(0.1));
    const std::vector<double> point = {2.0, 2.0, 2.0};
    CHECK(ks_statistic(point, [](double t) { return t >= 2.0 ? 1.0 : 0.0; }) == 0.0);
    CHECK(ks_two_sample(grid, grid) == 0.0);
    const std::vector<double> shifted = {1.1, 1.3};
    CHECK(ks_two_sample(grid, shifted) == 1.0);
    CHECK_THROWS_AS(ks_statistic({}, [](double) { return 0.0; }), std::invalid_argument);
}
