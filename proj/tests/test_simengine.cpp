/*
   Copyright 2026 The m2mpower Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <doctest.h>

#include <cmath>
#include <vector>

#include "m2m/errors.hpp"
#include "m2m/simengine.hpp"
#include "m2m/stats.hpp"
#include "m2m/units.hpp"

using namespace m2m;

namespace {

SweepSpec small_spec(std::vector<std::string> names, std::vector<double> lambdas, int trials) {
    SweepSpec spec;
    for (const auto& n : names) spec.strategies.push_back(StrategySpec::parse(n));
    spec.lambda_grid = std::move(lambdas);
    spec.slice = ResourceSlice{100e3, 1.0, 500.0};
    spec.env = LinkEnv::defaults();
    spec.n_trials = trials;
    spec.seed = 3;
    return spec;
}

}  // namespace

TEST_CASE("percentile is nearest-rank") {
    const std::vector<double> v{5, 1, 4, 2, 3};
    CHECK(percentile(v, 0.2) == 1.0);
    CHECK(percentile(v, 0.21) == 2.0);
    CHECK(percentile(v, 0.95) == 5.0);
    CHECK_THROWS_AS(percentile(std::vector<double>{}, 0.5), ContractError);
    CHECK_THROWS_AS(percentile(v, 1.0), DomainError);
    const MeanVar mv = mean_variance(v);
    CHECK(mv.mean == 3.0);
    CHECK(mv.variance == 2.5);
}

TEST_CASE("bootstrap stderr is zero for constant samples and reproducible") {
    const std::vector<double> c(100, 2.0);
    CHECK(bootstrap_percentile_stderr_db(c, 0.95, 1, 1) == 0.0);
    std::vector<double> v;
    RandomStream s(1, 1);
    for (int i = 0; i < 500; ++i) v.push_back(s.exponential());
    const double a = bootstrap_percentile_stderr_db(v, 0.95, 7, 2);
    CHECK(a > 0.0);
    CHECK(a == bootstrap_percentile_stderr_db(v, 0.95, 7, 2));
}

TEST_CASE("arrivals are Poisson") {
    const ResourceSlice slice{1e3, 0.5, 10.0};
    RandomStream s(2, 1);
    std::vector<double> k;
    for (int i = 0; i < 100000; ++i) k.push_back(arrivals_per_slice(100.0, slice, s));
    const MeanVar mv = mean_variance(k);
    CHECK(std::abs(mv.mean - 50.0) < 4.0 * std::sqrt(50.0 / 100000));
    CHECK(mv.variance == doctest::Approx(50.0).epsilon(0.03));
    CHECK(arrivals_per_slice(0.0, slice, s) == 0);
}

TEST_CASE("trial populations are shared and reproducible") {
    const LinkEnv env = LinkEnv::defaults();
    const ResourceSlice slice{100e3, 1.0, 500.0};
    const auto a = trial_population(50.0, slice, env, 9, 2, 17);
    const auto b = trial_population(50.0, slice, env, 9, 2, 17);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].distance == b[i].distance);
        CHECK(a[i].fade_gain == b[i].fade_gain);
    }
    const auto c = trial_population(50.0, slice, env, 9, 2, 18);
    CHECK((c.empty() || a.empty() || c[0].distance != a[0].distance));
}

TEST_CASE("sweep output is independent of the worker count") {
    SweepSpec spec = small_spec({"cdma", "fdma", "sic", "fdma_optimal"}, {5, 50}, 60);
    const SweepResult one = run_sweep(spec);
    spec.workers = 3;
    const SweepResult three = run_sweep(spec);
    REQUIRE(one.points.size() == three.points.size());
    for (std::size_t i = 0; i < one.points.size(); ++i) {
        CHECK(one.points[i].strategy == three.points[i].strategy);
        CHECK(one.points[i].p95_tx_power == three.points[i].p95_tx_power);
        CHECK(one.points[i].outage == three.points[i].outage);
        CHECK(one.points[i].stderr_db == three.points[i].stderr_db);
    }
}

TEST_CASE("sweep keeps strategy then grid order") {
    const SweepResult r = run_sweep(small_spec({"sic", "fdma_equal", "fdma_optimal"}, {20, 2}, 100));
    REQUIRE(r.points.size() == 6);
    CHECK(r.points[0].strategy == "sic");
    CHECK(r.points[0].lambda == 20.0);
    CHECK(r.points[1].lambda == 2.0);
    for (double l : {2.0, 20.0}) {
        const double sic = r.at("sic", l).p95_tx_power;
        const double opt = r.at("fdma_optimal", l).p95_tx_power;
        const double eq = r.at("fdma_equal", l).p95_tx_power;
        CHECK(sic <= opt * (1 + 1e-9));
        CHECK(opt <= eq * (1 + 1e-9));
    }
    CHECK_THROWS_AS(r.at("cdma", 2.0), ContractError);
}

TEST_CASE("CDMA above the pole is recorded as outage and the sweep continues") {
    const SweepResult r = run_sweep(small_spec({"cdma"}, {100, 1000}, 30));
    CHECK(r.at("cdma", 1000).outage == 1.0);
    CHECK(r.at("cdma", 1000).note == "pole exceeded");
    CHECK(std::isnan(r.at("cdma", 1000).p95_tx_power));
    CHECK(r.at("cdma", 100).outage < 0.2);
}

TEST_CASE("sweep validation") {
    SweepSpec spec = small_spec({"fdma"}, {}, 10);
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec.lambda_grid = {-1.0};
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec.lambda_grid = {1.0};
    spec.workers = 0;
    CHECK_THROWS_AS(spec.validate(), DomainError);
}

TEST_CASE("strategy names round trip") {
    for (const char* n : {"optimal", "cdma", "fdma", "ftdma_1khz", "ftdma_10khz", "sic", "fdma_equal",
                          "fdma_optimal"}) {
        CHECK(StrategySpec::parse(n).name() == n);
    }
    CHECK(StrategySpec::parse("ftdma:1kHz").name() == "ftdma_1khz");
    CHECK(StrategySpec::parse("ftdma:1kHz").bin_width == 1e3);
    CHECK(StrategySpec::parse("sic").is_scheduled());
    CHECK_THROWS_AS(StrategySpec::parse("tdma"), ContractError);
}
