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

#include "m2m/errors.hpp"
#include "m2m/protocol.hpp"
#include "m2m/report.hpp"
#include "m2m/units.hpp"

using namespace m2m;

namespace {

const ResourceSlice kSlice{10e3, 1.0, 100.0};

ProtocolOptions quick_options(int trials = 300) {
    ProtocolOptions opt;
    opt.n_trials = trials;
    opt.drop_samples = 5000;
    return opt;
}

double rate_of(const std::vector<CapacityRow>& rows, const std::string& s, double payload) {
    for (const auto& r : rows) {
        if (r.strategy == s && r.point.payload_bits == payload) return r.point.max_arrival_rate;
    }
    FAIL("missing row " << s << " " << payload);
    return 0.0;
}

}  // namespace

TEST_CASE("finite-blocklength gap") {
    CHECK(blocklength_gap(1e4, 1e-3, 0.009) == doctest::Approx(1.7261479167468547).epsilon(1e-9));
    CHECK(blocklength_gap(1e4, 1e-3, 0.018) == doctest::Approx(1.4743892058524657).epsilon(1e-9));
    CHECK(blocklength_gap(1000, 1e-5, 1.0) == doctest::Approx(1.2570420499043595).epsilon(1e-9));
    CHECK(blocklength_gap(100, 0.5, 1.0) == 1.0);
    double prev = INFINITY;
    for (double n = 100; n <= 1e9; n *= 10) {
        const double g = blocklength_gap(n, 1e-3, 0.5);
        CHECK(g >= 1.0);
        CHECK(g < prev);
        prev = g;
    }
    CHECK(prev < 1.001);
    const SnrGapFn f = blocklength_gap_fn(1e-3);
    CHECK(f(1e4, 1.0, 90.0) == blocklength_gap(1e4, 1e-3, 0.009));
}

TEST_CASE("downlink grant capacity") {
    OverheadModel ovh;
    CHECK(ovh.dl_arrival_cap(10e3) == doctest::Approx(258.75).epsilon(1e-14));
    ovh.dl_bandwidth = 20e3;
    CHECK(ovh.dl_arrival_cap(10e3) == doctest::Approx(517.5).epsilon(1e-14));
    ovh.dl_cap = false;
    CHECK(std::isinf(ovh.dl_arrival_cap(10e3)));
    ovh.stage_split = {0.5, 0.5, 0.5};
    CHECK_THROWS_AS(ovh.validate(), DomainError);
}

TEST_CASE("single-bin single-slot Aloha reduces to pure collision outage") {
    // One bin, one slot, one attempt: outage 1 - exp(-lambda T) must equal
    // the collision share of the budget.
    const LinkEnv env = LinkEnv::defaults();
    const ResourceSlice slice{10e3, 1.0, 1.0};
    OverheadModel ovh;
    ovh.control_payload_bits = 1.0;
    ProtocolOptions opt = quick_options();
    opt.finite_blocklength = false;
    opt.lambda_lo = 1e-3;
    opt.lambda_hi = 1.0;
    opt.bisection_iterations = 60;
    opt.rach.max_slots = 1;
    opt.rach.max_attempts = 1;
    opt.rach.min_bin_width = 10e3;
    const ProtocolCurvePoint p =
        one_stage_max_arrival(1.0, StrategySpec::parse("fdma"), ovh, env, slice, opt);
    CHECK(p.max_arrival_rate == doctest::Approx(0.05268025782891318).epsilon(1e-9));
    CHECK(p.binding_constraint == Binding::outage);
}

TEST_CASE("two-stage without overhead is scheduled access in the data window") {
    LinkEnv env = LinkEnv::defaults();
    env.tx_power_cap = dbm_to_watt(40.0);
    OverheadModel ovh;
    ovh.control_payload_bits = 0.0;
    ovh.grant_bits = 0.0;
    ovh.stage_split = {0.1, 0.1, 0.8};
    const ProtocolOptions opt = quick_options();
    for (double payload : {50.0, 400.0}) {
        const double two = two_stage_max_arrival(payload, ovh, env, kSlice, opt).max_arrival_rate;
        const double sched =
            scheduled_max_arrival(payload, env, ResourceSlice{10e3, 0.8, payload}, opt).max_arrival_rate;
        REQUIRE(sched > 0.0);
        CHECK(two == doctest::Approx(0.8 * sched).epsilon(1e-4));
    }
}

TEST_CASE("lifting the downlink cap never lowers the arrival limit") {
    LinkEnv env = LinkEnv::defaults();
    env.tx_power_cap = dbm_to_watt(40.0);
    OverheadModel capped;
    OverheadModel free = capped;
    free.dl_cap = false;
    const ProtocolOptions opt = quick_options(200);
    for (double payload : {10.0, 100.0, 1000.0}) {
        const ProtocolCurvePoint a = two_stage_max_arrival(payload, capped, env, kSlice, opt);
        const ProtocolCurvePoint b = two_stage_max_arrival(payload, free, env, kSlice, opt);
        CHECK(b.max_arrival_rate >= a.max_arrival_rate);
        CHECK(a.max_arrival_rate <= 258.75);
    }
}

TEST_CASE("strategy validation") {
    const LinkEnv env = LinkEnv::defaults();
    const ProtocolOptions opt = quick_options(10);
    CHECK_THROWS_AS(one_stage_max_arrival(100.0, StrategySpec::parse("sic"), {}, env, kSlice, opt), ContractError);
    CHECK_THROWS_AS(one_stage_max_arrival(0.0, StrategySpec::parse("fdma"), {}, env, kSlice, opt), DomainError);
    CHECK(to_string(Binding::dl_overhead) == "dl_overhead");
}

TEST_CASE("default link budget cannot carry 100-bit payloads") {
    // At 24 dBm the 95th-percentile device cannot deliver payload plus
    // request bits in one second over 10 kHz, so every strategy reports zero
    // with the power constraint binding.
    RunConfig cfg = figure_preset("fig4");
    cfg.trials = 200;
    cfg.drop_samples = 5000;
    cfg.payload_grid = {100.0};
    for (const auto& row : run_capacity(cfg)) {
        CHECK(row.point.max_arrival_rate == 0.0);
        CHECK(row.point.binding_constraint == Binding::power);
    }
}

TEST_CASE("capacity curves at a 40 dBm cap") {
    RunConfig cfg = figure_preset("fig4");
    cfg.trials = 300;
    cfg.drop_samples = 5000;
    cfg.tx_power_cap_dbm = 40.0;
    cfg.payload_grid = {10.0, 100.0, 500.0, 1000.0};
    const auto rows = run_capacity(cfg);
    const double ratio = rate_of(rows, "optimal", 100) / rate_of(rows, "two_stage", 100);
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 30.0);
    // One-stage Aloha leads at small payloads; two-stage leads at large ones.
    CHECK(rate_of(rows, "fdma", 10) > rate_of(rows, "two_stage", 10));
    CHECK(rate_of(rows, "two_stage", 500) > rate_of(rows, "fdma", 500));
    CHECK(rate_of(rows, "two_stage", 1000) > rate_of(rows, "fdma", 1000));
    for (const std::string s : {"optimal", "fdma", "two_stage"}) {
        CHECK(rate_of(rows, s, 10) >= rate_of(rows, s, 100));
        CHECK(rate_of(rows, s, 100) >= rate_of(rows, s, 1000));
    }
}
