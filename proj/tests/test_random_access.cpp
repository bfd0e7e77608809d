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
#include "m2m/oracles.hpp"
#include "m2m/random_access.hpp"
#include "m2m/units.hpp"

using namespace m2m;

namespace {

const ResourceSlice kSlice{100e3, 1.0, 500.0};

double n0(const LinkEnv& env) { return env.noise_psd; }

}  // namespace

TEST_CASE("split outage") {
    CHECK(split_outage(0.1) == doctest::Approx(0.05131670194948623).epsilon(1e-14));
    const double e = split_outage(0.37);
    CHECK((1 - e) * (1 - e) == doctest::Approx(0.63).epsilon(1e-14));
    CHECK_THROWS_AS(split_outage(1.0), DomainError);
}

TEST_CASE("MAC feasibility matches subset enumeration") {
    RandomStream s(11, 1);
    const double w = 1e4;
    const double noise = 1e-12;
    for (int t = 0; t < 500; ++t) {
        const int n = 1 + static_cast<int>(s.below(6));
        std::vector<double> p(n), r(n, 1e4 * (0.2 + s.uniform()));
        for (double& x : p) x = noise * std::exp(4.0 * s.uniform());
        const double intf = s.uniform() < 0.5 ? 0.0 : noise * s.uniform();
        CHECK(mac_feasible(r, p, w, noise, intf) == oracle::mac_feasible_all_subsets(r, p, w, noise, intf));
    }
}

TEST_CASE("joint decoding") {
    const double w = 1e3, noise = 1.0;
    SUBCASE("single arrival decodes iff it meets capacity") {
        const std::vector<Arrival> ok{{std::pow(2.0, 1.0) - 1.0 + 1e-9, 0, 1.0}};
        CHECK(joint_decode_max_subset(ok, w, w, noise).decoded_set == std::vector<int>{0});
        const std::vector<Arrival> weak{{0.99, 0, 1.0}};
        CHECK(joint_decode_max_subset(weak, w, w, noise).decoded_set.empty());
    }
    SUBCASE("shared codebook blocks both users") {
        const std::vector<Arrival> a{{100.0, 3, 1.0}, {100.0, 3, 1.0}, {1e4, 4, 1.0}};
        const DecodeOutcome out = joint_decode_max_subset(a, w, w, noise);
        CHECK(out.decoded_set == std::vector<int>{2});
        CHECK(out.attempted_set == std::vector<int>{0, 1, 2});
    }
    SUBCASE("transmit powers are rx over gain") {
        const std::vector<Arrival> a{{8.0, 0, 0.5}, {6.0, 1, 2.0}};
        const DecodeOutcome out = joint_decode_max_subset(a, 1.0, 1.0, 1.0);
        CHECK(out.per_device_tx_power == std::vector<double>{16.0, 3.0});
    }
    SUBCASE("matches exhaustive search") {
        RandomStream s(12, 1);
        for (int t = 0; t < 300; ++t) {
            const int n = 1 + static_cast<int>(s.below(8));
            std::vector<Arrival> a(n);
            for (auto& x : a) x = {std::exp(3.0 * s.uniform()) - 0.5, static_cast<int>(s.below(12)), 1.0};
            const double rate = w * (0.3 + 0.5 * s.uniform());
            CHECK(joint_decode_max_subset(a, rate, w, noise).decoded_set ==
                  oracle::joint_decode_exhaustive(a, rate, w, noise));
        }
    }
}

TEST_CASE("equal-power decode count") {
    CHECK(decode_count_equal_power(1, 1, 1.01, 1.0, 1.0, 1.0) == 1);
    CHECK(decode_count_equal_power(1, 1, 0.99, 1.0, 1.0, 1.0) == 0);
    CHECK(decode_count_equal_power(2, 2, 3.0, 1.0, 1.0, 1.0) == 2);
    CHECK(decode_count_equal_power(2, 2, 1.0, 1.0, 1.0, 1.0) == 0);
    CHECK(decode_count_equal_power(0, 0, 1.0, 1.0, 1.0, 1.0) == 0);
    RandomStream s(13, 1);
    for (int t = 0; t < 300; ++t) {
        const int n = 1 + static_cast<int>(s.below(7));
        const int clean = static_cast<int>(s.below(static_cast<std::uint64_t>(n) + 1));
        if (n - clean == 1) continue;  // a collision needs two users
        const double p = std::exp(5.0 * s.uniform()) - 0.9;
        std::vector<Arrival> a;
        for (int i = 0; i < n; ++i) a.push_back({p, i < clean ? i : 1000, 1.0});
        CHECK(decode_count_equal_power(n, clean, p, 1.0, 1.0, 1.0) ==
              static_cast<int>(oracle::joint_decode_exhaustive(a, 1.0, 1.0, 1.0).size()));
    }
}

TEST_CASE("expected throughput agrees with enumeration") {
    const LinkEnv env = LinkEnv::defaults();
    const ResourceSlice slice{1e3, 1.0, 800.0};
    RachConfig cfg = RachConfig::defaults();
    cfg.n_codebooks = 3;
    const double rx = 2.0 * env.noise_psd * 1e3;
    cfg.rx_power = rx;
    for (int k : {1, 2, 4}) {
        for (double theta : {0.3, 0.8}) {
            RandomStream s(14, static_cast<std::uint64_t>(k));
            const double mc = optimal_rach_expected_throughput(k, theta, cfg, slice, env, s, 40000);
            const double exact = oracle::expected_throughput_enumerated(k, theta, 3, rx, slice, env);
            CHECK(mc == doctest::Approx(exact).epsilon(0.03));
        }
    }
}

TEST_CASE("optimal RACH plan meets its budget") {
    const LinkEnv env = LinkEnv::defaults();
    const RachConfig cfg = RachConfig::defaults();
    RandomStream s(15, 1);
    std::vector<RachTrialDraw> draws;
    for (int t = 0; t < 400; ++t) draws.push_back(RachTrialDraw::sample(20, cfg.n_codebooks, s));
    const double budget = split_outage(0.1);
    const OptimalRachPlan plan = plan_optimal_rach(draws, budget, cfg, kSlice, env);
    CHECK(plan.decode_outage <= budget);
    CHECK(optimal_rach_outage(draws, plan.rx_power, plan.theta, kSlice, env) <= budget);
    CHECK(optimal_rach_outage(draws, plan.rx_power * 0.9, plan.theta, kSlice, env) >= plan.decode_outage);
    // 20 equal-power users need at least the sum-rate requirement of the
    // decoded set and no more than the requirement of all 20 plus collisions.
    CHECK(plan.rx_power > 0.0);
}

TEST_CASE("CDMA") {
    const LinkEnv env = LinkEnv::defaults();
    const double gamma = 0.0034717485095028255;
    CHECK(cdma_pole_capacity(kSlice) == 289);
    CHECK(cdma_rx_power(1, kSlice, env) ==
          doctest::Approx(required_power(100e3, 1.0, 500.0, 1.0, 1.0, env)).epsilon(1e-13));
    CHECK(cdma_rx_power(100, kSlice, env) ==
          doctest::Approx(gamma * n0(env) * 100e3 / (1.0 - 99.0 * gamma)).epsilon(1e-12));
    CHECK(cdma_rx_power(289, kSlice, env) > 0.0);
    CHECK_THROWS_AS(cdma_rx_power(290, kSlice, env), PoleExceeded);
    double prev = 0.0;
    for (int k = 1; k <= 289; ++k) {
        const double q = cdma_rx_power(k, kSlice, env);
        CHECK(q > prev);
        prev = q;
    }
}

TEST_CASE("slotted Aloha fixed point") {
    SUBCASE("one attempt reduces to Poisson collisions") {
        const AlohaFixedPoint fp = aloha_fixed_point(5.0, 10, 0.1, 1);
        const double p = -std::expm1(-5.0 * 0.1 / 10.0);
        CHECK(fp.p_collision == doctest::Approx(p).epsilon(1e-13));
        CHECK(fp.outage == doctest::Approx(p).epsilon(1e-13));
        CHECK(fp.attempt_rate == doctest::Approx(5.0).epsilon(1e-13));
    }
    SUBCASE("fixed point is self-consistent") {
        const AlohaFixedPoint fp = aloha_fixed_point(40.0, 8, 0.05, 4);
        const double p = fp.p_collision;
        const double g = 40.0 * (1 - std::pow(p, 4)) / (1 - p);
        CHECK(fp.attempt_rate == doctest::Approx(g).epsilon(1e-10));
        CHECK(p == doctest::Approx(-std::expm1(-g * 0.05 / 8)).epsilon(1e-10));
        CHECK(fp.outage == doctest::Approx(std::pow(p, 4)).epsilon(1e-10));
    }
    SUBCASE("monotone in load and in resources") {
        CHECK(aloha_outage(10, 8, 0.1, 3) < aloha_outage(20, 8, 0.1, 3));
        CHECK(aloha_outage(10, 16, 0.1, 3) < aloha_outage(10, 8, 0.1, 3));
        CHECK(aloha_outage(10, 8, 0.1, 4) < aloha_outage(10, 8, 0.1, 3));
        CHECK(aloha_outage(0.0, 8, 0.1, 3) == 0.0);
    }
}

TEST_CASE("F-TDMA plan at 100 arrivals/s") {
    const LinkEnv env = LinkEnv::defaults();
    const RachConfig cfg = RachConfig::defaults();
    const double budget = split_outage(0.1);
    const AlohaPlan p1 = ftdma_plan(100.0, 1e3, kSlice, env, cfg, budget);
    CHECK(p1.n_bins == 100);
    CHECK(p1.slots == 4);
    CHECK(p1.collision_outage <= budget);
    CHECK(p1.rx_power / n0(env) == doctest::Approx(3000.0).epsilon(1e-9));
    const AlohaPlan p10 = ftdma_plan(100.0, 10e3, kSlice, env, cfg, budget);
    CHECK(p10.n_bins == 10);
    CHECK(p10.slots == 28);
    CHECK(p10.rx_power / n0(env) == doctest::Approx(16390.158).epsilon(1e-6));
    const AlohaPlan low = ftdma_plan(1.0, 1e3, kSlice, env, cfg, budget);
    CHECK(low.slots == 1);
    CHECK(low.rx_power / n0(env) == doctest::Approx(414.2136).epsilon(1e-6));
}

TEST_CASE("FDMA Aloha plan") {
    const LinkEnv env = LinkEnv::defaults();
    const RachConfig cfg = RachConfig::defaults();
    const double budget = split_outage(0.1);
    const AlohaPlan p = fdma_aloha_plan(100.0, kSlice, env, cfg, budget);
    CHECK(p.slots == 2);
    CHECK(p.n_bins == 239);
    CHECK(p.rx_power / n0(env) == doctest::Approx(1774.717).epsilon(1e-6));
    const AlohaPlan q = fdma_aloha_plan(1.0, kSlice, env, cfg, budget);
    CHECK(q.slots == 1);
    CHECK(q.n_bins == 19);
    CHECK(q.rx_power / n0(env) == doctest::Approx(358.239).epsilon(1e-6));
    CHECK(p.rx_power <= ftdma_plan(100.0, 1e3, kSlice, env, cfg, budget).rx_power);
}

TEST_CASE("infeasible Aloha reports the best outage") {
    const LinkEnv env = LinkEnv::defaults();
    RachConfig cfg = RachConfig::defaults();
    cfg.max_slots = 1;
    cfg.max_attempts = 1;
    try {
        ftdma_plan(1e5, 50e3, kSlice, env, cfg, 0.01);
        FAIL("expected Infeasible");
    } catch (const Infeasible& e) {
        CHECK(e.best_outage() > 0.01);
    }
}

TEST_CASE("F-TDMA optimization is reproducible") {
    const LinkEnv env = LinkEnv::defaults();
    const RachConfig cfg = RachConfig::defaults();
    RandomStream a(16, 1), b(16, 1);
    const FtdmaResult x = ftdma_optimize(50.0, 1e3, kSlice, env, cfg, a, 5000);
    const FtdmaResult y = ftdma_optimize(50.0, 1e3, kSlice, env, cfg, b, 5000);
    CHECK(x.p95_tx_power == y.p95_tx_power);
    CHECK(x.slot_tau == doctest::Approx(1.0 / x.plan.slots));
    CHECK(x.p95_tx_power > x.plan.rx_power);
}
