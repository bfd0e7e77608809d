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
#include "m2m/scheduled.hpp"
#include "m2m/units.hpp"
#include "m2m/validation.hpp"

using namespace m2m;

namespace {

const ResourceSlice kSlice{100e3, 1.0, 500.0};

ScheduledInstance random_instance(RandomStream& s, int k) {
    ScheduledInstance inst{{}, kSlice, 1.0};
    for (int i = 0; i < k; ++i) inst.gains.push_back(1e-15 * std::exp(6.0 * s.uniform()));
    return inst;
}

}  // namespace

TEST_CASE("SIC with equal gains matches the closed form and equal FDMA") {
    const LinkEnv env = LinkEnv::defaults();
    for (int k : {1, 2, 7, 50, 200}) {
        const ScheduledInstance inst{std::vector<double>(static_cast<std::size_t>(k), 1.0), kSlice, 1.0};
        const double closed = env.noise_psd * 100e3 * exp2m1(k * 500.0 / 100e3);
        CHECK(total(sic_tx_powers(inst, env)) == doctest::Approx(closed).epsilon(1e-12));
        CHECK(total(fdma_equal_powers(inst, env)) == doctest::Approx(closed).epsilon(1e-12));
    }
}

TEST_CASE("SIC powers follow the decode-order recursion") {
    const LinkEnv env = LinkEnv::defaults();
    const ScheduledInstance inst{{1.0, 4.0, 2.0}, kSlice, 1.0};
    const double g = 0.0034717485095028255;
    const double base = g * env.noise_psd * 100e3;
    const std::vector<double> rx = sic_rx_powers(inst, env);
    // Strongest decodes first against the other two.
    CHECK(rx[1] == doctest::Approx(base * (1 + g) * (1 + g)).epsilon(1e-12));
    CHECK(rx[2] == doctest::Approx(base * (1 + g)).epsilon(1e-12));
    CHECK(rx[0] == doctest::Approx(base).epsilon(1e-12));
    const std::vector<double> tx = sic_tx_powers(inst, env);
    for (std::size_t i = 0; i < 3; ++i) CHECK(tx[i] == doctest::Approx(rx[i] / inst.gains[i]).epsilon(1e-14));
}

TEST_CASE("SIC region check accepts the recursion and rejects a perturbed one") {
    CHECK(validation::sic_region_holds(sic_rx_powers, 200, 7));
    const auto wrong = [](const ScheduledInstance& i, const LinkEnv& e) {
        return validation::perturbed_sic_rx_powers(i, e, 0.05);
    };
    CHECK_FALSE(validation::sic_region_holds(wrong, 200, 7));
}

TEST_CASE("optimal FDMA allocation") {
    const LinkEnv env = LinkEnv::defaults();
    RandomStream s(21, 1);
    SUBCASE("matches the two-device grid") {
        for (int t = 0; t < 20; ++t) {
            const ScheduledInstance inst = random_instance(s, 2);
            const FdmaAllocation a = fdma_optimal_alloc(inst, env);
            const double grid = oracle::fdma_two_device_grid(inst, env, 100000);
            CHECK(total(a.powers) <= grid * (1 + 1e-9));
            CHECK(total(a.powers) == doctest::Approx(grid).epsilon(1e-6));
        }
    }
    SUBCASE("matches pairwise exchange and satisfies the constraints") {
        for (int t = 0; t < 20; ++t) {
            const ScheduledInstance inst = random_instance(s, 2 + static_cast<int>(s.below(7)));
            const FdmaAllocation a = fdma_optimal_alloc(inst, env);
            CHECK(total(a.bandwidths) == doctest::Approx(100e3).epsilon(1e-12));
            for (double b : a.bandwidths) CHECK(b > 0.0);
            CHECK(a.kkt_residual < 1e-8);
            CHECK(total(a.powers) <= oracle::fdma_min_sum_power_exchange(inst, env) * (1 + 1e-9));
            CHECK(total(a.powers) <= total(fdma_equal_powers(inst, env)) * (1 + 1e-12));
        }
    }
    SUBCASE("equal gains split equally") {
        const ScheduledInstance inst{{2e-14, 2e-14, 2e-14, 2e-14}, kSlice, 1.0};
        const FdmaAllocation a = fdma_optimal_alloc(inst, env);
        for (double b : a.bandwidths) CHECK(b == doctest::Approx(25e3).epsilon(1e-9));
    }
}

TEST_CASE("SIC never costs more than optimal FDMA") {
    const LinkEnv env = LinkEnv::defaults();
    RandomStream s(22, 1);
    for (int t = 0; t < 50; ++t) {
        const ScheduledInstance inst = random_instance(s, 1 + static_cast<int>(s.below(30)));
        const double sic = total(sic_tx_powers(inst, env));
        const double opt = total(fdma_optimal_alloc(inst, env).powers);
        CHECK(sic <= opt * (1 + 1e-9));
    }
}

TEST_CASE("SNR gap scales powers") {
    const LinkEnv env = LinkEnv::defaults();
    ScheduledInstance inst{{1e-14, 3e-14}, kSlice, 1.0};
    const double a = total(fdma_equal_powers(inst, env));
    const double b = total(sic_tx_powers(inst, env));
    inst.snr_gap = 2.0;
    CHECK(total(fdma_equal_powers(inst, env)) == doctest::Approx(2 * a).epsilon(1e-13));
    CHECK(total(sic_tx_powers(inst, env)) >= 2 * b);
}

TEST_CASE("instance validation") {
    const LinkEnv env = LinkEnv::defaults();
    CHECK_THROWS_AS((ScheduledInstance{{}, kSlice, 1.0}.validate()), DomainError);
    CHECK_THROWS_AS((ScheduledInstance{{-1.0}, kSlice, 1.0}.validate()), DomainError);
    CHECK_THROWS_AS(fdma_optimal_alloc(ScheduledInstance{{}, kSlice, 1.0}, env), DomainError);
}
