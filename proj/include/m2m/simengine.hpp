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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "m2m/linkmodel.hpp"
#include "m2m/random_access.hpp"
#include "m2m/rng.hpp"
#include "m2m/stats.hpp"
#include "m2m/strategy.hpp"

namespace m2m {

/// Poisson(lambda T) arrivals in one slice.
int arrivals_per_slice(double lambda, const ResourceSlice& slice, RandomStream& stream);

/// Devices of one trial: Poisson count, then one drop per device, all from
/// the (seed, lambda index, trial) drop stream. Every strategy sees the same
/// population for a given trial.
std::vector<DeviceDrop> trial_population(double lambda, const ResourceSlice& slice,
                                         const LinkEnv& env, std::uint64_t seed,
                                         std::uint32_t lambda_index, std::uint32_t trial);

struct SweepSpec {
    std::vector<StrategySpec> strategies;
    std::vector<double> lambda_grid;  ///< arrivals/s
    ResourceSlice slice;
    LinkEnv env;
    RachConfig rach = RachConfig::defaults();
    int n_trials = 5000;
    std::uint64_t seed = 1;
    int workers = 1;
    int bootstrap_resamples = 200;

    void validate() const;
};

struct SweepPoint {
    std::string strategy;
    double lambda = 0.0;
    double p95_tx_power = 0.0;   ///< W over successful deliveries; NaN when none
    double mean_tx_power = 0.0;  ///< W; NaN when none
    double outage = 0.0;
    long long n_samples = 0;     ///< successful deliveries pooled
    long long n_arrivals = 0;
    double stderr_db = 0.0;      ///< bootstrap standard error of the p95 in dB
    std::string note;            ///< e.g. "pole exceeded", "infeasible"
};

struct SweepResult {
    std::vector<SweepPoint> points;  ///< strategy order, then lambda grid order
    std::map<std::string, std::string> config_echo;

    const SweepPoint& at(const std::string& strategy, double lambda) const;
};

/// Powers of successful deliveries, outage inputs and the p95 estimate for
/// one (strategy, lambda) pair.
struct PointSamples {
    std::vector<double> powers;
    long long arrivals = 0;
    long long failures = 0;
    double extra_outage = 0.0;  ///< analytic outage combined multiplicatively
    std::string note;
};

/// Simulates every trial of one (strategy, lambda) pair.
PointSamples simulate_point(const SweepSpec& spec, std::size_t strategy_index,
                            std::size_t lambda_index);

/// Runs the full sweep. Identical for any worker count.
SweepResult run_sweep(const SweepSpec& spec);

}  // namespace m2m
