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

// Brute-force references. Each one re-derives its answer from the defining
// condition rather than from the library's algorithm.

#include <span>
#include <vector>

#include "m2m/linkmodel.hpp"
#include "m2m/random_access.hpp"
#include "m2m/scheduled.hpp"

namespace m2m::oracle {

/// Checks every nonempty subset explicitly (n <= 20).
bool mac_feasible_all_subsets(std::span<const double> rates, std::span<const double> rx_powers,
                              double w, double noise_total, double residual_interference);

/// Enumerates all 2^n subsets: drops sets containing a device whose codebook
/// is shared, keeps MAC-feasible ones, picks max size, then max total power,
/// then the lexicographically smallest index list.
std::vector<int> joint_decode_exhaustive(std::span<const Arrival> arrivals, double rate, double w,
                                         double noise_total);

/// Exact expected decoded count by enumerating every transmit pattern and
/// codebook assignment (k small). All transmitters arrive at `rx_power`.
double expected_throughput_enumerated(int k, double theta, int n_codebooks, double rx_power,
                                      const ResourceSlice& slice, const LinkEnv& env);

/// Minimum sum transmit power for the FDMA bandwidth split by repeated
/// pairwise bandwidth exchange, each pair solved by a grid of `grid_points`
/// followed by golden-section refinement.
double fdma_min_sum_power_exchange(const ScheduledInstance& inst, const LinkEnv& env,
                                   int grid_points = 10000);

/// Sum power for K = 2 by a plain grid over b1 in (0, W).
double fdma_two_device_grid(const ScheduledInstance& inst, const LinkEnv& env, int grid_points,
                            double* best_b1 = nullptr);

}  // namespace m2m::oracle
