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

#include <vector>

#include "m2m/linkmodel.hpp"

namespace m2m {

/// K devices granted the whole slice, with known channel gains.
struct ScheduledInstance {
    std::vector<double> gains;  ///< composite power gains, one per device
    ResourceSlice slice;
    double snr_gap = 1.0;

    int k() const { return static_cast<int>(gains.size()); }
    void validate() const;
};

/// Weakest-last SIC. The device in decode position i (1 = strongest) needs
/// received power gamma N0 W (1 + gamma)^(K - i). Results follow input order;
/// equal gains decode in index order.
std::vector<double> sic_tx_powers(const ScheduledInstance& inst, const LinkEnv& env);

/// Received powers of the SIC solution, in input order.
std::vector<double> sic_rx_powers(const ScheduledInstance& inst, const LinkEnv& env);

/// W/K Hz per device.
std::vector<double> fdma_equal_powers(const ScheduledInstance& inst, const LinkEnv& env);

struct FdmaAllocation {
    std::vector<double> bandwidths;  ///< Hz, sums to W
    std::vector<double> powers;      ///< W, transmit
    double multiplier = 0.0;         ///< Lagrange multiplier of the bandwidth constraint
    double kkt_residual = 0.0;       ///< max relative stationarity violation
    int iterations = 0;
};

/// Bandwidth split minimising total transmit power sum_i (N0 b_i / g_i)(2^(L/(b_i T)) - 1)
/// subject to sum_i b_i = W. Outer bisection on the multiplier; each device's
/// stationarity equation is solved in closed form through the Lambert W
/// function. Throws NumericalFailure if the outer search does not converge.
FdmaAllocation fdma_optimal_alloc(const ScheduledInstance& inst, const LinkEnv& env,
                                  double tol = 1e-10);

/// Sum of a vector.
double total(const std::vector<double>& v);

}  // namespace m2m
