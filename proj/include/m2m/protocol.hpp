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

#include <array>
#include <cstdint>
#include <string>

#include "m2m/linkmodel.hpp"
#include "m2m/random_access.hpp"
#include "m2m/strategy.hpp"

namespace m2m {

/// Control-plane cost of the two-stage protocol.
struct OverheadModel {
    double control_payload_bits = 80.0;  ///< stage-1 request
    double grant_bits = 80.0;            ///< downlink grant per device
    double dl_bandwidth = 0.0;           ///< Hz; 0 means "same as uplink W"
    double dl_spectral_efficiency = 2.07;  ///< bits/s/Hz
    std::array<double, 3> stage_split{0.4, 0.2, 0.4};  ///< (request, grant, data) time fractions
    bool dl_cap = true;

    static OverheadModel defaults() { return {}; }
    void validate() const;

    /// Arrival rate the downlink can grant: dl_bandwidth * SE / grant_bits.
    double dl_arrival_cap(double uplink_bandwidth) const;
};

enum class Binding { power, outage, dl_overhead, pole, none };

std::string to_string(Binding b);

struct ProtocolCurvePoint {
    double payload_bits = 0.0;
    double max_arrival_rate = 0.0;  ///< arrivals/s
    Binding binding_constraint = Binding::power;
};

/// SNR gap of a finite-blocklength code under the normal approximation.
/// With rate r bits/symbol and n symbols, the required SNR solves
///   r = log2(1 + s) - sqrt(V(s)/n) Qinv(epsilon),
///   V(s) = (1 - (1 + s)^-2) (log2 e)^2,
/// and the gap is s / (2^r - 1). Error targets at or above 1/2 give gap 1.
double blocklength_gap(double n_symbols, double epsilon, double rate_bits_per_symbol);

/// Gap as a function of a transmission (b Hz, tau s, l bits) with n = b tau.
SnrGapFn blocklength_gap_fn(double epsilon);

/// Monte-Carlo and search settings shared by the one- and two-stage solvers.
struct ProtocolOptions {
    int n_trials = 2000;
    std::uint64_t seed = 1;
    int bisection_iterations = 20;
    double lambda_lo = 1e-2;
    double lambda_hi = 1e5;
    double total_outage = 0.1;
    bool finite_blocklength = true;
    double block_error = 1e-3;     ///< error target at which the SNR gap is evaluated
    int drop_samples = 20000;      ///< drops behind the percentile of 1/pathloss
    RachConfig rach = RachConfig::defaults();

    SnrGapFn gap() const;
};

/// Largest arrival rate at which payload + control bits sent directly on the
/// RACH meet both the transmit-power cap (95th percentile) and the total
/// outage target.
ProtocolCurvePoint one_stage_max_arrival(double payload, const StrategySpec& strategy,
                                         const OverheadModel& ovh, const LinkEnv& env,
                                         const ResourceSlice& slice, const ProtocolOptions& opt);

/// Request over Aloha FDMA, downlink grant, data over equal-split scheduled FDMA.
ProtocolCurvePoint two_stage_max_arrival(double payload, const OverheadModel& ovh,
                                         const LinkEnv& env, const ResourceSlice& slice,
                                         const ProtocolOptions& opt);

/// Scheduled equal-split FDMA alone on `slice` with the whole outage budget
/// spent on fading.
ProtocolCurvePoint scheduled_max_arrival(double payload, const LinkEnv& env,
                                         const ResourceSlice& slice, const ProtocolOptions& opt);

}  // namespace m2m
