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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "m2m/linkmodel.hpp"
#include "m2m/rng.hpp"

namespace m2m {

/// Multiplicative SNR penalty for a transmission of l bits in b Hz over tau s.
using SnrGapFn = std::function<double(double b, double tau, double l)>;

/// Gap of exactly 1 (infinite blocklength).
double unit_gap(double b, double tau, double l);

/// Tuning of the random-access strategies.
///
/// `n_codebooks` is the number of random codebooks used by the jointly
/// decoded strategy; `bin_width_q` is the FDMA bin width in Hz. The two are
/// unrelated quantities that happen to share a symbol in the literature.
struct RachConfig {
    int n_codebooks = 65536;
    std::vector<double> theta_grid;
    std::optional<double> bin_width_q;
    int max_attempts = 16;
    double target_outage = 0.1;
    int max_slots = 1000;          ///< slot sizes searched are T/m, m = 1..max_slots
    double min_bin_width = 1.0;    ///< Hz, lower limit for unconstrained FDMA bins
    double rx_power = 0.0;         ///< W; 0 selects the sum-rate requirement of k devices
    double cdma_channel_bw = 100e3;  ///< Hz, used by channelized CDMA

    /// 50-point theta grid on (0, 1].
    static RachConfig defaults();
    void validate(double bandwidth) const;
};

/// Splits a total failure budget evenly between two independent causes:
/// (1 - total) = (1 - e)^2.
double split_outage(double total);

struct Arrival {
    double rx_power = 0.0;  ///< W
    int codebook_id = 0;
    double gain = 1.0;      ///< channel gain, used to report transmit power
};

struct DecodeOutcome {
    std::vector<int> decoded_set;    ///< ascending device indices
    std::vector<int> attempted_set;  ///< ascending device indices
    std::vector<double> per_device_tx_power;  ///< rx_power / gain for every arrival
};

/// True iff every nonempty subset A satisfies
///   sum_{i in A} rate_i <= w log2(1 + sum_{i in A} p_i / (noise + interference)).
/// Equal rates use the sorted-prefix test (only the weakest |A| members bind);
/// unequal rates enumerate subsets and are limited to 24 users.
bool mac_feasible(std::span<const double> rates, std::span<const double> rx_powers, double w,
                  double noise_total, double residual_interference);

/// Largest set of arrivals decodable jointly while the rest act as noise.
/// Arrivals sharing a codebook are undecodable. Among sets of maximum size the
/// one with the largest total received power wins, then the lowest indices.
DecodeOutcome joint_decode_max_subset(std::span<const Arrival> arrivals, double rate_per_device,
                                      double w, double noise_total);

/// Decoded count for `n_clean` equal-power candidates when `n_transmit`
/// devices are on the air (the other n_transmit - n_clean collided).
/// Equivalent to joint_decode_max_subset on equal powers.
int decode_count_equal_power(int n_transmit, int n_clean, double rx_power,
                             double rate_per_device, double w, double noise_total);

/// Monte-Carlo mean decoded count per slice for the jointly decoded strategy.
double optimal_rach_expected_throughput(int k_present, double theta, const RachConfig& cfg,
                                        const ResourceSlice& slice, const LinkEnv& env,
                                        RandomStream& stream, int n_trials = 2000);

struct ThetaChoice {
    double theta = 0.0;
    double throughput = 0.0;
};

/// Argmax of the expected throughput over cfg.theta_grid. Every grid point
/// sees the same per-trial draws.
ThetaChoice optimal_rach_best_theta(int k_present, const RachConfig& cfg,
                                    const ResourceSlice& slice, const LinkEnv& env,
                                    std::uint64_t seed, int n_trials = 2000);

/// Per-slice random draws for one Monte-Carlo trial of the jointly decoded
/// strategy. A device transmits at a given theta iff `transmit_u < theta`.
struct RachTrialDraw {
    std::vector<double> transmit_u;
    std::vector<std::uint32_t> codebook;

    static RachTrialDraw sample(int k_present, int n_codebooks, RandomStream& stream);
    /// Transmitting devices with a codebook no other transmitter picked.
    std::vector<int> clean_transmitters(double theta) const;
    int transmitters(double theta) const;
};

/// Smallest common received-power target (and its theta) such that the
/// decoding outage 1 - decoded/arrivals over `draws` stays within
/// `decode_budget`.
struct OptimalRachPlan {
    double rx_power = 0.0;
    double theta = 1.0;
    double decode_outage = 0.0;
};
OptimalRachPlan plan_optimal_rach(std::span<const RachTrialDraw> draws, double decode_budget,
                                  const RachConfig& cfg, const ResourceSlice& slice,
                                  const LinkEnv& env, double gap = 1.0);

/// Decoding outage of the jointly decoded strategy at a fixed power target.
double optimal_rach_outage(std::span<const RachTrialDraw> draws, double rx_power, double theta,
                           const ResourceSlice& slice, const LinkEnv& env, double gap = 1.0);

/// Equal received power for k simultaneous CDMA users treating each other as
/// noise: q = gamma N0 W / (1 - (k-1) gamma). Throws PoleExceeded.
double cdma_rx_power(int k_simultaneous, const ResourceSlice& slice, const LinkEnv& env);

/// Largest k with (k - 1) gamma < 1.
int cdma_pole_capacity(const ResourceSlice& slice);

struct AlohaFixedPoint {
    double p_collision = 0.0;  ///< per-attempt collision probability
    double attempt_rate = 0.0; ///< attempts per second including retries
    double outage = 0.0;
};

/// Slotted Aloha over n_bins resources per slot with up to max_attempts tries.
/// Attempt rate lambda (1 - p^A)/(1 - p) feeds back into p = 1 - exp(-G).
AlohaFixedPoint aloha_fixed_point(double lambda, int n_bins, double slot_tau, int max_attempts);

/// Outage p^A of the fixed point above.
double aloha_outage(double lambda, int n_bins, double slot_tau, int max_attempts);

/// Resource layout chosen for an Aloha FDMA / F-TDMA transmission.
struct AlohaPlan {
    int n_bins = 1;
    int slots = 1;
    double bin_width = 0.0;      ///< Hz
    double slot_tau = 0.0;       ///< s
    int attempts = 1;
    double collision_outage = 0.0;
    double rx_power = 0.0;       ///< W per transmission, before fade margin
};

/// F-TDMA with fixed bin width: minimum-power slot size meeting the
/// collision budget. Throws Infeasible carrying the best outage found.
AlohaPlan ftdma_plan(double lambda, double bin_width, const ResourceSlice& slice,
                     const LinkEnv& env, const RachConfig& cfg, double collision_budget,
                     const SnrGapFn& gap = unit_gap);

/// FDMA Aloha with free bin width: joint search over bin count and slot size.
AlohaPlan fdma_aloha_plan(double lambda, const ResourceSlice& slice, const LinkEnv& env,
                          const RachConfig& cfg, double collision_budget,
                          const SnrGapFn& gap = unit_gap);

struct FtdmaResult {
    double slot_tau = 0.0;
    double p95_tx_power = 0.0;
    AlohaPlan plan;
};

/// F-TDMA slot optimization with the collision/fade budget split of
/// cfg.target_outage; reports the Monte-Carlo 95th-percentile transmit power
/// over `n_samples` fresh drops.
FtdmaResult ftdma_optimize(double lambda, double bin_width, const ResourceSlice& slice,
                           const LinkEnv& env, const RachConfig& cfg, RandomStream& stream,
                           int n_samples = 20000);

}  // namespace m2m
