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

#include "m2m/rng.hpp"

namespace m2m {

/// Cell geometry, receiver noise, pathloss law and outage budget. Everything
/// needed to turn a required received power into a device transmit power.
struct LinkEnv {
    double noise_psd = 0.0;             ///< W/Hz
    double cell_radius = 2000.0;        ///< m
    double pathloss_exponent = 3.7;
    double pathloss_intercept_db = 38.5;  ///< loss at the 1 m reference
    double fade_outage = 0.1;           ///< per-link failure budget
    double tx_power_cap = 0.0;          ///< W

    /// -174 dBm/Hz thermal noise, 5 dB noise figure, 2 km cell, 24 dBm cap.
    static LinkEnv defaults();

    /// Throws DomainError when an invariant does not hold.
    void validate() const;
};

/// One device realization inside the cell.
struct DeviceDrop {
    double distance = 0.0;   ///< m
    double fade_gain = 1.0;  ///< unit-mean power gain
};

/// The time-bandwidth block in which a payload must be delivered.
struct ResourceSlice {
    double bandwidth_w = 0.0;  ///< Hz
    double duration_t = 0.0;   ///< s
    double payload_l = 0.0;    ///< bits

    void validate() const;
    /// Spectral efficiency L / (W T) of one payload over the whole slice.
    double spectral_efficiency() const { return payload_l / (bandwidth_w * duration_t); }
};

/// Linear power gain at distance d (metres). Strictly decreasing in d.
double pathloss_gain(double distance, const LinkEnv& env);

/// Uniform position over the disk and Rayleigh (exponential power) fading.
DeviceDrop sample_drop(RandomStream& stream, const LinkEnv& env);

/// Power factor M with Pr[fade_gain < 1/M] = epsilon for unit-mean
/// exponential fading: M = 1 / (-ln(1 - epsilon)).
double fade_margin(double epsilon);

/// SNR threshold 2^(l/(b tau)) - 1 for carrying l bits in b Hz over tau s.
double snr_threshold(double b, double tau, double l);

/// Transmit power so that a Shannon link with bandwidth b, gain g and
/// power P/gap carries exactly l bits in tau seconds:
///   P = gap * (N0 b / g) * (2^(l/(b tau)) - 1)
double required_power(double b, double tau, double l, double g, double gap,
                      const LinkEnv& env);

}  // namespace m2m
