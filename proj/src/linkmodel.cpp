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

#include "m2m/linkmodel.hpp"

#include <cmath>

#include "m2m/errors.hpp"
#include "m2m/units.hpp"

namespace m2m {

LinkEnv LinkEnv::defaults() {
    LinkEnv env;
    env.noise_psd = dbm_to_watt(-174.0 + 5.0);
    env.cell_radius = 2000.0;
    env.pathloss_exponent = 3.7;
    env.pathloss_intercept_db = 38.5;
    env.fade_outage = 0.1;
    env.tx_power_cap = dbm_to_watt(24.0);
    return env;
}

void LinkEnv::validate() const {
    require_domain(noise_psd > 0.0, "noise_psd must be positive");
    require_domain(cell_radius > 0.0, "cell_radius must be positive");
    require_domain(pathloss_exponent > 2.0, "pathloss_exponent must exceed 2");
    require_domain(fade_outage > 0.0 && fade_outage < 1.0, "fade_outage must lie in (0,1)");
    require_domain(tx_power_cap > 0.0, "tx_power_cap must be positive");
}

void ResourceSlice::validate() const {
    require_domain(bandwidth_w > 0.0, "bandwidth must be positive");
    require_domain(duration_t > 0.0, "duration must be positive");
    require_domain(payload_l > 0.0, "payload must be positive");
}

double pathloss_gain(double distance, const LinkEnv& env) {
    require_domain(distance > 0.0, "pathloss_gain: distance must be positive");
    return std::pow(10.0, -env.pathloss_intercept_db / 10.0) *
           std::pow(distance, -env.pathloss_exponent);
}

DeviceDrop sample_drop(RandomStream& stream, const LinkEnv& env) {
    DeviceDrop drop;
    drop.distance = env.cell_radius * std::sqrt(stream.uniform());
    drop.fade_gain = stream.exponential();
    return drop;
}

double fade_margin(double epsilon) {
    require_domain(epsilon > 0.0 && epsilon < 1.0, "fade_margin: epsilon must lie in (0,1)");
    return -1.0 / std::log1p(-epsilon);
}

double snr_threshold(double b, double tau, double l) { return exp2m1(l / (b * tau)); }

double required_power(double b, double tau, double l, double g, double gap,
                      const LinkEnv& env) {
    require_domain(b > 0.0 && tau > 0.0 && l > 0.0 && g > 0.0,
                   "required_power: b, tau, l, g must be positive");
    require_domain(gap >= 1.0, "required_power: gap must be >= 1");
    return gap * (env.noise_psd * b / g) * snr_threshold(b, tau, l);
}

}  // namespace m2m
