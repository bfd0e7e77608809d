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
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "m2m/protocol.hpp"
#include "m2m/simengine.hpp"

namespace m2m {

/// Malformed configuration text; carries the offending line and key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, std::string key, const std::string& message);
    int line() const { return line_; }
    const std::string& key() const { return key_; }

private:
    int line_;
    std::string key_;
};

/// Output file could not be written.
class OutputError : public std::runtime_error {
public:
    explicit OutputError(const std::filesystem::path& path);
};

/// What a run produces: transmit power against arrival rate, or the largest
/// supportable arrival rate against payload size.
enum class RunMode { power, capacity };

/// Flat run configuration. Physical quantities are stored in the canonical
/// units written by echo_config: Hz, s, bits, m, dB, dBm, dBm/Hz, 1/s.
struct RunConfig {
    std::string name = "sweep";
    RunMode mode = RunMode::power;
    std::vector<std::string> strategies{"fdma_equal"};
    std::vector<double> lambda_grid{1.0, 10.0, 100.0};
    std::vector<double> payload_grid{100.0};

    double bandwidth_hz = 100e3;
    double duration_s = 1.0;
    double payload_bits = 500.0;

    double noise_psd_dbm_per_hz = -169.0;
    double cell_radius_m = 2000.0;
    double pathloss_exponent = 3.7;
    double pathloss_intercept_db = 38.5;
    double fade_outage = 0.1;
    double tx_power_cap_dbm = 24.0;

    double target_outage = 0.1;
    int n_codebooks = 65536;
    int theta_points = 50;
    int max_attempts = 16;
    int max_slots = 1000;
    double min_bin_width_hz = 1.0;
    double cdma_channel_bw_hz = 100e3;

    int trials = 5000;
    std::uint64_t seed = 1;
    int workers = 1;
    int bootstrap_resamples = 200;

    double control_payload_bits = 80.0;
    double grant_bits = 80.0;
    double dl_bandwidth_hz = 0.0;
    double dl_spectral_efficiency = 2.07;
    std::array<double, 3> stage_split{0.4, 0.2, 0.4};
    bool dl_cap = true;
    bool finite_blocklength = true;
    double block_error = 1e-3;
    int bisection_iterations = 20;
    double lambda_search_lo = 1e-2;
    double lambda_search_hi = 1e5;
    int drop_samples = 20000;

    /// Throws DomainError on out-of-range values.
    void validate() const;

    LinkEnv env() const;
    ResourceSlice slice() const;
    RachConfig rach() const;
    SweepSpec sweep_spec() const;
    OverheadModel overhead() const;
    ProtocolOptions protocol_options() const;
};

/// Parses `key = value [unit]` lines on top of `base`. `#` starts a comment.
/// Unknown keys, missing or wrong units and bad numbers raise ConfigError.
RunConfig parse_config(std::string_view text, RunConfig base = {});

/// Applies one `key=value` override as if it were a line of a config file.
void apply_override(RunConfig& cfg, std::string_view assignment);

/// Canonical text of every key with its resolved value, plus derived
/// quantities as comments. parse_config(echo_config(c)) echoes identically.
std::string echo_config(const RunConfig& cfg);

/// Names of all accepted keys in echo order.
std::vector<std::string> config_keys();

/// Preset for "fig1", "fig2" or "fig4". Throws ContractError otherwise.
RunConfig figure_preset(std::string_view name);

/// One row of a capacity run.
struct CapacityRow {
    std::string strategy;
    ProtocolCurvePoint point;
};

/// Runs a capacity-mode configuration: every strategy at every payload.
/// Strategy "two_stage" selects the request/grant/data protocol; the others
/// are one-stage random-access strategies.
std::vector<CapacityRow> run_capacity(const RunConfig& cfg);

/// `strategy,lambda_per_s,p95_tx_power_dbm,outage,stderr_db`
std::string sweep_csv(const SweepResult& result);

/// `strategy,payload_bits,max_arrival_per_s,binding_constraint`
std::string capacity_csv(const std::vector<CapacityRow>& rows);

/// Power (dBm) against arrival rate on a logarithmic x axis.
std::string sweep_svg(const SweepResult& result, const std::string& title);

/// Payload (bits) against the largest arrival rate, both axes logarithmic.
std::string capacity_svg(const std::vector<CapacityRow>& rows, const std::string& title);

/// Files written by a run.
struct RunOutput {
    std::filesystem::path csv;
    std::filesystem::path svg;
    std::filesystem::path meta;
};

/// Runs `cfg` and writes `<name>.csv`, `<name>.svg` and `<name>.meta.cfg`
/// into `out_dir`, creating it when missing.
RunOutput run_and_write(const RunConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace m2m
