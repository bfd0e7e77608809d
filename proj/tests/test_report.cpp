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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "m2m/errors.hpp"
#include "m2m/report.hpp"
#include "m2m/validation.hpp"

using namespace m2m;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("m2m_test_" + name);
    fs::remove_all(d);
    return d;
}

RunConfig tiny() {
    RunConfig c;
    c.name = "tiny";
    c.strategies = {"sic", "fdma"};
    c.lambda_grid = {5.0, 50.0};
    c.trials = 40;
    return c;
}

}  // namespace

TEST_CASE("units convert to canonical values") {
    const RunConfig c = parse_config(
        "bandwidth = 0.1 MHz\n"
        "duration = 500 ms\n"
        "payload = 1 kbit\n"
        "cell_radius = 1.5 km\n"
        "tx_power_cap = 0.1 W   # 20 dBm\n"
        "noise_psd = -199 dBW/Hz\n"
        "lambda_grid = 1, 10, 100 /s\n"
        "min_bin_width = 200 Hz\n");
    CHECK(c.bandwidth_hz == 100e3);
    CHECK(c.duration_s == 0.5);
    CHECK(c.payload_bits == 1000.0);
    CHECK(c.cell_radius_m == 1500.0);
    CHECK(c.tx_power_cap_dbm == doctest::Approx(20.0).epsilon(1e-14));
    CHECK(c.noise_psd_dbm_per_hz == doctest::Approx(-169.0).epsilon(1e-14));
    CHECK(c.lambda_grid == std::vector<double>{1, 10, 100});
    CHECK(c.min_bin_width_hz == 200.0);
}

TEST_CASE("config errors carry line and key") {
    auto fails = [](const std::string& text, int line, const std::string& key) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            CHECK(e.line() == line);
            CHECK(e.key() == key);
            return true;
        }
        return false;
    };
    CHECK(fails("trials = 10\nbandwidth = 100\n", 2, "bandwidth"));         // missing unit
    CHECK(fails("frobnicate = 3\n", 1, "frobnicate"));                      // unknown key
    CHECK(fails("bandwidth = 100 dBm\n", 1, "bandwidth"));                  // wrong unit
    CHECK(fails("trials = 10 s\n", 1, "trials"));                           // unit on a count
    CHECK(fails("trials = ten\n", 1, "trials"));                            // not a number
    CHECK(fails("trials = 1\ntrials = 2\n", 2, "trials"));                  // duplicate
    CHECK(fails("\n\nno equals sign\n", 3, "no equals sign"));
    CHECK(fails("strategies = sic, warp\n", 1, "strategies"));
    CHECK_THROWS_AS(parse_config("target_outage = 1.5\n").validate(), DomainError);
    CHECK_THROWS_AS(parse_config("lambda_grid = \n").validate(), DomainError);
}

TEST_CASE("overrides") {
    RunConfig c;
    apply_override(c, "trials=77");
    apply_override(c, "bandwidth = 20 kHz");
    CHECK(c.trials == 77);
    CHECK(c.bandwidth_hz == 20e3);
    CHECK_THROWS_AS(apply_override(c, "trials"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "nope=1"), ConfigError);
}

TEST_CASE("echo round-trips byte for byte") {
    for (const char* preset : {"fig1", "fig2", "fig4"}) {
        const RunConfig c = figure_preset(preset);
        const std::string text = echo_config(c);
        CHECK(echo_config(parse_config(text)) == text);
    }
    RunConfig odd = tiny();
    odd.bandwidth_hz = 12345.678901234567;
    odd.seed = 0xffffffffffffull;
    odd.stage_split = {0.3, 0.3, 0.4};
    const std::string text = echo_config(odd);
    CHECK(echo_config(parse_config(text)) == text);
    for (const auto& key : config_keys()) CHECK(text.find(key + " =") != std::string::npos);
    CHECK_THROWS_AS(figure_preset("fig3"), ContractError);
}

TEST_CASE("CSV and SVG output") {
    RunConfig c = tiny();
    c.strategies = {"cdma"};
    c.lambda_grid = {10.0, 1000.0};
    const SweepResult r = run_sweep(c.sweep_spec());
    const std::string csv = sweep_csv(r);
    CHECK(csv.rfind("strategy,lambda_per_s,p95_tx_power_dbm,outage,stderr_db\n", 0) == 0);
    CHECK(csv.find("cdma,1000,") != std::string::npos);
    const std::string svg = sweep_svg(r, "test");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("xmlns=\"http://www.w3.org/2000/svg\"") != std::string::npos);
    CHECK(svg.find("href") == std::string::npos);
    CHECK(svg.find("<script") == std::string::npos);
    CHECK(svg.find("cdma") != std::string::npos);
}

TEST_CASE("capacity CSV") {
    const std::vector<CapacityRow> rows{{"fdma", {100.0, 12.5, Binding::outage}},
                                        {"two_stage", {100.0, 0.0, Binding::power}}};
    CHECK(capacity_csv(rows) ==
          "strategy,payload_bits,max_arrival_per_s,binding_constraint\n"
          "fdma,100,12.500000,outage\n"
          "two_stage,100,0.000000,power\n");
    CHECK(capacity_svg({}, "empty").find("no feasible points") != std::string::npos);
}

TEST_CASE("run_and_write is deterministic and its sidecar reproduces the run") {
    const fs::path a = scratch_dir("a"), b = scratch_dir("b");
    const RunOutput out = run_and_write(tiny(), a);
    CHECK(out.csv == a / "tiny.csv");
    const RunConfig again = parse_config(slurp(out.meta));
    const RunOutput out2 = run_and_write(again, b);
    CHECK(slurp(out.csv) == slurp(out2.csv));
    CHECK(slurp(out.svg) == slurp(out2.svg));
    CHECK(slurp(out.meta) == slurp(out2.meta));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("unwritable output directory") {
    const fs::path d = scratch_dir("blocked");
    { std::ofstream(d.string()) << "file, not a directory"; }
    CHECK_THROWS_AS(run_and_write(tiny(), d / "sub"), OutputError);
    fs::remove(d);
}

TEST_CASE("fast validation suite passes") {
    const auto results = validation::run_checks(validation::Level::fast);
    CHECK(results.size() >= 10);
    for (const auto& r : results) {
        INFO(r.name << ": " << r.detail);
        CHECK(r.passed);
    }
}
