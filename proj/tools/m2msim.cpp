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

// Command-line front end: figure presets, config-driven sweeps, validation.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "m2m/errors.hpp"
#include "m2m/report.hpp"
#include "m2m/validation.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailed = 1;
constexpr int kUsage = 2;

void print_outputs(const m2m::RunOutput& out) {
    std::cout << "wrote " << out.csv.string() << "\n"
              << "wrote " << out.svg.string() << "\n"
              << "wrote " << out.meta.string() << "\n";
}

int cmd_figure(const std::string& name, const std::string& out_dir, const std::optional<std::uint64_t>& seed,
               const std::optional<int>& trials, const std::vector<std::string>& overrides) {
    m2m::RunConfig cfg = m2m::figure_preset(name);
    for (const auto& o : overrides) m2m::apply_override(cfg, o);
    if (seed) cfg.seed = *seed;
    if (trials) cfg.trials = *trials;
    print_outputs(m2m::run_and_write(cfg, out_dir));
    return kOk;
}

int cmd_sweep(const std::string& path, const std::string& out_dir) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream text;
    text << in.rdbuf();
    const m2m::RunConfig cfg = m2m::parse_config(text.str());
    print_outputs(m2m::run_and_write(cfg, out_dir));
    return kOk;
}

int cmd_validate(const std::string& level) {
    const auto lv = level == "full" ? m2m::validation::Level::full : m2m::validation::Level::fast;
    int failed = 0;
    int total = 0;
    m2m::validation::run_checks(lv, [&](const m2m::validation::CheckResult& r) {
        ++total;
        failed += !r.passed;
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  (" << r.detail << ")" << std::endl;
    });
    std::cout << (total - failed) << "/" << total << " checks passed" << std::endl;
    return failed == 0 ? kOk : kValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"M2M uplink power and capacity simulator"};
    app.require_subcommand(1);

    std::string fig_name;
    std::string fig_out = ".";
    std::optional<std::uint64_t> fig_seed;
    std::optional<int> fig_trials;
    std::vector<std::string> fig_set;
    auto* figure = app.add_subcommand("figure", "Run a figure preset and write CSV, SVG and metadata");
    figure->add_option("name", fig_name, "fig1, fig2 or fig4")->required()->check(CLI::IsMember({"fig1", "fig2", "fig4"}));
    figure->add_option("--out", fig_out, "output directory");
    figure->add_option("--seed", fig_seed, "experiment seed");
    figure->add_option("--trials", fig_trials, "Monte-Carlo trials per point")->check(CLI::PositiveNumber);
    figure->add_option("--set", fig_set, "override a config key, e.g. --set tx_power_cap=30dBm");

    std::string sweep_path;
    std::string sweep_out = ".";
    auto* sweep = app.add_subcommand("sweep", "Run a sweep described by a config file");
    sweep->add_option("config", sweep_path, "config file")->required();
    sweep->add_option("--out", sweep_out, "output directory");

    std::string level = "fast";
    auto* validate = app.add_subcommand("validate", "Run the oracle and property checks");
    validate->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*figure) return cmd_figure(fig_name, fig_out, fig_seed, fig_trials, fig_set);
        if (*sweep) return cmd_sweep(sweep_path, sweep_out);
        if (*validate) return cmd_validate(level);
    } catch (const m2m::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const m2m::OutputError& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
