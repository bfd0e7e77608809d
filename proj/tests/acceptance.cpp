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

// Acceptance suite: one PASS/FAIL line per criterion.

#include <CLI11.hpp>
#include <chrono>
#include <iostream>

#include "m2m/validation.hpp"

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> only;
    m2m::validation::AcceptanceOptions opt;
    app.add_option("--criterion", only, "run only these criteria (1-based)")
        ->check(CLI::Range(1, m2m::validation::kAcceptanceCriteria));
    app.add_option("--rach-trials", opt.rach_trials, "trials of the random-access sweep");
    app.add_option("--scheduled-trials", opt.scheduled_trials, "trials of the scheduled sweeps");
    app.add_option("--capacity-trials", opt.capacity_trials, "trials per arrival-rate evaluation");
    app.add_option("--workers", opt.workers, "worker threads");
    CLI11_PARSE(app, argc, argv);

    if (only.empty()) {
        for (int i = 1; i <= m2m::validation::kAcceptanceCriteria; ++i) only.push_back(i);
    }
    int failed = 0;
    for (int i : only) {
        const auto start = std::chrono::steady_clock::now();
        const auto r = m2m::validation::acceptance(i, opt);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !r.passed;
        std::cout << (r.passed ? "PASS" : "FAIL") << " criterion " << i << ": " << r.name << "\n"
                  << "     " << r.detail << " [" << static_cast<int>(secs + 0.5) << " s]" << std::endl;
    }
    std::cout << (only.size() - static_cast<std::size_t>(failed)) << "/" << only.size()
              << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
