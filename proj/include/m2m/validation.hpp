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

#include <functional>
#include <string>
#include <vector>

#include "m2m/linkmodel.hpp"
#include "m2m/scheduled.hpp"

namespace m2m::validation {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

enum class Level { fast, full };

using Reporter = std::function<void(const CheckResult&)>;

/// Oracle suites, closed-form identities and monotonicity laws. The full
/// level adds every acceptance criterion. Each result is passed to `report`
/// as soon as it is known.
std::vector<CheckResult> run_checks(Level level, const Reporter& report = {});

/// Received powers of a scheduled SIC solution, in input order.
using SicRecursion = std::function<std::vector<double>(const ScheduledInstance&, const LinkEnv&)>;

/// True iff `sic` yields powers that (a) lie in the MAC capacity region for
/// equal rates L/T and (b) decode in order of decreasing gain with each
/// device meeting its SINR threshold against the not-yet-decoded rest, on
/// `n_instances` random instances.
bool sic_region_holds(const SicRecursion& sic, int n_instances, std::uint64_t seed);

/// SIC recursion with the per-stage growth factor shrunk by `perturbation`;
/// used to show that the region check rejects a wrong recursion.
std::vector<double> perturbed_sic_rx_powers(const ScheduledInstance& inst, const LinkEnv& env,
                                            double perturbation);

/// Trial budgets of the acceptance criteria.
struct AcceptanceOptions {
    int rach_trials = 5000;       ///< random-access sweep behind criteria 3 and 4
    int scheduled_trials = 2000;  ///< scheduled sweeps behind criteria 5 and 6
    int cdma_trials = 2000;       ///< criterion 2
    int capacity_trials = 2000;   ///< criterion 7
    int workers = 1;
};

inline constexpr int kAcceptanceCriteria = 10;

/// Evaluates acceptance criterion `index` (1-based).
CheckResult acceptance(int index, const AcceptanceOptions& opt = {});

}  // namespace m2m::validation
