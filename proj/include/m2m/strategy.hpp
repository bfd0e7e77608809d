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

#include <string>
#include <string_view>

namespace m2m {

enum class StrategyKind {
    optimal_rach,   ///< joint decoding of the largest feasible set
    cdma,           ///< slotted CDMA, equal received power
    fdma_aloha,     ///< FDMA Aloha with free bin width and slot size
    ftdma,          ///< FDMA-TDMA with a fixed bin width
    sic,            ///< scheduled, weakest-last SIC
    fdma_equal,     ///< scheduled, W/K per device
    fdma_optimal,   ///< scheduled, sum-power optimal bandwidth split
};

/// An access strategy and its tuning knobs.
struct StrategySpec {
    StrategyKind kind = StrategyKind::fdma_equal;
    double bin_width = 0.0;        ///< Hz, F-TDMA only
    bool channelized = false;      ///< CDMA split into cfg.cdma_channel_bw channels
    bool fading_in_gains = false;  ///< scheduled strategies see pathloss x fade

    bool is_scheduled() const;
    bool is_random_access() const { return !is_scheduled(); }

    /// Stable identifier used in CSV output and configuration files,
    /// e.g. "optimal", "cdma", "ftdma_1khz", "fdma_optimal".
    std::string name() const;

    /// Inverse of name(); also accepts "ftdma:<width><unit>" such as
    /// "ftdma:1kHz". Throws ContractError for unknown names.
    static StrategySpec parse(std::string_view text);
};

}  // namespace m2m
