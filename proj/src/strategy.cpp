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

#include "m2m/strategy.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "m2m/errors.hpp"

namespace m2m {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string format_width(double hz) {
    char buf[64];
    if (hz >= 1000.0 && std::fmod(hz, 1000.0) == 0.0) {
        std::snprintf(buf, sizeof buf, "%.0fkhz", hz / 1000.0);
    } else {
        std::snprintf(buf, sizeof buf, "%.0fhz", hz);
    }
    return buf;
}

double parse_width(std::string_view s) {
    double scale = 1.0;
    if (s.ends_with("khz")) {
        scale = 1e3;
        s.remove_suffix(3);
    } else if (s.ends_with("mhz")) {
        scale = 1e6;
        s.remove_suffix(3);
    } else if (s.ends_with("hz")) {
        s.remove_suffix(2);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !(v > 0.0)) {
        throw ContractError("bad F-TDMA bin width '" + std::string(s) + "'");
    }
    return v * scale;
}

}  // namespace

bool StrategySpec::is_scheduled() const {
    return kind == StrategyKind::sic || kind == StrategyKind::fdma_equal ||
           kind == StrategyKind::fdma_optimal;
}

std::string StrategySpec::name() const {
    std::string base;
    switch (kind) {
        case StrategyKind::optimal_rach: base = "optimal"; break;
        case StrategyKind::cdma: base = channelized ? "cdma_ch" : "cdma"; break;
        case StrategyKind::fdma_aloha: base = "fdma"; break;
        case StrategyKind::ftdma: base = "ftdma_" + format_width(bin_width); break;
        case StrategyKind::sic: base = "sic"; break;
        case StrategyKind::fdma_equal: base = "fdma_equal"; break;
        case StrategyKind::fdma_optimal: base = "fdma_optimal"; break;
    }
    if (is_scheduled() && fading_in_gains) base += "_fading";
    return base;
}

StrategySpec StrategySpec::parse(std::string_view text) {
    std::string s = lower(text);
    StrategySpec spec;
    if (s.ends_with("_fading")) {
        spec.fading_in_gains = true;
        s.resize(s.size() - 7);
    }
    if (s == "optimal") {
        spec.kind = StrategyKind::optimal_rach;
    } else if (s == "cdma") {
        spec.kind = StrategyKind::cdma;
    } else if (s == "cdma_ch") {
        spec.kind = StrategyKind::cdma;
        spec.channelized = true;
    } else if (s == "fdma") {
        spec.kind = StrategyKind::fdma_aloha;
    } else if (s.starts_with("ftdma_") || s.starts_with("ftdma:")) {
        spec.kind = StrategyKind::ftdma;
        spec.bin_width = parse_width(std::string_view(s).substr(6));
    } else if (s == "sic") {
        spec.kind = StrategyKind::sic;
    } else if (s == "fdma_equal") {
        spec.kind = StrategyKind::fdma_equal;
    } else if (s == "fdma_optimal") {
        spec.kind = StrategyKind::fdma_optimal;
    } else {
        throw ContractError("unknown strategy '" + std::string(text) + "'");
    }
    if (spec.fading_in_gains && !spec.is_scheduled()) {
        throw ContractError("'_fading' applies to scheduled strategies only");
    }
    return spec;
}

}  // namespace m2m
