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
#include <span>
#include <vector>

namespace m2m {

/// Nearest-rank percentile: the value at 1-based rank ceil(q n) of the
/// ascending sort. Throws ContractError on empty input, DomainError for q
/// outside (0, 1).
double percentile(std::span<const double> samples, double q);

/// Bootstrap standard error of the q-percentile in dB (200 resamples by
/// default). Samples must be positive.
double bootstrap_percentile_stderr_db(std::span<const double> samples, double q,
                                      std::uint64_t seed, std::uint64_t stream_id,
                                      int resamples = 200);

struct MeanVar {
    double mean = 0.0;
    double variance = 0.0;  ///< unbiased
};
MeanVar mean_variance(std::span<const double> samples);

}  // namespace m2m
