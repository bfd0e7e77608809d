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

#include "m2m/stats.hpp"

#include <algorithm>
#include <cmath>

#include "m2m/errors.hpp"
#include "m2m/rng.hpp"
#include "m2m/units.hpp"

namespace m2m {

namespace {

std::size_t nearest_rank_index(std::size_t n, double q) {
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    return std::clamp<std::size_t>(rank, 1, n) - 1;
}

}  // namespace

double percentile(std::span<const double> samples, double q) {
    require_contract(!samples.empty(), "percentile: empty sample");
    require_domain(q > 0.0 && q < 1.0, "percentile: q must lie in (0,1)");
    std::vector<double> v(samples.begin(), samples.end());
    const std::size_t k = nearest_rank_index(v.size(), q);
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return v[k];
}

double bootstrap_percentile_stderr_db(std::span<const double> samples, double q,
                                      std::uint64_t seed, std::uint64_t stream_id,
                                      int resamples) {
    require_contract(!samples.empty(), "bootstrap: empty sample");
    require_contract(resamples >= 2, "bootstrap: need at least two resamples");
    RandomStream stream(seed, stream_id);
    const std::size_t n = samples.size();
    const std::size_t k = nearest_rank_index(n, q);
    std::vector<double> buf(n);
    std::vector<double> est;
    est.reserve(static_cast<std::size_t>(resamples));
    for (int r = 0; r < resamples; ++r) {
        for (auto& x : buf) x = samples[stream.below(n)];
        std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(k), buf.end());
        est.push_back(linear_to_db(buf[k]));
    }
    return std::sqrt(mean_variance(est).variance);
}

MeanVar mean_variance(std::span<const double> samples) {
    MeanVar mv;
    if (samples.empty()) return mv;
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t n = 0;
    for (double x : samples) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    mv.mean = mean;
    mv.variance = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
    return mv;
}

}  // namespace m2m
