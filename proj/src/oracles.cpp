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

#include "m2m/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "m2m/errors.hpp"

namespace m2m::oracle {

bool mac_feasible_all_subsets(std::span<const double> rates, std::span<const double> rx_powers,
                              double w, double noise_total, double residual_interference) {
    require_contract(rates.size() == rx_powers.size(), "oracle: length mismatch");
    const std::size_t n = rates.size();
    require_contract(n <= 20, "oracle: at most 20 users");
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        double r = 0.0;
        double p = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask >> i & 1u) {
                r += rates[i];
                p += rx_powers[i];
            }
        }
        const double cap = w * std::log2(1.0 + p / (noise_total + residual_interference));
        if (r > cap * (1.0 + 1e-12)) return false;
    }
    return true;
}

std::vector<int> joint_decode_exhaustive(std::span<const Arrival> arrivals, double rate, double w,
                                         double noise_total) {
    const std::size_t n = arrivals.size();
    require_contract(n <= 16, "oracle: at most 16 arrivals");
    std::map<int, int> uses;
    double total = 0.0;
    for (const auto& a : arrivals) {
        ++uses[a.codebook_id];
        total += a.rx_power;
    }

    std::vector<int> best;
    double best_power = -1.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> set;
        std::vector<double> p;
        double ps = 0.0;
        bool clean = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask >> i & 1u)) continue;
            if (uses[arrivals[i].codebook_id] > 1) {
                clean = false;
                break;
            }
            set.push_back(static_cast<int>(i));
            p.push_back(arrivals[i].rx_power);
            ps += arrivals[i].rx_power;
        }
        if (!clean) continue;
        const std::vector<double> rates(set.size(), rate);
        if (!mac_feasible_all_subsets(rates, p, w, noise_total, total - ps)) continue;
        const bool better = set.size() > best.size() ||
                            (set.size() == best.size() &&
                             (ps > best_power || (ps == best_power && set < best)));
        if (better || best_power < 0.0) {
            best = set;
            best_power = ps;
        }
    }
    return best;
}

double expected_throughput_enumerated(int k, double theta, int n_codebooks, double rx_power,
                                      const ResourceSlice& slice, const LinkEnv& env) {
    require_contract(k >= 0 && k <= 8, "oracle: k must be small");
    const double w = slice.bandwidth_w;
    const double noise = env.noise_psd * w;
    const double rate = slice.payload_l / slice.duration_t;
    double expected = 0.0;
    for (std::uint32_t tx = 0; tx < (1u << k); ++tx) {
        const int t = std::popcount(tx);
        const double p_tx = std::pow(theta, t) * std::pow(1.0 - theta, k - t);
        if (p_tx == 0.0) continue;
        // Every codebook assignment of the t transmitters is equally likely.
        const long long combos = static_cast<long long>(std::llround(std::pow(n_codebooks, t)));
        double sum = 0.0;
        for (long long c = 0; c < combos; ++c) {
            std::vector<Arrival> arr;
            long long code = c;
            for (int i = 0; i < t; ++i) {
                arr.push_back({rx_power, static_cast<int>(code % n_codebooks), 1.0});
                code /= n_codebooks;
            }
            sum += static_cast<double>(joint_decode_exhaustive(arr, rate, w, noise).size());
        }
        expected += p_tx * sum / static_cast<double>(combos);
    }
    return expected;
}

namespace {

double device_power(double b, double gain, const ScheduledInstance& inst, const LinkEnv& env) {
    const double x = inst.slice.payload_l / (b * inst.slice.duration_t);
    if (x > 1000.0) return INFINITY;
    return inst.snr_gap * env.noise_psd * b / gain * (std::pow(2.0, x) - 1.0);
}

// Minimises f on [lo, hi] for a unimodal f.
template <typename F>
double golden(F&& f, double lo, double hi) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && b - a > 1e-15 * hi; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double fdma_two_device_grid(const ScheduledInstance& inst, const LinkEnv& env, int grid_points,
                            double* best_b1) {
    require_contract(inst.k() == 2, "oracle: two devices expected");
    const double w = inst.slice.bandwidth_w;
    double best = INFINITY;
    double arg = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double b1 = w * (i + 0.5) / grid_points;
        const double s = device_power(b1, inst.gains[0], inst, env) +
                         device_power(w - b1, inst.gains[1], inst, env);
        if (s < best) {
            best = s;
            arg = b1;
        }
    }
    if (best_b1) *best_b1 = arg;
    return best;
}

double fdma_min_sum_power_exchange(const ScheduledInstance& inst, const LinkEnv& env,
                                   int grid_points) {
    const int k = inst.k();
    std::vector<double> b(static_cast<std::size_t>(k), inst.slice.bandwidth_w / k);
    auto sum_power = [&] {
        double s = 0.0;
        for (int i = 0; i < k; ++i) s += device_power(b[static_cast<std::size_t>(i)], inst.gains[static_cast<std::size_t>(i)], inst, env);
        return s;
    };
    double current = sum_power();
    for (int sweep = 0; sweep < 500; ++sweep) {
        for (int i = 0; i < k; ++i) {
            for (int j = i + 1; j < k; ++j) {
                const double gi = inst.gains[static_cast<std::size_t>(i)];
                const double gj = inst.gains[static_cast<std::size_t>(j)];
                const double s = b[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(j)];
                auto pair = [&](double x) {
                    return device_power(x, gi, inst, env) + device_power(s - x, gj, inst, env);
                };
                double lo = 0.0, hi = s;
                if (sweep == 0) {
                    // Coarse grid locates the basin before refinement.
                    double best = INFINITY;
                    int arg = 0;
                    for (int g = 0; g < grid_points; ++g) {
                        const double v = pair(s * (g + 0.5) / grid_points);
                        if (v < best) {
                            best = v;
                            arg = g;
                        }
                    }
                    lo = s * std::max(0, arg - 1) / grid_points;
                    hi = s * std::min(grid_points, arg + 2) / grid_points;
                }
                const double x = golden(pair, lo, hi);
                if (pair(x) < pair(b[static_cast<std::size_t>(i)])) {
                    b[static_cast<std::size_t>(i)] = x;
                    b[static_cast<std::size_t>(j)] = s - x;
                }
            }
        }
        const double next = sum_power();
        const bool done = current - next <= 1e-15 * current;
        current = next;
        if (done && sweep > 0) break;
    }
    return current;
}

}  // namespace m2m::oracle
