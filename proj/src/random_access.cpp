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

#include "m2m/random_access.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <numeric>

#include "m2m/errors.hpp"
#include "m2m/stats.hpp"
#include "m2m/units.hpp"

namespace m2m {

namespace {

// Relative slack on capacity comparisons so that a rate placed exactly on
// the region boundary is accepted.
constexpr double kCapacitySlack = 1e-12;

inline bool rate_fits(double rate_sum, double w, double power, double noise) {
    const double cap = w * std::log2(1.0 + power / noise);
    return rate_sum <= cap * (1.0 + kCapacitySlack);
}

bool all_equal(std::span<const double> v) {
    return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

}  // namespace

double unit_gap(double, double, double) { return 1.0; }

RachConfig RachConfig::defaults() {
    RachConfig cfg;
    cfg.theta_grid.reserve(50);
    for (int i = 1; i <= 50; ++i) cfg.theta_grid.push_back(i / 50.0);
    return cfg;
}

void RachConfig::validate(double bandwidth) const {
    require_domain(n_codebooks >= 1, "n_codebooks must be positive");
    require_domain(max_attempts >= 1, "max_attempts must be positive");
    require_domain(max_slots >= 1, "max_slots must be positive");
    require_domain(target_outage > 0.0 && target_outage < 1.0, "target_outage must lie in (0,1)");
    require_domain(min_bin_width > 0.0, "min_bin_width must be positive");
    require_domain(cdma_channel_bw > 0.0, "cdma_channel_bw must be positive");
    for (double t : theta_grid) require_domain(t > 0.0 && t <= 1.0, "theta must lie in (0,1]");
    if (bin_width_q) {
        require_domain(*bin_width_q > 0.0 && *bin_width_q <= bandwidth,
                       "bin width must lie in (0, W]");
    }
}

double split_outage(double total) {
    require_domain(total > 0.0 && total < 1.0, "split_outage: total must lie in (0,1)");
    return -std::expm1(0.5 * std::log1p(-total));
}

bool mac_feasible(std::span<const double> rates, std::span<const double> rx_powers, double w,
                  double noise_total, double residual_interference) {
    require_contract(rates.size() == rx_powers.size(), "mac_feasible: length mismatch");
    const std::size_t n = rates.size();
    if (n == 0) return true;
    const double noise = noise_total + residual_interference;

    if (all_equal(rates)) {
        // For a fixed subset size the weakest members give the tightest bound.
        std::vector<double> p(rx_powers.begin(), rx_powers.end());
        std::sort(p.begin(), p.end());
        double power = 0.0;
        for (std::size_t a = 1; a <= n; ++a) {
            power += p[a - 1];
            if (!rate_fits(static_cast<double>(a) * rates[0], w, power, noise)) return false;
        }
        return true;
    }

    require_contract(n <= 24, "mac_feasible: unequal rates limited to 24 users");
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        double rate = 0.0;
        double power = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                rate += rates[i];
                power += rx_powers[i];
            }
        }
        if (!rate_fits(rate, w, power, noise)) return false;
    }
    return true;
}

DecodeOutcome joint_decode_max_subset(std::span<const Arrival> arrivals, double rate_per_device,
                                      double w, double noise_total) {
    DecodeOutcome out;
    const int n = static_cast<int>(arrivals.size());
    out.attempted_set.resize(static_cast<std::size_t>(n));
    std::iota(out.attempted_set.begin(), out.attempted_set.end(), 0);
    out.per_device_tx_power.reserve(static_cast<std::size_t>(n));

    double total_power = 0.0;
    std::vector<int> uses;
    for (const Arrival& a : arrivals) {
        require_domain(a.rx_power > 0.0, "joint_decode: rx powers must be positive");
        total_power += a.rx_power;
        out.per_device_tx_power.push_back(a.rx_power / a.gain);
        if (a.codebook_id >= static_cast<int>(uses.size())) {
            uses.resize(static_cast<std::size_t>(a.codebook_id) + 1, 0);
        }
        ++uses[static_cast<std::size_t>(a.codebook_id)];
    }

    std::vector<int> cand;
    for (int i = 0; i < n; ++i) {
        if (uses[static_cast<std::size_t>(arrivals[static_cast<std::size_t>(i)].codebook_id)] == 1) {
            cand.push_back(i);
        }
    }
    // Strongest first, lowest index on ties. The s strongest candidates
    // dominate every other s-subset elementwise and leave the least
    // interference, so they are feasible whenever any s-subset is.
    std::sort(cand.begin(), cand.end(), [&](int a, int b) {
        const double pa = arrivals[static_cast<std::size_t>(a)].rx_power;
        const double pb = arrivals[static_cast<std::size_t>(b)].rx_power;
        return pa != pb ? pa > pb : a < b;
    });
    const std::size_t m = cand.size();
    std::vector<double> prefix(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        prefix[i + 1] = prefix[i] + arrivals[static_cast<std::size_t>(cand[i])].rx_power;
    }

    for (std::size_t s = m; s >= 1; --s) {
        const double noise = noise_total + std::max(0.0, total_power - prefix[s]);
        // The a weakest members of the top-s set are cand[s-a .. s-1].
        auto fits = [&](std::size_t a) {
            return rate_fits(static_cast<double>(a) * rate_per_device, w,
                             prefix[s] - prefix[s - a], noise);
        };
        bool ok = fits(s);
        for (std::size_t a = 1; ok && a < s; ++a) ok = fits(a);
        if (ok) {
            out.decoded_set.assign(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(s));
            std::sort(out.decoded_set.begin(), out.decoded_set.end());
            break;
        }
    }
    return out;
}

int decode_count_equal_power(int n_transmit, int n_clean, double rx_power,
                             double rate_per_device, double w, double noise_total) {
    for (int s = n_clean; s >= 1; --s) {
        const double noise = noise_total + static_cast<double>(n_transmit - s) * rx_power;
        if (rate_fits(s * rate_per_device, w, s * rx_power, noise)) return s;
    }
    return 0;
}

RachTrialDraw RachTrialDraw::sample(int k_present, int n_codebooks, RandomStream& stream) {
    RachTrialDraw d;
    d.transmit_u.resize(static_cast<std::size_t>(k_present));
    d.codebook.resize(static_cast<std::size_t>(k_present));
    for (int i = 0; i < k_present; ++i) {
        d.transmit_u[static_cast<std::size_t>(i)] = stream.uniform();
        d.codebook[static_cast<std::size_t>(i)] =
            static_cast<std::uint32_t>(stream.below(static_cast<std::uint64_t>(n_codebooks)));
    }
    return d;
}

int RachTrialDraw::transmitters(double theta) const {
    return static_cast<int>(
        std::count_if(transmit_u.begin(), transmit_u.end(), [&](double u) { return u < theta; }));
}

std::vector<int> RachTrialDraw::clean_transmitters(double theta) const {
    std::vector<std::pair<std::uint32_t, int>> tx;
    for (std::size_t i = 0; i < transmit_u.size(); ++i) {
        if (transmit_u[i] < theta) tx.emplace_back(codebook[i], static_cast<int>(i));
    }
    std::sort(tx.begin(), tx.end());
    std::vector<int> clean;
    for (std::size_t i = 0; i < tx.size(); ++i) {
        const bool dup_prev = i > 0 && tx[i - 1].first == tx[i].first;
        const bool dup_next = i + 1 < tx.size() && tx[i + 1].first == tx[i].first;
        if (!dup_prev && !dup_next) clean.push_back(tx[i].second);
    }
    std::sort(clean.begin(), clean.end());
    return clean;
}

double optimal_rach_expected_throughput(int k_present, double theta, const RachConfig& cfg,
                                        const ResourceSlice& slice, const LinkEnv& env,
                                        RandomStream& stream, int n_trials) {
    require_domain(k_present >= 0, "k_present must be nonnegative");
    require_domain(theta >= 0.0 && theta <= 1.0, "theta must lie in [0,1]");
    require_domain(n_trials >= 1, "n_trials must be positive");
    if (k_present == 0 || theta == 0.0) return 0.0;

    const double w = slice.bandwidth_w;
    const double noise = env.noise_psd * w;
    const double rate = slice.payload_l / slice.duration_t;
    double q = cfg.rx_power;
    if (q <= 0.0) {
        q = noise * exp2m1(k_present * slice.spectral_efficiency()) / k_present;
    }

    long long decoded = 0;
    std::vector<Arrival> arrivals;
    for (int t = 0; t < n_trials; ++t) {
        const RachTrialDraw d = RachTrialDraw::sample(k_present, cfg.n_codebooks, stream);
        arrivals.clear();
        for (int i = 0; i < k_present; ++i) {
            if (d.transmit_u[static_cast<std::size_t>(i)] < theta) {
                arrivals.push_back({q, static_cast<int>(d.codebook[static_cast<std::size_t>(i)]), 1.0});
            }
        }
        decoded += static_cast<long long>(
            joint_decode_max_subset(arrivals, rate, w, noise).decoded_set.size());
    }
    return static_cast<double>(decoded) / n_trials;
}

ThetaChoice optimal_rach_best_theta(int k_present, const RachConfig& cfg,
                                    const ResourceSlice& slice, const LinkEnv& env,
                                    std::uint64_t seed, int n_trials) {
    require_contract(!cfg.theta_grid.empty(), "theta grid is empty");
    ThetaChoice best{cfg.theta_grid.front(), -1.0};
    for (double theta : cfg.theta_grid) {
        // Common random numbers across grid points.
        RandomStream stream(seed, StreamId{stream_purpose::user, 0, 0, 0});
        const double tp =
            optimal_rach_expected_throughput(k_present, theta, cfg, slice, env, stream, n_trials);
        if (tp > best.throughput) best = {theta, tp};
    }
    return best;
}

namespace {

struct TrialLoad {
    int arrivals;
    int transmit;
    int clean;
};

std::vector<TrialLoad> loads_at(std::span<const RachTrialDraw> draws, double theta) {
    std::vector<TrialLoad> loads;
    loads.reserve(draws.size());
    for (const RachTrialDraw& d : draws) {
        loads.push_back({static_cast<int>(d.transmit_u.size()), d.transmitters(theta),
                         static_cast<int>(d.clean_transmitters(theta).size())});
    }
    return loads;
}

double outage_from_loads(std::span<const TrialLoad> loads, double rx_power,
                         const ResourceSlice& slice, const LinkEnv& env) {
    const double w = slice.bandwidth_w;
    const double noise = env.noise_psd * w;
    const double rate = slice.payload_l / slice.duration_t;
    long long arrivals = 0;
    long long decoded = 0;
    for (const TrialLoad& l : loads) {
        arrivals += l.arrivals;
        decoded += decode_count_equal_power(l.transmit, l.clean, rx_power, rate, w, noise);
    }
    if (arrivals == 0) return 0.0;
    return 1.0 - static_cast<double>(decoded) / static_cast<double>(arrivals);
}

}  // namespace

double optimal_rach_outage(std::span<const RachTrialDraw> draws, double rx_power, double theta,
                           const ResourceSlice& slice, const LinkEnv& env, double gap) {
    const auto loads = loads_at(draws, theta);
    return outage_from_loads(loads, rx_power / gap, slice, env);
}

OptimalRachPlan plan_optimal_rach(std::span<const RachTrialDraw> draws, double decode_budget,
                                  const RachConfig& cfg, const ResourceSlice& slice,
                                  const LinkEnv& env, double gap) {
    require_contract(!cfg.theta_grid.empty(), "theta grid is empty");
    const double floor_q = env.noise_psd * slice.bandwidth_w *
                           exp2m1(slice.spectral_efficiency());
    constexpr double kMaxGrowth = 1e15;

    std::optional<OptimalRachPlan> best;
    double best_outage = 1.0;
    for (double theta : cfg.theta_grid) {
        // Silent devices are lost, so 1 - theta is a hard floor on outage.
        if (1.0 - theta > decode_budget) continue;
        const auto loads = loads_at(draws, theta);
        auto outage = [&](double q) { return outage_from_loads(loads, q, slice, env); };

        double hi = floor_q;
        double out_hi = outage(hi);
        while (out_hi > decode_budget && hi < floor_q * kMaxGrowth) {
            hi *= 4.0;
            out_hi = outage(hi);
        }
        best_outage = std::min(best_outage, out_hi);
        if (out_hi > decode_budget) continue;
        double lo = hi == floor_q ? floor_q : hi / 4.0;
        if (hi > floor_q) {
            while (hi / lo > 1.0 + 1e-9) {
                const double mid = std::sqrt(lo * hi);
                if (outage(mid) <= decode_budget) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
        }
        const OptimalRachPlan plan{hi * gap, theta, outage(hi)};
        if (!best || plan.rx_power < best->rx_power) best = plan;
    }
    if (!best) {
        throw Infeasible("optimal RACH: no theta meets the decoding budget", best_outage);
    }
    return *best;
}

double cdma_rx_power(int k_simultaneous, const ResourceSlice& slice, const LinkEnv& env) {
    require_domain(k_simultaneous >= 1, "cdma_rx_power: need at least one user");
    const double gamma = exp2m1(slice.spectral_efficiency());
    const double load = (k_simultaneous - 1) * gamma;
    if (load >= 1.0) throw PoleExceeded(k_simultaneous, cdma_pole_capacity(slice));
    return gamma * env.noise_psd * slice.bandwidth_w / (1.0 - load);
}

int cdma_pole_capacity(const ResourceSlice& slice) {
    const double gamma = exp2m1(slice.spectral_efficiency());
    const double k = std::ceil(1.0 / gamma);
    if (k >= static_cast<double>(INT_MAX)) return INT_MAX;
    return std::max(1, static_cast<int>(k));
}

AlohaFixedPoint aloha_fixed_point(double lambda, int n_bins, double slot_tau, int max_attempts) {
    require_domain(lambda >= 0.0, "aloha: lambda must be nonnegative");
    require_domain(n_bins >= 1, "aloha: need at least one bin");
    require_domain(slot_tau > 0.0, "aloha: slot must be positive");
    require_domain(max_attempts >= 1, "aloha: need at least one attempt");
    AlohaFixedPoint fp;
    fp.attempt_rate = lambda;
    if (lambda == 0.0) return fp;

    const double load = lambda * slot_tau / n_bins;
    auto attempts_per_arrival = [&](double p) {
        // 1 + p + ... + p^(A-1)
        if (p <= 0.0) return 1.0;
        return p < 1.0 ? -std::expm1(max_attempts * std::log(p)) / (1.0 - p)
                       : static_cast<double>(max_attempts);
    };
    // Monotone iteration from p = 0 converges to the smallest fixed point.
    double p = 0.0;
    for (int it = 0; it < 10'000'000; ++it) {
        const double next = -std::expm1(-load * attempts_per_arrival(p));
        const bool done = std::abs(next - p) <= 1e-13;
        p = next;
        if (done) break;
    }
    fp.p_collision = p;
    fp.attempt_rate = lambda * attempts_per_arrival(p);
    fp.outage = std::pow(p, max_attempts);
    return fp;
}

double aloha_outage(double lambda, int n_bins, double slot_tau, int max_attempts) {
    return aloha_fixed_point(lambda, n_bins, slot_tau, max_attempts).outage;
}

namespace {

AlohaPlan make_plan(double lambda, int n_bins, int slots, const ResourceSlice& slice,
                    const LinkEnv& env, const RachConfig& cfg, const SnrGapFn& gap) {
    AlohaPlan p;
    p.n_bins = n_bins;
    p.slots = slots;
    p.bin_width = slice.bandwidth_w / n_bins;
    p.slot_tau = slice.duration_t / slots;
    p.attempts = std::min(cfg.max_attempts, slots);
    p.collision_outage = aloha_outage(lambda, n_bins, p.slot_tau, p.attempts);
    const double g = gap(p.bin_width, p.slot_tau, slice.payload_l);
    p.rx_power = required_power(p.bin_width, p.slot_tau, slice.payload_l, 1.0, g, env);
    return p;
}

}  // namespace

AlohaPlan ftdma_plan(double lambda, double bin_width, const ResourceSlice& slice,
                     const LinkEnv& env, const RachConfig& cfg, double collision_budget,
                     const SnrGapFn& gap) {
    require_domain(bin_width > 0.0 && bin_width <= slice.bandwidth_w * (1.0 + 1e-12),
                   "ftdma: bin width must lie in (0, W]");
    const int n_bins = std::max(1, static_cast<int>(std::floor(slice.bandwidth_w / bin_width + 1e-9)));
    double best_outage = 1.0;
    std::optional<AlohaPlan> best;
    for (int m = 1; m <= cfg.max_slots; ++m) {
        AlohaPlan p = make_plan(lambda, n_bins, m, slice, env, cfg, gap);
        p.bin_width = bin_width;
        p.rx_power = required_power(bin_width, p.slot_tau, slice.payload_l, 1.0,
                                    gap(bin_width, p.slot_tau, slice.payload_l), env);
        best_outage = std::min(best_outage, p.collision_outage);
        if (p.collision_outage <= collision_budget && (!best || p.rx_power < best->rx_power)) {
            best = p;
        }
    }
    if (!best) throw Infeasible("ftdma: no slot size meets the collision budget", best_outage);
    return *best;
}

AlohaPlan fdma_aloha_plan(double lambda, const ResourceSlice& slice, const LinkEnv& env,
                          const RachConfig& cfg, double collision_budget, const SnrGapFn& gap) {
    const int n_max = std::max(1, static_cast<int>(std::floor(slice.bandwidth_w / cfg.min_bin_width)));
    double best_outage = 1.0;
    std::optional<AlohaPlan> best;
    for (int m = 1; m <= cfg.max_slots; ++m) {
        const double tau = slice.duration_t / m;
        const int attempts = std::min(cfg.max_attempts, m);
        // Outage falls with the bin count and power rises with it, so take
        // the fewest bins that meet the budget.
        if (aloha_outage(lambda, n_max, tau, attempts) > collision_budget) {
            best_outage = std::min(best_outage, aloha_outage(lambda, n_max, tau, attempts));
            continue;
        }
        int lo = 0;
        int hi = n_max;
        while (hi - lo > 1) {
            const int mid = lo + (hi - lo) / 2;
            if (aloha_outage(lambda, mid, tau, attempts) <= collision_budget) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        const AlohaPlan p = make_plan(lambda, hi, m, slice, env, cfg, gap);
        best_outage = std::min(best_outage, p.collision_outage);
        if (!best || p.rx_power < best->rx_power) best = p;
    }
    if (!best) throw Infeasible("fdma: no bin count meets the collision budget", best_outage);
    return *best;
}

FtdmaResult ftdma_optimize(double lambda, double bin_width, const ResourceSlice& slice,
                           const LinkEnv& env, const RachConfig& cfg, RandomStream& stream,
                           int n_samples) {
    require_domain(n_samples >= 1, "ftdma_optimize: need samples");
    const double budget = split_outage(cfg.target_outage);
    FtdmaResult r;
    r.plan = ftdma_plan(lambda, bin_width, slice, env, cfg, budget);
    r.slot_tau = r.plan.slot_tau;
    const double margin = fade_margin(budget);
    std::vector<double> tx(static_cast<std::size_t>(n_samples));
    for (auto& p : tx) {
        const DeviceDrop d = sample_drop(stream, env);
        p = r.plan.rx_power * margin / pathloss_gain(d.distance, env);
    }
    r.p95_tx_power = percentile(tx, 0.95);
    return r;
}

}  // namespace m2m
