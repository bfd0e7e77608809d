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

#include "m2m/simengine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <thread>

#include "m2m/errors.hpp"
#include "m2m/scheduled.hpp"
#include "m2m/units.hpp"

namespace m2m {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs fn(i) for i in [0, n) on `workers` threads. Each index writes only its
// own output slot, so results do not depend on the worker count.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    const std::size_t w = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1, std::max<std::size_t>(n, 1));
    if (w == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (std::size_t t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += w) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

struct TrialOut {
    std::vector<double> powers;
    long long arrivals = 0;
    long long failures = 0;
    bool pole = false;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

int arrivals_per_slice(double lambda, const ResourceSlice& slice, RandomStream& stream) {
    require_domain(lambda >= 0.0, "arrivals_per_slice: lambda must be nonnegative");
    const double mean = lambda * slice.duration_t;
    if (mean == 0.0) return 0;
    std::poisson_distribution<int> dist(mean);
    return dist(stream);
}

std::vector<DeviceDrop> trial_population(double lambda, const ResourceSlice& slice,
                                         const LinkEnv& env, std::uint64_t seed,
                                         std::uint32_t lambda_index, std::uint32_t trial) {
    RandomStream stream(seed, StreamId{stream_purpose::drops, 0, lambda_index, trial});
    const int k = arrivals_per_slice(lambda, slice, stream);
    std::vector<DeviceDrop> drops(static_cast<std::size_t>(k));
    for (auto& d : drops) d = sample_drop(stream, env);
    return drops;
}

void SweepSpec::validate() const {
    require_domain(!strategies.empty(), "sweep: no strategies");
    require_domain(!lambda_grid.empty(), "sweep: lambda grid is empty");
    for (double l : lambda_grid) require_domain(l > 0.0, "sweep: lambdas must be positive");
    require_domain(n_trials >= 1, "sweep: n_trials must be positive");
    require_domain(workers >= 1, "sweep: workers must be positive");
    require_domain(bootstrap_resamples >= 2, "sweep: need at least two bootstrap resamples");
    require_domain(strategies.size() <= 256 && lambda_grid.size() <= 65536,
                   "sweep: too many strategies or lambda points");
    slice.validate();
    env.validate();
    rach.validate(slice.bandwidth_w);
}

const SweepPoint& SweepResult::at(const std::string& strategy, double lambda) const {
    for (const auto& p : points) {
        if (p.strategy == strategy && p.lambda == lambda) return p;
    }
    throw ContractError("no sweep point for " + strategy + " at lambda " + fmt(lambda));
}

PointSamples simulate_point(const SweepSpec& spec, std::size_t strategy_index,
                            std::size_t lambda_index) {
    const StrategySpec& strat = spec.strategies.at(strategy_index);
    const double lambda = spec.lambda_grid.at(lambda_index);
    const auto n = static_cast<std::size_t>(spec.n_trials);
    const auto li = static_cast<std::uint32_t>(lambda_index);
    const auto si = static_cast<std::uint32_t>(strategy_index);
    const LinkEnv& env = spec.env;
    const ResourceSlice& slice = spec.slice;

    auto population = [&](std::size_t t) {
        return trial_population(lambda, slice, env, spec.seed, li, static_cast<std::uint32_t>(t));
    };
    auto strategy_stream = [&](std::size_t t) {
        return RandomStream(spec.seed, StreamId{stream_purpose::strategy, si, li,
                                                static_cast<std::uint32_t>(t)});
    };

    PointSamples out;
    std::vector<TrialOut> trials(n);
    const double rach_split = split_outage(spec.rach.target_outage);

    // Devices that receive `tx` succeed unless their fade falls below the margin.
    auto deliver = [](TrialOut& to, const DeviceDrop& d, double tx, double margin) {
        if (d.fade_gain * margin >= 1.0) {
            to.powers.push_back(tx);
        } else {
            ++to.failures;
        }
    };

    switch (strat.kind) {
        case StrategyKind::optimal_rach: {
            std::vector<std::vector<DeviceDrop>> pops(n);
            std::vector<RachTrialDraw> draws(n);
            parallel_for(n, spec.workers, [&](std::size_t t) {
                pops[t] = population(t);
                RandomStream s = strategy_stream(t);
                draws[t] = RachTrialDraw::sample(static_cast<int>(pops[t].size()),
                                                 spec.rach.n_codebooks, s);
            });
            std::optional<OptimalRachPlan> plan;
            try {
                plan = plan_optimal_rach(draws, rach_split, spec.rach, slice, env);
            } catch (const Infeasible& e) {
                out.note = "infeasible";
                out.extra_outage = e.best_outage();
            }
            const double margin = fade_margin(rach_split);
            const double noise = env.noise_psd * slice.bandwidth_w;
            const double rate = slice.payload_l / slice.duration_t;
            parallel_for(n, spec.workers, [&](std::size_t t) {
                TrialOut& to = trials[t];
                const auto& pop = pops[t];
                to.arrivals = static_cast<long long>(pop.size());
                if (!plan) {
                    to.failures = to.arrivals;
                    return;
                }
                const std::vector<int> clean = draws[t].clean_transmitters(plan->theta);
                const int decoded = decode_count_equal_power(
                    draws[t].transmitters(plan->theta), static_cast<int>(clean.size()),
                    plan->rx_power, rate, slice.bandwidth_w, noise);
                to.failures = to.arrivals - decoded;
                // Equal powers: the lowest clean indices win ties.
                for (int j = 0; j < decoded; ++j) {
                    const DeviceDrop& d = pop[static_cast<std::size_t>(clean[static_cast<std::size_t>(j)])];
                    deliver(to, d, plan->rx_power * margin / pathloss_gain(d.distance, env), margin);
                }
            });
            break;
        }
        case StrategyKind::cdma: {
            const int channels =
                strat.channelized
                    ? std::max(1, static_cast<int>(std::floor(slice.bandwidth_w / spec.rach.cdma_channel_bw + 1e-9)))
                    : 1;
            const ResourceSlice chan{slice.bandwidth_w / channels, slice.duration_t, slice.payload_l};
            const double margin = fade_margin(rach_split);
            parallel_for(n, spec.workers, [&](std::size_t t) {
                TrialOut& to = trials[t];
                const auto pop = population(t);
                to.arrivals = static_cast<long long>(pop.size());
                std::vector<int> channel(pop.size(), 0);
                std::vector<int> load(static_cast<std::size_t>(channels), 0);
                RandomStream s = strategy_stream(t);
                for (auto& c : channel) {
                    c = static_cast<int>(s.below(static_cast<std::uint64_t>(channels)));
                    ++load[static_cast<std::size_t>(c)];
                }
                for (std::size_t i = 0; i < pop.size(); ++i) {
                    try {
                        const double q = cdma_rx_power(load[static_cast<std::size_t>(channel[i])], chan, env);
                        deliver(to, pop[i], q * margin / pathloss_gain(pop[i].distance, env), margin);
                    } catch (const PoleExceeded&) {
                        ++to.failures;
                        to.pole = true;
                    }
                }
            });
            if (std::any_of(trials.begin(), trials.end(), [](const TrialOut& t) { return t.pole; })) {
                out.note = "pole exceeded";
            }
            break;
        }
        case StrategyKind::fdma_aloha:
        case StrategyKind::ftdma: {
            std::optional<AlohaPlan> plan;
            try {
                plan = strat.kind == StrategyKind::ftdma
                           ? ftdma_plan(lambda, strat.bin_width, slice, env, spec.rach, rach_split)
                           : fdma_aloha_plan(lambda, slice, env, spec.rach, rach_split);
                out.extra_outage = plan->collision_outage;
            } catch (const Infeasible& e) {
                out.note = "infeasible";
                out.extra_outage = 1.0;
            }
            const double margin = fade_margin(rach_split);
            parallel_for(n, spec.workers, [&](std::size_t t) {
                TrialOut& to = trials[t];
                const auto pop = population(t);
                to.arrivals = static_cast<long long>(pop.size());
                if (!plan) {
                    to.failures = to.arrivals;
                    return;
                }
                for (const auto& d : pop) {
                    deliver(to, d, plan->rx_power * margin / pathloss_gain(d.distance, env), margin);
                }
            });
            break;
        }
        case StrategyKind::sic:
        case StrategyKind::fdma_equal:
        case StrategyKind::fdma_optimal: {
            const double margin = strat.fading_in_gains ? 1.0 : fade_margin(env.fade_outage);
            parallel_for(n, spec.workers, [&](std::size_t t) {
                TrialOut& to = trials[t];
                const auto pop = population(t);
                to.arrivals = static_cast<long long>(pop.size());
                if (pop.empty()) return;
                ScheduledInstance inst;
                inst.slice = slice;
                inst.gains.reserve(pop.size());
                for (const auto& d : pop) {
                    const double g = pathloss_gain(d.distance, env);
                    inst.gains.push_back(strat.fading_in_gains ? g * d.fade_gain : g);
                }
                std::vector<double> p;
                if (strat.kind == StrategyKind::sic) {
                    p = sic_tx_powers(inst, env);
                } else if (strat.kind == StrategyKind::fdma_equal) {
                    p = fdma_equal_powers(inst, env);
                } else {
                    p = fdma_optimal_alloc(inst, env).powers;
                }
                for (std::size_t i = 0; i < pop.size(); ++i) {
                    if (strat.fading_in_gains) {
                        to.powers.push_back(p[i]);
                    } else {
                        deliver(to, pop[i], p[i] * margin, margin);
                    }
                }
            });
            break;
        }
    }

    std::size_t total = 0;
    for (const auto& t : trials) total += t.powers.size();
    out.powers.reserve(total);
    for (auto& t : trials) {
        out.arrivals += t.arrivals;
        out.failures += t.failures;
        out.powers.insert(out.powers.end(), t.powers.begin(), t.powers.end());
    }
    return out;
}

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    SweepResult result;
    for (std::size_t si = 0; si < spec.strategies.size(); ++si) {
        for (std::size_t li = 0; li < spec.lambda_grid.size(); ++li) {
            PointSamples s = simulate_point(spec, si, li);
            SweepPoint pt;
            pt.strategy = spec.strategies[si].name();
            pt.lambda = spec.lambda_grid[li];
            pt.n_samples = static_cast<long long>(s.powers.size());
            pt.n_arrivals = s.arrivals;
            const double sim_outage =
                s.arrivals > 0 ? static_cast<double>(s.failures) / static_cast<double>(s.arrivals) : 0.0;
            pt.outage = std::clamp(1.0 - (1.0 - sim_outage) * (1.0 - s.extra_outage), 0.0, 1.0);
            pt.note = s.note;
            if (s.powers.empty()) {
                pt.p95_tx_power = kNaN;
                pt.mean_tx_power = kNaN;
                pt.stderr_db = kNaN;
            } else {
                pt.p95_tx_power = percentile(s.powers, 0.95);
                pt.mean_tx_power = mean_variance(s.powers).mean;
                pt.stderr_db = bootstrap_percentile_stderr_db(
                    s.powers, 0.95, spec.seed,
                    StreamId{stream_purpose::bootstrap, static_cast<std::uint32_t>(si),
                             static_cast<std::uint32_t>(li), 0}
                        .packed(),
                    spec.bootstrap_resamples);
            }
            result.points.push_back(std::move(pt));
        }
    }

    auto& echo = result.config_echo;
    echo["seed"] = std::to_string(spec.seed);
    echo["trials"] = std::to_string(spec.n_trials);
    echo["bootstrap_resamples"] = std::to_string(spec.bootstrap_resamples);
    echo["bandwidth_hz"] = fmt(spec.slice.bandwidth_w);
    echo["duration_s"] = fmt(spec.slice.duration_t);
    echo["payload_bits"] = fmt(spec.slice.payload_l);
    echo["noise_psd_dbm_per_hz"] = fmt(watt_to_dbm(spec.env.noise_psd));
    echo["cell_radius_m"] = fmt(spec.env.cell_radius);
    echo["pathloss_exponent"] = fmt(spec.env.pathloss_exponent);
    echo["pathloss_intercept_db"] = fmt(spec.env.pathloss_intercept_db);
    echo["fade_outage"] = fmt(spec.env.fade_outage);
    echo["tx_power_cap_dbm"] = fmt(watt_to_dbm(spec.env.tx_power_cap));
    echo["target_outage"] = fmt(spec.rach.target_outage);
    echo["rach_outage_split"] = fmt(split_outage(spec.rach.target_outage));
    echo["n_codebooks"] = std::to_string(spec.rach.n_codebooks);
    echo["max_attempts"] = std::to_string(spec.rach.max_attempts);
    echo["max_slots"] = std::to_string(spec.rach.max_slots);
    echo["theta_grid_points"] = std::to_string(spec.rach.theta_grid.size());
    echo["cdma_channel_bw_hz"] = fmt(spec.rach.cdma_channel_bw);
    return result;
}

}  // namespace m2m
