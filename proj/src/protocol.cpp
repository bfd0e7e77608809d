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

#include "m2m/protocol.hpp"

#include <algorithm>
#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "m2m/errors.hpp"
#include "m2m/stats.hpp"
#include "m2m/units.hpp"

namespace m2m {

void OverheadModel::validate() const {
    require_domain(control_payload_bits >= 0.0, "control_payload_bits must be nonnegative");
    require_domain(grant_bits >= 0.0, "grant_bits must be nonnegative");
    require_domain(dl_bandwidth >= 0.0, "dl_bandwidth must be nonnegative");
    require_domain(dl_spectral_efficiency > 0.0, "dl spectral efficiency must be positive");
    double sum = 0.0;
    for (double f : stage_split) {
        require_domain(f > 0.0, "stage fractions must be positive");
        sum += f;
    }
    require_domain(std::abs(sum - 1.0) <= 1e-9, "stage fractions must sum to 1");
}

double OverheadModel::dl_arrival_cap(double uplink_bandwidth) const {
    if (!dl_cap || grant_bits <= 0.0) return std::numeric_limits<double>::infinity();
    const double bw = dl_bandwidth > 0.0 ? dl_bandwidth : uplink_bandwidth;
    return bw * dl_spectral_efficiency / grant_bits;
}

std::string to_string(Binding b) {
    switch (b) {
        case Binding::power: return "power";
        case Binding::outage: return "outage";
        case Binding::dl_overhead: return "dl_overhead";
        case Binding::pole: return "pole";
        case Binding::none: return "none";
    }
    return "unknown";
}

double blocklength_gap(double n_symbols, double epsilon, double rate_bits_per_symbol) {
    require_domain(n_symbols > 0.0, "blocklength_gap: n must be positive");
    require_domain(epsilon > 0.0 && epsilon < 1.0, "blocklength_gap: epsilon must lie in (0,1)");
    require_domain(rate_bits_per_symbol > 0.0, "blocklength_gap: rate must be positive");
    if (epsilon >= 0.5) return 1.0;

    const double z = std::sqrt(2.0) * boost::math::erfc_inv(2.0 * epsilon);
    const double r = rate_bits_per_symbol;
    const double log2e = 1.0 / M_LN2;
    auto residual = [&](double s) {
        const double dispersion = -std::expm1(-2.0 * std::log1p(s)) * log2e * log2e;
        return std::log1p(s) * log2e - std::sqrt(dispersion / n_symbols) * z - r;
    };
    const double s_inf = exp2m1(r);
    double lo = s_inf;
    double hi = 2.0 * s_inf;
    while (residual(hi) <= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw NumericalFailure("blocklength_gap: no bracket", residual(lo));
    }
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) > 0.0 ? hi : lo) = mid;
    }
    return std::max(1.0, hi / s_inf);
}

SnrGapFn blocklength_gap_fn(double epsilon) {
    return [epsilon](double b, double tau, double l) {
        const double n = b * tau;
        return blocklength_gap(n, epsilon, l / n);
    };
}

SnrGapFn ProtocolOptions::gap() const {
    if (!finite_blocklength) return unit_gap;
    return blocklength_gap_fn(block_error);
}

namespace {

constexpr std::uint32_t kProtocolLambdaIndex = 0xFFFF;

// Trials whose arrival counts grow monotonically with lambda: each trial keeps
// one uniform and inverts the Poisson CDF, and device i keeps the same drop
// and codebook at every lambda. Feasibility is then monotone along the search.
class CoupledTrials {
public:
    CoupledTrials(const ProtocolOptions& opt, const LinkEnv& env) : opt_(opt), env_(env) {
        u_.reserve(static_cast<std::size_t>(opt.n_trials));
        for (int t = 0; t < opt.n_trials; ++t) {
            RandomStream s = drop_stream(t);
            u_.push_back(s.uniform());
        }
        RandomStream ref(opt.seed, StreamId{stream_purpose::user, 1, kProtocolLambdaIndex, 0});
        std::vector<double> inv_gain(static_cast<std::size_t>(opt.drop_samples));
        for (auto& x : inv_gain) x = 1.0 / pathloss_gain(sample_drop(ref, env).distance, env);
        inv_gain_p95_ = percentile(inv_gain, 0.95);
    }

    int trials() const { return static_cast<int>(u_.size()); }

    int arrivals(int t, double mean) const {
        if (mean <= 0.0) return 0;
        const boost::math::poisson_distribution<> dist(mean);
        const double u = u_[static_cast<std::size_t>(t)];
        auto k = static_cast<long long>(boost::math::quantile(dist, u));
        while (k > 0 && boost::math::cdf(dist, static_cast<double>(k - 1)) >= u) --k;
        while (boost::math::cdf(dist, static_cast<double>(k)) < u) ++k;
        return static_cast<int>(std::min<long long>(k, std::numeric_limits<int>::max()));
    }

    /// Pathloss gains of the first k devices of trial t.
    std::vector<double> gains(int t, int k) const {
        RandomStream s = drop_stream(t);
        s.uniform();
        std::vector<double> g(static_cast<std::size_t>(k));
        for (auto& x : g) x = pathloss_gain(sample_drop(s, env_).distance, env_);
        return g;
    }

    RachTrialDraw rach_draw(int t, int k) const {
        RandomStream s(opt_.seed, StreamId{stream_purpose::strategy, 0, kProtocolLambdaIndex,
                                           static_cast<std::uint32_t>(t)});
        return RachTrialDraw::sample(k, opt_.rach.n_codebooks, s);
    }

    /// 95th percentile of 1/pathloss over the cell.
    double inv_gain_p95() const { return inv_gain_p95_; }

private:
    RandomStream drop_stream(int t) const {
        return RandomStream(opt_.seed, StreamId{stream_purpose::drops, 0, kProtocolLambdaIndex,
                                                static_cast<std::uint32_t>(t)});
    }

    const ProtocolOptions& opt_;
    const LinkEnv& env_;
    std::vector<double> u_;
    double inv_gain_p95_ = 0.0;
};

using Verdict = std::optional<Binding>;  // nullopt: feasible

ProtocolCurvePoint search_lambda(double payload, const ProtocolOptions& opt,
                                 const std::function<Verdict(double)>& eval) {
    ProtocolCurvePoint pt;
    pt.payload_bits = payload;
    double lo = opt.lambda_lo;
    if (const Verdict v = eval(lo)) {
        pt.max_arrival_rate = 0.0;
        pt.binding_constraint = *v;
        return pt;
    }
    double hi = opt.lambda_hi;
    std::optional<Binding> hi_reason;
    for (int i = 0; i < opt.bisection_iterations; ++i) {
        const double mid = std::sqrt(lo * hi);
        if (const Verdict v = eval(mid)) {
            hi = mid;
            hi_reason = v;
        } else {
            lo = mid;
        }
    }
    if (!hi_reason) {
        if (const Verdict v = eval(hi)) {
            hi_reason = v;
        } else {
            lo = hi;
            hi_reason = Binding::none;
        }
    }
    pt.max_arrival_rate = lo;
    pt.binding_constraint = *hi_reason;
    return pt;
}

}  // namespace

ProtocolCurvePoint one_stage_max_arrival(double payload, const StrategySpec& strategy,
                                         const OverheadModel& ovh, const LinkEnv& env,
                                         const ResourceSlice& slice, const ProtocolOptions& opt) {
    require_domain(payload > 0.0, "one_stage: payload must be positive");
    require_contract(strategy.is_random_access(), "one_stage: strategy must be random access");
    ovh.validate();
    env.validate();
    const ResourceSlice msg{slice.bandwidth_w, slice.duration_t, payload + ovh.control_payload_bits};
    msg.validate();
    const CoupledTrials trials(opt, env);
    const double budget = split_outage(opt.total_outage);
    const double margin = fade_margin(budget);
    const SnrGapFn gap = opt.gap();
    // Common power target q reaches the cap at the 95th-percentile device.
    const double q_cap = env.tx_power_cap / (margin * trials.inv_gain_p95());

    std::function<Verdict(double)> eval;
    switch (strategy.kind) {
        case StrategyKind::optimal_rach:
            eval = [&](double lambda) -> Verdict {
                const double g = gap(msg.bandwidth_w, msg.duration_t, msg.payload_l);
                std::vector<RachTrialDraw> draws;
                draws.reserve(static_cast<std::size_t>(trials.trials()));
                for (int t = 0; t < trials.trials(); ++t) {
                    draws.push_back(trials.rach_draw(t, trials.arrivals(t, lambda * msg.duration_t)));
                }
                for (double theta : opt.rach.theta_grid) {
                    if (1.0 - theta > budget) continue;
                    if (optimal_rach_outage(draws, q_cap, theta, msg, env, g) <= budget) {
                        return std::nullopt;
                    }
                }
                return Binding::power;
            };
            break;
        case StrategyKind::fdma_aloha:
        case StrategyKind::ftdma:
            eval = [&](double lambda) -> Verdict {
                AlohaPlan plan;
                try {
                    plan = strategy.kind == StrategyKind::ftdma
                               ? ftdma_plan(lambda, strategy.bin_width, msg, env, opt.rach, budget, gap)
                               : fdma_aloha_plan(lambda, msg, env, opt.rach, budget, gap);
                } catch (const Infeasible&) {
                    return Binding::outage;
                }
                if (plan.rx_power > q_cap) return Binding::power;
                return std::nullopt;
            };
            break;
        case StrategyKind::cdma:
            eval = [&](double lambda) -> Verdict {
                const int channels =
                    strategy.channelized
                        ? std::max(1, static_cast<int>(std::floor(msg.bandwidth_w / opt.rach.cdma_channel_bw + 1e-9)))
                        : 1;
                const ResourceSlice chan{msg.bandwidth_w / channels, msg.duration_t, msg.payload_l};
                const double g = gap(chan.bandwidth_w, chan.duration_t, chan.payload_l);
                long long arrivals = 0;
                long long lost = 0;
                std::vector<double> tx;
                for (int t = 0; t < trials.trials(); ++t) {
                    // Channels split the load evenly in expectation; the
                    // per-channel count is Poisson with mean lambda T / channels.
                    const int k = trials.arrivals(t, lambda * msg.duration_t / channels);
                    arrivals += k;
                    if (k == 0) continue;
                    try {
                        const double q = g * cdma_rx_power(k, chan, env);
                        for (double gain : trials.gains(t, k)) tx.push_back(q * margin / gain);
                    } catch (const PoleExceeded&) {
                        lost += k;
                    }
                }
                if (arrivals > 0 && static_cast<double>(lost) / static_cast<double>(arrivals) > budget) {
                    return Binding::pole;
                }
                if (!tx.empty() && percentile(tx, 0.95) > env.tx_power_cap) return Binding::power;
                return std::nullopt;
            };
            break;
        default:
            throw ContractError("one_stage: unsupported strategy " + strategy.name());
    }
    return search_lambda(payload, opt, eval);
}

namespace {

Verdict scheduled_verdict(double lambda, double payload, const ResourceSlice& data,
                          double fade_budget, const LinkEnv& env, const CoupledTrials& trials,
                          const SnrGapFn& gap, double stage1_rx_power) {
    const double margin = fade_margin(fade_budget);
    std::vector<double> peak;
    for (int t = 0; t < trials.trials(); ++t) {
        const int k = trials.arrivals(t, lambda * data.duration_t);
        if (k == 0) continue;
        const double b = data.bandwidth_w / k;
        const double g = gap(b, data.duration_t, payload);
        // Transmit power of every device scales with 1/gain.
        const double unit = required_power(b, data.duration_t, payload, 1.0, g, env) * margin;
        const double p = std::max(unit, stage1_rx_power);
        for (double gain : trials.gains(t, k)) peak.push_back(p / gain);
    }
    if (!peak.empty() && percentile(peak, 0.95) > env.tx_power_cap) return Binding::power;
    return std::nullopt;
}

}  // namespace

ProtocolCurvePoint two_stage_max_arrival(double payload, const OverheadModel& ovh,
                                         const LinkEnv& env, const ResourceSlice& slice,
                                         const ProtocolOptions& opt) {
    require_domain(payload > 0.0, "two_stage: payload must be positive");
    ovh.validate();
    env.validate();
    const CoupledTrials trials(opt, env);
    const SnrGapFn gap = opt.gap();
    const bool has_request = ovh.control_payload_bits > 0.0;
    const double stage_budget = has_request ? split_outage(opt.total_outage) : opt.total_outage;
    const double t1 = ovh.stage_split[0] * slice.duration_t;
    const double t2 = ovh.stage_split[2] * slice.duration_t;
    const ResourceSlice request{slice.bandwidth_w, t1, ovh.control_payload_bits};
    const ResourceSlice data_window{slice.bandwidth_w, t2, payload};
    const double dl_cap = ovh.dl_arrival_cap(slice.bandwidth_w);
    const double request_budget = split_outage(stage_budget);

    auto eval = [&](double lambda) -> Verdict {
        if (lambda > dl_cap) return Binding::dl_overhead;
        double stage1 = 0.0;
        if (has_request) {
            // All requests of a slice contend inside the first t1 seconds.
            const double rate = lambda * slice.duration_t / t1;
            try {
                const AlohaPlan plan = fdma_aloha_plan(rate, request, env, opt.rach, request_budget, gap);
                stage1 = plan.rx_power * fade_margin(request_budget);
            } catch (const Infeasible&) {
                return Binding::outage;
            }
        }
        // Arrivals per slice follow lambda T; the data window is t2.
        const double per_window = lambda * slice.duration_t / t2;
        return scheduled_verdict(per_window, payload, data_window, stage_budget, env, trials, gap, stage1);
    };
    return search_lambda(payload, opt, eval);
}

ProtocolCurvePoint scheduled_max_arrival(double payload, const LinkEnv& env,
                                         const ResourceSlice& slice, const ProtocolOptions& opt) {
    require_domain(payload > 0.0, "scheduled_max_arrival: payload must be positive");
    env.validate();
    const CoupledTrials trials(opt, env);
    const SnrGapFn gap = opt.gap();
    const ResourceSlice data{slice.bandwidth_w, slice.duration_t, payload};
    auto eval = [&](double lambda) -> Verdict {
        return scheduled_verdict(lambda, payload, data, opt.total_outage, env, trials, gap, 0.0);
    };
    return search_lambda(payload, opt, eval);
}

}  // namespace m2m
