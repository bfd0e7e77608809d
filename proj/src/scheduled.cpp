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

#include "m2m/scheduled.hpp"

#include <algorithm>
#include <boost/math/special_functions/lambert_w.hpp>
#include <cmath>
#include <numeric>

#include "m2m/errors.hpp"
#include "m2m/units.hpp"

namespace m2m {

void ScheduledInstance::validate() const {
    require_domain(!gains.empty(), "scheduled instance needs at least one device");
    for (double g : gains) require_domain(g > 0.0, "channel gains must be positive");
    require_domain(snr_gap >= 1.0, "snr gap must be >= 1");
    slice.validate();
}

double total(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

std::vector<double> sic_rx_powers(const ScheduledInstance& inst, const LinkEnv& env) {
    inst.validate();
    const int k = inst.k();
    const double gamma = inst.snr_gap * exp2m1(inst.slice.spectral_efficiency());
    const double base = gamma * env.noise_psd * inst.slice.bandwidth_w;
    const double log_step = std::log1p(gamma);

    std::vector<int> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return inst.gains[static_cast<std::size_t>(a)] > inst.gains[static_cast<std::size_t>(b)];
    });

    std::vector<double> rx(static_cast<std::size_t>(k));
    for (int pos = 1; pos <= k; ++pos) {
        rx[static_cast<std::size_t>(order[static_cast<std::size_t>(pos - 1)])] =
            base * std::exp((k - pos) * log_step);
    }
    return rx;
}

std::vector<double> sic_tx_powers(const ScheduledInstance& inst, const LinkEnv& env) {
    std::vector<double> p = sic_rx_powers(inst, env);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] /= inst.gains[i];
    return p;
}

std::vector<double> fdma_equal_powers(const ScheduledInstance& inst, const LinkEnv& env) {
    inst.validate();
    const double b = inst.slice.bandwidth_w / inst.k();
    std::vector<double> p;
    p.reserve(inst.gains.size());
    for (double g : inst.gains) {
        p.push_back(required_power(b, inst.slice.duration_t, inst.slice.payload_l, g,
                                   inst.snr_gap, env));
    }
    return p;
}

namespace {

// With y = ln2 L/(b T), the derivative of (N0 gap/g) b (2^(L/(bT)) - 1) in b is
// (N0 gap/g) (e^y - 1 - y e^y). Stationarity at -mu gives
// y e^y - expm1(y) = c with c = mu g / (N0 gap).
double stationarity_lhs(double y) { return y * std::exp(y) - std::expm1(y); }

double solve_stationarity(double c) {
    if (c <= 0.0) return 0.0;
    double y;
    if (c < 1e-6) {
        y = std::sqrt(2.0 * c);
    } else {
        y = 1.0 + boost::math::lambert_w0((c - 1.0) / M_E);
    }
    // Newton polish; the Lambert W argument loses precision near -1/e.
    for (int it = 0; it < 4 && y > 0.0; ++it) {
        const double step = (stationarity_lhs(y) - c) / (y * std::exp(y));
        y -= step;
        if (std::abs(step) <= 1e-15 * y) break;
    }
    return std::max(y, 1e-300);
}

}  // namespace

FdmaAllocation fdma_optimal_alloc(const ScheduledInstance& inst, const LinkEnv& env, double tol) {
    inst.validate();
    require_domain(tol > 0.0, "fdma_optimal_alloc: tol must be positive");
    const int k = inst.k();
    const double w = inst.slice.bandwidth_w;
    const double t = inst.slice.duration_t;
    const double l = inst.slice.payload_l;
    const double x_of_b_num = l * M_LN2 / t;  // y = x_of_b_num / b

    std::vector<double> scale(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        scale[static_cast<std::size_t>(i)] = env.noise_psd * inst.snr_gap / inst.gains[static_cast<std::size_t>(i)];
    }

    auto bandwidths_at = [&](double mu, std::vector<double>& b) {
        double sum = 0.0;
        for (int i = 0; i < k; ++i) {
            const double y = solve_stationarity(mu / scale[static_cast<std::size_t>(i)]);
            b[static_cast<std::size_t>(i)] = x_of_b_num / y;
            sum += b[static_cast<std::size_t>(i)];
        }
        return sum;
    };

    // Each device's multiplier at the equal split brackets the solution.
    const double y_eq = x_of_b_num / (w / k);
    const double lhs_eq = stationarity_lhs(y_eq);
    double mu_lo = INFINITY;
    double mu_hi = 0.0;
    for (double s : scale) {
        mu_lo = std::min(mu_lo, s * lhs_eq);
        mu_hi = std::max(mu_hi, s * lhs_eq);
    }

    FdmaAllocation out;
    out.bandwidths.assign(static_cast<std::size_t>(k), w / k);
    double mu = mu_lo;
    if (mu_hi > mu_lo) {
        std::vector<double> b(static_cast<std::size_t>(k));
        double resid = INFINITY;
        int it = 0;
        for (; it < 400; ++it) {
            mu = std::sqrt(mu_lo * mu_hi);
            const double sum = bandwidths_at(mu, b);
            resid = std::abs(sum - w) / w;
            if (resid <= tol * 0.1 || mu_hi / mu_lo - 1.0 <= 1e-15) break;
            if (sum > w) {
                mu_lo = mu;
            } else {
                mu_hi = mu;
            }
        }
        out.iterations = it + 1;
        if (resid > tol) {
            throw NumericalFailure("fdma_optimal_alloc: multiplier search did not converge", resid);
        }
        const double sum = bandwidths_at(mu, b);
        for (int i = 0; i < k; ++i) out.bandwidths[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] * (w / sum);
    }
    out.multiplier = mu;

    out.powers.reserve(static_cast<std::size_t>(k));
    double kkt = 0.0;
    for (int i = 0; i < k; ++i) {
        const double bi = out.bandwidths[static_cast<std::size_t>(i)];
        out.powers.push_back(required_power(bi, t, l, inst.gains[static_cast<std::size_t>(i)],
                                            inst.snr_gap, env));
        const double y = x_of_b_num / bi;
        const double deriv = -scale[static_cast<std::size_t>(i)] * stationarity_lhs(y);
        kkt = std::max(kkt, std::abs(deriv + mu) / mu);
    }
    out.kkt_residual = kkt;
    return out;
}

}  // namespace m2m
