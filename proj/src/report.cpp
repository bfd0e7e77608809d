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

#include "m2m/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "m2m/errors.hpp"
#include "m2m/units.hpp"

namespace m2m {

ConfigError::ConfigError(int line, std::string key, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", key '" + key + "': " + message
                                  : "key '" + key + "': " + message),
      line_(line),
      key_(std::move(key)) {}

OutputError::OutputError(const std::filesystem::path& path)
    : std::runtime_error("cannot write " + path.string()) {}

namespace {

// ---------------------------------------------------------------- formatting

std::string shortest(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const double a = std::abs(v);
    // Plain notation for everyday magnitudes, e.g. 100000 rather than 1e+05.
    const auto r = (a == 0.0 || (a >= 1e-4 && a < 1e15))
                       ? std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed)
                       : std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string fixed(double v, int digits) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[128];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
    return std::string(buf, r.ptr);
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    if (trim(s).empty()) return out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) out.push_back(trim(cur));
    return out;
}

// -------------------------------------------------------------------- units

enum class Quantity {
    dimensionless,
    frequency,
    time,
    bits,
    length,
    decibel,
    power_dbm,
    psd_dbm_per_hz,
    rate,
    spectral_efficiency,
};

const char* canonical_unit(Quantity q) {
    switch (q) {
        case Quantity::dimensionless: return "";
        case Quantity::frequency: return "Hz";
        case Quantity::time: return "s";
        case Quantity::bits: return "bits";
        case Quantity::length: return "m";
        case Quantity::decibel: return "dB";
        case Quantity::power_dbm: return "dBm";
        case Quantity::psd_dbm_per_hz: return "dBm/Hz";
        case Quantity::rate: return "/s";
        case Quantity::spectral_efficiency: return "bit/s/Hz";
    }
    return "";
}

struct ParseFailure {
    std::string message;
};

// Converts `value unit` into the canonical unit of `q`.
double to_canonical(Quantity q, double v, const std::string& unit) {
    auto scaled = [&](std::initializer_list<std::pair<const char*, double>> table) {
        for (const auto& [name, factor] : table) {
            if (unit == name) return v * factor;
        }
        throw ParseFailure{"unit '" + unit + "' is not a unit of " + canonical_unit(q)};
    };
    if (q == Quantity::dimensionless) {
        if (!unit.empty()) throw ParseFailure{"unexpected unit '" + unit + "'"};
        return v;
    }
    if (unit.empty()) {
        throw ParseFailure{std::string("missing unit (expected e.g. ") + canonical_unit(q) + ")"};
    }
    switch (q) {
        case Quantity::frequency:
            return scaled({{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}});
        case Quantity::time:
            return scaled({{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}});
        case Quantity::bits:
            return scaled({{"bits", 1.0}, {"bit", 1.0}, {"b", 1.0}, {"kbit", 1e3}});
        case Quantity::length:
            return scaled({{"m", 1.0}, {"km", 1e3}});
        case Quantity::decibel:
            return scaled({{"dB", 1.0}});
        case Quantity::power_dbm:
            if (unit == "dBm") return v;
            if (unit == "dBW") return v + 30.0;
            if (unit == "W" || unit == "mW") {
                if (v <= 0.0) throw ParseFailure{"power must be positive"};
                return unit == "W" ? watt_to_dbm(v) : 10.0 * std::log10(v);
            }
            throw ParseFailure{"unit '" + unit + "' is not a power unit (dBm, dBW, W, mW)"};
        case Quantity::psd_dbm_per_hz:
            if (unit == "dBm/Hz") return v;
            if (unit == "dBW/Hz") return v + 30.0;
            if (unit == "W/Hz") {
                if (v <= 0.0) throw ParseFailure{"density must be positive"};
                return watt_to_dbm(v);
            }
            throw ParseFailure{"unit '" + unit + "' is not a density unit (dBm/Hz, dBW/Hz, W/Hz)"};
        case Quantity::rate:
            return scaled({{"/s", 1.0}, {"1/s", 1.0}, {"per_s", 1.0}});
        case Quantity::spectral_efficiency:
            return scaled({{"bit/s/Hz", 1.0}, {"bps/Hz", 1.0}});
        case Quantity::dimensionless:
            break;
    }
    return v;
}

// Splits "12.5 kHz" or "12.5kHz" into number and unit.
std::pair<double, std::string> number_and_unit(const std::string& token) {
    const std::string t = trim(token);
    if (t.empty()) throw ParseFailure{"missing value"};
    double v = 0.0;
    const char* first = t.data();
    if (*first == '+') ++first;
    const auto r = std::from_chars(first, t.data() + t.size(), v);
    if (r.ec != std::errc{} || r.ptr == first) throw ParseFailure{"'" + t + "' is not a number"};
    if (!std::isfinite(v)) throw ParseFailure{"'" + t + "' is not finite"};
    return {v, trim(std::string_view(r.ptr, static_cast<std::size_t>(t.data() + t.size() - r.ptr)))};
}

double parse_scalar(Quantity q, const std::string& text) {
    const auto [v, unit] = number_and_unit(text);
    return to_canonical(q, v, unit);
}

// "1, 2, 5 /s": a unit on the last element applies to elements without one.
std::vector<double> parse_list(Quantity q, const std::string& text) {
    const auto items = split_commas(text);
    std::vector<std::pair<double, std::string>> parsed;
    for (const auto& item : items) parsed.push_back(number_and_unit(item));
    const std::string fallback = parsed.empty() ? std::string() : parsed.back().second;
    std::vector<double> out;
    for (const auto& [v, unit] : parsed) out.push_back(to_canonical(q, v, unit.empty() ? fallback : unit));
    return out;
}

long long parse_integer(const std::string& text) {
    const std::string t = trim(text);
    long long v = 0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (r.ec != std::errc{} || r.ptr != t.data() + t.size() || t.empty()) {
        throw ParseFailure{"'" + t + "' is not an integer"};
    }
    return v;
}

bool parse_bool(const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "no" || t == "off") return false;
    throw ParseFailure{"'" + t + "' is not a boolean (true/false)"};
}

std::string with_unit(double v, Quantity q) {
    const std::string u = canonical_unit(q);
    return u.empty() ? shortest(v) : shortest(v) + " " + u;
}

std::string list_with_unit(const std::vector<double>& vs, Quantity q) {
    std::string s;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) s += ", ";
        s += shortest(vs[i]);
    }
    const std::string u = canonical_unit(q);
    if (!u.empty() && !vs.empty()) s += " " + u;
    return s;
}

// ---------------------------------------------------------------- key table

struct Field {
    std::string key;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

Field scalar(std::string key, Quantity q, double RunConfig::*m) {
    return {std::move(key), [q, m](RunConfig& c, const std::string& v) { c.*m = parse_scalar(q, v); },
            [q, m](const RunConfig& c) { return with_unit(c.*m, q); }};
}

Field integer(std::string key, int RunConfig::*m) {
    return {std::move(key),
            [m](RunConfig& c, const std::string& v) {
                const long long x = parse_integer(v);
                if (x < INT32_MIN || x > INT32_MAX) throw ParseFailure{"integer out of range"};
                c.*m = static_cast<int>(x);
            },
            [m](const RunConfig& c) { return std::to_string(c.*m); }};
}

Field boolean(std::string key, bool RunConfig::*m) {
    return {std::move(key), [m](RunConfig& c, const std::string& v) { c.*m = parse_bool(v); },
            [m](const RunConfig& c) { return std::string(c.*m ? "true" : "false"); }};
}

Field list(std::string key, Quantity q, std::vector<double> RunConfig::*m) {
    return {std::move(key), [q, m](RunConfig& c, const std::string& v) { c.*m = parse_list(q, v); },
            [q, m](const RunConfig& c) { return list_with_unit(c.*m, q); }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        using Q = Quantity;
        std::vector<Field> f;
        f.push_back({"name",
                     [](RunConfig& c, const std::string& v) {
                         const std::string t = trim(v);
                         if (t.empty() || t.find_first_of("/\\ \t") != std::string::npos) {
                             throw ParseFailure{"name must be a nonempty file stem"};
                         }
                         c.name = t;
                     },
                     [](const RunConfig& c) { return c.name; }});
        f.push_back({"mode",
                     [](RunConfig& c, const std::string& v) {
                         const std::string t = trim(v);
                         if (t == "power") {
                             c.mode = RunMode::power;
                         } else if (t == "capacity") {
                             c.mode = RunMode::capacity;
                         } else {
                             throw ParseFailure{"mode must be power or capacity"};
                         }
                     },
                     [](const RunConfig& c) {
                         return std::string(c.mode == RunMode::power ? "power" : "capacity");
                     }});
        f.push_back({"strategies",
                     [](RunConfig& c, const std::string& v) {
                         std::vector<std::string> names;
                         for (const auto& item : split_commas(v)) {
                             if (item != "two_stage") {
                                 try {
                                     names.push_back(StrategySpec::parse(item).name());
                                     continue;
                                 } catch (const ContractError& e) {
                                     throw ParseFailure{e.what()};
                                 }
                             }
                             names.push_back(item);
                         }
                         c.strategies = names;
                     },
                     [](const RunConfig& c) {
                         std::string s;
                         for (std::size_t i = 0; i < c.strategies.size(); ++i) {
                             if (i) s += ", ";
                             s += c.strategies[i];
                         }
                         return s;
                     }});
        f.push_back(list("lambda_grid", Q::rate, &RunConfig::lambda_grid));
        f.push_back(list("payload_grid", Q::bits, &RunConfig::payload_grid));
        f.push_back(scalar("bandwidth", Q::frequency, &RunConfig::bandwidth_hz));
        f.push_back(scalar("duration", Q::time, &RunConfig::duration_s));
        f.push_back(scalar("payload", Q::bits, &RunConfig::payload_bits));
        f.push_back(scalar("noise_psd", Q::psd_dbm_per_hz, &RunConfig::noise_psd_dbm_per_hz));
        f.push_back(scalar("cell_radius", Q::length, &RunConfig::cell_radius_m));
        f.push_back(scalar("pathloss_exponent", Q::dimensionless, &RunConfig::pathloss_exponent));
        f.push_back(scalar("pathloss_intercept", Q::decibel, &RunConfig::pathloss_intercept_db));
        f.push_back(scalar("fade_outage", Q::dimensionless, &RunConfig::fade_outage));
        f.push_back(scalar("tx_power_cap", Q::power_dbm, &RunConfig::tx_power_cap_dbm));
        f.push_back(scalar("target_outage", Q::dimensionless, &RunConfig::target_outage));
        f.push_back(integer("n_codebooks", &RunConfig::n_codebooks));
        f.push_back(integer("theta_points", &RunConfig::theta_points));
        f.push_back(integer("max_attempts", &RunConfig::max_attempts));
        f.push_back(integer("max_slots", &RunConfig::max_slots));
        f.push_back(scalar("min_bin_width", Q::frequency, &RunConfig::min_bin_width_hz));
        f.push_back(scalar("cdma_channel_bw", Q::frequency, &RunConfig::cdma_channel_bw_hz));
        f.push_back(integer("trials", &RunConfig::trials));
        f.push_back({"seed",
                     [](RunConfig& c, const std::string& v) {
                         const long long x = parse_integer(v);
                         if (x < 0) throw ParseFailure{"seed must be nonnegative"};
                         c.seed = static_cast<std::uint64_t>(x);
                     },
                     [](const RunConfig& c) { return std::to_string(c.seed); }});
        f.push_back(integer("workers", &RunConfig::workers));
        f.push_back(integer("bootstrap_resamples", &RunConfig::bootstrap_resamples));
        f.push_back(scalar("control_payload", Q::bits, &RunConfig::control_payload_bits));
        f.push_back(scalar("grant", Q::bits, &RunConfig::grant_bits));
        f.push_back(scalar("dl_bandwidth", Q::frequency, &RunConfig::dl_bandwidth_hz));
        f.push_back(scalar("dl_spectral_efficiency", Q::spectral_efficiency,
                           &RunConfig::dl_spectral_efficiency));
        f.push_back({"stage_split",
                     [](RunConfig& c, const std::string& v) {
                         const auto xs = parse_list(Quantity::dimensionless, v);
                         if (xs.size() != 3) throw ParseFailure{"stage_split needs three fractions"};
                         std::copy(xs.begin(), xs.end(), c.stage_split.begin());
                     },
                     [](const RunConfig& c) {
                         return list_with_unit({c.stage_split.begin(), c.stage_split.end()},
                                               Quantity::dimensionless);
                     }});
        f.push_back(boolean("dl_cap", &RunConfig::dl_cap));
        f.push_back(boolean("finite_blocklength", &RunConfig::finite_blocklength));
        f.push_back(scalar("block_error", Q::dimensionless, &RunConfig::block_error));
        f.push_back(integer("bisection_iterations", &RunConfig::bisection_iterations));
        f.push_back(scalar("lambda_search_lo", Q::rate, &RunConfig::lambda_search_lo));
        f.push_back(scalar("lambda_search_hi", Q::rate, &RunConfig::lambda_search_hi));
        f.push_back(integer("drop_samples", &RunConfig::drop_samples));
        return f;
    }();
    return table;
}

const Field* find_field(const std::string& key) {
    for (const auto& f : fields()) {
        if (f.key == key) return &f;
    }
    return nullptr;
}

void assign(RunConfig& cfg, const std::string& key, const std::string& value, int line) {
    const Field* f = find_field(key);
    if (!f) throw ConfigError(line, key, "unknown key");
    try {
        f->set(cfg, value);
    } catch (const ParseFailure& e) {
        throw ConfigError(line, key, e.message);
    }
}

}  // namespace

// ------------------------------------------------------------------ config

void RunConfig::validate() const {
    require_domain(!strategies.empty(), "config: no strategies");
    std::set<std::string> seen;
    for (const auto& s : strategies) {
        if (!seen.insert(s).second) throw DomainError("config: duplicate strategy " + s);
        if (mode == RunMode::power) {
            require_domain(s != "two_stage", "config: two_stage is only valid in capacity mode");
        } else if (s != "two_stage") {
            require_domain(StrategySpec::parse(s).is_random_access(),
                           "config: capacity mode takes random-access strategies or two_stage");
        }
    }
    if (mode == RunMode::power) {
        require_domain(!lambda_grid.empty(), "config: lambda_grid is empty");
        std::vector<double> sorted = lambda_grid;
        std::sort(sorted.begin(), sorted.end());
        require_domain(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
                       "config: lambda_grid has duplicates");
        sweep_spec().validate();
    } else {
        require_domain(!payload_grid.empty(), "config: payload_grid is empty");
        for (double p : payload_grid) require_domain(p > 0.0, "config: payloads must be positive");
        require_domain(trials >= 1, "config: trials must be positive");
        require_domain(bisection_iterations >= 1, "config: bisection_iterations must be positive");
        require_domain(lambda_search_lo > 0.0 && lambda_search_hi > lambda_search_lo,
                       "config: need 0 < lambda_search_lo < lambda_search_hi");
        require_domain(drop_samples >= 1, "config: drop_samples must be positive");
        require_domain(block_error > 0.0 && block_error < 1.0, "config: block_error must lie in (0,1)");
        require_domain(target_outage > 0.0 && target_outage < 1.0,
                       "config: target_outage must lie in (0,1)");
        env().validate();
        slice().validate();
        rach().validate(bandwidth_hz);
        overhead().validate();
    }
}

LinkEnv RunConfig::env() const {
    LinkEnv e;
    e.noise_psd = dbm_to_watt(noise_psd_dbm_per_hz);
    e.cell_radius = cell_radius_m;
    e.pathloss_exponent = pathloss_exponent;
    e.pathloss_intercept_db = pathloss_intercept_db;
    e.fade_outage = fade_outage;
    e.tx_power_cap = dbm_to_watt(tx_power_cap_dbm);
    return e;
}

ResourceSlice RunConfig::slice() const { return {bandwidth_hz, duration_s, payload_bits}; }

RachConfig RunConfig::rach() const {
    RachConfig r = RachConfig::defaults();
    r.n_codebooks = n_codebooks;
    r.theta_grid.clear();
    for (int i = 1; i <= theta_points; ++i) r.theta_grid.push_back(static_cast<double>(i) / theta_points);
    r.max_attempts = max_attempts;
    r.target_outage = target_outage;
    r.max_slots = max_slots;
    r.min_bin_width = min_bin_width_hz;
    r.cdma_channel_bw = cdma_channel_bw_hz;
    return r;
}

SweepSpec RunConfig::sweep_spec() const {
    SweepSpec s;
    for (const auto& name : strategies) {
        if (name != "two_stage") s.strategies.push_back(StrategySpec::parse(name));
    }
    s.lambda_grid = lambda_grid;
    std::sort(s.lambda_grid.begin(), s.lambda_grid.end());
    s.slice = slice();
    s.env = env();
    s.rach = rach();
    s.n_trials = trials;
    s.seed = seed;
    s.workers = workers;
    s.bootstrap_resamples = bootstrap_resamples;
    return s;
}

OverheadModel RunConfig::overhead() const {
    OverheadModel o;
    o.control_payload_bits = control_payload_bits;
    o.grant_bits = grant_bits;
    o.dl_bandwidth = dl_bandwidth_hz;
    o.dl_spectral_efficiency = dl_spectral_efficiency;
    o.stage_split = stage_split;
    o.dl_cap = dl_cap;
    return o;
}

ProtocolOptions RunConfig::protocol_options() const {
    ProtocolOptions p;
    p.n_trials = trials;
    p.seed = seed;
    p.bisection_iterations = bisection_iterations;
    p.lambda_lo = lambda_search_lo;
    p.lambda_hi = lambda_search_hi;
    p.total_outage = target_outage;
    p.finite_blocklength = finite_blocklength;
    p.block_error = block_error;
    p.drop_samples = drop_samples;
    p.rach = rach();
    return p;
}

RunConfig parse_config(std::string_view text, RunConfig base) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    std::set<std::string> seen;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos) throw ConfigError(line, content, "expected 'key = value'");
        const std::string key = trim(std::string_view(content).substr(0, eq));
        if (key.empty()) throw ConfigError(line, key, "empty key");
        if (!seen.insert(key).second) throw ConfigError(line, key, "key given twice");
        assign(base, key, content.substr(eq + 1), line);
    }
    return base;
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError(0, std::string(assignment), "expected key=value");
    }
    assign(cfg, trim(assignment.substr(0, eq)), std::string(assignment.substr(eq + 1)), 0);
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& f : fields()) keys.push_back(f.key);
    return keys;
}

std::string echo_config(const RunConfig& cfg) {
    std::string out;
    out += "# m2msim resolved configuration; every key below is accepted as input.\n";
    out += "# derived (informational):\n";
    const double split = split_outage(cfg.target_outage);
    out += "#   random-access outage per cause = " + shortest(split) + "\n";
    if (split > 0.0 && split < 1.0) {
        out += "#   random-access fade margin = " + fixed(linear_to_db(fade_margin(split)), 4) + " dB\n";
    }
    if (cfg.fade_outage > 0.0 && cfg.fade_outage < 1.0) {
        out += "#   scheduled fade margin = " + fixed(linear_to_db(fade_margin(cfg.fade_outage)), 4) + " dB\n";
    }
    if (cfg.bandwidth_hz > 0.0 && cfg.duration_s > 0.0 && cfg.payload_bits > 0.0) {
        out += "#   cdma pole capacity = " + std::to_string(cdma_pole_capacity(cfg.slice())) + "\n";
    }
    const double cap = cfg.overhead().dl_arrival_cap(cfg.bandwidth_hz);
    out += "#   downlink grant cap = " + shortest(cap) + " /s\n";
    for (const auto& f : fields()) out += f.key + " = " + f.get(cfg) + "\n";
    return out;
}

RunConfig figure_preset(std::string_view name) {
    RunConfig c;
    c.name = std::string(name);
    if (name == "fig1") {
        c.mode = RunMode::power;
        c.strategies = {"optimal", "cdma", "fdma", "ftdma_1khz", "ftdma_10khz"};
        c.lambda_grid = {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000};
        c.bandwidth_hz = 100e3;
        c.duration_s = 1.0;
        c.payload_bits = 500.0;
    } else if (name == "fig2") {
        c.mode = RunMode::power;
        c.strategies = {"sic", "fdma_equal", "fdma_optimal"};
        c.lambda_grid = {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000};
        c.bandwidth_hz = 100e3;
        c.duration_s = 1.0;
        c.payload_bits = 500.0;
    } else if (name == "fig4") {
        c.mode = RunMode::capacity;
        c.strategies = {"optimal", "fdma", "two_stage"};
        c.payload_grid = {10, 20, 50, 100, 200, 500, 1000, 2000};
        c.bandwidth_hz = 10e3;
        c.duration_s = 1.0;
        c.payload_bits = 100.0;
        c.trials = 2000;
    } else {
        throw ContractError("unknown figure '" + std::string(name) + "' (expected fig1, fig2 or fig4)");
    }
    return c;
}

std::vector<CapacityRow> run_capacity(const RunConfig& cfg) {
    cfg.validate();
    const LinkEnv env = cfg.env();
    const ResourceSlice slice = cfg.slice();
    const OverheadModel ovh = cfg.overhead();
    const ProtocolOptions opt = cfg.protocol_options();
    std::vector<double> payloads = cfg.payload_grid;
    std::sort(payloads.begin(), payloads.end());
    std::vector<CapacityRow> rows;
    for (const auto& name : cfg.strategies) {
        for (double l : payloads) {
            CapacityRow row;
            row.strategy = name;
            row.point = name == "two_stage"
                            ? two_stage_max_arrival(l, ovh, env, slice, opt)
                            : one_stage_max_arrival(l, StrategySpec::parse(name), ovh, env, slice, opt);
            rows.push_back(row);
        }
    }
    return rows;
}

// --------------------------------------------------------------------- CSV

std::string sweep_csv(const SweepResult& result) {
    std::string out = "strategy,lambda_per_s,p95_tx_power_dbm,outage,stderr_db\n";
    for (const auto& p : result.points) {
        const double dbm = std::isnan(p.p95_tx_power) ? p.p95_tx_power : watt_to_dbm(p.p95_tx_power);
        out += p.strategy + "," + shortest(p.lambda) + "," + fixed(dbm, 4) + "," + fixed(p.outage, 6) +
               "," + fixed(p.stderr_db, 4) + "\n";
    }
    return out;
}

std::string capacity_csv(const std::vector<CapacityRow>& rows) {
    std::string out = "strategy,payload_bits,max_arrival_per_s,binding_constraint\n";
    for (const auto& r : rows) {
        out += r.strategy + "," + shortest(r.point.payload_bits) + "," +
               fixed(r.point.max_arrival_rate, 6) + "," + to_string(r.point.binding_constraint) + "\n";
    }
    return out;
}

// --------------------------------------------------------------------- SVG

namespace {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;  // NaN y breaks the line
};

struct Axis {
    bool log = false;
    double lo = 0.0;
    double hi = 1.0;
    std::string label;
    std::vector<double> ticks;
};

std::string xml_escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        switch (c) {
            case '&': o += "&amp;"; break;
            case '<': o += "&lt;"; break;
            case '>': o += "&gt;"; break;
            case '"': o += "&quot;"; break;
            default: o += c;
        }
    }
    return o;
}

std::string tick_label(double v, bool log) {
    if (log) {
        const double e = std::round(std::log10(v));
        if (e >= 0 && e <= 5) return shortest(std::pow(10.0, e));
        return "1e" + shortest(e);
    }
    return shortest(std::round(v * 1e6) / 1e6);
}

Axis make_axis(std::vector<double> values, bool log, std::string label) {
    Axis a;
    a.log = log;
    a.label = std::move(label);
    std::erase_if(values, [log](double v) { return !std::isfinite(v) || (log && v <= 0.0); });
    if (values.empty()) {
        a.lo = log ? 1.0 : 0.0;
        a.hi = log ? 10.0 : 1.0;
    } else {
        a.lo = *std::min_element(values.begin(), values.end());
        a.hi = *std::max_element(values.begin(), values.end());
    }
    if (log) {
        a.lo = std::pow(10.0, std::floor(std::log10(a.lo)));
        a.hi = std::pow(10.0, std::ceil(std::log10(a.hi)));
        if (a.hi <= a.lo) a.hi = a.lo * 10.0;
        for (double t = a.lo; t <= a.hi * 1.0001; t *= 10.0) a.ticks.push_back(t);
    } else {
        if (a.hi - a.lo < 1e-9) {
            a.lo -= 1.0;
            a.hi += 1.0;
        }
        const double raw = (a.hi - a.lo) / 6.0;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double step = mag;
        for (double m : {1.0, 2.0, 5.0, 10.0}) {
            if (m * mag >= raw) {
                step = m * mag;
                break;
            }
        }
        a.lo = std::floor(a.lo / step) * step;
        a.hi = std::ceil(a.hi / step) * step;
        for (double t = a.lo; t <= a.hi + step * 1e-6; t += step) a.ticks.push_back(t);
    }
    return a;
}

double axis_fraction(const Axis& a, double v) {
    if (a.log) return (std::log10(v) - std::log10(a.lo)) / (std::log10(a.hi) - std::log10(a.lo));
    return (v - a.lo) / (a.hi - a.lo);
}

std::string plot_svg(const std::string& title, const Axis& x, const Axis& y,
                     const std::vector<Series>& series, const std::string& note) {
    constexpr double width = 760, height = 500;
    constexpr double left = 80, right = 190, top = 50, bottom = 70;
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};
    auto px = [&](double v) { return left + pw * axis_fraction(x, v); };
    auto py = [&](double v) { return top + ph * (1.0 - axis_fraction(y, v)); };

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << left + pw / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">"
      << xml_escape(title) << "</text>\n";
    for (double t : x.ticks) {
        const std::string xs = fixed(px(t), 2);
        o << "<line x1=\"" << xs << "\" y1=\"" << top << "\" x2=\"" << xs << "\" y2=\"" << top + ph
          << "\" stroke=\"#dddddd\"/>\n";
        o << "<text x=\"" << xs << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
          << tick_label(t, x.log) << "</text>\n";
    }
    for (double t : y.ticks) {
        const std::string ys = fixed(py(t), 2);
        o << "<line x1=\"" << left << "\" y1=\"" << ys << "\" x2=\"" << left + pw << "\" y2=\"" << ys
          << "\" stroke=\"#dddddd\"/>\n";
        o << "<text x=\"" << left - 8 << "\" y=\"" << ys << "\" text-anchor=\"end\" dominant-baseline=\"middle\">"
          << tick_label(t, y.log) << "</text>\n";
    }
    o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    o << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 22 << "\" text-anchor=\"middle\">"
      << xml_escape(x.label) << "</text>\n";
    o << "<text transform=\"translate(22," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << xml_escape(y.label) << "</text>\n";

    auto plottable = [&](double a, double b) {
        return std::isfinite(a) && std::isfinite(b) && (!x.log || a > 0.0) && (!y.log || b > 0.0);
    };
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* colour = palette[i % std::size(palette)];
        std::vector<std::string> runs;
        std::string cur;
        for (const auto& [a, b] : series[i].points) {
            if (!plottable(a, b)) {
                if (!cur.empty()) runs.push_back(cur);
                cur.clear();
                continue;
            }
            cur += (cur.empty() ? "" : " ") + fixed(px(a), 2) + "," + fixed(py(b), 2);
            o << "<circle cx=\"" << fixed(px(a), 2) << "\" cy=\"" << fixed(py(b), 2)
              << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
        }
        if (!cur.empty()) runs.push_back(cur);
        for (const auto& r : runs) {
            o << "<polyline points=\"" << r << "\" fill=\"none\" stroke=\"" << colour
              << "\" stroke-width=\"1.8\"/>\n";
        }
        const double ly = top + 12 + 20.0 * static_cast<double>(i);
        o << "<line x1=\"" << left + pw + 14 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 40
          << "\" y2=\"" << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << left + pw + 46 << "\" y=\"" << ly << "\" dominant-baseline=\"middle\">"
          << xml_escape(series[i].name) << "</text>\n";
    }
    if (!note.empty()) {
        o << "<text x=\"" << left + pw / 2 << "\" y=\"" << top + ph / 2
          << "\" text-anchor=\"middle\" fill=\"#888888\">" << xml_escape(note) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace

std::string sweep_svg(const SweepResult& result, const std::string& title) {
    std::vector<Series> series;
    std::vector<double> xs, ys;
    for (const auto& p : result.points) {
        if (series.empty() || series.back().name != p.strategy) series.push_back({p.strategy, {}});
        const double dbm = std::isnan(p.p95_tx_power) ? p.p95_tx_power : watt_to_dbm(p.p95_tx_power);
        series.back().points.emplace_back(p.lambda, dbm);
        xs.push_back(p.lambda);
        ys.push_back(dbm);
    }
    const Axis x = make_axis(xs, true, "arrival rate (arrivals/s)");
    const Axis y = make_axis(ys, false, "95th-percentile transmit power (dBm)");
    const bool any = std::any_of(ys.begin(), ys.end(), [](double v) { return std::isfinite(v); });
    return plot_svg(title, x, y, series, any ? "" : "no feasible points");
}

std::string capacity_svg(const std::vector<CapacityRow>& rows, const std::string& title) {
    std::vector<Series> series;
    std::vector<double> xs, ys;
    for (const auto& r : rows) {
        if (series.empty() || series.back().name != r.strategy) series.push_back({r.strategy, {}});
        series.back().points.emplace_back(r.point.max_arrival_rate, r.point.payload_bits);
        if (r.point.max_arrival_rate > 0.0) {
            xs.push_back(r.point.max_arrival_rate);
            ys.push_back(r.point.payload_bits);
        }
    }
    const Axis x = make_axis(xs, true, "largest supportable arrival rate (arrivals/s)");
    const Axis y = make_axis(ys, true, "payload (bits)");
    return plot_svg(title, x, y, series, xs.empty() ? "no feasible points" : "");
}

// -------------------------------------------------------------------- files

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw OutputError(path);
    f << content;
    f.close();
    if (!f) throw OutputError(path);
}

}  // namespace

RunOutput run_and_write(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    cfg.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw OutputError(out_dir);
    RunOutput out{out_dir / (cfg.name + ".csv"), out_dir / (cfg.name + ".svg"),
                  out_dir / (cfg.name + ".meta.cfg")};
    std::string csv, svg;
    if (cfg.mode == RunMode::power) {
        const SweepResult r = run_sweep(cfg.sweep_spec());
        csv = sweep_csv(r);
        svg = sweep_svg(r, cfg.name + ": transmit power, W = " + shortest(cfg.bandwidth_hz / 1e3) +
                               " kHz, T = " + shortest(cfg.duration_s) + " s, L = " +
                               shortest(cfg.payload_bits) + " bits");
    } else {
        const auto rows = run_capacity(cfg);
        csv = capacity_csv(rows);
        svg = capacity_svg(rows, cfg.name + ": payload vs arrival rate, W = " +
                                     shortest(cfg.bandwidth_hz / 1e3) + " kHz, T = " +
                                     shortest(cfg.duration_s) + " s, cap " +
                                     shortest(cfg.tx_power_cap_dbm) + " dBm");
    }
    write_file(out.csv, csv);
    write_file(out.svg, svg);
    write_file(out.meta, echo_config(cfg));
    return out;
}

}  // namespace m2m
