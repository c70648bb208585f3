// SPDX-License-Identifier: Apache-2.0
//
// mass: multi-rate asynchronous sub-Nyquist sampling for wideband spectrum sensing
// Copyright (C) 2026 the mass authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "mass/scenario.hpp"

#include <fstream>

namespace mass {

namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& context)
{
    for (auto it = j.begin(); it != j.end(); ++it)
    {
        bool ok = false;
        for (const char* key : allowed)
            if (it.key() == key)
            {
                ok = true;
                break;
            }
        if (!ok)
            throw ConfigError(context + ": unknown key \"" + it.key() + "\"");
    }
}

template <typename T>
T require(const json& j, const char* key, const std::string& context)
{
    if (!j.contains(key))
        throw ConfigError(context + ": missing required key \"" + key + "\"");
    try
    {
        return j.at(key).get<T>();
    }
    catch (const json::exception& e)
    {
        throw ConfigError(context + ": bad value for \"" + std::string(key) + "\": " + e.what());
    }
}

template <typename T>
T optional_or(const json& j, const char* key, T fallback, const std::string& context)
{
    if (!j.contains(key))
        return fallback;
    try
    {
        return j.at(key).get<T>();
    }
    catch (const json::exception& e)
    {
        throw ConfigError(context + ": bad value for \"" + std::string(key) + "\": " + e.what());
    }
}

Waveform parse_waveform(const std::string& s)
{
    if (s == "sinc_subbands")
        return Waveform::SincSubbands;
    if (s == "bin_aligned_tones")
        return Waveform::BinAlignedTones;
    throw ConfigError("signal.waveform must be \"sinc_subbands\" or \"bin_aligned_tones\", got \"" +
                      s + "\"");
}

std::string waveform_name(Waveform w)
{
    return w == Waveform::SincSubbands ? "sinc_subbands" : "bin_aligned_tones";
}

ChannelKind parse_channel_kind(const std::string& s)
{
    if (s == "awgn")
        return ChannelKind::Awgn;
    if (s == "rayleigh")
        return ChannelKind::Rayleigh;
    if (s == "lognormal_shadow")
        return ChannelKind::LogNormalShadow;
    throw ConfigError("channel.kind must be awgn, rayleigh or lognormal_shadow, got \"" + s + "\"");
}

std::string channel_kind_name(ChannelKind k)
{
    switch (k)
    {
    case ChannelKind::Awgn:
        return "awgn";
    case ChannelKind::Rayleigh:
        return "rayleigh";
    case ChannelKind::LogNormalShadow:
        return "lognormal_shadow";
    }
    return "awgn";
}

} // namespace

Scenario Scenario::from_json(const json& j)
{
    Scenario s;
    check_keys(j,
               {"name", "signal", "plan", "channel", "offsets", "recovery", "detection", "trials",
                "seed", "record_mse", "output"},
               "scenario");

    s.name = optional_or<std::string>(j, "name", "scenario", "scenario");

    if (!j.contains("signal"))
        throw ConfigError("scenario: missing required key \"signal\"");
    const json& sig = j.at("signal");
    check_keys(sig,
               {"bandwidth_hz", "observation_s", "noise_power", "waveform", "subbands",
                "random_subbands", "snr_db"},
               "signal");
    s.signal.bandwidth_hz = require<double>(sig, "bandwidth_hz", "signal");
    s.signal.observation_s = require<double>(sig, "observation_s", "signal");
    s.signal.noise_power = optional_or<double>(sig, "noise_power", 1.0, "signal");
    s.signal.waveform = parse_waveform(optional_or<std::string>(sig, "waveform", "sinc_subbands", "signal"));
    if (sig.contains("subbands"))
    {
        s.subbands_declared = true;
        for (const json& sb : sig.at("subbands"))
        {
            check_keys(sb, {"carrier_hz", "bandwidth_hz", "power"}, "subband");
            SubbandSpec spec;
            spec.carrier_hz = require<double>(sb, "carrier_hz", "subband");
            spec.bandwidth_hz = require<double>(sb, "bandwidth_hz", "subband");
            spec.power = optional_or<double>(sb, "power", 1.0, "subband");
            s.signal.subbands.push_back(spec);
        }
    }
    if (sig.contains("random_subbands"))
    {
        const json& r = sig.at("random_subbands");
        check_keys(r,
                   {"count", "carrier_min_hz", "carrier_max_hz", "bandwidth_min_hz",
                    "bandwidth_max_hz", "power"},
                   "random_subbands");
        RandomSubbandConfig cfg;
        cfg.count = require<int>(r, "count", "random_subbands");
        cfg.carrier_min_hz = require<double>(r, "carrier_min_hz", "random_subbands");
        cfg.carrier_max_hz = require<double>(r, "carrier_max_hz", "random_subbands");
        cfg.bandwidth_min_hz = require<double>(r, "bandwidth_min_hz", "random_subbands");
        cfg.bandwidth_max_hz = require<double>(r, "bandwidth_max_hz", "random_subbands");
        cfg.power = optional_or<double>(r, "power", 1.0, "random_subbands");
        s.random_subbands = cfg;
    }
    if (sig.contains("snr_db"))
        s.snr_db = require<double>(sig, "snr_db", "signal");

    if (!j.contains("plan"))
        throw ConfigError("scenario: missing required key \"plan\"");
    const json& plan = j.at("plan");
    check_keys(plan, {"primes", "v", "scale_a"}, "plan");
    if (plan.contains("primes"))
        s.plan.primes = require<std::vector<int>>(plan, "primes", "plan");
    s.plan.v = optional_or<int>(plan, "v", 0, "plan");
    s.plan.scale_a = optional_or<double>(plan, "scale_a", 1.0, "plan");
    if (s.plan.primes.empty() && s.plan.v <= 0)
        throw ConfigError("plan: need either \"primes\" or \"v\"");

    if (j.contains("channel"))
    {
        const json& ch = j.at("channel");
        check_keys(ch, {"kind", "shadow_sigma_db"}, "channel");
        s.channel.kind = parse_channel_kind(require<std::string>(ch, "kind", "channel"));
        s.channel.shadow_sigma_db = optional_or<double>(ch, "shadow_sigma_db", 0.0, "channel");
    }

    if (j.contains("offsets"))
    {
        const json& of = j.at("offsets");
        check_keys(of, {"mode", "max_fraction_of_t"}, "offsets");
        std::string mode = optional_or<std::string>(of, "mode", "sync", "offsets");
        if (mode != "sync" && mode != "async")
            throw ConfigError("offsets.mode must be \"sync\" or \"async\"");
        s.offsets.async = mode == "async";
        s.offsets.max_fraction_of_t = optional_or<double>(of, "max_fraction_of_t", 0.0, "offsets");
        if (s.offsets.async && !(s.offsets.max_fraction_of_t > 0.0 && s.offsets.max_fraction_of_t < 1.0))
            throw ConfigError("offsets: async mode needs max_fraction_of_t in (0, 1)");
    }

    if (!j.contains("recovery"))
        throw ConfigError("scenario: missing required key \"recovery\"");
    const json& rec = j.at("recovery");
    check_keys(rec, {"sparsity", "max_iterations", "residual_tolerance"}, "recovery");
    if (!rec.contains("sparsity"))
        throw ConfigError("recovery: missing required key \"sparsity\"");
    if (rec.at("sparsity").is_string())
    {
        if (rec.at("sparsity").get<std::string>() != "auto")
            throw ConfigError("recovery.sparsity must be a positive integer or \"auto\"");
        s.sparsity_auto = true;
        s.recovery.sparsity = 1; // placeholder until realization
    }
    else
        s.recovery.sparsity = require<int>(rec, "sparsity", "recovery");
    s.recovery.max_iterations = optional_or<int>(rec, "max_iterations", 50, "recovery");
    s.recovery.residual_tolerance = optional_or<double>(rec, "residual_tolerance", 1e-6, "recovery");

    if (j.contains("detection"))
    {
        const json& det = j.at("detection");
        check_keys(det, {"bands", "target_pfas", "thresholds", "calibration_trials"}, "detection");
        if (det.contains("bands"))
            for (const json& b : det.at("bands"))
            {
                check_keys(b, {"low_hz", "high_hz"}, "band");
                BandSpec band;
                band.low_hz = require<double>(b, "low_hz", "band");
                band.high_hz = require<double>(b, "high_hz", "band");
                s.detection.bands.push_back(band);
            }
        s.detection.target_pfas =
            optional_or<std::vector<double>>(det, "target_pfas", {}, "detection");
        s.detection.thresholds =
            optional_or<std::vector<double>>(det, "thresholds", {}, "detection");
        s.detection.calibration_trials = optional_or<int>(det, "calibration_trials", 0, "detection");
    }

    s.trials = optional_or<int>(j, "trials", 1, "scenario");
    if (!j.contains("seed"))
        throw ConfigError("scenario: missing required key \"seed\" (no ambient randomness)");
    s.seed = require<std::uint64_t>(j, "seed", "scenario");
    s.seed_set = true;
    s.record_mse = optional_or<bool>(j, "record_mse", true, "scenario");

    if (j.contains("output"))
    {
        const json& out = j.at("output");
        check_keys(out, {"dir", "format"}, "output");
        s.out_dir = optional_or<std::string>(out, "dir", "out", "output");
        s.out_format = optional_or<std::string>(out, "format", "csv", "output");
        if (s.out_format != "csv" && s.out_format != "json")
            throw ConfigError("output.format must be \"csv\" or \"json\"");
    }

    s.validate();
    return s;
}

json Scenario::to_json() const
{
    json sig;
    sig["bandwidth_hz"] = signal.bandwidth_hz;
    sig["observation_s"] = signal.observation_s;
    sig["noise_power"] = signal.noise_power;
    sig["waveform"] = waveform_name(signal.waveform);
    if (subbands_declared || !signal.subbands.empty())
    {
        json arr = json::array();
        for (const SubbandSpec& sb : signal.subbands)
            arr.push_back({{"carrier_hz", sb.carrier_hz},
                           {"bandwidth_hz", sb.bandwidth_hz},
                           {"power", sb.power}});
        sig["subbands"] = arr;
    }
    if (random_subbands)
    {
        const RandomSubbandConfig& r = *random_subbands;
        sig["random_subbands"] = {{"count", r.count},
                                  {"carrier_min_hz", r.carrier_min_hz},
                                  {"carrier_max_hz", r.carrier_max_hz},
                                  {"bandwidth_min_hz", r.bandwidth_min_hz},
                                  {"bandwidth_max_hz", r.bandwidth_max_hz},
                                  {"power", r.power}};
    }
    if (snr_db)
        sig["snr_db"] = *snr_db;

    json plan_j;
    if (!plan.primes.empty())
        plan_j["primes"] = plan.primes;
    if (plan.v > 0)
        plan_j["v"] = plan.v;
    plan_j["scale_a"] = plan.scale_a;

    json det;
    det["bands"] = json::array();
    for (const BandSpec& b : detection.bands)
        det["bands"].push_back({{"low_hz", b.low_hz}, {"high_hz", b.high_hz}});
    det["target_pfas"] = detection.target_pfas;
    det["thresholds"] = detection.thresholds;
    det["calibration_trials"] = detection.calibration_trials;

    json j;
    j["name"] = name;
    j["signal"] = sig;
    j["plan"] = plan_j;
    j["channel"] = {{"kind", channel_kind_name(channel.kind)},
                    {"shadow_sigma_db", channel.shadow_sigma_db}};
    j["offsets"] = {{"mode", offsets.async ? "async" : "sync"},
                    {"max_fraction_of_t", offsets.max_fraction_of_t}};
    json rec;
    if (sparsity_auto)
        rec["sparsity"] = "auto";
    else
        rec["sparsity"] = recovery.sparsity;
    rec["max_iterations"] = recovery.max_iterations;
    rec["residual_tolerance"] = recovery.residual_tolerance;
    j["recovery"] = rec;
    j["detection"] = det;
    j["trials"] = trials;
    j["seed"] = seed;
    j["record_mse"] = record_mse;
    j["output"] = {{"dir", out_dir}, {"format", out_format}};
    return j;
}

Scenario Scenario::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open scenario file: " + path);
    json j;
    try
    {
        in >> j;
    }
    catch (const json::exception& e)
    {
        throw ConfigError("cannot parse scenario file " + path + ": " + e.what());
    }
    return from_json(j);
}

void Scenario::validate() const
{
    if (trials < 1)
        throw ConfigError("scenario: trials must be >= 1");
    if (!seed_set)
        throw ConfigError("scenario: seed is mandatory");
    if (!random_subbands && signal.subbands.empty() && !subbands_declared)
        throw ConfigError("signal: need \"subbands\" or \"random_subbands\"");
    if (random_subbands && !signal.subbands.empty())
        throw ConfigError("signal: \"subbands\" and \"random_subbands\" are mutually exclusive");
    try
    {
        signal.validate(); // with random_subbands this checks the scalar fields
    }
    catch (const std::invalid_argument& e)
    {
        throw ConfigError(std::string("signal: ") + e.what());
    }
    if (random_subbands)
    {
        const RandomSubbandConfig& r = *random_subbands;
        if (r.count < 1)
            throw ConfigError("random_subbands: count must be >= 1");
        if (!(r.bandwidth_min_hz > 0.0) || r.bandwidth_max_hz < r.bandwidth_min_hz)
            throw ConfigError("random_subbands: need 0 < bandwidth_min_hz <= bandwidth_max_hz");
        if (r.carrier_max_hz < r.carrier_min_hz)
            throw ConfigError("random_subbands: carrier_max_hz below carrier_min_hz");
    }
    try
    {
        channel.validate();
        if (!sparsity_auto)
            recovery.validate();
    }
    catch (const std::invalid_argument& e)
    {
        throw ConfigError(e.what());
    }
    if (!detection.bands.empty() && detection.target_pfas.empty() && detection.thresholds.empty())
        throw ConfigError("detection: bands given but no target_pfas or thresholds");
    for (double pfa : detection.target_pfas)
        if (!(pfa > 0.0 && pfa < 1.0))
            throw ConfigError("detection: target_pfas entries must lie in (0, 1)");
    if (detection.calibration_trials < 0)
        throw ConfigError("detection: calibration_trials must be >= 0");
}

} // namespace mass
