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

#include "mass/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "mass/coherence.hpp"
#include "mass/csv.hpp"
#include "mass/fft.hpp"

namespace mass {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<SubbandSpec> draw_subband_layout(const Scenario& scenario)
{
    const RandomSubbandConfig& cfg = *scenario.random_subbands;
    const double w = scenario.signal.bandwidth_hz;
    const double t_obs = scenario.signal.observation_s;
    const bool tones = scenario.signal.waveform == Waveform::BinAlignedTones;
    CounterRng rng(scenario.seed, RngPurpose::SubbandLayout);

    for (int attempt = 0; attempt < 10000; ++attempt)
    {
        std::vector<SubbandSpec> bands(static_cast<std::size_t>(cfg.count));
        bool ok = true;
        for (SubbandSpec& s : bands)
        {
            s.carrier_hz = rng.uniform(cfg.carrier_min_hz, cfg.carrier_max_hz);
            s.bandwidth_hz = rng.uniform(cfg.bandwidth_min_hz, cfg.bandwidth_max_hz);
            s.power = cfg.power;
            if (tones) // snap to the exact bin grid
                s.carrier_hz = std::round(s.carrier_hz * t_obs) / t_obs;
            if (s.carrier_hz - s.bandwidth_hz / 2.0 < 0.0 || s.carrier_hz + s.bandwidth_hz / 2.0 > w)
            {
                ok = false;
                break;
            }
        }
        for (std::size_t a = 0; ok && a < bands.size(); ++a)
            for (std::size_t b = a + 1; ok && b < bands.size(); ++b)
            {
                double lo = std::max(bands[a].carrier_hz - bands[a].bandwidth_hz / 2.0,
                                     bands[b].carrier_hz - bands[b].bandwidth_hz / 2.0);
                double hi = std::min(bands[a].carrier_hz + bands[a].bandwidth_hz / 2.0,
                                     bands[b].carrier_hz + bands[b].bandwidth_hz / 2.0);
                if (lo < hi || (tones && bands[a].carrier_hz == bands[b].carrier_hz))
                    ok = false;
            }
        if (ok)
            return bands;
    }
    throw ConfigError("random_subbands: could not place " + std::to_string(cfg.count) +
                      " non-overlapping subbands in 10000 attempts");
}

} // namespace

int resolve_thread_count(int requested)
{
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("MASS_THREADS"))
    {
        int parsed = std::atoi(env);
        if (parsed > 0)
            return parsed;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn)
{
    threads = std::min(resolve_thread_count(threads), count);
    if (threads <= 1)
    {
        for (int i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    workers.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w)
        workers.emplace_back([&]() {
            for (;;)
            {
                int i = next.fetch_add(1);
                if (i >= count || failed.load())
                    return;
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    for (std::thread& t : workers)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

RealizedScenario realize(const Scenario& scenario)
{
    scenario.validate();
    RealizedScenario rs;
    rs.config = scenario;
    rs.signal = scenario.signal;
    rs.signal.rng_seed = scenario.seed;

    if (scenario.random_subbands)
        rs.signal.subbands = draw_subband_layout(scenario);
    try
    {
        rs.signal.validate();
        if (scenario.snr_db)
            scale_powers_to_snr(rs.signal, *scenario.snr_db);

        const int n = rs.signal.nyquist_length();
        if (!scenario.plan.primes.empty())
        {
            rs.plan.nyquist_n = n;
            rs.plan.observation_s = rs.signal.observation_s;
            rs.plan.branch_lengths = scenario.plan.primes;
            rs.plan.validate();
        }
        else
            rs.plan = select_primes(n, scenario.plan.v, scenario.plan.scale_a,
                                    rs.signal.observation_s);

        for (const BandSpec& band : scenario.detection.bands)
            band_to_bins(band, n, rs.signal.observation_s);
    }
    catch (const std::invalid_argument& e)
    {
        throw ConfigError(e.what());
    }

    rs.realized_snr_db = average_snr_db(rs.signal);
    rs.nominal_powers.reserve(rs.signal.subbands.size());
    for (const SubbandSpec& s : rs.signal.subbands)
        rs.nominal_powers.push_back(s.power);

    for (const BandSpec& band : scenario.detection.bands)
    {
        std::vector<std::size_t> excluded;
        for (std::size_t l = 0; l < rs.signal.subbands.size(); ++l)
        {
            const SubbandSpec& s = rs.signal.subbands[l];
            double lo = std::max(s.carrier_hz - s.bandwidth_hz / 2.0, band.low_hz);
            double hi = std::min(s.carrier_hz + s.bandwidth_hz / 2.0, band.high_hz);
            if (lo < hi)
                excluded.push_back(l);
        }
        rs.band_exclusions.push_back(std::move(excluded));
    }

    rs.recovery = scenario.recovery;
    if (scenario.sparsity_auto)
    {
        RealizedScenario probe = rs;
        probe.recovery.sparsity = 1;
        probe.config.sparsity_auto = false;
        // measurement-driven estimate from one held-out trial
        std::vector<BranchMeasurement> branches;
        for (int i = 0; i < probe.plan.branches(); ++i)
        {
            CounterRng fading_rng(scenario.seed, RngPurpose::Fading, static_cast<std::uint64_t>(i),
                                  static_cast<std::uint64_t>(kProbeTrial));
            std::vector<double> powers = draw_fading(probe.signal, scenario.channel, fading_rng);
            CounterRng noise_rng(scenario.seed, RngPurpose::Noise, static_cast<std::uint64_t>(i),
                                 static_cast<std::uint64_t>(kProbeTrial));
            branches.push_back(branch_dft(sample_branch(probe.signal, powers, probe.plan.rate_hz(i),
                                                        BranchOffset{0.0},
                                                        probe.plan.branch_lengths[i], noise_rng)));
        }
        StackedSystem sys = stack_measurements(probe.plan, branches);
        rs.recovery.sparsity = estimate_sparsity_by_elbow(sys);
    }
    try
    {
        rs.recovery.validate();
        if (rs.recovery.sparsity > rs.plan.total_samples())
            throw std::invalid_argument("recovery: sparsity exceeds the total sample count");
    }
    catch (const std::invalid_argument& e)
    {
        throw ConfigError(e.what());
    }

    if (scenario.record_mse)
        rs.truth = nyquist_reference_spectrum(rs.signal, rs.nominal_powers, false);
    return rs;
}

TrialRecord run_trial(const RealizedScenario& rs, int trial_index,
                      std::span<const std::size_t> excluded_subbands,
                      RecoveredSpectrum* spectrum_out)
{
    const Scenario& cfg = rs.config;
    const int v = rs.plan.branches();
    const double t_obs = rs.signal.observation_s;

    std::vector<BranchMeasurement> branches;
    branches.reserve(static_cast<std::size_t>(v));
    double gain_sum = 0.0;
    long gain_count = 0;

    for (int i = 0; i < v; ++i)
    {
        CounterRng fading_rng(cfg.seed, RngPurpose::Fading, static_cast<std::uint64_t>(i),
                              static_cast<std::uint64_t>(trial_index));
        std::vector<double> powers = draw_fading(rs.signal, cfg.channel, fading_rng);
        for (std::size_t l = 0; l < powers.size(); ++l)
            if (rs.nominal_powers[l] > 0.0)
            {
                gain_sum += powers[l] / rs.nominal_powers[l];
                ++gain_count;
            }
        for (std::size_t l : excluded_subbands)
            powers[l] = 0.0;

        BranchOffset offset{0.0};
        if (cfg.offsets.async)
        {
            CounterRng offset_rng(cfg.seed, RngPurpose::Offset, static_cast<std::uint64_t>(i),
                                  static_cast<std::uint64_t>(trial_index));
            offset.delta_s = offset_rng.uniform() * cfg.offsets.max_fraction_of_t * t_obs;
        }

        CounterRng noise_rng(cfg.seed, RngPurpose::Noise, static_cast<std::uint64_t>(i),
                             static_cast<std::uint64_t>(trial_index));
        std::vector<double> samples = sample_branch(rs.signal, powers, rs.plan.rate_hz(i), offset,
                                                    rs.plan.branch_lengths[i], noise_rng);
        branches.push_back(branch_dft(samples));
    }

    StackedSystem sys = stack_measurements(rs.plan, branches);
    RecoveredSpectrum rec = cosamp(sys, rs.recovery);

    TrialRecord record;
    record.trial = trial_index;
    record.mean_fading_gain = gain_count > 0 ? gain_sum / static_cast<double>(gain_count) : 1.0;
    record.residual_norm = rec.residual_norm;
    record.iterations = rec.iterations;
    record.mse = rs.truth.empty() ? kNaN : recovery_mse(rec, rs.truth);
    record.band_energies.reserve(cfg.detection.bands.size());
    for (const BandSpec& band : cfg.detection.bands)
        record.band_energies.push_back(band_energy(rec, band, t_obs));
    if (spectrum_out != nullptr)
        *spectrum_out = std::move(rec);
    return record;
}

namespace {

std::vector<OperatingPoint> calibrate_operating_points(const RealizedScenario& rs, int threads)
{
    const Scenario& cfg = rs.config;
    std::vector<OperatingPoint> points;
    if (cfg.detection.bands.empty())
        return points;

    const int bands = static_cast<int>(cfg.detection.bands.size());
    for (int b = 0; b < bands; ++b)
    {
        if (!cfg.detection.target_pfas.empty())
        {
            int cal_trials = cfg.detection.calibration_trials > 0
                                 ? cfg.detection.calibration_trials
                                 : cfg.trials;
            std::vector<double> h0_energies(static_cast<std::size_t>(cal_trials));
            parallel_for(cal_trials, threads, [&](int t) {
                TrialRecord rec = run_trial(rs, kCalibrationBase + b * kCalibrationStride + t,
                                            rs.band_exclusions[b]);
                h0_energies[static_cast<std::size_t>(t)] = rec.band_energies[b];
            });
            for (double pfa : cfg.detection.target_pfas)
            {
                OperatingPoint op;
                op.band = b;
                op.target_pfa = pfa;
                op.threshold = calibrate_threshold(h0_energies, pfa, &op.degenerate);
                points.push_back(op);
            }
        }
        for (double threshold : cfg.detection.thresholds)
        {
            OperatingPoint op;
            op.band = b;
            op.target_pfa = kNaN;
            op.threshold = threshold;
            points.push_back(op);
        }
    }
    return points;
}

} // namespace

PipelineResult run_pipeline(const Scenario& scenario, int threads)
{
    PipelineResult result;
    result.realized = realize(scenario);
    const RealizedScenario& rs = result.realized;

    result.operating_points = calibrate_operating_points(rs, threads);

    result.records.resize(static_cast<std::size_t>(scenario.trials));
    parallel_for(scenario.trials, threads,
                 [&](int t) { result.records[static_cast<std::size_t>(t)] = run_trial(rs, t, {}); });

    // order-fixed aggregation
    if (scenario.record_mse)
    {
        double acc = 0.0;
        for (const TrialRecord& r : result.records)
            acc += r.mse;
        result.mean_mse = acc / static_cast<double>(result.records.size());
    }
    else
        result.mean_mse = kNaN;

    result.detection_rates.reserve(result.operating_points.size());
    for (const OperatingPoint& op : result.operating_points)
    {
        long exceed = 0;
        for (const TrialRecord& r : result.records)
            if (r.band_energies[static_cast<std::size_t>(op.band)] > op.threshold)
                ++exceed;
        result.detection_rates.push_back(static_cast<double>(exceed) /
                                         static_cast<double>(result.records.size()));
    }
    return result;
}

RocResult roc_sweep(const Scenario& scenario, int threads)
{
    RocResult result;
    result.realized = realize(scenario);
    const RealizedScenario& rs = result.realized;
    if (scenario.detection.bands.empty())
        throw ConfigError("roc: scenario has no detection bands");

    std::vector<OperatingPoint> points = calibrate_operating_points(rs, threads);
    const int bands = static_cast<int>(scenario.detection.bands.size());
    const int trials = scenario.trials;

    std::vector<std::vector<double>> h1(static_cast<std::size_t>(bands),
                                        std::vector<double>(static_cast<std::size_t>(trials)));
    std::vector<std::vector<double>> h0 = h1;
    parallel_for(trials, threads, [&](int t) {
        TrialRecord h1_rec = run_trial(rs, t, {});
        for (int b = 0; b < bands; ++b)
            h1[static_cast<std::size_t>(b)][static_cast<std::size_t>(t)] =
                h1_rec.band_energies[static_cast<std::size_t>(b)];
        for (int b = 0; b < bands; ++b)
        {
            TrialRecord h0_rec = run_trial(rs, t, rs.band_exclusions[static_cast<std::size_t>(b)]);
            h0[static_cast<std::size_t>(b)][static_cast<std::size_t>(t)] =
                h0_rec.band_energies[static_cast<std::size_t>(b)];
        }
    });

    for (int b = 0; b < bands; ++b)
    {
        RocCurve curve;
        curve.band = b;
        std::vector<double> thresholds;
        for (const OperatingPoint& op : points)
            if (op.band == b)
            {
                thresholds.push_back(op.threshold);
                curve.target_pfas.push_back(op.target_pfa);
                curve.degenerate_calibration = curve.degenerate_calibration || op.degenerate;
            }
        curve.points = roc_from_energies(h0[static_cast<std::size_t>(b)],
                                         h1[static_cast<std::size_t>(b)], thresholds);
        result.curves.push_back(std::move(curve));
    }
    return result;
}

std::string trials_csv(const PipelineResult& result)
{
    std::ostringstream out;
    out << "trial,mean_fading_gain,mse,residual_norm,iterations,band,band_low_hz,band_high_hz,"
           "target_pfa,threshold,energy,decision\n";
    const auto& bands = result.realized.config.detection.bands;
    for (const TrialRecord& r : result.records)
    {
        if (result.operating_points.empty())
        {
            out << r.trial << ',' << fmt_g(r.mean_fading_gain) << ',' << fmt_g(r.mse) << ','
                << fmt_g(r.residual_norm) << ',' << r.iterations << ",,,,,,,\n";
            continue;
        }
        for (const OperatingPoint& op : result.operating_points)
        {
            double energy = r.band_energies[static_cast<std::size_t>(op.band)];
            DetectionDecision d = decide(energy, op.threshold);
            out << r.trial << ',' << fmt_g(r.mean_fading_gain) << ',' << fmt_g(r.mse) << ','
                << fmt_g(r.residual_norm) << ',' << r.iterations << ',' << op.band << ','
                << fmt_g(bands[static_cast<std::size_t>(op.band)].low_hz) << ','
                << fmt_g(bands[static_cast<std::size_t>(op.band)].high_hz) << ','
                << fmt_g(op.target_pfa) << ',' << fmt_g(op.threshold) << ',' << fmt_g(energy) << ','
                << (d.hypothesis == Hypothesis::H1 ? "H1" : "H0") << '\n';
        }
    }
    return out.str();
}

std::string roc_csv(const RocResult& result)
{
    std::ostringstream out;
    out << "scenario_id,channel,snr_db,compression_ratio,threshold,pfa,pd,trials\n";
    const Scenario& cfg = result.realized.config;
    std::string channel;
    switch (cfg.channel.kind)
    {
    case ChannelKind::Awgn:
        channel = "awgn";
        break;
    case ChannelKind::Rayleigh:
        channel = "rayleigh";
        break;
    case ChannelKind::LogNormalShadow:
        channel = "lognormal_shadow";
        break;
    }
    for (const RocCurve& curve : result.curves)
    {
        for (const RocPoint& pt : curve.points)
        {
            out << cfg.name << "/band" << curve.band << ',' << channel << ','
                << fmt_g(result.realized.realized_snr_db) << ','
                << fmt_g(result.realized.plan.sum_ratio()) << ',' << fmt_g(pt.threshold) << ','
                << fmt_g(pt.pfa) << ',' << fmt_g(pt.pd) << ',' << pt.trials << '\n';
        }
    }
    return out.str();
}

std::string spectrum_csv(const RecoveredSpectrum& spectrum, double observation_s)
{
    std::ostringstream out;
    out << "bin,frequency_hz,magnitude\n";
    const int n = static_cast<int>(spectrum.magnitude.size());
    for (int i = 0; i < n; ++i)
    {
        int bin = centered_bin_of_index(i, n);
        out << bin << ',' << fmt_g(static_cast<double>(bin) / observation_s) << ','
            << fmt_g(spectrum.magnitude[static_cast<std::size_t>(i)]) << '\n';
    }
    return out.str();
}

std::string alias_matrix_csv(const AliasMatrix& matrix)
{
    std::ostringstream out;
    auto dense = matrix.dense();
    for (const auto& row : dense)
    {
        for (std::size_t j = 0; j < row.size(); ++j)
        {
            if (j > 0)
                out << ',';
            out << static_cast<int>(row[j]);
        }
        out << '\n';
    }
    return out.str();
}

std::string stacked_phi_csv(const StackedSystem& system)
{
    std::string out;
    for (const AliasMatrix& block : system.phi)
        out += alias_matrix_csv(block);
    return out;
}

nlohmann::json summary_json(const PipelineResult& result)
{
    const RealizedScenario& rs = result.realized;
    nlohmann::json j;
    j["name"] = rs.config.name;
    j["seed"] = rs.config.seed;
    j["trials"] = rs.config.trials;
    j["nyquist_n"] = rs.plan.nyquist_n;
    j["bandwidth_hz"] = rs.signal.bandwidth_hz;
    j["observation_s"] = rs.signal.observation_s;
    j["noise_power"] = rs.signal.noise_power;
    j["snr_db"] = rs.realized_snr_db;
    j["branch_lengths"] = rs.plan.branch_lengths;
    j["sum_ratio"] = rs.plan.sum_ratio();
    j["mean_ratio"] = rs.plan.mean_ratio();
    j["sparsity"] = rs.recovery.sparsity;
    j["occupied_bins"] = static_cast<int>(occupied_bins(rs.signal).size());
    j["mean_mse"] = std::isnan(result.mean_mse) ? nlohmann::json() : nlohmann::json(result.mean_mse);

    CoherenceReport coh = mutual_coherence(stacked_operator(rs.plan));
    j["mu"] = coh.mu;
    j["predicted_mu"] = coh.predicted_mu;
    j["prop2_bound"] = prop2_success_bound(rs.recovery.sparsity, rs.plan);

    nlohmann::json subbands = nlohmann::json::array();
    for (const SubbandSpec& s : rs.signal.subbands)
        subbands.push_back({{"carrier_hz", s.carrier_hz},
                            {"bandwidth_hz", s.bandwidth_hz},
                            {"power", s.power}});
    j["realized_subbands"] = subbands;

    nlohmann::json ops = nlohmann::json::array();
    for (std::size_t i = 0; i < result.operating_points.size(); ++i)
    {
        const OperatingPoint& op = result.operating_points[i];
        nlohmann::json o;
        o["band"] = op.band;
        o["target_pfa"] = std::isnan(op.target_pfa) ? nlohmann::json() : nlohmann::json(op.target_pfa);
        o["threshold"] = op.threshold;
        o["degenerate_calibration"] = op.degenerate;
        o["detection_rate"] = result.detection_rates[i];
        ops.push_back(o);
    }
    j["operating_points"] = ops;
    return j;
}

void write_text_file(const std::string& path, const std::string& content)
{
    std::filesystem::path p(path);
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << content;
}

} // namespace mass
