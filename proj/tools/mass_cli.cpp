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
//
// Command-line front end. Subcommands:
//   plan     select/validate a sampling plan, optionally export dense Phi
//   analyze  coherence report and recovery bound for a plan
//   overlap  closed-form vs Monte-Carlo aliasing-overlap probability
//   sample   one trial of branch sampling -> branch measurement CSV
//   recover  one trial end to end -> recovered spectrum CSV
//   detect   per-trial detection decisions -> trials CSV + summary JSON
//   roc      full ROC sweep -> ROC CSV
//   run      experiment pipeline -> trials CSV + summary JSON

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

#include "mass/coherence.hpp"
#include "mass/csv.hpp"
#include "mass/pipeline.hpp"

namespace {

struct CommonOptions
{
    std::string config_path;
    std::string out_dir;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int trials = 0;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool needs_config = true)
{
    auto* cfg = cmd->add_option("--config", opts.config_path, "JSON scenario file");
    if (needs_config)
        cfg->required();
    cmd->add_option("--seed", opts.seed, "override the scenario seed")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--trials", opts.trials, "override the scenario trial count");
    cmd->add_option("--out", opts.out_dir, "override the output directory");
    cmd->add_option("--format", opts.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", opts.threads, "worker threads (default: MASS_THREADS or cores)");
}

mass::Scenario load_with_overrides(const CommonOptions& opts)
{
    mass::Scenario s = mass::Scenario::load(opts.config_path);
    if (opts.seed_set)
        s.seed = opts.seed;
    if (opts.trials > 0)
        s.trials = opts.trials;
    if (!opts.out_dir.empty())
        s.out_dir = opts.out_dir;
    if (!opts.format.empty())
        s.out_format = opts.format;
    return s;
}

mass::SamplingPlan plan_from_flags(int n, double t_obs, const std::vector<int>& primes, int v,
                                   double scale_a)
{
    if (!primes.empty())
    {
        mass::SamplingPlan plan;
        plan.nyquist_n = n;
        plan.observation_s = t_obs;
        plan.branch_lengths = primes;
        return plan;
    }
    if (v <= 0)
        throw mass::ConfigError("need either --primes or --v");
    return mass::select_primes(n, v, scale_a, t_obs);
}

nlohmann::json records_json(const mass::PipelineResult& result)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const mass::TrialRecord& r : result.records)
    {
        nlohmann::json j;
        j["trial"] = r.trial;
        j["mean_fading_gain"] = r.mean_fading_gain;
        j["mse"] = std::isnan(r.mse) ? nlohmann::json() : nlohmann::json(r.mse);
        j["residual_norm"] = r.residual_norm;
        j["iterations"] = r.iterations;
        j["band_energies"] = r.band_energies;
        arr.push_back(j);
    }
    return arr;
}

int cmd_plan(int n, double t_obs, const std::vector<int>& primes, int v, double scale_a,
             const std::string& phi_csv)
{
    mass::SamplingPlan plan = plan_from_flags(n, t_obs, primes, v, scale_a);
    auto violations = plan.violations();
    std::printf("n = %d\n", plan.nyquist_n);
    std::printf("primes =");
    for (int m : plan.branch_lengths)
        std::printf(" %d", m);
    std::printf("\n");
    std::printf("rates_hz =");
    for (int i = 0; i < plan.branches(); ++i)
        std::printf(" %s", mass::fmt_g(plan.rate_hz(i)).c_str());
    std::printf("\n");
    std::printf("sum_ratio = %s\n", mass::fmt_g(plan.sum_ratio()).c_str());
    std::printf("mean_ratio = %s\n", mass::fmt_g(plan.mean_ratio()).c_str());
    std::printf("valid = %s\n", violations.empty() ? "true" : "false");
    for (const std::string& msg : violations)
        std::printf("violation: %s\n", msg.c_str());
    if (!phi_csv.empty())
    {
        mass::write_text_file(phi_csv, mass::stacked_phi_csv(mass::stacked_operator(plan)));
        std::printf("phi_csv = %s\n", phi_csv.c_str());
    }
    return violations.empty() ? 0 : 2;
}

int cmd_analyze(int n, double t_obs, const std::vector<int>& primes, int v, double scale_a, int k,
                int empirical_trials, std::uint64_t seed, bool as_csv)
{
    mass::SamplingPlan plan = plan_from_flags(n, t_obs, primes, v, scale_a);
    auto violations = plan.violations();
    mass::CoherenceReport report = mass::mutual_coherence(mass::stacked_operator(plan));

    double bound = k > 0 ? mass::prop2_success_bound(k, plan) : std::nan("");
    double empirical = std::nan("");
    if (empirical_trials > 0 && k > 0)
    {
        mass::CounterRng rng(seed, mass::RngPurpose::SparseInstance);
        empirical = mass::empirical_recovery_probability(k, plan, empirical_trials, rng);
    }

    if (as_csv)
    {
        std::printf("plan_id,v,mu,predicted_mu,bound,empirical_rate\n");
        std::printf("n%d_v%d,%d,%s,%s,%s,%s\n", plan.nyquist_n, plan.branches(), plan.branches(),
                    mass::fmt_g(report.mu).c_str(), mass::fmt_g(report.predicted_mu).c_str(),
                    mass::fmt_g(bound).c_str(), mass::fmt_g(empirical).c_str());
        return 0;
    }
    std::printf("mu = %s\n", mass::fmt_g(report.mu).c_str());
    std::printf("predicted_mu = %s\n", mass::fmt_g(report.predicted_mu).c_str());
    std::printf("max_pair = (%d, %d) with %d shared rows\n", report.max_pair.first,
                report.max_pair.second, report.max_collisions);
    std::printf("undersampling_factors =");
    for (double d : report.undersampling_factors)
        std::printf(" %s", mass::fmt_g(d).c_str());
    std::printf("\n");
    std::printf("valid = %s\n", violations.empty() ? "true" : "false");
    for (const std::string& msg : violations)
        std::printf("violation: %s\n", msg.c_str());
    if (k > 0)
        std::printf("prop2_bound(k=%d) = %s\n", k, mass::fmt_g(bound).c_str());
    if (empirical_trials > 0 && k > 0)
        std::printf("empirical_rate = %s (%d trials)\n", mass::fmt_g(empirical).c_str(),
                    empirical_trials);
    return 0;
}

int cmd_overlap(int n, int m, int k, long trials, std::uint64_t seed)
{
    double closed = mass::overlap_probability_closed_form(k, n, m);
    mass::CounterRng rng(seed, mass::RngPurpose::OverlapTrial);
    mass::MonteCarloEstimate mc = mass::overlap_probability_monte_carlo(k, n, m, trials, rng);
    bool agree = std::abs(closed - mc.value) <= mc.half_width_3sigma;
    std::printf("closed_form,monte_carlo,half_width_3sigma,trials,agree\n");
    std::printf("%s,%s,%s,%ld,%s\n", mass::fmt_g(closed).c_str(), mass::fmt_g(mc.value).c_str(),
                mass::fmt_g(mc.half_width_3sigma).c_str(), mc.trials, agree ? "true" : "false");
    return 0;
}

int cmd_sample(const CommonOptions& opts, int trial)
{
    mass::Scenario scenario = load_with_overrides(opts);
    mass::RealizedScenario rs = mass::realize(scenario);

    std::string csv = "branch,m_bin,re,im,magnitude\n";
    std::vector<mass::BranchMeasurement> branches;
    for (int i = 0; i < rs.plan.branches(); ++i)
    {
        mass::CounterRng fading_rng(scenario.seed, mass::RngPurpose::Fading,
                                    static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(trial));
        std::vector<double> powers = mass::draw_fading(rs.signal, scenario.channel, fading_rng);
        mass::BranchOffset offset{0.0};
        if (scenario.offsets.async)
        {
            mass::CounterRng offset_rng(scenario.seed, mass::RngPurpose::Offset,
                                        static_cast<std::uint64_t>(i),
                                        static_cast<std::uint64_t>(trial));
            offset.delta_s = offset_rng.uniform() * scenario.offsets.max_fraction_of_t *
                             rs.signal.observation_s;
        }
        mass::CounterRng noise_rng(scenario.seed, mass::RngPurpose::Noise,
                                   static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(trial));
        mass::BranchMeasurement bm = mass::branch_dft(
            mass::sample_branch(rs.signal, powers, rs.plan.rate_hz(i), offset,
                                rs.plan.branch_lengths[i], noise_rng));
        for (int idx = 0; idx < bm.length; ++idx)
        {
            int bin = mass::centered_bin_of_index(idx, bm.length);
            csv += std::to_string(i) + ',' + std::to_string(bin) + ',' +
                   mass::fmt_g(bm.dft[idx].real()) + ',' + mass::fmt_g(bm.dft[idx].imag()) + ',' +
                   mass::fmt_g(bm.magnitude[idx]) + '\n';
        }
        branches.push_back(std::move(bm));
    }
    mass::StackedSystem sys = mass::stack_measurements(rs.plan, branches);
    std::string ycsv = "row,value\n";
    for (std::size_t r = 0; r < sys.y.size(); ++r)
        ycsv += std::to_string(r) + ',' + mass::fmt_g(sys.y[r]) + '\n';

    mass::write_text_file(scenario.out_dir + "/" + scenario.name + "__branches.csv", csv);
    mass::write_text_file(scenario.out_dir + "/" + scenario.name + "__y.csv", ycsv);
    std::printf("wrote %s/%s__branches.csv and __y.csv (trial %d)\n", scenario.out_dir.c_str(),
                scenario.name.c_str(), trial);
    return 0;
}

int cmd_recover(const CommonOptions& opts, int trial)
{
    mass::Scenario scenario = load_with_overrides(opts);
    mass::RealizedScenario rs = mass::realize(scenario);
    mass::RecoveredSpectrum spectrum;
    mass::TrialRecord record = mass::run_trial(rs, trial, {}, &spectrum);

    std::string path = scenario.out_dir + "/" + scenario.name + "__spectrum.csv";
    mass::write_text_file(path, mass::spectrum_csv(spectrum, rs.signal.observation_s));
    std::printf("trial = %d\n", trial);
    std::printf("residual_norm = %s\n", mass::fmt_g(record.residual_norm).c_str());
    std::printf("iterations = %d\n", record.iterations);
    std::printf("support_size = %zu\n", spectrum.support.size());
    if (!std::isnan(record.mse))
        std::printf("mse = %s\n", mass::fmt_g(record.mse).c_str());
    std::printf("spectrum_csv = %s\n", path.c_str());
    return 0;
}

int run_pipeline_command(const CommonOptions& opts, bool print_rates)
{
    mass::Scenario scenario = load_with_overrides(opts);
    mass::PipelineResult result = mass::run_pipeline(scenario, opts.threads);

    std::string base = scenario.out_dir + "/" + scenario.name;
    if (scenario.out_format == "json")
        mass::write_text_file(base + "__records.json", records_json(result).dump(2) + "\n");
    else
        mass::write_text_file(base + "__trials.csv", mass::trials_csv(result));
    mass::write_text_file(base + "__summary.json", mass::summary_json(result).dump(2) + "\n");

    if (print_rates)
        for (std::size_t i = 0; i < result.operating_points.size(); ++i)
        {
            const mass::OperatingPoint& op = result.operating_points[i];
            std::printf("band %d  target_pfa %s  threshold %s  detection_rate %s\n", op.band,
                        mass::fmt_g(op.target_pfa).c_str(), mass::fmt_g(op.threshold).c_str(),
                        mass::fmt_g(result.detection_rates[i]).c_str());
        }
    if (!std::isnan(result.mean_mse))
        std::printf("mean_mse = %s\n", mass::fmt_g(result.mean_mse).c_str());
    std::printf("outputs = %s__*\n", base.c_str());
    return 0;
}

int cmd_roc(const CommonOptions& opts)
{
    mass::Scenario scenario = load_with_overrides(opts);
    mass::RocResult result = mass::roc_sweep(scenario, opts.threads);
    std::string base = scenario.out_dir + "/" + scenario.name;
    mass::write_text_file(base + "__roc.csv", mass::roc_csv(result));
    for (const mass::RocCurve& curve : result.curves)
        for (std::size_t i = 0; i < curve.points.size(); ++i)
            std::printf("band %d  threshold %s  pfa %s  pd %s\n", curve.band,
                        mass::fmt_g(curve.points[i].threshold).c_str(),
                        mass::fmt_g(curve.points[i].pfa).c_str(),
                        mass::fmt_g(curve.points[i].pd).c_str());
    std::printf("roc_csv = %s__roc.csv\n", base.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"multi-rate asynchronous sub-Nyquist sampling simulator"};
    app.require_subcommand(1);

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "select or validate a sampling plan");
    int plan_n = 0, plan_v = 0;
    double plan_a = 1.0, plan_t = 1.0;
    std::vector<int> plan_primes;
    std::string plan_phi_csv;
    plan_cmd->add_option("--n", plan_n, "Nyquist length N")->required();
    plan_cmd->add_option("--v", plan_v, "number of branches (with --a)");
    plan_cmd->add_option("--a", plan_a, "prime scale factor a >= 1");
    plan_cmd->add_option("--t", plan_t, "observation time in seconds");
    plan_cmd->add_option("--primes", plan_primes, "explicit branch lengths")->delimiter(',');
    plan_cmd->add_option("--phi-csv", plan_phi_csv, "write the stacked dense 0/1 matrix here");

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze", "coherence and bound analysis of a plan");
    int an_n = 0, an_v = 0, an_k = 0, an_emp = 0;
    double an_a = 1.0, an_t = 1.0;
    std::uint64_t an_seed = 1;
    std::vector<int> an_primes;
    bool an_csv = false;
    analyze_cmd->add_option("--n", an_n, "Nyquist length N")->required();
    analyze_cmd->add_option("--v", an_v, "number of branches (with --a)");
    analyze_cmd->add_option("--a", an_a, "prime scale factor a >= 1");
    analyze_cmd->add_option("--t", an_t, "observation time in seconds");
    analyze_cmd->add_option("--primes", an_primes, "explicit branch lengths")->delimiter(',');
    analyze_cmd->add_option("--k", an_k, "sparsity for the recovery bound");
    analyze_cmd->add_option("--empirical-trials", an_emp, "also measure the empirical rate");
    analyze_cmd->add_option("--seed", an_seed, "seed for the empirical trials");
    analyze_cmd->add_flag("--csv", an_csv, "emit one machine-readable CSV row");

    // overlap
    auto* overlap_cmd = app.add_subcommand("overlap", "aliasing-overlap probability check");
    int ov_n = 0, ov_m = 0, ov_k = 0;
    long ov_trials = 100000;
    std::uint64_t ov_seed = 1;
    overlap_cmd->add_option("--n", ov_n, "Nyquist length N")->required();
    overlap_cmd->add_option("--m", ov_m, "branch length M")->required();
    overlap_cmd->add_option("--k", ov_k, "spectral sparsity k")->required();
    overlap_cmd->add_option("--trials", ov_trials, "Monte-Carlo trials");
    overlap_cmd->add_option("--seed", ov_seed, "Monte-Carlo seed");

    // scenario-driven commands
    CommonOptions sample_opts, recover_opts, detect_opts, roc_opts, run_opts;
    int sample_trial = 0, recover_trial = 0;
    auto* sample_cmd = app.add_subcommand("sample", "one trial of branch sampling");
    add_common(sample_cmd, sample_opts);
    sample_cmd->add_option("--trial", sample_trial, "trial index");
    auto* recover_cmd = app.add_subcommand("recover", "one trial of spectral recovery");
    add_common(recover_cmd, recover_opts);
    recover_cmd->add_option("--trial", recover_trial, "trial index");
    auto* detect_cmd = app.add_subcommand("detect", "detection decisions over all trials");
    add_common(detect_cmd, detect_opts);
    auto* roc_cmd = app.add_subcommand("roc", "ROC sweep over all trials");
    add_common(roc_cmd, roc_opts);
    auto* run_cmd = app.add_subcommand("run", "full experiment pipeline");
    add_common(run_cmd, run_opts);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        if (e.get_exit_code() == 0) // --help
            return app.exit(e);
        app.exit(e);
        return 2;
    }

    try
    {
        if (plan_cmd->parsed())
            return cmd_plan(plan_n, plan_t, plan_primes, plan_v, plan_a, plan_phi_csv);
        if (analyze_cmd->parsed())
            return cmd_analyze(an_n, an_t, an_primes, an_v, an_a, an_k, an_emp, an_seed, an_csv);
        if (overlap_cmd->parsed())
            return cmd_overlap(ov_n, ov_m, ov_k, ov_trials, ov_seed);
        if (sample_cmd->parsed())
            return cmd_sample(sample_opts, sample_trial);
        if (recover_cmd->parsed())
            return cmd_recover(recover_opts, recover_trial);
        if (detect_cmd->parsed())
            return run_pipeline_command(detect_opts, true);
        if (roc_cmd->parsed())
            return cmd_roc(roc_opts);
        if (run_cmd->parsed())
            return run_pipeline_command(run_opts, true);
    }
    catch (const mass::ConfigError& e)
    {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
    catch (const std::invalid_argument& e)
    {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
    catch (const std::exception& e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
