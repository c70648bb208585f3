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

#ifndef MASS_PIPELINE_HPP
#define MASS_PIPELINE_HPP

#include <functional>
#include <span>
#include <vector>

#include "mass/scenario.hpp"

namespace mass {

// Thread count from the explicit request, else MASS_THREADS, else the
// machine's core count. Results never depend on this value; only wall time.
int resolve_thread_count(int requested = 0);

// Runs fn(0..count-1) on up to `threads` workers. fn must only write to
// per-index slots; no ordering is guaranteed.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

// Scenario after deterministic expansion: random subbands drawn, SNR scaling
// applied, plan resolved and validated, auto sparsity estimated.
struct RealizedScenario
{
    Scenario config;
    WidebandSignalSpec signal;
    SamplingPlan plan;
    SparseRecoveryConfig recovery;
    double realized_snr_db = 0.0;
    std::vector<double> nominal_powers;            // pre-fading E_l
    std::vector<double> truth;                     // noiseless nominal |X| (empty unless record_mse)
    std::vector<std::vector<std::size_t>> band_exclusions; // per band: subbands removed under H0
};

RealizedScenario realize(const Scenario& scenario);

// One pipeline execution: per-branch fading -> offset -> sampling -> DFT ->
// stacking -> cosamp -> per-band energies.
struct TrialRecord
{
    int trial = 0;
    double mean_fading_gain = 1.0;
    double mse = 0.0; // NaN when record_mse is off
    double residual_norm = 0.0;
    int iterations = 0;
    std::vector<double> band_energies;
};

// Trial-index bases keeping eval, per-band calibration, and probe draws on
// disjoint RNG streams. Calibration for band b uses indices
// kCalibrationBase + b*kCalibrationStride + t.
inline constexpr int kCalibrationBase = 1'000'000'000;
inline constexpr int kCalibrationStride = 10'000'000;
inline constexpr int kProbeTrial = 2'000'000'000;

TrialRecord run_trial(const RealizedScenario& rs, int trial_index,
                      std::span<const std::size_t> excluded_subbands,
                      RecoveredSpectrum* spectrum_out = nullptr);

// One resolved detection operating point. target_pfa is NaN for explicit
// thresholds; degenerate marks an all-equal calibration sample.
struct OperatingPoint
{
    int band = 0;
    double target_pfa = 0.0;
    double threshold = 0.0;
    bool degenerate = false;
};

struct PipelineResult
{
    RealizedScenario realized;
    std::vector<TrialRecord> records; // H1 records, trial order
    std::vector<OperatingPoint> operating_points;
    std::vector<double> detection_rates; // per operating point, over H1 trials
    double mean_mse = 0.0;               // NaN when record_mse is off
};

PipelineResult run_pipeline(const Scenario& scenario, int threads = 0);

struct RocCurve
{
    int band = 0;
    std::vector<double> target_pfas; // NaN entries for explicit thresholds
    std::vector<RocPoint> points;
    bool degenerate_calibration = false;
};

struct RocResult
{
    RealizedScenario realized;
    std::vector<RocCurve> curves;
};

// Full ROC: thresholds calibrated per band on held-out H0 trials (or taken
// verbatim), then evaluated on per-trial H0/H1 energies that share fading
// and noise draws across hypotheses and thresholds.
RocResult roc_sweep(const Scenario& scenario, int threads = 0);

// CSV / JSON emitters (deterministic byte-for-byte given equal results).
std::string trials_csv(const PipelineResult& result);
std::string roc_csv(const RocResult& result);
std::string spectrum_csv(const RecoveredSpectrum& spectrum, double observation_s);
std::string alias_matrix_csv(const AliasMatrix& matrix);
std::string stacked_phi_csv(const StackedSystem& system);
nlohmann::json summary_json(const PipelineResult& result);

} // namespace mass

#endif // MASS_PIPELINE_HPP
