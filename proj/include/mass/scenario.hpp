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

#ifndef MASS_SCENARIO_HPP
#define MASS_SCENARIO_HPP

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mass/detection.hpp"
#include "mass/recovery.hpp"
#include "mass/sampler.hpp"
#include "mass/signal_model.hpp"

namespace mass {

// Configuration problems (bad file, bad schema, violated invariants).
// The CLI maps these to exit code 2; runtime failures map to 1.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Generator block for subbands drawn uniformly at random without overlap.
// The draw is keyed by (seed, SubbandLayout), so a scenario fully determines
// its layout; realized subbands are recorded in every summary.
struct RandomSubbandConfig
{
    int count = 0;
    double carrier_min_hz = 0.0;
    double carrier_max_hz = 0.0;
    double bandwidth_min_hz = 0.0;
    double bandwidth_max_hz = 0.0;
    double power = 1.0;
};

// Either explicit primes or (v, scale_a) for select_primes.
struct PlanConfig
{
    std::vector<int> primes;
    int v = 0;
    double scale_a = 1.0;
};

struct OffsetConfig
{
    bool async = false;
    double max_fraction_of_t = 0.0; // per-branch offset ~ U[0, frac*T] when async
};

struct DetectionTargets
{
    std::vector<BandSpec> bands;
    std::vector<double> target_pfas;  // thresholds calibrated on held-out H0 trials
    std::vector<double> thresholds;   // explicit thresholds (alternative to target_pfas)
    int calibration_trials = 0;       // 0 -> use the scenario trial count
};

// A parsed scenario file, kept as authored (random subbands unexpanded) so
// serialization round-trips field-for-field. realize() performs the
// deterministic expansion.
struct Scenario
{
    std::string name = "scenario";
    WidebandSignalSpec signal; // subbands may be empty when random_subbands is set
    bool subbands_declared = false; // "subbands" key present (possibly an empty list)
    std::optional<RandomSubbandConfig> random_subbands;
    std::optional<double> snr_db; // rescale subband powers to this average SNR
    PlanConfig plan;
    ChannelModel channel;
    OffsetConfig offsets;
    SparseRecoveryConfig recovery;
    bool sparsity_auto = false; // "sparsity": "auto" -> elbow estimate at realization
    DetectionTargets detection;
    int trials = 1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool record_mse = true;
    std::string out_dir = "out";
    std::string out_format = "csv";

    static Scenario from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    static Scenario load(const std::string& path);

    // structural checks that do not require realization
    void validate() const;
};

} // namespace mass

#endif // MASS_SCENARIO_HPP
