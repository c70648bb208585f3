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

#ifndef MASS_DETECTION_HPP
#define MASS_DETECTION_HPP

#include <span>
#include <vector>

#include "mass/recovery.hpp"

namespace mass {

// Frequency band of interest on the centered axis (bin c <-> c/T Hz).
struct BandSpec
{
    double low_hz = 0.0;
    double high_hz = 0.0;
};

// Inclusive centered-bin range of a band. Throws when the band is empty,
// inverted, or entirely outside the representable axis [-N/(2T), N/(2T)).
struct BandBins
{
    int first = 0;
    int last = 0;
};
BandBins band_to_bins(const BandSpec& band, int n, double observation_s);

enum class Hypothesis
{
    H0, // vacant
    H1, // occupied
};

struct DetectionDecision
{
    double energy = 0.0;
    double threshold = 0.0;
    Hypothesis hypothesis = Hypothesis::H0;
};

struct RocPoint
{
    double pfa = 0.0;
    double pd = 0.0;
    double threshold = 0.0;
    long trials = 0;
    long h0_exceedances = 0;
    long h1_exceedances = 0;
};

// sum of magnitude^2 over the band's bins
double band_energy(const RecoveredSpectrum& spectrum, const BandSpec& band, double observation_s);
double band_energy(std::span<const double> magnitude, const BandSpec& band, double observation_s);

// Empirical (1 - target_pfa) quantile of H0 band energies, with linear
// interpolation between order statistics. A degenerate all-equal sample is
// reported through the optional flag and yields that value.
double calibrate_threshold(std::span<const double> h0_energies, double target_pfa,
                           bool* degenerate = nullptr);

// Occupied iff energy strictly exceeds the threshold; equality decides H0.
DetectionDecision decide(double energy, double threshold);

// (pfa, pd) frequencies for each threshold over stored per-trial energies.
// Thresholds are applied to one common set of trials, which is what keeps
// points of one curve comparable (common random numbers).
std::vector<RocPoint> roc_from_energies(std::span<const double> h0_energies,
                                        std::span<const double> h1_energies,
                                        std::span<const double> thresholds);

} // namespace mass

#endif // MASS_DETECTION_HPP
