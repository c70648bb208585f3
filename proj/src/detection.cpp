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

#include "mass/detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mass/fft.hpp"

namespace mass {

BandBins band_to_bins(const BandSpec& band, int n, double observation_s)
{
    if (!(band.low_hz < band.high_hz))
        throw std::invalid_argument("band_to_bins: low_hz must be below high_hz");
    int first = static_cast<int>(std::ceil(band.low_hz * observation_s - 1e-9));
    int last = static_cast<int>(std::floor(band.high_hz * observation_s + 1e-9));
    first = std::max(first, centered_bin_min(n));
    last = std::min(last, centered_bin_max(n));
    if (first > last)
        throw std::invalid_argument("band_to_bins: band maps to no bin");
    return {first, last};
}

double band_energy(std::span<const double> magnitude, const BandSpec& band, double observation_s)
{
    const int n = static_cast<int>(magnitude.size());
    BandBins bins = band_to_bins(band, n, observation_s);
    double acc = 0.0;
    for (int c = bins.first; c <= bins.last; ++c)
    {
        double m = magnitude[centered_index(c, n)];
        acc += m * m;
    }
    return acc;
}

double band_energy(const RecoveredSpectrum& spectrum, const BandSpec& band, double observation_s)
{
    return band_energy(std::span<const double>(spectrum.magnitude), band, observation_s);
}

double calibrate_threshold(std::span<const double> h0_energies, double target_pfa, bool* degenerate)
{
    if (h0_energies.empty())
        throw std::invalid_argument("calibrate_threshold: empty H0 sample");
    if (!(target_pfa > 0.0) || !(target_pfa < 1.0))
        throw std::invalid_argument("calibrate_threshold: target_pfa must lie in (0, 1)");

    std::vector<double> sorted(h0_energies.begin(), h0_energies.end());
    std::sort(sorted.begin(), sorted.end());
    if (degenerate != nullptr)
        *degenerate = sorted.front() == sorted.back();

    // linear interpolation between order statistics at p = 1 - target_pfa
    const double p = 1.0 - target_pfa;
    const std::size_t count = sorted.size();
    double h = (static_cast<double>(count) - 1.0) * p;
    auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= count)
        return sorted.back();
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

DetectionDecision decide(double energy, double threshold)
{
    DetectionDecision d;
    d.energy = energy;
    d.threshold = threshold;
    d.hypothesis = energy > threshold ? Hypothesis::H1 : Hypothesis::H0;
    return d;
}

std::vector<RocPoint> roc_from_energies(std::span<const double> h0_energies,
                                        std::span<const double> h1_energies,
                                        std::span<const double> thresholds)
{
    if (h0_energies.size() != h1_energies.size() || h0_energies.empty())
        throw std::invalid_argument("roc_from_energies: need equal nonempty energy sets");
    std::vector<RocPoint> points;
    points.reserve(thresholds.size());
    for (double threshold : thresholds)
    {
        RocPoint pt;
        pt.threshold = threshold;
        pt.trials = static_cast<long>(h0_energies.size());
        for (double e : h0_energies)
            if (e > threshold)
                ++pt.h0_exceedances;
        for (double e : h1_energies)
            if (e > threshold)
                ++pt.h1_exceedances;
        pt.pfa = static_cast<double>(pt.h0_exceedances) / static_cast<double>(pt.trials);
        pt.pd = static_cast<double>(pt.h1_exceedances) / static_cast<double>(pt.trials);
        points.push_back(pt);
    }
    return points;
}

} // namespace mass
