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

#include "mass/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mass/fft.hpp"

namespace mass {

namespace {

double sinc(double x)
{
    double px = std::numbers::pi * x;
    if (std::abs(px) < 1e-6)
        return 1.0 - px * px / 6.0;
    return std::sin(px) / px;
}

bool is_near_integer(double x, double tol = 1e-6) { return std::abs(x - std::round(x)) <= tol; }

} // namespace

int WidebandSignalSpec::nyquist_length() const
{
    double n = 2.0 * bandwidth_hz * observation_s;
    if (!(n > 0.0) || !is_near_integer(n))
        throw std::invalid_argument("WidebandSignalSpec: 2*W*T = " + std::to_string(n) +
                                    " is not a positive integer");
    return static_cast<int>(std::llround(n));
}

void WidebandSignalSpec::validate() const
{
    nyquist_length();
    if (!(observation_s > 0.0))
        throw std::invalid_argument("WidebandSignalSpec: observation_s must be positive");
    if (noise_power < 0.0)
        throw std::invalid_argument("WidebandSignalSpec: noise_power must be nonnegative");
    for (std::size_t l = 0; l < subbands.size(); ++l)
    {
        const SubbandSpec& s = subbands[l];
        std::string tag = "subband " + std::to_string(l);
        if (!(s.bandwidth_hz > 0.0))
            throw std::invalid_argument(tag + ": bandwidth_hz must be positive");
        if (s.power < 0.0)
            throw std::invalid_argument(tag + ": power must be nonnegative");
        if (s.carrier_hz < 0.0 || s.carrier_hz > bandwidth_hz)
            throw std::invalid_argument(tag + ": carrier_hz outside [0, W]");
        if (s.carrier_hz + s.bandwidth_hz / 2.0 > bandwidth_hz * (1.0 + 1e-12))
            throw std::invalid_argument(tag + ": upper edge exceeds the filter band W");
        if (waveform == Waveform::BinAlignedTones && !is_near_integer(s.carrier_hz * observation_s, 1e-9))
            throw std::invalid_argument(tag + ": carrier is not an exact DFT bin frequency");
    }
    // pairwise non-overlap (touching edges allowed)
    for (std::size_t a = 0; a < subbands.size(); ++a)
        for (std::size_t b = a + 1; b < subbands.size(); ++b)
        {
            double lo = std::max(subbands[a].carrier_hz - subbands[a].bandwidth_hz / 2.0,
                                 subbands[b].carrier_hz - subbands[b].bandwidth_hz / 2.0);
            double hi = std::min(subbands[a].carrier_hz + subbands[a].bandwidth_hz / 2.0,
                                 subbands[b].carrier_hz + subbands[b].bandwidth_hz / 2.0);
            if (lo < hi)
                throw std::invalid_argument("subbands " + std::to_string(a) + " and " +
                                            std::to_string(b) + " overlap in frequency");
        }
}

void ChannelModel::validate() const
{
    if (kind == ChannelKind::LogNormalShadow && !(shadow_sigma_db > 0.0))
        throw std::invalid_argument("ChannelModel: shadow_sigma_db must be positive");
}

double evaluate_signal(const WidebandSignalSpec& spec, std::span<const double> powers, double t)
{
    if (powers.size() != spec.subbands.size())
        throw std::invalid_argument("evaluate_signal: powers length " +
                                    std::to_string(powers.size()) + " != subband count " +
                                    std::to_string(spec.subbands.size()));
    double acc = 0.0;
    for (std::size_t l = 0; l < spec.subbands.size(); ++l)
    {
        const SubbandSpec& s = spec.subbands[l];
        double amp = std::sqrt(powers[l]);
        if (spec.waveform == Waveform::SincSubbands)
            acc += amp * s.bandwidth_hz * sinc(s.bandwidth_hz * t) *
                   std::cos(2.0 * std::numbers::pi * s.carrier_hz * t);
        else
            acc += amp * std::cos(2.0 * std::numbers::pi * s.carrier_hz * t);
    }
    return acc;
}

std::vector<double> draw_fading(const WidebandSignalSpec& spec, const ChannelModel& channel,
                                CounterRng& rng)
{
    std::vector<double> powers(spec.subbands.size());
    for (std::size_t l = 0; l < spec.subbands.size(); ++l)
    {
        double gain = 1.0;
        switch (channel.kind)
        {
        case ChannelKind::Awgn:
            gain = 1.0;
            break;
        case ChannelKind::Rayleigh:
            gain = rng.exponential();
            break;
        case ChannelKind::LogNormalShadow:
        {
            // E[10^(G/10)] = exp(mu*a + sigma^2 a^2 / 2), a = ln(10)/10.
            // Unit mean requires mu = -sigma_dB^2 * ln(10) / 20.
            double sigma = channel.shadow_sigma_db;
            double mu = -sigma * sigma * std::numbers::ln10 / 20.0;
            double g_db = mu + sigma * rng.normal();
            gain = std::pow(10.0, g_db / 10.0);
            break;
        }
        }
        powers[l] = spec.subbands[l].power * gain;
    }
    return powers;
}

std::vector<double> sample_branch(const WidebandSignalSpec& spec, std::span<const double> powers,
                                  double rate_hz, const BranchOffset& offset, int count,
                                  CounterRng& rng)
{
    if (!(rate_hz > 0.0))
        throw std::invalid_argument("sample_branch: rate_hz must be positive");
    if (count <= 0 || !is_near_integer(rate_hz * spec.observation_s) ||
        std::llround(rate_hz * spec.observation_s) != count)
        throw std::invalid_argument("sample_branch: count " + std::to_string(count) +
                                    " != round(rate*T) = " +
                                    std::to_string(rate_hz * spec.observation_s));
    if (offset.delta_s < 0.0 || offset.delta_s >= spec.observation_s)
        throw std::invalid_argument("sample_branch: offset outside [0, T)");

    double sigma = std::sqrt(spec.noise_power);
    std::vector<double> samples(static_cast<std::size_t>(count));
    for (int m = 0; m < count; ++m)
    {
        double t = static_cast<double>(m) / rate_hz + offset.delta_s;
        samples[m] = evaluate_signal(spec, powers, t);
        if (sigma > 0.0)
            samples[m] += sigma * rng.normal();
    }
    return samples;
}

std::vector<double> nyquist_reference_spectrum(const WidebandSignalSpec& spec,
                                               std::span<const double> powers, bool include_noise,
                                               CounterRng* rng)
{
    if (include_noise && rng == nullptr)
        throw std::invalid_argument("nyquist_reference_spectrum: include_noise requires an rng");
    const int n = spec.nyquist_length();
    const double fs = static_cast<double>(n) / spec.observation_s;
    double sigma = std::sqrt(spec.noise_power);

    std::vector<double> samples(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
    {
        samples[i] = evaluate_signal(spec, powers, static_cast<double>(i) / fs);
        if (include_noise && sigma > 0.0)
            samples[i] += sigma * rng->normal();
    }
    auto dft = dft_centered(std::span<const double>(samples));
    std::vector<double> magnitude(dft.size());
    for (std::size_t i = 0; i < dft.size(); ++i)
        magnitude[i] = std::abs(dft[i]);
    return magnitude;
}

std::vector<int> occupied_bins(const WidebandSignalSpec& spec)
{
    const int n = spec.nyquist_length();
    const double t_obs = spec.observation_s;
    std::vector<int> bins;
    for (const SubbandSpec& s : spec.subbands)
    {
        if (spec.waveform == Waveform::BinAlignedTones)
        {
            int h = static_cast<int>(std::llround(s.carrier_hz * t_obs));
            for (int c : {h, -h})
                if (c >= centered_bin_min(n) && c <= centered_bin_max(n))
                    bins.push_back(c);
        }
        else
        {
            int lo = static_cast<int>(std::ceil((s.carrier_hz - s.bandwidth_hz / 2.0) * t_obs - 1e-9));
            int hi = static_cast<int>(std::floor((s.carrier_hz + s.bandwidth_hz / 2.0) * t_obs + 1e-9));
            for (int c = lo; c <= hi; ++c)
            {
                for (int signed_c : {c, -c})
                    if (signed_c >= centered_bin_min(n) && signed_c <= centered_bin_max(n))
                        bins.push_back(signed_c);
            }
        }
    }
    std::sort(bins.begin(), bins.end());
    bins.erase(std::unique(bins.begin(), bins.end()), bins.end());
    return bins;
}

double average_snr_linear(const WidebandSignalSpec& spec)
{
    const int n = spec.nyquist_length();
    if (spec.subbands.empty())
        return 0.0;
    double mean_bin_power = 0.0;
    if (spec.waveform == Waveform::SincSubbands)
    {
        const double fs = static_cast<double>(n) / spec.observation_s;
        double num = 0.0, den = 0.0;
        for (const SubbandSpec& s : spec.subbands)
        {
            num += s.power * s.bandwidth_hz;
            den += s.bandwidth_hz;
        }
        mean_bin_power = fs * fs / 4.0 * num / den;
    }
    else
    {
        double mean_power = 0.0;
        for (const SubbandSpec& s : spec.subbands)
            mean_power += s.power;
        mean_power /= static_cast<double>(spec.subbands.size());
        mean_bin_power = static_cast<double>(n) * static_cast<double>(n) / 4.0 * mean_power;
    }
    if (spec.noise_power <= 0.0)
        return std::numeric_limits<double>::infinity();
    return mean_bin_power / (static_cast<double>(n) * spec.noise_power);
}

double average_snr_db(const WidebandSignalSpec& spec)
{
    return 10.0 * std::log10(average_snr_linear(spec));
}

void scale_powers_to_snr(WidebandSignalSpec& spec, double target_snr_db)
{
    if (spec.subbands.empty())
        throw std::invalid_argument("scale_powers_to_snr: no subbands");
    if (!(spec.noise_power > 0.0))
        throw std::invalid_argument("scale_powers_to_snr: noise_power must be positive");
    double current = average_snr_linear(spec);
    if (!(current > 0.0))
        throw std::invalid_argument("scale_powers_to_snr: zero signal power");
    double factor = std::pow(10.0, target_snr_db / 10.0) / current;
    for (SubbandSpec& s : spec.subbands)
        s.power *= factor;
}

} // namespace mass
