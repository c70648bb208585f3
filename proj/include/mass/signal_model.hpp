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

#ifndef MASS_SIGNAL_MODEL_HPP
#define MASS_SIGNAL_MODEL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "mass/rng.hpp"

namespace mass {

// One occupied subband: carrier f_l, width B_l, pre-fading power E_l.
struct SubbandSpec
{
    double carrier_hz = 0.0;
    double bandwidth_hz = 0.0;
    double power = 1.0;
};

// SincSubbands is the physical model: each subband is a sinc-shaped pulse of
// width B_l mixed to f_l, so its spectrum is a flat box that leaks across DFT
// bins. BinAlignedTones replaces each subband by a pure cosine at an exact
// DFT bin frequency, giving a spectrum that is exactly sparse; recovery
// guarantees assume exact sparsity, and this mode realizes it for tests.
enum class Waveform
{
    SincSubbands,
    BinAlignedTones,
};

struct WidebandSignalSpec
{
    double bandwidth_hz = 0.0;  // W: wideband filter cutoff
    double observation_s = 0.0; // T: observation window
    double noise_power = 1.0;   // variance of the additive white Gaussian noise
    std::uint64_t rng_seed = 0;
    Waveform waveform = Waveform::SincSubbands;
    std::vector<SubbandSpec> subbands;

    // N = 2*W*T; must evaluate to a positive integer.
    int nyquist_length() const;

    // Throws std::invalid_argument when any invariant fails: N not a positive
    // integer, non-positive bandwidths, a subband outside [0, W], overlapping
    // subbands, or (tone mode) a carrier that is not an exact bin frequency.
    void validate() const;
};

enum class ChannelKind
{
    Awgn,
    Rayleigh,
    LogNormalShadow,
};

// Fading gains are unit-mean so average SNR is comparable across kinds.
struct ChannelModel
{
    ChannelKind kind = ChannelKind::Awgn;
    double shadow_sigma_db = 0.0; // only used for LogNormalShadow

    void validate() const;
};

// Constant per-branch sampling-clock offset.
struct BranchOffset
{
    double delta_s = 0.0;
};

// Deterministic part of the received signal at time t (seconds). Any branch
// offset must already be folded into t by the caller. powers[l] is the
// post-fading power of subband l.
//   SincSubbands:    sum_l sqrt(powers[l]) * B_l * sinc(B_l t) * cos(2 pi f_l t)
//   BinAlignedTones: sum_l sqrt(powers[l]) * cos(2 pi f_l t)
double evaluate_signal(const WidebandSignalSpec& spec, std::span<const double> powers, double t);

// Per-subband received powers for one branch / observation window.
//   Awgn:            E_l unchanged
//   Rayleigh:        E_l * g, g ~ Exp(1)   (unit mean)
//   LogNormalShadow: E_l * 10^(G/10), G ~ Normal(mu, sigma_dB^2) with mu
//                    chosen so the linear-domain mean gain is exactly 1
std::vector<double> draw_fading(const WidebandSignalSpec& spec, const ChannelModel& channel,
                                CounterRng& rng);

// Samples one branch: y[m] = signal(m/rate_hz + offset) + noise, m = 0..count-1,
// with i.i.d. Gaussian noise of variance spec.noise_power per sample.
// Requires count == round(rate_hz * T) and 0 <= offset.delta_s < T.
std::vector<double> sample_branch(const WidebandSignalSpec& spec, std::span<const double> powers,
                                  double rate_hz, const BranchOffset& offset, int count,
                                  CounterRng& rng);

// |DFT| of the Nyquist-rate frame (f_s = N/T, zero offset) over centered bins.
// This is the ground-truth |X| for MSE and support comparisons. rng is only
// consulted when include_noise is set.
std::vector<double> nyquist_reference_spectrum(const WidebandSignalSpec& spec,
                                               std::span<const double> powers, bool include_noise,
                                               CounterRng* rng = nullptr);

// Centered bins covered by the subbands (box model for SincSubbands, exact
// tone bins for BinAlignedTones), ascending and deduplicated.
std::vector<int> occupied_bins(const WidebandSignalSpec& spec);

// Average SNR convention used in all reports, since the source material never
// defines one: mean signal power per occupied DFT bin divided by the expected
// noise power per bin (N * noise_power).
//   SincSubbands:    mean bin power = (f_s^2 / 4) * sum(E_l B_l) / sum(B_l)
//   BinAlignedTones: mean bin power = (N^2 / 4) * mean(E_l)
// Returns +inf when noise_power is zero.
double average_snr_linear(const WidebandSignalSpec& spec);
double average_snr_db(const WidebandSignalSpec& spec);

// Scales all subband powers by one common factor so average_snr_db(spec)
// equals target_snr_db. Requires noise_power > 0 and at least one subband.
void scale_powers_to_snr(WidebandSignalSpec& spec, double target_snr_db);

} // namespace mass

#endif // MASS_SIGNAL_MODEL_HPP
