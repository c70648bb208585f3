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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "mass/fft.hpp"
#include "mass/signal_model.hpp"

using namespace mass;

namespace {

WidebandSignalSpec tone_spec(double w, double t_obs, std::vector<SubbandSpec> subbands,
                             double noise = 0.0)
{
    WidebandSignalSpec spec;
    spec.bandwidth_hz = w;
    spec.observation_s = t_obs;
    spec.noise_power = noise;
    spec.waveform = Waveform::BinAlignedTones;
    spec.subbands = std::move(subbands);
    return spec;
}

} // namespace

TEST_CASE("evaluate_signal on empty and single subbands")
{
    WidebandSignalSpec empty;
    empty.bandwidth_hz = 4.0;
    empty.observation_s = 1.0;
    CHECK(evaluate_signal(empty, {}, 0.37) == 0.0);

    WidebandSignalSpec one;
    one.bandwidth_hz = 4.0;
    one.observation_s = 1.0;
    one.subbands = {{0.0, 1.0, 1.0}};
    std::vector<double> powers{1.0};
    CHECK(evaluate_signal(one, powers, 0.0) == Catch::Approx(1.0).margin(1e-15));

    // sqrt(4) * 2 * sinc(2*0.25) * cos(0) = 4 * sinc(0.5) = 8/pi
    WidebandSignalSpec two;
    two.bandwidth_hz = 4.0;
    two.observation_s = 1.0;
    two.subbands = {{0.0, 2.0, 4.0}};
    std::vector<double> p4{4.0};
    CHECK(evaluate_signal(two, p4, 0.25) ==
          Catch::Approx(8.0 / std::numbers::pi).epsilon(1e-12));

    std::vector<double> wrong{1.0, 2.0};
    CHECK_THROWS_AS(evaluate_signal(two, wrong, 0.0), std::invalid_argument);
}

TEST_CASE("spec invariants are enforced")
{
    WidebandSignalSpec spec;
    spec.bandwidth_hz = 4.1; // 2WT = 8.2, not an integer
    spec.observation_s = 1.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec.bandwidth_hz = 4.0;
    spec.subbands = {{3.9, 1.0, 1.0}}; // upper edge 4.4 > W
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec.subbands = {{1.0, 1.0, 1.0}, {1.5, 1.0, 1.0}}; // overlapping
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec.subbands = {{1.0, 1.0, 1.0}, {2.5, 1.0, 1.0}}; // touching edges are fine
    CHECK_NOTHROW(spec.validate());

    // tone mode requires carriers on the bin grid
    spec.waveform = Waveform::BinAlignedTones;
    spec.subbands = {{1.25, 0.5, 1.0}};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.subbands = {{1.0, 0.5, 1.0}};
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("fading draws preserve mean power")
{
    WidebandSignalSpec spec;
    spec.bandwidth_hz = 4.0;
    spec.observation_s = 1.0;
    spec.subbands = {{0.5, 1.0, 1.0}, {2.0, 1.0, 2.0}, {3.25, 1.0, 3.0}};

    SECTION("awgn leaves powers unchanged")
    {
        CounterRng rng(1, RngPurpose::Fading);
        auto p = draw_fading(spec, {ChannelKind::Awgn, 0.0}, rng);
        CHECK(p == std::vector<double>{1.0, 2.0, 3.0});
    }

    SECTION("rayleigh gains have unit mean")
    {
        WidebandSignalSpec one = spec;
        one.subbands = {{0.5, 1.0, 1.0}};
        CounterRng rng(2, RngPurpose::Fading);
        double sum = 0.0;
        const int n = 1000000;
        for (int i = 0; i < n; ++i)
            sum += draw_fading(one, {ChannelKind::Rayleigh, 0.0}, rng)[0];
        CHECK(std::abs(sum / n - 1.0) < 0.01);
    }

    SECTION("log-normal shadowing is calibrated to unit mean")
    {
        WidebandSignalSpec one = spec;
        one.subbands = {{0.5, 1.0, 1.0}};
        CounterRng rng(3, RngPurpose::Fading);
        double sum = 0.0;
        const int n = 1000000;
        for (int i = 0; i < n; ++i)
            sum += draw_fading(one, {ChannelKind::LogNormalShadow, 5.0}, rng)[0];
        CHECK(std::abs(sum / n - 1.0) < 0.02);
    }
}

TEST_CASE("sample_branch basics")
{
    SECTION("no subbands, no noise: all zero")
    {
        WidebandSignalSpec spec;
        spec.bandwidth_hz = 8.0;
        spec.observation_s = 1.0;
        spec.noise_power = 0.0;
        CounterRng rng(4, RngPurpose::Noise);
        auto y = sample_branch(spec, {}, 5.0, BranchOffset{0.0}, 5, rng);
        for (double x : y)
            CHECK(x == 0.0);
    }

    SECTION("constant tone gives equal samples")
    {
        auto spec = tone_spec(8.0, 1.0, {{0.0, 0.5, 1.0}});
        std::vector<double> powers{1.0};
        CounterRng rng(5, RngPurpose::Noise);
        auto y = sample_branch(spec, powers, 4.0, BranchOffset{0.0}, 4, rng);
        REQUIRE(y.size() == 4);
        for (double x : y)
            CHECK(x == Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("noise variance matches spec")
    {
        WidebandSignalSpec spec;
        spec.bandwidth_hz = 50000.0;
        spec.observation_s = 1.0;
        spec.noise_power = 1.0;
        CounterRng rng(6, RngPurpose::Noise);
        auto y = sample_branch(spec, {}, 100000.0, BranchOffset{0.0}, 100000, rng);
        double sum = 0.0, sum2 = 0.0;
        for (double x : y)
        {
            sum += x;
            sum2 += x * x;
        }
        double mean = sum / static_cast<double>(y.size());
        double var = sum2 / static_cast<double>(y.size()) - mean * mean;
        CHECK(std::abs(var - 1.0) < 0.03);
    }

    SECTION("count inconsistent with rate*T is rejected")
    {
        WidebandSignalSpec spec;
        spec.bandwidth_hz = 8.0;
        spec.observation_s = 1.0;
        CounterRng rng(7, RngPurpose::Noise);
        CHECK_THROWS_AS(sample_branch(spec, {}, 5.0, BranchOffset{0.0}, 6, rng),
                        std::invalid_argument);
        CHECK_THROWS_AS(sample_branch(spec, {}, 5.0, BranchOffset{2.0}, 5, rng),
                        std::invalid_argument);
    }
}

TEST_CASE("nyquist reference spectrum")
{
    SECTION("zero subbands, no noise: zero vector")
    {
        WidebandSignalSpec spec;
        spec.bandwidth_hz = 8.0;
        spec.observation_s = 1.0;
        auto mag = nyquist_reference_spectrum(spec, {}, false);
        REQUIRE(mag.size() == 16);
        for (double m : mag)
            CHECK(m == 0.0);
    }

    SECTION("bin-aligned unit tone: two bins of magnitude N/2")
    {
        const int n = 32;
        auto spec = tone_spec(16.0, 1.0, {{5.0, 0.5, 1.0}});
        std::vector<double> powers{1.0};
        auto mag = nyquist_reference_spectrum(spec, powers, false);
        REQUIRE(static_cast<int>(mag.size()) == n);
        for (int c = centered_bin_min(n); c <= centered_bin_max(n); ++c)
        {
            double expect = (c == 5 || c == -5) ? n / 2.0 : 0.0;
            CHECK(mag[centered_index(c, n)] == Catch::Approx(expect).margin(1e-9));
        }
    }

    SECTION("Parseval identity on a leaky frame")
    {
        WidebandSignalSpec spec;
        spec.bandwidth_hz = 32.0;
        spec.observation_s = 1.0;
        spec.noise_power = 0.0;
        spec.subbands = {{7.3, 2.1, 1.7}, {21.0, 3.0, 0.4}};
        std::vector<double> powers{1.7, 0.4};
        const int n = spec.nyquist_length();
        const double fs = n / spec.observation_s;

        auto mag = nyquist_reference_spectrum(spec, powers, false);
        double lhs = 0.0;
        for (double m : mag)
            lhs += m * m;
        lhs /= n;
        double rhs = 0.0;
        for (int i = 0; i < n; ++i)
        {
            double x = evaluate_signal(spec, powers, i / fs);
            rhs += x * x;
        }
        CHECK(lhs == Catch::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("determinism: identical spec and seed give identical samples")
{
    WidebandSignalSpec spec;
    spec.bandwidth_hz = 64.0;
    spec.observation_s = 1.0;
    spec.noise_power = 0.5;
    spec.subbands = {{10.0, 2.0, 1.0}};
    std::vector<double> powers{1.0};

    CounterRng r1(99, RngPurpose::Noise, 2, 5);
    CounterRng r2(99, RngPurpose::Noise, 2, 5);
    auto a = sample_branch(spec, powers, 17.0, BranchOffset{0.1}, 17, r1);
    auto b = sample_branch(spec, powers, 17.0, BranchOffset{0.1}, 17, r2);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a[i] == b[i]); // bit-identical
}

TEST_CASE("time-shift invariance of branch DFT magnitude for one tone")
{
    // tone at bin 5, branch of length 17 over T = 1 s
    auto spec = tone_spec(64.0, 1.0, {{5.0, 0.5, 1.0}});
    std::vector<double> powers{1.0};
    CounterRng rng(0, RngPurpose::Noise);

    auto reference = sample_branch(spec, powers, 17.0, BranchOffset{0.0}, 17, rng);
    auto ref_dft = dft_centered(std::span<const double>(reference));

    for (double delta : {0.013, 0.21, 0.4999})
    {
        auto shifted = sample_branch(spec, powers, 17.0, BranchOffset{delta}, 17, rng);
        auto dft = dft_centered(std::span<const double>(shifted));
        for (std::size_t i = 0; i < dft.size(); ++i)
        {
            double m0 = std::abs(ref_dft[i]);
            double m1 = std::abs(dft[i]);
            CHECK(std::abs(m1 - m0) <= 1e-6 * std::max(1.0, m0));
        }
    }
}

TEST_CASE("snr convention and rescaling")
{
    WidebandSignalSpec spec;
    spec.bandwidth_hz = 64.0;
    spec.observation_s = 1.0;
    spec.noise_power = 1.0;
    spec.subbands = {{10.0, 2.0, 1.0}, {30.0, 4.0, 2.0}};

    scale_powers_to_snr(spec, 5.0);
    CHECK(average_snr_db(spec) == Catch::Approx(5.0).margin(1e-9));

    // scaling is linear in the powers
    double p0 = spec.subbands[0].power;
    scale_powers_to_snr(spec, 8.0);
    CHECK(spec.subbands[0].power == Catch::Approx(p0 * std::pow(10.0, 0.3)).epsilon(1e-9));
}

TEST_CASE("occupied bins cover subband boxes and tone pairs")
{
    auto tones = tone_spec(16.0, 1.0, {{5.0, 0.5, 1.0}, {0.0, 0.5, 1.0}});
    CHECK(occupied_bins(tones) == std::vector<int>{-5, 0, 5});

    WidebandSignalSpec spec;
    spec.bandwidth_hz = 16.0;
    spec.observation_s = 1.0;
    spec.subbands = {{6.0, 2.0, 1.0}}; // box [5, 7] both sides
    CHECK(occupied_bins(spec) == std::vector<int>{-7, -6, -5, 5, 6, 7});
}
