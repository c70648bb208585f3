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

#ifndef MASS_RNG_HPP
#define MASS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace mass {

// Role of a random stream. Every draw in the codebase comes from a stream
// keyed by (seed, purpose, a, b), so results do not depend on evaluation
// order or thread scheduling.
enum class RngPurpose : std::uint64_t {
    SubbandLayout = 0x01,
    Fading = 0x02,
    Noise = 0x03,
    Offset = 0x04,
    SparseInstance = 0x05,
    OverlapTrial = 0x06,
    Generic = 0x07,
};

// Counter-based generator: SplitMix64 output function over a keyed counter
// (same construction as Java's SplittableRandom). Output i of a stream is
// finalize(key + i*gamma), so streams are cheap to create, jump-free, and
// bit-reproducible across platforms and compilers.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, RngPurpose purpose, std::uint64_t a = 0, std::uint64_t b = 0)
    {
        std::uint64_t key = finalize(seed ^ 0x9e3779b97f4a7c15ULL);
        key = finalize(key ^ static_cast<std::uint64_t>(purpose));
        key = finalize(key ^ a);
        key = finalize(key ^ b);
        state_ = key;
    }

    std::uint64_t next_u64()
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        return finalize(state_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1]; safe as a log() argument.
    double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n) via rejection on the widening multiply.
    std::uint64_t next_below(std::uint64_t n)
    {
        // Lemire's method with the exact-bound rejection step.
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n)
        {
            std::uint64_t threshold = (0ULL - n) % n;
            while (lo < threshold)
            {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Standard normal via Box-Muller; the paired deviate is cached.
    double normal()
    {
        if (have_spare_)
        {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform_pos();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    // Unit-mean exponential.
    double exponential() { return -std::log(uniform_pos()); }

  private:
    static std::uint64_t finalize(std::uint64_t z)
    {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace mass

#endif // MASS_RNG_HPP
