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

#include "mass/rng.hpp"

using namespace mass;

TEST_CASE("streams are reproducible and keyed")
{
    CounterRng a(42, RngPurpose::Noise, 3, 17);
    CounterRng b(42, RngPurpose::Noise, 3, 17);
    for (int i = 0; i < 100; ++i)
        REQUIRE(a.next_u64() == b.next_u64());

    CounterRng c(42, RngPurpose::Noise, 3, 18);
    CounterRng d(42, RngPurpose::Fading, 3, 17);
    CounterRng e(43, RngPurpose::Noise, 3, 17);
    CounterRng base(42, RngPurpose::Noise, 3, 17);
    std::uint64_t first = base.next_u64();
    CHECK(c.next_u64() != first);
    CHECK(d.next_u64() != first);
    CHECK(e.next_u64() != first);
}

TEST_CASE("uniform range and moments")
{
    CounterRng rng(7, RngPurpose::Generic);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
    {
        double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    // 3 sigma of the mean estimator is about 0.002
    CHECK(std::abs(sum / n - 0.5) < 0.003);
}

TEST_CASE("normal moments")
{
    CounterRng rng(11, RngPurpose::Generic);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i)
    {
        double x = rng.normal();
        sum += x;
        sum2 += x * x;
    }
    double mean = sum / n;
    double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("exponential has unit mean")
{
    CounterRng rng(13, RngPurpose::Generic);
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        sum += rng.exponential();
    CHECK(std::abs(sum / n - 1.0) < 0.01);
}

TEST_CASE("next_below stays in range and covers it")
{
    CounterRng rng(17, RngPurpose::Generic);
    std::vector<int> counts(10, 0);
    for (int i = 0; i < 10000; ++i)
    {
        std::uint64_t x = rng.next_below(10);
        REQUIRE(x < 10);
        ++counts[static_cast<std::size_t>(x)];
    }
    for (int c : counts)
        CHECK(c > 800); // ~1000 expected per cell
}
