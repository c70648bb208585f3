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
#include <numbers>
#include <optional>

#include "mass/fft.hpp"
#include "mass/sampler.hpp"
#include "mass/signal_model.hpp"

using namespace mass;

namespace {

// Independent oracle for the alias map: scan the delta condition
// n = m + l*M over a wide range of l and return the centered row that fires.
std::optional<int> alias_row_by_scan(int bin, int m, int n)
{
    for (int row = -(m / 2); row <= (m + 1) / 2 - 1; ++row)
        for (int l = -2 * n; l <= 2 * n; ++l)
            if (bin == row + l * m)
                return row;
    return std::nullopt;
}

} // namespace

TEST_CASE("prime predicate")
{
    CHECK_FALSE(is_prime(0));
    CHECK_FALSE(is_prime(1));
    CHECK(is_prime(2));
    CHECK(is_prime(3));
    CHECK_FALSE(is_prime(4));
    CHECK(is_prime(101));
    CHECK_FALSE(is_prime(1001)); // 7 * 11 * 13
    CHECK(is_prime(104729));
}

TEST_CASE("select_primes picks the first prime above a*sqrt(N) and successors")
{
    auto plan = select_primes(100, 3, 1.0, 1.0);
    CHECK(plan.branch_lengths == std::vector<int>{11, 13, 17});
    CHECK(plan.valid());

    auto plan2 = select_primes(15, 2, 1.2, 1.0);
    CHECK(plan2.branch_lengths == std::vector<int>{5, 7});

    auto plan3 = select_primes(10000, 2, 1.0, 1.0);
    CHECK(plan3.branch_lengths == std::vector<int>{101, 103});
    CHECK(plan3.total_samples() == 204);
    CHECK(plan3.sum_ratio() == Catch::Approx(204.0 / 10000.0));
    CHECK(plan3.mean_ratio() == Catch::Approx(102.0 / 10000.0));

    // rates derive from the lengths exactly
    CHECK(plan2.rate_hz(0) * plan2.observation_s == 5.0);
}

TEST_CASE("plan validation diagnostics")
{
    SamplingPlan bad;
    bad.nyquist_n = 40;
    bad.observation_s = 1.0;
    bad.branch_lengths = {5, 7};
    auto v = bad.violations();
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("5*7") != std::string::npos); // names the offending pair
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    SamplingPlan composite;
    composite.nyquist_n = 40;
    composite.observation_s = 1.0;
    composite.branch_lengths = {9, 11};
    CHECK_FALSE(composite.valid());

    SamplingPlan dup;
    dup.nyquist_n = 40;
    dup.observation_s = 1.0;
    dup.branch_lengths = {11, 11};
    CHECK_FALSE(dup.valid());

    // branch length above N
    CHECK_THROWS_AS(select_primes(5, 2, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("alias matrix matches the delta-scan oracle")
{
    SECTION("spec instances for M=5, N=15")
    {
        auto a = build_alias_matrix(5, 15);
        CHECK(a.row_of_column_index(centered_index(6, 15)) == 1);
        CHECK(a.row_of_column_index(centered_index(0, 15)) == 0);
        CHECK(a.row_of_column_index(centered_index(-7, 15)) == -2);
    }

    SECTION("exhaustive agreement, odd and even N")
    {
        for (auto [m, n] : {std::pair{5, 15}, {7, 15}, {5, 16}, {7, 16}, {3, 10}, {11, 60}})
        {
            auto a = build_alias_matrix(m, n);
            for (int c = centered_bin_min(n); c <= centered_bin_max(n); ++c)
            {
                auto expected = alias_row_by_scan(c, m, n);
                REQUIRE(expected.has_value());
                CHECK(a.row_of_column_index(centered_index(c, n)) == *expected);
            }
        }
    }

    SECTION("column sums are 1 and row sums at most ceil(N/M)")
    {
        for (auto [m, n] : {std::pair{5, 15}, {7, 15}, {5, 16}, {13, 60}})
        {
            auto dense = build_alias_matrix(m, n).dense();
            int cap = (n + m - 1) / m;
            for (int j = 0; j < n; ++j)
            {
                int col_sum = 0;
                for (int r = 0; r < m; ++r)
                    col_sum += dense[r][j];
                CHECK(col_sum == 1);
            }
            for (int r = 0; r < m; ++r)
            {
                int row_sum = 0;
                for (int j = 0; j < n; ++j)
                    row_sum += dense[r][j];
                CHECK(row_sum <= cap);
            }
        }
    }

    CHECK_THROWS_AS(build_alias_matrix(15, 15), std::invalid_argument);
}

TEST_CASE("branch_dft on known vectors")
{
    SECTION("all zeros")
    {
        std::vector<double> x(5, 0.0);
        auto bm = branch_dft(x);
        for (double m : bm.magnitude)
            CHECK(m == 0.0);
    }

    SECTION("constant vector is all DC")
    {
        std::vector<double> x(5, 1.0);
        auto bm = branch_dft(x);
        for (int c = centered_bin_min(5); c <= centered_bin_max(5); ++c)
        {
            double expect = c == 0 ? 5.0 : 0.0;
            CHECK(bm.magnitude[centered_index(c, 5)] == Catch::Approx(expect).margin(1e-12));
        }
    }

    SECTION("on-bin cosine splits into two half-amplitude bins")
    {
        std::vector<double> x(5);
        for (int m = 0; m < 5; ++m)
            x[m] = std::cos(2.0 * std::numbers::pi * 2.0 * m / 5.0);
        auto bm = branch_dft(x);
        for (int c = centered_bin_min(5); c <= centered_bin_max(5); ++c)
        {
            double expect = (c == 2 || c == -2) ? 2.5 : 0.0;
            CHECK(bm.magnitude[centered_index(c, 5)] == Catch::Approx(expect).margin(1e-12));
        }
    }

    CHECK_THROWS_AS(branch_dft(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("stacking shapes and trivial content")
{
    SamplingPlan plan;
    plan.nyquist_n = 15;
    plan.observation_s = 1.0;
    plan.branch_lengths = {5, 7};

    std::vector<BranchMeasurement> branches;
    branches.push_back(branch_dft(std::vector<double>(5, 0.0)));
    branches.push_back(branch_dft(std::vector<double>(7, 0.0)));
    auto sys = stack_measurements(plan, branches);
    CHECK(sys.y.size() == 12);
    CHECK(sys.phi.size() == 2);
    CHECK(sys.phi[0].rows == 5);
    CHECK(sys.phi[1].rows == 7);
    CHECK(sys.block_offsets == std::vector<int>{0, 5});
    for (double v : sys.y)
        CHECK(v == 0.0);

    branches.pop_back();
    CHECK_THROWS_AS(stack_measurements(plan, branches), std::invalid_argument);
}

TEST_CASE("aliasing identity: stacked y equals Phi |X| for bin-aligned spectra")
{
    // N = 30, T = 1 s, branches {7, 11}
    WidebandSignalSpec spec;
    spec.bandwidth_hz = 15.0;
    spec.observation_s = 1.0;
    spec.noise_power = 0.0;
    spec.waveform = Waveform::BinAlignedTones;

    SamplingPlan plan;
    plan.nyquist_n = 30;
    plan.observation_s = 1.0;
    plan.branch_lengths = {7, 11};
    REQUIRE(plan.valid());

    auto run_case = [&](std::vector<SubbandSpec> subbands, double tol) {
        spec.subbands = std::move(subbands);
        std::vector<double> powers;
        for (const auto& s : spec.subbands)
            powers.push_back(s.power);

        CounterRng rng(1, RngPurpose::Noise);
        std::vector<BranchMeasurement> branches;
        for (int i = 0; i < plan.branches(); ++i)
            branches.push_back(branch_dft(sample_branch(spec, powers, plan.rate_hz(i),
                                                        BranchOffset{0.0},
                                                        plan.branch_lengths[i], rng)));
        auto sys = stack_measurements(plan, branches);

        auto truth = nyquist_reference_spectrum(spec, powers, false);
        std::vector<double> expected(sys.y.size());
        sys.apply(truth, expected);

        double err = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < sys.y.size(); ++i)
        {
            err += (sys.y[i] - expected[i]) * (sys.y[i] - expected[i]);
            scale += expected[i] * expected[i];
        }
        REQUIRE(scale > 0.0);
        CHECK(std::sqrt(err / scale) < tol);
    };

    // k = 1 (DC tone), exact to near machine precision
    run_case({{0.0, 0.5, 2.25}}, 1e-9);
    // k = 2 (one non-DC tone; +/- bins do not collide mod 7 or 11)
    run_case({{3.0, 0.5, 1.0}}, 1e-8);
    // k = 4, two tones, support pairwise non-colliding in every branch
    run_case({{3.0, 0.5, 1.0}, {5.0, 0.5, 4.0}}, 1e-8);
}

TEST_CASE("collision predicate agrees with the arithmetic definition")
{
    for (int n : {20, 31, 45, 60})
    {
        SamplingPlan plan;
        plan.nyquist_n = n;
        plan.observation_s = 1.0;
        plan.branch_lengths = {5, 7, 11};
        auto sys = stacked_operator(plan);
        for (int a = centered_bin_min(n); a <= centered_bin_max(n); ++a)
            for (int b = centered_bin_min(n); b <= centered_bin_max(n); ++b)
            {
                int by_rows = 0;
                for (const AliasMatrix& blk : sys.phi)
                    if (AliasMatrix::row_of_bin(a, blk.rows) == AliasMatrix::row_of_bin(b, blk.rows))
                        ++by_rows;
                int by_divisibility = sys.collisions(a, b);
                REQUIRE(by_rows == by_divisibility);
            }
    }
}

TEST_CASE("pairwise-prime uniqueness: no bin pair collides in two branches")
{
    for (int n : {60, 120, 200})
    {
        auto plan = select_primes(n, 4, 1.0, 1.0);
        REQUIRE(plan.valid());
        auto sys = stacked_operator(plan);
        for (int a = centered_bin_min(n); a <= centered_bin_max(n); ++a)
            for (int b = a + 1; b <= centered_bin_max(n); ++b)
                REQUIRE(sys.collisions(a, b) <= 1);
    }
}

TEST_CASE("adjoint is consistent with apply")
{
    SamplingPlan plan;
    plan.nyquist_n = 30;
    plan.observation_s = 1.0;
    plan.branch_lengths = {7, 11};
    auto sys = stacked_operator(plan);

    // <Phi x, r> == <x, Phi^T r> for a few deterministic vectors
    CounterRng rng(12, RngPurpose::Generic);
    for (int rep = 0; rep < 5; ++rep)
    {
        std::vector<double> x(30), r(18);
        for (double& v : x)
            v = rng.uniform(-1.0, 1.0);
        for (double& v : r)
            v = rng.uniform(-1.0, 1.0);
        std::vector<double> phix(18), phitr(30);
        sys.apply(x, phix);
        sys.apply_adjoint(r, phitr);
        double lhs = 0.0, rhs = 0.0;
        for (int i = 0; i < 18; ++i)
            lhs += phix[i] * r[i];
        for (int i = 0; i < 30; ++i)
            rhs += x[i] * phitr[i];
        CHECK(lhs == Catch::Approx(rhs).epsilon(1e-12));
    }
}
