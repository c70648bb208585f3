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

#include "mass/coherence.hpp"
#include "mass/fft.hpp"

using namespace mass;

namespace {

SamplingPlan plan_of(int n, std::vector<int> lengths)
{
    SamplingPlan plan;
    plan.nyquist_n = n;
    plan.observation_s = 1.0;
    plan.branch_lengths = std::move(lengths);
    return plan;
}

// dense-column oracle: materialize normalized columns and take literal dot
// products, independent of the collision-count paths
double dense_mu_oracle(const SamplingPlan& plan)
{
    auto sys = stacked_operator(plan);
    const int n = plan.nyquist_n;
    const int rows = sys.total_rows();
    std::vector<std::vector<double>> columns(static_cast<std::size_t>(n),
                                             std::vector<double>(static_cast<std::size_t>(rows), 0.0));
    for (int j = 0; j < n; ++j)
    {
        for (std::size_t i = 0; i < sys.phi.size(); ++i)
        {
            const AliasMatrix& blk = sys.phi[i];
            columns[j][sys.block_offsets[i] + centered_index(blk.column_to_row[j], blk.rows)] = 1.0;
        }
        double norm = std::sqrt(static_cast<double>(sys.branches()));
        for (double& v : columns[j])
            v /= norm;
    }
    double mu = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
        {
            double dot = 0.0;
            for (int r = 0; r < rows; ++r)
                dot += columns[a][r] * columns[b][r];
            mu = std::max(mu, std::abs(dot));
        }
    return mu;
}

} // namespace

TEST_CASE("mutual coherence on known plans")
{
    auto r1 = mutual_coherence(stacked_operator(plan_of(15, {5, 7})));
    CHECK(r1.mu == 0.5);
    CHECK(r1.predicted_mu == 0.5);
    CHECK(r1.max_collisions == 1);
    CHECK(r1.undersampling_factors == std::vector<double>{3.0, 15.0 / 7.0});

    auto r2 = mutual_coherence(stacked_operator(plan_of(100, {11, 13, 17})));
    CHECK(r2.mu == Catch::Approx(1.0 / 3.0));
    CHECK(r2.max_collisions == 1);

    // v = 1: two bins sharing the single branch's row are fully coherent
    auto r3 = mutual_coherence(stacked_operator(plan_of(15, {7})));
    CHECK(r3.mu == 1.0);
}

TEST_CASE("proposition 1 holds exactly on valid plans")
{
    for (int n : {60, 150, 210})
        for (int v : {2, 3, 4, 5})
        {
            auto plan = select_primes(n, v, 1.0, 1.0);
            REQUIRE(plan.valid());
            auto report = mutual_coherence(stacked_operator(plan));
            REQUIRE(report.max_collisions == 1); // integer-exact check
            REQUIRE(report.mu == 1.0 / v);
        }
}

TEST_CASE("violating the pairwise product condition can raise the coherence")
{
    // 5 * 7 = 35 <= 60: bins 35 apart collide in both branches
    auto plan = plan_of(60, {5, 7});
    CHECK_FALSE(plan.valid());
    auto report = mutual_coherence(stacked_operator(plan));
    CHECK(report.mu > 0.5);
    CHECK(report.mu == 1.0);
    CHECK((report.max_pair.second - report.max_pair.first) % 35 == 0);
}

TEST_CASE("brute force and shortcut agree, and match the dense oracle")
{
    for (auto plan : {plan_of(40, {7, 11}), plan_of(60, {5, 7}), plan_of(90, {7, 11, 13}),
                      plan_of(150, {13, 17, 19})})
    {
        auto sys = stacked_operator(plan);
        auto brute = mutual_coherence(sys, 5000); // pair scan
        auto shortcut = mutual_coherence(sys, 0); // difference classes
        CHECK(brute.mu == shortcut.mu);
        CHECK(brute.max_collisions == shortcut.max_collisions);
        CHECK(brute.max_pair == shortcut.max_pair);
        CHECK(brute.mu == Catch::Approx(dense_mu_oracle(plan)).margin(1e-12));
    }
}

TEST_CASE("proposition 2 bound values")
{
    // independent rational evaluation for {5,7,11}, k=2:
    // sum 1/M = 167/385, factor (2k-1)/v = 1, bound = 218/385
    CHECK(prop2_success_bound(2, plan_of(100, {5, 7, 11})) ==
          Catch::Approx(218.0 / 385.0).epsilon(1e-15));

    CHECK(prop2_success_bound(1, plan_of(10, {5})) == Catch::Approx(0.8).epsilon(1e-15));

    // Remark 3: with 2k-1 = v the bound is 1 - sum 1/M_i
    auto plan = plan_of(500, {23, 29, 31});
    double direct = prop2_success_bound(2, plan); // 2k-1 = 3 = v
    double remark3 = 1.0 - (1.0 / 23 + 1.0 / 29 + 1.0 / 31);
    CHECK(direct == Catch::Approx(remark3).epsilon(1e-12));

    // clamps at zero
    CHECK(prop2_success_bound(1000, plan_of(100, {11, 13})) == 0.0);
}

TEST_CASE("overlap probability closed form")
{
    CHECK(overlap_probability_closed_form(0, 1024, 31) == 1.0);
    CHECK(overlap_probability_closed_form(1024, 1024, 31) == 0.0);

    // against the fully simplified form at M = sqrt(N) exactly
    const int n = 1024, m = 32;
    for (int k : {1, 5, 10, 50})
    {
        double sqrt_n = std::sqrt(static_cast<double>(n));
        double simplified = std::pow((n - k) / static_cast<double>(n), sqrt_n) *
                            (n - k + k * sqrt_n) / (n - k);
        CHECK(overlap_probability_closed_form(k, n, m) ==
              Catch::Approx(simplified).epsilon(1e-12));
    }
}

TEST_CASE("overlap probability monte carlo agrees with the closed form")
{
    SECTION("k = 0 is exactly one")
    {
        CounterRng rng(1, RngPurpose::OverlapTrial);
        auto est = overlap_probability_monte_carlo(0, 1024, 31, 1000, rng);
        CHECK(est.value == 1.0);
    }

    SECTION("N=1024, M=31, k in {5, 10}")
    {
        for (int k : {5, 10})
        {
            CounterRng rng(2, RngPurpose::OverlapTrial, static_cast<std::uint64_t>(k));
            auto est = overlap_probability_monte_carlo(k, 1024, 31, 100000, rng);
            double closed = overlap_probability_closed_form(k, 1024, 31);
            CHECK(std::abs(est.value - closed) <= est.half_width_3sigma);
            CHECK(std::abs(est.value - closed) <= 0.02);
        }
    }

    SECTION("k much smaller than N approaches certainty")
    {
        CounterRng rng(3, RngPurpose::OverlapTrial);
        auto est = overlap_probability_monte_carlo(10, 10000, 101, 100000, rng);
        CHECK(est.value >= 0.99);
        CHECK(overlap_probability_closed_form(10, 10000, 101) >= 0.99);
    }
}

TEST_CASE("empirical recovery probability")
{
    SECTION("guaranteed regime recovers every instance")
    {
        auto plan = select_primes(500, 6, 1.0, 1.0); // v = 2k for k = 3
        CounterRng rng(4, RngPurpose::SparseInstance);
        CHECK(empirical_recovery_probability(3, plan, 100, rng) == 1.0);
    }

    SECTION("k = 0 is vacuously certain")
    {
        CounterRng rng(5, RngPurpose::SparseInstance);
        CHECK(empirical_recovery_probability(0, plan_of(100, {11, 13}), 10, rng) == 1.0);
    }

    SECTION("below the guarantee the rate still beats the bound")
    {
        auto plan = plan_of(210, {17, 19}); // v = 2 < 2k = 4
        REQUIRE(plan.valid());
        double bound = prop2_success_bound(2, plan);
        CounterRng rng(6, RngPurpose::SparseInstance);
        double rate = empirical_recovery_probability(2, plan, 200, rng);
        // allow a 3 sigma sampling margin around the bound
        double sigma = std::sqrt(bound * (1.0 - bound) / 200.0);
        CHECK(rate >= bound - 3.0 * sigma);
    }
}
