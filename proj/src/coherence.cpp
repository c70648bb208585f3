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

#include "mass/coherence.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "mass/fft.hpp"

namespace mass {

namespace {

// shared-row count of two centered bins across all branches
int pair_collisions(const StackedSystem& sys, int bin_a, int bin_b)
{
    int count = 0;
    for (const AliasMatrix& a : sys.phi)
        if (AliasMatrix::row_of_bin(bin_a, a.rows) == AliasMatrix::row_of_bin(bin_b, a.rows))
            ++count;
    return count;
}

} // namespace

CoherenceReport mutual_coherence(const StackedSystem& phi, int brute_force_cap)
{
    const int n = phi.nyquist_n;
    const int v = phi.branches();
    if (n < 2 || v < 1)
        throw std::invalid_argument("mutual_coherence: need N >= 2 and at least one branch");

    CoherenceReport report;
    report.predicted_mu = 1.0 / static_cast<double>(v);
    for (const AliasMatrix& a : phi.phi)
    {
        report.undersampling_factors.push_back(static_cast<double>(n) / a.rows);
        report.pr_omega.push_back(static_cast<double>(n - a.rows) /
                                  (static_cast<double>(a.rows) * (n - 1)));
    }

    const int cmin = centered_bin_min(n);
    const int cmax = centered_bin_max(n);
    int best = -1;
    std::pair<int, int> best_pair{cmin, cmin + 1};

    if (n <= brute_force_cap)
    {
        // literal column-pair scan
        for (int a = cmin; a <= cmax; ++a)
            for (int b = a + 1; b <= cmax; ++b)
            {
                int c = pair_collisions(phi, a, b);
                if (c > best)
                {
                    best = c;
                    best_pair = {a, b};
                }
            }
    }
    else
    {
        // the collision count depends only on the bin difference
        for (int d = 1; d < n; ++d)
        {
            int c = 0;
            for (const AliasMatrix& a : phi.phi)
                if (d % a.rows == 0)
                    ++c;
            if (c > best)
            {
                best = c;
                best_pair = {cmin, cmin + d};
            }
        }
    }

    report.max_collisions = best;
    report.max_pair = best_pair;
    report.mu = static_cast<double>(best) / static_cast<double>(v);
    return report;
}

double prop2_success_bound(int k, const SamplingPlan& plan)
{
    if (k < 1)
        throw std::invalid_argument("prop2_success_bound: k must be >= 1");
    using rational = boost::rational<boost::multiprecision::cpp_int>;
    rational sum(0);
    for (int m : plan.branch_lengths)
        sum += rational(1, m);
    rational bound = rational(1) - rational(2 * k - 1, plan.branches()) * sum;
    if (bound < rational(0))
        return 0.0;
    return bound.numerator().convert_to<double>() / bound.denominator().convert_to<double>();
}

double overlap_probability_closed_form(int k, int n, int m)
{
    if (k < 0 || k > n)
        throw std::invalid_argument("overlap_probability_closed_form: need 0 <= k <= N");
    if (!(0 < m && m < n))
        throw std::invalid_argument("overlap_probability_closed_form: need 0 < M < N");
    if (k == 0)
        return 1.0;
    const double p = static_cast<double>(k) / n;
    const double c = std::ceil(static_cast<double>(n) / m);
    if (p == 1.0)
        return c <= 1.0 ? 1.0 : 0.0;
    return std::pow(1.0 - p, c) + c * p * std::pow(1.0 - p, c - 1.0);
}

MonteCarloEstimate overlap_probability_monte_carlo(int k, int n, int m, long trials,
                                                   CounterRng& rng)
{
    if (trials < 1)
        throw std::invalid_argument("overlap_probability_monte_carlo: trials must be >= 1");
    if (k < 0 || k > n || !(0 < m && m < n))
        throw std::invalid_argument("overlap_probability_monte_carlo: bad (k, N, M)");
    const int row_bins = static_cast<int>(std::ceil(static_cast<double>(n) / m));
    const double p = static_cast<double>(k) / n;

    long hits = 0;
    for (long t = 0; t < trials; ++t)
    {
        int occupants = 0;
        for (int j = 0; j < row_bins && occupants < 2; ++j)
            if (rng.uniform() < p)
                ++occupants;
        if (occupants < 2)
            ++hits;
    }
    MonteCarloEstimate est;
    est.trials = trials;
    est.value = static_cast<double>(hits) / static_cast<double>(trials);
    est.half_width_3sigma = 3.0 * std::sqrt(est.value * (1.0 - est.value) / trials);
    return est;
}

double empirical_recovery_probability(int k, const SamplingPlan& plan, int trials,
                                      CounterRng& rng)
{
    if (trials < 1)
        throw std::invalid_argument("empirical_recovery_probability: trials must be >= 1");
    if (k == 0)
        return 1.0;

    const int n = plan.nyquist_n;
    StackedSystem sys = stacked_operator(plan);
    sys.y.assign(static_cast<std::size_t>(plan.total_samples()), 0.0);

    SparseRecoveryConfig cfg;
    cfg.sparsity = k;

    int successes = 0;
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int t = 0; t < trials; ++t)
    {
        std::set<int> support;
        while (static_cast<int>(support.size()) < k)
            support.insert(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n))));
        std::fill(x.begin(), x.end(), 0.0);
        double truth_norm2 = 0.0;
        for (int col : support)
        {
            x[col] = rng.uniform(1.0, 2.0);
            truth_norm2 += x[col] * x[col];
        }
        sys.apply(x, sys.y);

        RecoveredSpectrum rec = cosamp(sys, cfg);
        bool support_ok = static_cast<int>(rec.support.size()) == k;
        if (support_ok)
            for (int bin : rec.support)
                if (support.count(centered_index(bin, n)) == 0)
                {
                    support_ok = false;
                    break;
                }
        if (support_ok)
        {
            double err2 = 0.0;
            for (int i = 0; i < n; ++i)
            {
                double d = rec.magnitude[i] - x[i];
                err2 += d * d;
            }
            if (std::sqrt(err2 / truth_norm2) < 1e-6)
                ++successes;
        }
    }
    return static_cast<double>(successes) / static_cast<double>(trials);
}

} // namespace mass
