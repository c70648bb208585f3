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

#ifndef MASS_COHERENCE_HPP
#define MASS_COHERENCE_HPP

#include <utility>
#include <vector>

#include "mass/recovery.hpp"
#include "mass/rng.hpp"
#include "mass/sampler.hpp"

namespace mass {

struct CoherenceReport
{
    double mu = 0.0;            // exact maximum over normalized column pairs
    double predicted_mu = 0.0;  // 1/v
    std::pair<int, int> max_pair; // centered bins achieving the max, lexicographically first
    int max_collisions = 0;     // shared-row count of the max pair
    std::vector<double> undersampling_factors; // D_l = N/M_l
    std::vector<double> pr_omega; // (N-M_l)/(M_l*(N-1)), single-branch collision probability
};

// Mutual coherence of the stacked 0/1 matrix. Every column holds exactly v
// ones, so the normalized inner product of two columns is their shared-row
// count divided by v. Up to brute_force_cap the max is found by scanning all
// column pairs; above it, by the collision-count shortcut over bin
// differences (both paths are exact and must agree).
CoherenceReport mutual_coherence(const StackedSystem& phi, int brute_force_cap = 5000);

// Lower bound 1 - ((2k-1)/v) * sum_i 1/M_i on the probability of successful
// reconstruction, clamped at 0. Evaluated in exact rational arithmetic.
double prop2_success_bound(int k, const SamplingPlan& plan);

// Probability that a fixed aliased row of one branch receives fewer than two
// occupied bins, when each of the N bins is occupied independently with
// probability k/N:  (1-P)^c + c*P*(1-P)^(c-1), c = ceil(N/M), P = k/N.
double overlap_probability_closed_form(int k, int n, int m);

struct MonteCarloEstimate
{
    double value = 0.0;
    double half_width_3sigma = 0.0;
    long trials = 0;
};

// Monte-Carlo companion of the closed form under the same i.i.d.-occupancy
// model: draw the occupancy of the ceil(N/M) bins folding onto one fixed row
// and count trials with fewer than two occupants.
MonteCarloEstimate overlap_probability_monte_carlo(int k, int n, int m, long trials,
                                                   CounterRng& rng);

// Fraction of random noiseless bin-aligned k-sparse instances (uniform
// support, magnitudes uniform in [1,2]) that cosamp recovers with the exact
// support and relative l2 error below 1e-6.
double empirical_recovery_probability(int k, const SamplingPlan& plan, int trials,
                                      CounterRng& rng);

} // namespace mass

#endif // MASS_COHERENCE_HPP
