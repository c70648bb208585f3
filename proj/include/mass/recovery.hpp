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

#ifndef MASS_RECOVERY_HPP
#define MASS_RECOVERY_HPP

#include <span>
#include <utility>
#include <vector>

#include "mass/sampler.hpp"

namespace mass {

struct SparseRecoveryConfig
{
    int sparsity = 1;              // k
    int max_iterations = 50;
    double residual_tolerance = 1e-6; // l2, relative to ||y||

    void validate() const;
};

// Estimate of the spectral magnitude over N centered bins. magnitude is zero
// outside support and nonnegative everywhere (negative least-squares values
// are clipped; the raw values are kept for diagnostics).
struct RecoveredSpectrum
{
    std::vector<double> magnitude;   // length N, centered order
    std::vector<int> support;        // centered bins with magnitude > 0, ascending
    double residual_norm = 0.0;
    int iterations = 0;
    bool regularized = false;        // ridge fallback was needed
    int clipped_negatives = 0;
    std::vector<std::pair<int, double>> preclip; // (bin, least-squares value) before clipping
    std::vector<double> residual_history;        // ||r|| after each accepted iteration

    double value_at_bin(int bin) const;
};

// CoSaMP on the stacked system: per iteration, form the signal proxy
// Phi^T r, select the 2k largest entries, merge with the current support,
// least-squares on the merged support, prune to the k largest, update the
// residual. The selection structure of Phi keeps every step free of dense
// matrices: the restricted Gram matrix holds pairwise collision counts and
// is solved at size <= 3k. Iterations that would increase the residual are
// rejected and terminate the loop, so the residual is non-increasing across
// accepted iterations. Ties in selection prefer the lower bin index.
RecoveredSpectrum cosamp(const StackedSystem& system, const SparseRecoveryConfig& config);

// (1/N) * sum (|X_hat| - |X|)^2
double recovery_mse(const RecoveredSpectrum& estimate, std::span<const double> truth);

// Non-paper convenience: pick k by running cosamp with doubling sparsity and
// stopping at the residual-decay elbow (first k whose residual improves the
// previous one by less than rel_improvement).
int estimate_sparsity_by_elbow(const StackedSystem& system, int max_k = 256,
                               double rel_improvement = 0.05);

} // namespace mass

#endif // MASS_RECOVERY_HPP
