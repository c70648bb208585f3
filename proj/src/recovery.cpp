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

#include "mass/recovery.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mass/fft.hpp"

namespace mass {

void SparseRecoveryConfig::validate() const
{
    if (sparsity < 1)
        throw std::invalid_argument("SparseRecoveryConfig: sparsity must be >= 1");
    if (max_iterations < 1)
        throw std::invalid_argument("SparseRecoveryConfig: max_iterations must be >= 1");
    if (residual_tolerance < 0.0)
        throw std::invalid_argument("SparseRecoveryConfig: residual_tolerance must be >= 0");
}

double RecoveredSpectrum::value_at_bin(int bin) const
{
    const int n = static_cast<int>(magnitude.size());
    return magnitude[centered_index(bin, n)];
}

namespace {

double l2_norm(std::span<const double> v)
{
    double acc = 0.0;
    for (double x : v)
        acc += x * x;
    return std::sqrt(acc);
}

// y_out -= Phi * x for a sparse x given as (column index, value) pairs.
void subtract_sparse_apply(const StackedSystem& sys, std::span<const std::pair<int, double>> x,
                           std::span<double> y_out)
{
    for (std::size_t i = 0; i < sys.phi.size(); ++i)
    {
        const AliasMatrix& a = sys.phi[i];
        double* block = y_out.data() + sys.block_offsets[i];
        for (const auto& [col, val] : x)
            block[centered_index(a.column_to_row[col], a.rows)] -= val;
    }
}

// indices of the largest-|value| entries, ties broken toward lower index
std::vector<int> top_indices(std::span<const double> values, int count)
{
    std::vector<int> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    count = std::min<int>(count, static_cast<int>(values.size()));
    std::partial_sort(idx.begin(), idx.begin() + count, idx.end(), [&](int a, int b) {
        double fa = std::abs(values[a]), fb = std::abs(values[b]);
        if (fa != fb)
            return fa > fb;
        return a < b;
    });
    idx.resize(static_cast<std::size_t>(count));
    return idx;
}

// Least squares on the merged support via normal equations. The Gram matrix
// entry (p,q) is the collision count of the two columns; the diagonal is v.
// Falls back to a 1e-10 ridge when the factorization reports rank deficiency.
Eigen::VectorXd restricted_least_squares(const StackedSystem& sys, const std::vector<int>& cols,
                                         std::span<const double> y, bool& regularized)
{
    const int t = static_cast<int>(cols.size());
    Eigen::MatrixXd gram(t, t);
    for (int p = 0; p < t; ++p)
        for (int q = p; q < t; ++q)
        {
            int c = sys.collisions(centered_bin_of_index(cols[p], sys.nyquist_n),
                                   centered_bin_of_index(cols[q], sys.nyquist_n));
            gram(p, q) = c;
            gram(q, p) = c;
        }

    Eigen::VectorXd rhs(t);
    for (int p = 0; p < t; ++p)
    {
        double acc = 0.0;
        for (std::size_t i = 0; i < sys.phi.size(); ++i)
        {
            const AliasMatrix& a = sys.phi[i];
            acc += y[sys.block_offsets[i] + centered_index(a.column_to_row[cols[p]], a.rows)];
        }
        rhs(p) = acc;
    }

    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    bool deficient = ldlt.info() != Eigen::Success;
    if (!deficient)
    {
        double dmax = ldlt.vectorD().cwiseAbs().maxCoeff();
        double dmin = ldlt.vectorD().cwiseAbs().minCoeff();
        deficient = !(dmin > 1e-12 * dmax);
    }
    if (deficient)
    {
        regularized = true;
        Eigen::MatrixXd ridged = gram + 1e-10 * Eigen::MatrixXd::Identity(t, t);
        ldlt.compute(ridged);
    }
    return ldlt.solve(rhs);
}

} // namespace

RecoveredSpectrum cosamp(const StackedSystem& system, const SparseRecoveryConfig& config)
{
    config.validate();
    const int n = system.nyquist_n;
    const int rows = system.total_rows();
    if (static_cast<int>(system.y.size()) != rows)
        throw std::invalid_argument("cosamp: system.y length != total rows");
    if (config.sparsity > rows)
        throw std::invalid_argument("cosamp: sparsity exceeds measurement count");
    const int k = config.sparsity;

    RecoveredSpectrum result;
    result.magnitude.assign(static_cast<std::size_t>(n), 0.0);

    const double y_norm = l2_norm(system.y);
    if (y_norm == 0.0)
        return result;

    // estimate entries as (column index, value) pairs, kept sorted by column
    std::vector<std::pair<int, double>> estimate;
    std::vector<double> residual(system.y.begin(), system.y.end());
    double residual_norm = y_norm;
    std::vector<double> proxy(static_cast<std::size_t>(n));

    for (int iter = 1; iter <= config.max_iterations; ++iter)
    {
        system.apply_adjoint(residual, proxy);
        std::vector<int> merged = top_indices(proxy, 2 * k);
        for (const auto& [col, val] : estimate)
            merged.push_back(col);
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

        Eigen::VectorXd b = restricted_least_squares(system, merged, system.y, result.regularized);

        std::vector<double> bvals(b.data(), b.data() + b.size());
        std::vector<int> kept = top_indices(bvals, k);
        std::sort(kept.begin(), kept.end());

        std::vector<std::pair<int, double>> candidate;
        candidate.reserve(kept.size());
        for (int p : kept)
            candidate.emplace_back(merged[p], bvals[p]);

        std::vector<double> cand_residual(system.y.begin(), system.y.end());
        subtract_sparse_apply(system, candidate, cand_residual);
        double cand_norm = l2_norm(cand_residual);

        if (cand_norm > residual_norm * (1.0 + 1e-12))
            break; // reject the step; residual would grow

        bool stagnated = cand_norm >= residual_norm * (1.0 - 1e-9);
        estimate = std::move(candidate);
        residual = std::move(cand_residual);
        residual_norm = cand_norm;
        result.iterations = iter;
        result.residual_history.push_back(residual_norm);
        if (residual_norm <= config.residual_tolerance * y_norm || stagnated)
            break;
    }

    result.residual_norm = residual_norm;
    result.preclip.reserve(estimate.size());
    for (const auto& [col, val] : estimate)
    {
        int bin = centered_bin_of_index(col, n);
        result.preclip.emplace_back(bin, val);
        if (val > 0.0)
        {
            result.magnitude[col] = val;
            result.support.push_back(bin);
        }
        else if (val < 0.0)
            ++result.clipped_negatives;
    }
    return result;
}

double recovery_mse(const RecoveredSpectrum& estimate, std::span<const double> truth)
{
    if (estimate.magnitude.size() != truth.size())
        throw std::invalid_argument("recovery_mse: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i)
    {
        double d = estimate.magnitude[i] - truth[i];
        acc += d * d;
    }
    return acc / static_cast<double>(truth.size());
}

int estimate_sparsity_by_elbow(const StackedSystem& system, int max_k, double rel_improvement)
{
    const double y_norm = l2_norm(system.y);
    if (y_norm == 0.0)
        return 1;
    max_k = std::min(max_k, system.total_rows());
    double prev_residual = y_norm;
    int best_k = 1;
    for (int k = 1; k <= max_k; k = (k == max_k ? max_k + 1 : std::min(2 * k, max_k)))
    {
        SparseRecoveryConfig cfg;
        cfg.sparsity = k;
        cfg.max_iterations = 20;
        cfg.residual_tolerance = 1e-10;
        RecoveredSpectrum rec = cosamp(system, cfg);
        if (k > 1 && rec.residual_norm > prev_residual * (1.0 - rel_improvement))
            break;
        best_k = k;
        prev_residual = rec.residual_norm;
        if (prev_residual <= 1e-9 * y_norm)
            break;
    }
    return best_k;
}

} // namespace mass
