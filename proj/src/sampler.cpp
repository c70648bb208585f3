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

#include "mass/sampler.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mass/fft.hpp"

namespace mass {

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    if (n % 2 == 0)
        return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0)
            return false;
    return true;
}

int SamplingPlan::total_samples() const
{
    return std::accumulate(branch_lengths.begin(), branch_lengths.end(), 0);
}

double SamplingPlan::sum_ratio() const
{
    return static_cast<double>(total_samples()) / static_cast<double>(nyquist_n);
}

double SamplingPlan::mean_ratio() const
{
    return sum_ratio() / static_cast<double>(branches());
}

std::vector<std::string> SamplingPlan::violations() const
{
    std::vector<std::string> out;
    if (nyquist_n < 2)
        out.push_back("N must be at least 2");
    if (!(observation_s > 0.0))
        out.push_back("observation_s must be positive");
    if (branch_lengths.empty())
        out.push_back("plan has no branches");
    for (int m : branch_lengths)
    {
        if (!is_prime(static_cast<std::uint64_t>(std::max(m, 0))))
            out.push_back("branch length " + std::to_string(m) + " is not prime");
        if (m >= nyquist_n)
            out.push_back("branch length " + std::to_string(m) + " is not below N = " +
                          std::to_string(nyquist_n));
    }
    for (std::size_t l = 0; l < branch_lengths.size(); ++l)
        for (std::size_t z = l + 1; z < branch_lengths.size(); ++z)
        {
            long long ml = branch_lengths[l], mz = branch_lengths[z];
            if (ml == mz)
                out.push_back("duplicate branch length " + std::to_string(ml));
            else if (ml * mz <= nyquist_n)
                out.push_back("pairwise condition violated: " + std::to_string(ml) + "*" +
                              std::to_string(mz) + " = " + std::to_string(ml * mz) +
                              " <= N = " + std::to_string(nyquist_n));
        }
    return out;
}

void SamplingPlan::validate() const
{
    auto v = violations();
    if (v.empty())
        return;
    std::string msg = "invalid sampling plan:";
    for (const std::string& s : v)
        msg += "\n  - " + s;
    throw std::invalid_argument(msg);
}

SamplingPlan select_primes(int nyquist_n, int v, double scale_a, double observation_s)
{
    if (v < 1)
        throw std::invalid_argument("select_primes: v must be at least 1");
    if (!(scale_a >= 1.0))
        throw std::invalid_argument("select_primes: scale a must be >= 1");
    double start = scale_a * std::sqrt(static_cast<double>(nyquist_n));
    if (!(start >= 2.0))
        throw std::invalid_argument("select_primes: a*sqrt(N) must be >= 2");

    SamplingPlan plan;
    plan.nyquist_n = nyquist_n;
    plan.observation_s = observation_s;
    std::uint64_t candidate = static_cast<std::uint64_t>(std::ceil(start));
    while (static_cast<int>(plan.branch_lengths.size()) < v)
    {
        while (!is_prime(candidate))
            ++candidate;
        plan.branch_lengths.push_back(static_cast<int>(candidate));
        ++candidate;
    }
    plan.validate();
    return plan;
}

int AliasMatrix::row_of_bin(int bin, int m)
{
    int r = ((bin % m) + m) % m; // residue in [0, m)
    if (r > (m + 1) / 2 - 1)
        r -= m; // fold into the centered row range
    return r;
}

std::vector<std::vector<std::uint8_t>> AliasMatrix::dense() const
{
    std::vector<std::vector<std::uint8_t>> out(
        static_cast<std::size_t>(rows), std::vector<std::uint8_t>(static_cast<std::size_t>(cols), 0));
    for (int j = 0; j < cols; ++j)
    {
        int r = centered_index(column_to_row[j], rows);
        out[r][j] = 1;
    }
    return out;
}

AliasMatrix build_alias_matrix(int m, int n)
{
    if (!(1 < m && m < n))
        throw std::invalid_argument("build_alias_matrix: need 1 < m < n");
    AliasMatrix a;
    a.rows = m;
    a.cols = n;
    a.column_to_row.resize(static_cast<std::size_t>(n));
    for (int c = centered_bin_min(n); c <= centered_bin_max(n); ++c)
        a.column_to_row[centered_index(c, n)] = AliasMatrix::row_of_bin(c, m);
    return a;
}

BranchMeasurement branch_dft(std::span<const double> samples)
{
    if (samples.empty())
        throw std::invalid_argument("branch_dft: empty sample vector");
    BranchMeasurement bm;
    bm.length = static_cast<int>(samples.size());
    bm.dft = dft_centered(samples);
    bm.magnitude.resize(bm.dft.size());
    for (std::size_t i = 0; i < bm.dft.size(); ++i)
        bm.magnitude[i] = std::abs(bm.dft[i]);
    return bm;
}

int StackedSystem::total_rows() const
{
    int rows = 0;
    for (const AliasMatrix& a : phi)
        rows += a.rows;
    return rows;
}

int StackedSystem::collisions(int bin_a, int bin_b) const
{
    int count = 0;
    for (const AliasMatrix& a : phi)
        if ((bin_a - bin_b) % a.rows == 0)
            ++count;
    return count;
}

void StackedSystem::apply(std::span<const double> x, std::span<double> y_out) const
{
    if (static_cast<int>(x.size()) != nyquist_n || static_cast<int>(y_out.size()) != total_rows())
        throw std::invalid_argument("StackedSystem::apply: shape mismatch");
    std::fill(y_out.begin(), y_out.end(), 0.0);
    for (std::size_t i = 0; i < phi.size(); ++i)
    {
        const AliasMatrix& a = phi[i];
        double* block = y_out.data() + block_offsets[i];
        for (int j = 0; j < a.cols; ++j)
            block[centered_index(a.column_to_row[j], a.rows)] += x[j];
    }
}

void StackedSystem::apply_adjoint(std::span<const double> r, std::span<double> out) const
{
    if (static_cast<int>(r.size()) != total_rows() || static_cast<int>(out.size()) != nyquist_n)
        throw std::invalid_argument("StackedSystem::apply_adjoint: shape mismatch");
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < phi.size(); ++i)
    {
        const AliasMatrix& a = phi[i];
        const double* block = r.data() + block_offsets[i];
        for (int j = 0; j < a.cols; ++j)
            out[j] += block[centered_index(a.column_to_row[j], a.rows)];
    }
}

StackedSystem stacked_operator(const SamplingPlan& plan)
{
    StackedSystem sys;
    sys.nyquist_n = plan.nyquist_n;
    int offset = 0;
    for (int m : plan.branch_lengths)
    {
        sys.block_offsets.push_back(offset);
        sys.phi.push_back(build_alias_matrix(m, plan.nyquist_n));
        offset += m;
    }
    return sys;
}

StackedSystem stack_measurements(const SamplingPlan& plan,
                                 const std::vector<BranchMeasurement>& branches)
{
    if (branches.size() != plan.branch_lengths.size())
        throw std::invalid_argument("stack_measurements: branch count mismatch");
    StackedSystem sys = stacked_operator(plan);
    sys.y.reserve(static_cast<std::size_t>(plan.total_samples()));
    for (std::size_t i = 0; i < branches.size(); ++i)
    {
        if (branches[i].length != plan.branch_lengths[i] ||
            static_cast<int>(branches[i].magnitude.size()) != plan.branch_lengths[i])
            throw std::invalid_argument("stack_measurements: branch " + std::to_string(i) +
                                        " length mismatch");
        double scale = static_cast<double>(plan.nyquist_n) / plan.branch_lengths[i];
        for (double mag : branches[i].magnitude)
            sys.y.push_back(scale * mag);
    }
    return sys;
}

} // namespace mass
