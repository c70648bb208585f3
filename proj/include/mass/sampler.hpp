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

#ifndef MASS_SAMPLER_HPP
#define MASS_SAMPLER_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mass {

bool is_prime(std::uint64_t n);

// Branch lengths M_1..M_v over one observation window. Branch lengths are
// primary; rates are derived as f_i = M_i/T, so M_i = f_i*T holds exactly.
struct SamplingPlan
{
    int nyquist_n = 0;      // N
    double observation_s = 0.0;
    std::vector<int> branch_lengths; // M_1..M_v

    int branches() const { return static_cast<int>(branch_lengths.size()); }
    double rate_hz(int i) const { return branch_lengths[i] / observation_s; }
    int total_samples() const;

    // (sum M_i)/N and (sum M_i)/(v N). Reports use sum_ratio as "compression
    // ratio"; both are exposed because the two conventions differ widely.
    double sum_ratio() const;
    double mean_ratio() const;

    // Violated invariants, one message each; empty means the plan satisfies
    // every hypothesis (distinct primes, M_i < N, pairwise M_l*M_z > N).
    std::vector<std::string> violations() const;
    bool valid() const { return violations().empty(); }

    // Throws std::invalid_argument with all diagnostics when invalid.
    void validate() const;
};

// First prime >= a*sqrt(N) and its v-1 consecutive successor primes.
// Validates the resulting plan; rejects with a diagnostic naming the
// offending pair or branch when an invariant fails.
SamplingPlan select_primes(int nyquist_n, int v, double scale_a, double observation_s);

// Binary aliasing operator of one branch: column for centered bin
// c in {-floor(N/2) .. ceil(N/2)-1} has its single 1 in the centered row
// r in {-floor(M/2) .. ceil(M/2)-1} with c == r (mod M).
struct AliasMatrix
{
    int rows = 0; // M_i
    int cols = 0; // N
    std::vector<int> column_to_row; // centered row per column, column-storage order

    // arithmetic form of the residue map, usable without the table
    static int row_of_bin(int bin, int m);

    int row_of_column_index(int col_index) const { return column_to_row[col_index]; }

    // dense 0/1 materialization (tests, CSV export)
    std::vector<std::vector<std::uint8_t>> dense() const;
};

AliasMatrix build_alias_matrix(int m, int n);

// DFT of one branch's samples, reindexed to centered bins.
struct BranchMeasurement
{
    int length = 0;
    std::vector<std::complex<double>> dft;
    std::vector<double> magnitude;
};

BranchMeasurement branch_dft(std::span<const double> samples);

// Concatenated linear system y = Phi |X|: y stacks (N/M_i)|Y_i| and phi the
// matching alias blocks in branch order.
struct StackedSystem
{
    int nyquist_n = 0;
    std::vector<double> y;
    std::vector<AliasMatrix> phi;
    std::vector<int> block_offsets; // start of block i within y (or the operator's row space)

    int total_rows() const;
    int branches() const { return static_cast<int>(phi.size()); }

    // Number of branches in which the two centered bins fold onto the same
    // row, i.e. #{i : M_i divides (bin_a - bin_b)}. The inner product of two
    // stacked 0/1 columns equals this count.
    int collisions(int bin_a, int bin_b) const;

    // y_out = Phi * x (x in centered order, length N)
    void apply(std::span<const double> x, std::span<double> y_out) const;
    // out = Phi^T * r (r over stacked rows, length total_rows())
    void apply_adjoint(std::span<const double> r, std::span<double> out) const;
};

// Measurement-free operator with the plan's alias blocks (y left empty);
// used for coherence analysis and synthetic right-hand sides.
StackedSystem stacked_operator(const SamplingPlan& plan);

StackedSystem stack_measurements(const SamplingPlan& plan,
                                 const std::vector<BranchMeasurement>& branches);

} // namespace mass

#endif // MASS_SAMPLER_HPP
