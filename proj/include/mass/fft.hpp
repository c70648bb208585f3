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

#ifndef MASS_FFT_HPP
#define MASS_FFT_HPP

#include <complex>
#include <span>
#include <vector>

namespace mass {

// Centered-bin convention used throughout: a length-n spectrum is indexed by
// integer bins c in {-floor(n/2), ..., ceil(n/2)-1} (exactly n values), and
// stored in ascending bin order. Bin c corresponds to frequency c/T Hz.
// Natural DFT order maps to centered order by an fftshift.

inline int centered_bin_min(int n) { return -(n / 2); }
inline int centered_bin_max(int n) { return (n + 1) / 2 - 1; }

// storage index of centered bin c in a length-n centered vector
inline int centered_index(int c, int n) { return c + n / 2; }

// centered bin of storage index i
inline int centered_bin_of_index(int i, int n) { return i - n / 2; }

// natural (FFT-output) index of centered bin c
inline int natural_index(int c, int n) { return ((c % n) + n) % n; }

// Unnormalized forward DFT, X[h] = sum_m x[m] exp(-j 2 pi m h / len),
// returned in centered-bin order. Uses FFTW internally; any length works,
// including primes. Thread-safe.
std::vector<std::complex<double>> dft_centered(std::span<const double> samples);
std::vector<std::complex<double>> dft_centered(std::span<const std::complex<double>> samples);

} // namespace mass

#endif // MASS_FFT_HPP
