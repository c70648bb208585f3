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

#include "mass/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace mass {

namespace {

// One FFTW plan per transform length, created once under a lock. Plans use
// FFTW_ESTIMATE (deterministic, no runtime measurement) and FFTW_UNALIGNED so
// they can be re-executed on arbitrary caller buffers. fftw_execute_dft on a
// shared plan with distinct buffers is thread-safe.
class PlanCache {
  public:
    fftw_plan get(int n)
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find(n);
        if (it != plans_.end())
            return it->second;
        std::vector<fftw_complex> scratch(2 * static_cast<std::size_t>(n));
        fftw_plan p = fftw_plan_dft_1d(n, scratch.data(), scratch.data() + n, FFTW_FORWARD,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (p == nullptr)
            throw std::runtime_error("fftw_plan_dft_1d failed for length " + std::to_string(n));
        plans_.emplace(n, p);
        return p;
    }

  private:
    std::mutex mutex_;
    std::unordered_map<int, fftw_plan> plans_;
};

PlanCache& plan_cache()
{
    static PlanCache cache;
    return cache;
}

std::vector<std::complex<double>> run_forward(std::vector<std::complex<double>> in)
{
    const int n = static_cast<int>(in.size());
    if (n == 0)
        throw std::invalid_argument("dft_centered: empty input");
    std::vector<std::complex<double>> natural(in.size());
    fftw_plan p = plan_cache().get(n);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(natural.data()));

    // fftshift into centered order
    std::vector<std::complex<double>> centered(in.size());
    for (int c = centered_bin_min(n); c <= centered_bin_max(n); ++c)
        centered[centered_index(c, n)] = natural[natural_index(c, n)];
    return centered;
}

} // namespace

std::vector<std::complex<double>> dft_centered(std::span<const double> samples)
{
    std::vector<std::complex<double>> in(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        in[i] = std::complex<double>(samples[i], 0.0);
    return run_forward(std::move(in));
}

std::vector<std::complex<double>> dft_centered(std::span<const std::complex<double>> samples)
{
    return run_forward(std::vector<std::complex<double>>(samples.begin(), samples.end()));
}

} // namespace mass
