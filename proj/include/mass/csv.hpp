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

#ifndef MASS_CSV_HPP
#define MASS_CSV_HPP

#include <cstdio>
#include <string>

namespace mass {

// Locale-independent fixed formatting; every CSV field goes through here so
// identical values always produce identical bytes.
inline std::string fmt_g(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content);

} // namespace mass

#endif // MASS_CSV_HPP
