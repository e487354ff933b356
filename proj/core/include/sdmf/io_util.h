// Copyright 2026 The sdmf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SDMF_IO_UTIL_H_
#define SDMF_IO_UTIL_H_

#include <filesystem>
#include <string>

#include "sdmf/domain.h"

namespace sdmf {

// Shortest decimal that parses back to the same double.
std::string FormatReal(double value);

// Plain-text matrix: "rows cols" header, then one row per line with 17
// significant digits per entry.
void WriteMatrix(const std::filesystem::path& path, const Matrix& matrix);
Matrix ReadMatrix(const std::filesystem::path& path);

// U_<t>.mat / V_<t>.mat for every bin.
void WriteFactorTimeline(const std::filesystem::path& dir,
                         const FactorTimeline& factors);
FactorTimeline ReadFactorTimeline(const std::filesystem::path& dir);

}  // namespace sdmf

#endif  // SDMF_IO_UTIL_H_
