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

#include "sdmf/io_util.h"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sdmf {

namespace fs = std::filesystem;

std::string FormatReal(double value) {
  std::array<char, 64> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

void WriteMatrix(const fs::path& path, const Matrix& matrix) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path.string());
  out << matrix.rows() << ' ' << matrix.cols() << '\n';
  std::array<char, 40> buf;
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      std::snprintf(buf.data(), buf.size(), "%.17g", matrix(i, c));
      if (c > 0) out << ' ';
      out << buf.data();
    }
    out << '\n';
  }
  if (!out) throw InputError("failed writing " + path.string());
}

Matrix ReadMatrix(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read file: " + path.string());
  Eigen::Index rows = -1, cols = -1;
  in >> rows >> cols;
  if (!in || rows < 0 || cols < 0) {
    throw InputError(path.string() + ": bad matrix header");
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      std::string token;
      if (!(in >> token)) {
        throw InputError(path.string() + ": truncated matrix at row " +
                         std::to_string(i + 1));
      }
      double v;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw InputError(path.string() + ": bad entry '" + token + "'");
      }
      m(i, c) = v;
    }
  }
  return m;
}

void WriteFactorTimeline(const fs::path& dir, const FactorTimeline& factors) {
  fs::create_directories(dir);
  for (size_t t = 0; t < factors.size(); ++t) {
    WriteMatrix(dir / ("U_" + std::to_string(t) + ".mat"), factors[t].U);
    WriteMatrix(dir / ("V_" + std::to_string(t) + ".mat"), factors[t].V);
  }
}

FactorTimeline ReadFactorTimeline(const fs::path& dir) {
  FactorTimeline factors;
  for (int t = 0;; ++t) {
    const fs::path u = dir / ("U_" + std::to_string(t) + ".mat");
    const fs::path v = dir / ("V_" + std::to_string(t) + ".mat");
    if (!fs::exists(u) || !fs::exists(v)) break;
    factors.push_back({ReadMatrix(u), ReadMatrix(v)});
  }
  if (factors.empty()) {
    throw InputError("no factor checkpoints (U_0.mat, V_0.mat) in " + dir.string());
  }
  ValidateFactorTimeline(factors);
  return factors;
}

}  // namespace sdmf
