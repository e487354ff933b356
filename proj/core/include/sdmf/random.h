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

#ifndef SDMF_RANDOM_H_
#define SDMF_RANDOM_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "sdmf/domain.h"

namespace sdmf {

using Rng = std::mt19937_64;

// Unbiased draw from [0, n). Implemented by rejection so the sequence does not
// depend on the standard library's distribution implementation.
inline uint64_t UniformBelow(Rng& rng, uint64_t n) {
  const uint64_t limit = Rng::max() - Rng::max() % n;
  uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % n;
}

template <typename T>
void FisherYatesShuffle(std::vector<T>& values, Rng& rng) {
  for (size_t i = values.size(); i > 1; --i) {
    const size_t j = UniformBelow(rng, i);
    std::swap(values[i - 1], values[j]);
  }
}

// Fills a matrix with i.i.d. N(0, stddev^2) entries.
inline void FillGaussian(Matrix& out, double stddev, Rng& rng) {
  std::normal_distribution<double> normal(0.0, stddev);
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index c = 0; c < out.cols(); ++c) out(i, c) = normal(rng);
  }
}

}  // namespace sdmf

#endif  // SDMF_RANDOM_H_
