// Copyright 2026 The Woodpest Authors. All Rights Reserved.
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

#include "woodpest/features/standardize.hpp"

#include <cmath>

#include "woodpest/error.hpp"

namespace woodpest::features {

StandardizeStats fit_standardize(std::span<const MfccMatrix> matrices) {
  if (matrices.empty()) throw InvalidArgument("cannot fit standardization on an empty set");
  const std::size_t coeffs = matrices.front().coeffs();
  std::size_t count = 0;
  StandardizeStats stats{std::vector<double>(coeffs, 0.0), std::vector<double>(coeffs, 0.0)};

  for (const auto& m : matrices) {
    if (m.coeffs() != coeffs) throw ShapeError("standardize: inconsistent coefficient counts");
    for (std::size_t t = 0; t < m.frames(); ++t) {
      const auto row = m.row(t);
      for (std::size_t c = 0; c < coeffs; ++c) stats.mean[c] += row[c];
    }
    count += m.frames();
  }
  if (count == 0) throw InvalidArgument("cannot fit standardization on zero frames");
  for (double& v : stats.mean) v /= static_cast<double>(count);

  for (const auto& m : matrices) {
    for (std::size_t t = 0; t < m.frames(); ++t) {
      const auto row = m.row(t);
      for (std::size_t c = 0; c < coeffs; ++c) {
        const double d = row[c] - stats.mean[c];
        stats.std[c] += d * d;
      }
    }
  }
  for (double& v : stats.std) {
    v = std::sqrt(v / static_cast<double>(count));
    if (v < kStdFloor) v = 1.0;
  }
  return stats;
}

MfccMatrix apply_standardize(const MfccMatrix& matrix, const StandardizeStats& stats) {
  if (stats.mean.size() != matrix.coeffs() || stats.std.size() != matrix.coeffs()) {
    throw ShapeError("standardize: stats cover " + std::to_string(stats.mean.size()) +
                     " coefficients, matrix has " + std::to_string(matrix.coeffs()));
  }
  MfccMatrix out = matrix;
  auto values = out.mutable_values();
  const std::size_t coeffs = matrix.coeffs();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t c = i % coeffs;
    values[i] = (values[i] - stats.mean[c]) / stats.std[c];
  }
  return out;
}

}  // namespace woodpest::features
