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

#pragma once

#include <span>
#include <vector>

#include "woodpest/features/mfcc.hpp"

namespace woodpest::features {

/// Per-coefficient mean and population standard deviation. Deviations below
/// 1e-8 are stored as 1.
struct StandardizeStats {
  std::vector<double> mean;
  std::vector<double> std;

  friend bool operator==(const StandardizeStats&, const StandardizeStats&) = default;
};

inline constexpr double kStdFloor = 1e-8;

/// Fits over every frame of every matrix. Throws InvalidArgument on an empty
/// set or inconsistent coefficient counts.
StandardizeStats fit_standardize(std::span<const MfccMatrix> matrices);

/// (x - mean) / std per coefficient.
MfccMatrix apply_standardize(const MfccMatrix& matrix, const StandardizeStats& stats);

}  // namespace woodpest::features
