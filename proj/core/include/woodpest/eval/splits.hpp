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

#include <cstdint>
#include <span>
#include <vector>

#include "woodpest/audio/clip.hpp"

namespace woodpest::eval {

/// Disjoint train/test row indices, each sorted ascending.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Per class: seeded shuffle, then floor(count * ratio + 0.5) rows (at least
/// one) go to test. Throws InvalidDatasetError if a class is empty.
Split stratified_split(std::span<const audio::ClipLabel> labels, double ratio, std::uint64_t seed);

/// Stratified k-fold: per class, seeded shuffle and contiguous near-equal
/// chunks, chunk f joining test fold f. Requires k >= 2 (InvalidArgument)
/// and every class to hold at least k rows (InvalidDatasetError).
std::vector<Split> kfold_indices(std::span<const audio::ClipLabel> labels, std::size_t k,
                                 std::uint64_t seed);

}  // namespace woodpest::eval
