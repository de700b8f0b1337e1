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

#include <complex>
#include <span>
#include <vector>

namespace woodpest::features {

bool is_power_of_two(std::size_t n);

/// In-place iterative radix-2 FFT. Size must be a power of two. The inverse
/// transform includes the 1/N scale.
void fft_inplace(std::span<std::complex<double>> data, bool inverse = false);

/// One-sided squared-magnitude spectrum |X[k]|^2, k = 0..N/2, of a real frame
/// whose length N is a power of two.
std::vector<double> power_spectrum(std::span<const double> frame);

}  // namespace woodpest::features
