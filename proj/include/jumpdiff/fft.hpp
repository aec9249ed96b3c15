// Copyright 2026 The jumpdiff Authors
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

#include <cstddef>
#include <span>
#include <vector>

namespace jumpdiff::fft {

/// Linear convolution of two centred, equally spaced sequences of the same
/// odd length L, returning the central L samples of the full convolution
/// scaled by `step`. Trapezoid weights are applied to `a`. Zero padding to
/// at least 2L keeps the product free of circular wrap-around.
std::vector<double> convolve_centered(std::span<const double> a,
                                      std::span<const double> b, double step);

/// Zero negative samples. Returns the removed mass (sum of |negatives| * step).
double clip_negative(std::span<double> values, double step);

}  // namespace jumpdiff::fft
