// Copyright 2026 The PulseForge Authors. All Rights Reserved.
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

#include "pulseforge/grid.hpp"

#include <algorithm>
#include <cmath>

#include "pulseforge/errors.hpp"

namespace pulseforge {

std::vector<double> uniform_points(double lo, double hi, std::size_t count) {
  if (count == 0) throw ArgumentError("grid needs at least one point");
  if (count == 1) return {lo};
  if (!(hi > lo)) throw ArgumentError("grid maximum must exceed minimum");
  std::vector<double> out(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  const double eps = 1e-12 * std::max(std::abs(lo), std::abs(hi));
  for (double& v : out) {
    if (std::abs(v) < eps) v = 0.0;
  }
  return out;
}

}  // namespace pulseforge
