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

#pragma once

#include <cstddef>
#include <vector>

namespace pulseforge {

// `count` evenly spaced values on [lo, hi], endpoints exact; a single point
// yields {lo}. Values within rounding of zero are snapped to 0 so symmetric
// grids contain an exact zero. Throws ArgumentError if count == 0, or if
// count > 1 and hi <= lo.
std::vector<double> uniform_points(double lo, double hi, std::size_t count);

}  // namespace pulseforge
