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

// Locale-independent number formatting and minimal CSV field handling.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pulseforge::csv {

/// Shortest "%.<digits>g"-style rendering; never depends on the C locale.
std::string format_number(double value, int significant_digits);

/// Parses a full field as a double; throws ArgumentError on junk.
double parse_number(std::string_view field);

std::vector<std::string> split_line(std::string_view line, char sep = ',');

std::string join(const std::vector<std::string>& fields, char sep = ',');

/// Strips surrounding whitespace (and a trailing '\r').
std::string_view trim(std::string_view text);

}  // namespace pulseforge::csv
