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

// Fidelity-versus-error sweeps over gate constructions.

#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pulseforge/pulse_sequences.hpp"

namespace pulseforge {

// Error fractions to sweep. Points strictly increasing, all |eps| <= 1.
struct ErrorGrid {
  ErrorKind kind = ErrorKind::PulseLength;
  std::vector<double> points;

  static ErrorGrid uniform(ErrorKind kind, double lo, double hi, std::size_t count);
  /// Throws ArgumentError if the invariants above do not hold.
  void validate() const;
};

using GateFactory = std::function<ComplexMatrix3(const ErrorModel&)>;

struct Scheme {
  std::string label;
  GateFactory gate;
};

/// Scheme wrapping propagator(sequence, error), labelled with sequence.label.
Scheme sequence_scheme(PulseSequence sequence);

struct ScanResult {
  ErrorGrid grid;
  std::vector<std::string> labels;            // registration order
  std::vector<std::vector<double>> fidelity;  // [scheme][grid point]

  /// Throws ArgumentError for an unknown label.
  const std::vector<double>& series(const std::string& label) const;
};

// A scheme's gate factory threw. Message carries the label and fraction.
class SchemeError : public std::runtime_error {
 public:
  SchemeError(std::string label, double epsilon, const std::string& cause);
  const std::string& label() const noexcept { return label_; }
  double epsilon() const noexcept { return epsilon_; }

 private:
  std::string label_;
  double epsilon_;
};

// Fidelity of every scheme's gate against `target` at every grid point.
// Points are evaluated independently and assembled in grid order.
ScanResult scan(std::span<const Scheme> schemes, const ErrorGrid& grid,
                const ComplexMatrix3& target = sequential_gate());

/// 1 - (5 pi^2/96) eps^2 + (pi^4/4608) eps^4, the small-error expansion of the
/// sequential gate's pulse-length fidelity.
double ple_series_fidelity(double epsilon);

// Least-squares slope of (1 - F) against eps^2 through the origin, using the
// samples with |eps| <= 0.05. Needs at least five such samples spanning
// [-0.05, 0.05] (to rounding); throws ArgumentError otherwise.
double quadratic_loss_coefficient(std::span<const double> epsilon, std::span<const double> fidelity);

// Largest h such that every sample with |eps| <= h has F >= threshold, with h
// taken from the sampled |eps| values. Empty if the sample nearest zero
// already fails.
std::optional<double> good_fidelity_half_width(std::span<const double> epsilon,
                                               std::span<const double> fidelity,
                                               double threshold = 0.9);

double mean(std::span<const double> values);

// CSV: header `epsilon,<label1>,...`, one row per grid point, 9 significant
// digits, '.' decimal separator.
void export_csv(const ScanResult& result, std::ostream& out);
/// Throws IoError naming `path` on failure.
void export_csv(const ScanResult& result, const std::filesystem::path& path);

/// Parses export_csv output. Grid kind is not stored and is set to `kind`.
ScanResult parse_scan_csv(std::istream& in, ErrorKind kind = ErrorKind::PulseLength);

/// gnuplot commands plotting every column of `csv_path`.
void write_plot_script(std::ostream& out, const ScanResult& result,
                       const std::filesystem::path& csv_path);

}  // namespace pulseforge
