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

#include "pulseforge/fidelity_scan.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <string>

#include "pulseforge/csv.hpp"
#include "pulseforge/errors.hpp"
#include "pulseforge/grid.hpp"

namespace pulseforge {

namespace {
constexpr int kDigits = 9;
constexpr double kFitHalfWidth = 0.05;
}  // namespace

ErrorGrid ErrorGrid::uniform(ErrorKind kind, double lo, double hi, std::size_t count) {
  ErrorGrid g{kind, uniform_points(lo, hi, count)};
  g.validate();
  return g;
}

void ErrorGrid::validate() const {
  if (kind == ErrorKind::None) throw ArgumentError("grid error kind must be ple or ore");
  if (points.empty()) throw ArgumentError("grid needs at least one point");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i]) || std::abs(points[i]) > 1.0) {
      throw ArgumentError("grid points must lie in [-1, 1]");
    }
    if (i > 0 && !(points[i] > points[i - 1])) {
      throw ArgumentError("grid points must be strictly increasing");
    }
  }
}

Scheme sequence_scheme(PulseSequence sequence) {
  std::string label = sequence.label;
  return {std::move(label), [seq = std::move(sequence)](const ErrorModel& e) {
            return propagator(seq, e);
          }};
}

const std::vector<double>& ScanResult::series(const std::string& label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw ArgumentError("no scheme labelled '" + label + "'");
  return fidelity[static_cast<std::size_t>(it - labels.begin())];
}

SchemeError::SchemeError(std::string label, double epsilon, const std::string& cause)
    : std::runtime_error("scheme '" + label + "' at epsilon=" +
                         csv::format_number(epsilon, kDigits) + ": " + cause),
      label_(std::move(label)),
      epsilon_(epsilon) {}

ScanResult scan(std::span<const Scheme> schemes, const ErrorGrid& grid,
                const ComplexMatrix3& target) {
  if (schemes.empty()) throw ArgumentError("scan needs at least one scheme");
  grid.validate();
  ScanResult result{grid, {}, {}};
  for (const auto& scheme : schemes) {
    result.labels.push_back(scheme.label);
    std::vector<double> series;
    series.reserve(grid.points.size());
    for (double e : grid.points) {
      try {
        series.push_back(gate_fidelity(scheme.gate(ErrorModel::of(grid.kind, e)), target));
      } catch (const std::exception& ex) {
        throw SchemeError(scheme.label, e, ex.what());
      }
    }
    result.fidelity.push_back(std::move(series));
  }
  return result;
}

double ple_series_fidelity(double epsilon) {
  const double e2 = epsilon * epsilon;
  return 1.0 - (5.0 * kPi * kPi / 96.0) * e2 + (std::pow(kPi, 4) / 4608.0) * e2 * e2;
}

double quadratic_loss_coefficient(std::span<const double> epsilon,
                                  std::span<const double> fidelity) {
  if (epsilon.size() != fidelity.size()) {
    throw ArgumentError("epsilon and fidelity lengths differ");
  }
  constexpr double slack = 1e-9;
  double num = 0.0, den = 0.0, lo = 0.0, hi = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < epsilon.size(); ++i) {
    const double e = epsilon[i];
    if (std::abs(e) > kFitHalfWidth + slack) continue;
    const double x = e * e;
    num += x * (1.0 - fidelity[i]);
    den += x * x;
    lo = std::min(lo, e);
    hi = std::max(hi, e);
    ++used;
  }
  if (used < 5 || lo > -kFitHalfWidth + slack || hi < kFitHalfWidth - slack) {
    throw ArgumentError("quadratic fit needs >= 5 points spanning [-0.05, 0.05]");
  }
  return den > 0.0 ? num / den : 0.0;
}

std::optional<double> good_fidelity_half_width(std::span<const double> epsilon,
                                               std::span<const double> fidelity,
                                               double threshold) {
  if (epsilon.size() != fidelity.size()) {
    throw ArgumentError("epsilon and fidelity lengths differ");
  }
  std::vector<std::size_t> order(epsilon.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(epsilon[a]) < std::abs(epsilon[b]);
  });
  std::optional<double> half;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const double r = std::abs(epsilon[order[k]]);
    // All samples sharing this |eps| must pass before r is admitted.
    if (fidelity[order[k]] < threshold) break;
    if (k + 1 < order.size() && std::abs(epsilon[order[k + 1]]) == r) continue;
    half = r;
  }
  return half;
}

double mean(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("mean of an empty series");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

void export_csv(const ScanResult& result, std::ostream& out) {
  out << "epsilon";
  for (const auto& l : result.labels) out << ',' << l;
  out << '\n';
  for (std::size_t i = 0; i < result.grid.points.size(); ++i) {
    out << csv::format_number(result.grid.points[i], kDigits);
    for (const auto& s : result.fidelity) out << ',' << csv::format_number(s[i], kDigits);
    out << '\n';
  }
}

void export_csv(const ScanResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  export_csv(result, out);
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

ScanResult parse_scan_csv(std::istream& in, ErrorKind kind) {
  ScanResult r;
  r.grid.kind = kind;
  std::string line;
  if (!std::getline(in, line)) throw ArgumentError("scan csv: missing header");
  auto header = csv::split_line(line);
  if (header.empty() || header.front() != "epsilon") {
    throw ArgumentError("scan csv: header must start with 'epsilon'");
  }
  r.labels.assign(header.begin() + 1, header.end());
  r.fidelity.resize(r.labels.size());
  while (std::getline(in, line)) {
    if (csv::trim(line).empty()) continue;
    const auto fields = csv::split_line(line);
    if (fields.size() != header.size()) throw ArgumentError("scan csv: ragged row");
    r.grid.points.push_back(csv::parse_number(fields[0]));
    for (std::size_t k = 1; k < fields.size(); ++k) {
      r.fidelity[k - 1].push_back(csv::parse_number(fields[k]));
    }
  }
  return r;
}

void write_plot_script(std::ostream& out, const ScanResult& result,
                       const std::filesystem::path& csv_path) {
  const bool ple = result.grid.kind == ErrorKind::PulseLength;
  out << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set xlabel '" << (ple ? "pulse-length error fraction" : "off-resonance error fraction")
      << "'\n"
      << "set ylabel 'gate fidelity'\n"
      << "set yrange [0:1.02]\n"
      << "plot ";
  for (std::size_t k = 0; k < result.labels.size(); ++k) {
    if (k) out << ", \\\n     ";
    out << "'" << csv_path.generic_string() << "' using 1:" << k + 2 << " with lines";
  }
  out << '\n';
}

}  // namespace pulseforge
