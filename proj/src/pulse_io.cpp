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

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "pulseforge/csv.hpp"
#include "pulseforge/errors.hpp"
#include "pulseforge/grape.hpp"

namespace pulseforge::grape {

namespace {

constexpr int kDigits = 17;
constexpr const char* kPulseHeader = "bin,t_start,u_m,theta_m_over_pi,u_r,theta_r_over_pi";

std::string num(double v) { return csv::format_number(v, kDigits); }

std::string join_numbers(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ';';
    out += num(values[i]);
  }
  return out;
}

const std::string* find_meta(const LoadedPulse& p, const std::string& key) {
  for (const auto& [k, v] : p.metadata) {
    if (k == key) return &v;
  }
  return nullptr;
}

}  // namespace

void write_pulse_csv(std::ostream& out, const ControlSchedule& s) {
  out << kPulseHeader << '\n';
  const auto pulses = schedule_to_pulses(s);
  for (std::size_t j = 0; j < pulses.size(); ++j) {
    const auto& p = pulses[j];
    out << j << ',' << num(s.time_step() * static_cast<double>(j)) << ',' << num(p.mw_amplitude)
        << ',' << num(p.mw_phase / kPi) << ',' << num(p.rf_amplitude) << ','
        << num(p.rf_phase / kPi) << '\n';
  }
}

void write_checkpoint(std::ostream& out, const OptimizedPulse& pulse, double lambda_physical_hz) {
  write_pulse_csv(out, pulse.schedule);
  const auto& c = pulse.config;
  const auto& s = pulse.schedule;
  out << "# total_time=" << num(s.total_time()) << '\n'
      << "# bins=" << s.bins() << '\n'
      << "# time_step=" << num(s.time_step()) << '\n'
      << "# error=" << to_string(c.error_kind) << '\n'
      << "# training=" << join_numbers(c.training) << '\n'
      << "# penalty=" << num(c.penalty) << '\n'
      << "# step_size=" << num(c.step_size) << '\n'
      << "# max_iterations=" << c.max_iterations << '\n'
      << "# tolerance=" << num(c.tolerance) << '\n'
      << "# seed=" << c.seed << '\n'
      << "# run_seed=" << pulse.seed << '\n'
      << "# restart=" << pulse.restart << '\n'
      << "# restarts=" << c.restarts << '\n'
      << "# init_scale=" << num(c.init_scale) << '\n'
      << "# iterations=" << pulse.iterations << '\n'
      << "# stop=" << to_string(pulse.stop) << '\n'
      << "# performance=" << num(pulse.performance) << '\n'
      << "# objective=" << num(pulse.objective) << '\n'
      << "# lambda_physical_hz=" << num(lambda_physical_hz) << '\n'
      << "# total_time_s=" << num(s.total_time() / lambda_physical_hz) << '\n';
}

LoadedPulse read_pulse_csv(std::istream& in) {
  LoadedPulse loaded;
  std::vector<PulseAmplitudes> pulses;
  std::vector<double> starts;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = csv::trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      const auto body = csv::trim(text.substr(1));
      const auto eq = body.find('=');
      if (eq != std::string_view::npos) {
        loaded.metadata.emplace_back(std::string(csv::trim(body.substr(0, eq))),
                                     std::string(csv::trim(body.substr(eq + 1))));
      }
      continue;
    }
    if (!header_seen) {
      if (text != kPulseHeader) {
        throw ArgumentError("pulse file: expected header '" + std::string(kPulseHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = csv::split_line(text);
    if (fields.size() != 6) {
      throw ArgumentError("pulse file line " + std::to_string(line_no) + ": expected 6 fields");
    }
    if (csv::parse_number(fields[0]) != static_cast<double>(pulses.size())) {
      throw ArgumentError("pulse file line " + std::to_string(line_no) + ": bins out of order");
    }
    starts.push_back(csv::parse_number(fields[1]));
    pulses.push_back({csv::parse_number(fields[2]), csv::parse_number(fields[3]) * kPi,
                      csv::parse_number(fields[4]), csv::parse_number(fields[5]) * kPi});
  }
  if (!header_seen || pulses.empty()) throw ArgumentError("pulse file: no pulse rows");

  double dt = 0.0;
  if (const auto* v = find_meta(loaded, "time_step")) {
    dt = csv::parse_number(*v);
  } else if (const auto* t = find_meta(loaded, "total_time")) {
    dt = csv::parse_number(*t) / static_cast<double>(pulses.size());
  } else if (pulses.size() >= 2) {
    dt = (starts.back() - starts.front()) / static_cast<double>(pulses.size() - 1);
  } else {
    throw ArgumentError("pulse file: cannot infer the bin width of a single-bin pulse");
  }
  loaded.schedule = ControlSchedule(pulses_to_controls(pulses), dt);
  return loaded;
}

void write_trace_csv(std::ostream& out, const OptimizedPulse& pulse) {
  out << "iteration,objective\n";
  for (std::size_t i = 0; i < pulse.trace.size(); ++i) {
    out << i << ',' << csv::format_number(pulse.trace[i], 12) << '\n';
  }
}

}  // namespace pulseforge::grape
