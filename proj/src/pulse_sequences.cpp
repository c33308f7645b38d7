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

#include "pulseforge/pulse_sequences.hpp"

#include <cmath>
#include <ostream>

#include "pulseforge/csv.hpp"
#include "pulseforge/errors.hpp"

namespace pulseforge {

std::string to_string(Channel channel) {
  return channel == Channel::Microwave ? "MW" : "RF";
}

std::string to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::PulseLength:
      return "ple";
    case ErrorKind::OffResonance:
      return "ore";
    case ErrorKind::None:
      break;
  }
  return "none";
}

ErrorKind parse_error_kind(const std::string& name) {
  if (name == "none") return ErrorKind::None;
  if (name == "ple") return ErrorKind::PulseLength;
  if (name == "ore") return ErrorKind::OffResonance;
  throw ArgumentError("unknown error kind '" + name + "' (expected none, ple or ore)");
}

ErrorModel::ErrorModel(ErrorKind kind, double fraction) : kind_(kind), fraction_(fraction) {
  if (!std::isfinite(fraction) || std::abs(fraction) > 1.0) {
    throw ArgumentError("error fraction must lie in [-1, 1], got " +
                        csv::format_number(fraction, 9));
  }
}

ErrorModel ErrorModel::pulse_length(double fraction) {
  return ErrorModel(ErrorKind::PulseLength, fraction);
}

ErrorModel ErrorModel::off_resonance(double fraction) {
  return ErrorModel(ErrorKind::OffResonance, fraction);
}

ErrorModel ErrorModel::of(ErrorKind kind, double fraction) {
  if (kind == ErrorKind::None) return ideal();
  return ErrorModel(kind, fraction);
}

double PulseSequence::duration() const {
  double total = 0.0;
  for (const auto& s : segments) total += s.angle;
  return total;
}

ComplexMatrix3 sequential_gate() {
  const double r = 1.0 / std::sqrt(2.0);
  ComplexMatrix3 u;
  u << r, r, 0.0,
       0.0, 0.0, -1.0,
       -r, r, 0.0;
  return u;
}

PulseSequence sequential_segments() {
  return {"sequential",
          {{Channel::Microwave, kPi / 2, kPi / 2}, {Channel::RadioFrequency, kPi, kPi / 2}}};
}

ComplexMatrix3 segment_propagator(const PulseSegment& segment, const ErrorModel& error) {
  if (!(segment.angle >= 0.0) || !std::isfinite(segment.angle)) {
    throw ArgumentError("pulse angle must be finite and non-negative");
  }
  const ComplexMatrix3 drive =
      segment.channel == Channel::Microwave ? mw_drive(segment.phase) : rf_drive(segment.phase);
  switch (error.kind()) {
    case ErrorKind::None:
      return expm_unitary(-0.5 * drive, segment.angle);
    case ErrorKind::PulseLength:
      return expm_unitary(-0.5 * drive, (1.0 + error.fraction()) * segment.angle);
    case ErrorKind::OffResonance:
      return expm_unitary((error.fraction() / 3.0) * z_operator() - 0.5 * drive, segment.angle);
  }
  throw ArgumentError("unknown error kind");
}

ComplexMatrix3 propagator(const PulseSequence& sequence, const ErrorModel& error) {
  if (sequence.segments.empty()) throw ArgumentError("propagator: empty pulse sequence");
  std::vector<ComplexMatrix3> factors;
  factors.reserve(sequence.segments.size());
  for (const auto& s : sequence.segments) factors.push_back(segment_propagator(s, error));
  return compose(factors);
}

double bb1_phase(double theta) { return std::acos(-theta / (4.0 * kPi)); }

std::array<double, 3> corpse_angles(double theta) {
  const double k = std::asin(std::sin(theta / 2.0) / 2.0);
  return {theta / 2.0 - k, 2.0 * kPi - 2.0 * k, 2.0 * kPi + theta / 2.0 - k};
}

namespace {

constexpr double kBase = kPi / 2;  // phase of the uncorrected pulses

void append_bb1(std::vector<PulseSegment>& out, Channel ch, double theta, double phi1,
                double phi2) {
  out.push_back({ch, theta / 2, kBase});
  out.push_back({ch, kPi, phi1});
  out.push_back({ch, 2 * kPi, phi2});
  out.push_back({ch, kPi, phi1});
  out.push_back({ch, theta / 2, kBase});
}

void append_corpse(std::vector<PulseSegment>& out, Channel ch, const std::array<double, 3>& a) {
  out.push_back({ch, a[0], kBase});
  out.push_back({ch, a[1], -kBase});
  out.push_back({ch, a[2], kBase});
}

}  // namespace

PulseSequence bb1_sequence(CompositeAngles angles) {
  PulseSequence seq{"bb1", {}};
  if (angles == CompositeAngles::Printed) {
    append_bb1(seq.segments, Channel::Microwave, kPi / 2, 1.04 * kPi, 2.12 * kPi);
    append_bb1(seq.segments, Channel::RadioFrequency, kPi, 1.08 * kPi, 2.24 * kPi);
    return seq;
  }
  const double mw = bb1_phase(kPi / 2);
  const double rf = bb1_phase(kPi);
  append_bb1(seq.segments, Channel::Microwave, kPi / 2, kBase + mw, kBase + 3 * mw);
  append_bb1(seq.segments, Channel::RadioFrequency, kPi, kBase + rf, kBase + 3 * rf);
  return seq;
}

PulseSequence corpse_sequence(CompositeAngles angles) {
  PulseSequence seq{"corpse", {}};
  if (angles == CompositeAngles::Printed) {
    append_corpse(seq.segments, Channel::Microwave, {0.14 * kPi, 1.77 * kPi, 2.14 * kPi});
    append_corpse(seq.segments, Channel::RadioFrequency,
                  {kPi / 3, 5 * kPi / 3, 7 * kPi / 3});
    return seq;
  }
  append_corpse(seq.segments, Channel::Microwave, corpse_angles(kPi / 2));
  append_corpse(seq.segments, Channel::RadioFrequency, corpse_angles(kPi));
  return seq;
}

void write_segment_table(std::ostream& out, const PulseSequence& sequence) {
  out << "idx,channel,tau_over_pi,theta_over_pi\n";
  for (std::size_t i = 0; i < sequence.segments.size(); ++i) {
    const auto& s = sequence.segments[i];
    out << i << ',' << to_string(s.channel) << ',' << csv::format_number(s.angle / kPi, 9)
        << ',' << csv::format_number(s.phase / kPi, 9) << '\n';
  }
}

}  // namespace pulseforge
