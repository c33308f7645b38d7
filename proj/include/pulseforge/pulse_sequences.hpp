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

// Rectangular-pulse constructions of the Bell-state gate U_sq = U_r U_m and
// their composite (BB1, CORPSE) replacements, with systematic pulse-length
// and off-resonance distortions.

#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "pulseforge/quantum_core.hpp"

namespace pulseforge {

enum class Channel { Microwave, RadioFrequency };

std::string to_string(Channel channel);

// One rectangular pulse at the full amplitude u = Lambda. `angle` is the
// pulse area u*t (so also its duration in units of 1/Lambda).
struct PulseSegment {
  Channel channel = Channel::Microwave;
  double angle = 0.0;
  double phase = 0.0;
};

enum class ErrorKind { None, PulseLength, OffResonance };

std::string to_string(ErrorKind kind);
/// "none", "ple", "ore"; throws ArgumentError otherwise.
ErrorKind parse_error_kind(const std::string& name);

// Systematic error applied identically to every pulse of a sequence.
//   PulseLength:  eps_f = (T' - T) / T
//   OffResonance: eps_g = delta / Lambda
class ErrorModel {
 public:
  static ErrorModel ideal() { return {}; }
  static ErrorModel pulse_length(double fraction);
  static ErrorModel off_resonance(double fraction);
  /// kind == None ignores `fraction`.
  static ErrorModel of(ErrorKind kind, double fraction);

  ErrorKind kind() const noexcept { return kind_; }
  double fraction() const noexcept { return fraction_; }

 private:
  ErrorModel() = default;
  ErrorModel(ErrorKind kind, double fraction);

  ErrorKind kind_ = ErrorKind::None;
  double fraction_ = 0.0;
};

struct PulseSequence {
  std::string label;
  std::vector<PulseSegment> segments;  // segments[0] acts first

  /// Sum of segment areas, i.e. the total time at unit amplitude.
  double duration() const;
};

// How composite rotation angles and phases are generated.
//   ClosedForm: from the BB1 phase arccos(-theta / 4 pi) and the CORPSE
//               offset arcsin(sin(theta/2) / 2), exact to double precision.
//   Printed:    the two-decimal values (1.04 pi, 2.12 pi, 0.14 pi, ...) as
//               commonly tabulated.
enum class CompositeAngles { ClosedForm, Printed };

/// Exact matrix (1/sqrt2)[[1,1,0],[0,0,-sqrt2],[-1,1,0]].
ComplexMatrix3 sequential_gate();

/// MW(pi/2, pi/2) followed by RF(pi, pi/2); duration 3 pi / 2.
PulseSequence sequential_segments();

// Propagator of one segment on its channel block b (MW: (2,0), RF: (2,3)),
// with D = cos(phase) sigma_x^b + sin(phase) sigma_y^b:
//   None:          exp(+i (angle/2) D)
//   PulseLength:   exp(+i (1 + eps_f)(angle/2) D)
//   OffResonance:  exp(-i angle [(eps_g/3) Z - D/2])
// The detuning drift acts on the full three-level space for the duration of
// the pulse. Throws ArgumentError for a negative angle.
ComplexMatrix3 segment_propagator(const PulseSegment& segment, const ErrorModel& error);

/// Time-ordered product of the segment propagators under one error model.
ComplexMatrix3 propagator(const PulseSequence& sequence, const ErrorModel& error);

/// BB1 phase offset arccos(-theta / (4 pi)) for a target rotation theta.
double bb1_phase(double theta);

/// CORPSE pulse areas (first, second, third in time order) for a target
/// rotation theta: (theta/2 - k, 2 pi - 2k, 2 pi + theta/2 - k), k = arcsin(sin(theta/2)/2).
std::array<double, 3> corpse_angles(double theta);

// BB1 on each transition: (theta/2)_0 pi_phi 2pi_3phi pi_phi (theta/2)_0 about
// base phase pi/2, for MW theta = pi/2 and RF theta = pi. Ten segments.
PulseSequence bb1_sequence(CompositeAngles angles = CompositeAngles::ClosedForm);

// CORPSE on each transition, three segments with phases +pi/2, -pi/2, +pi/2.
// Six segments.
PulseSequence corpse_sequence(CompositeAngles angles = CompositeAngles::ClosedForm);

// Segment table with header `idx,channel,tau_over_pi,theta_over_pi`.
void write_segment_table(std::ostream& out, const PulseSequence& sequence);

}  // namespace pulseforge
