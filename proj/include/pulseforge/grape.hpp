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

// Gradient ascent pulse engineering (GRAPE) for simultaneous MW + RF driving,
// with the performance averaged over a training set of systematic error
// fractions.
//
// Controls are piecewise constant over N bins of width dt = T/N:
//
//   H(j) = sum_k u_k(j) H_k,  H_1 = sx20, H_2 = sy20, H_3 = sx23, H_4 = sy23
//   u_1 = -(u_m/2) cos th_m   u_2 = -(u_m/2) sin th_m
//   u_3 = -(u_r/2) cos th_r   u_4 = -(u_r/2) sin th_r
//
// Step propagators per error model:
//   None          exp(-i dt H(j))
//   PulseLength   exp(-i dt (1 - eps_f) H(j))
//   OffResonance  exp(-i dt (eps_g D + H(j))),  D = Z/3
//
// Note the pulse-length scaling here is (1 - eps_f), whereas the rectangular
// sequences use (1 + eps_f). Both are even in eps_f for symmetric training
// sets and scan grids.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pulseforge/grid.hpp"
#include "pulseforge/pulse_sequences.hpp"
#include "pulseforge/quantum_core.hpp"

namespace pulseforge::grape {

inline constexpr int kControls = 4;
/// Per-channel Rabi amplitude bound u_m, u_r <= Lambda = 1.
inline constexpr double kMaxRabi = 1.0;

using ControlArray = Eigen::Matrix<double, Eigen::Dynamic, kControls, Eigen::RowMajor>;

/// {sx20, sy20, sx23, sy23}
const std::array<ComplexMatrix3, kControls>& control_hamiltonians();
/// Z / 3, in units of Lambda.
const ComplexMatrix3& drift_generator();

class ControlSchedule {
 public:
  /// Throws ArgumentError unless bins >= 1 and total_time > 0.
  ControlSchedule(std::size_t bins, double total_time);
  ControlSchedule(ControlArray amplitudes, double time_step);

  std::size_t bins() const noexcept { return static_cast<std::size_t>(u_.rows()); }
  double time_step() const noexcept { return dt_; }
  double total_time() const noexcept { return dt_ * static_cast<double>(bins()); }

  const ControlArray& amplitudes() const noexcept { return u_; }
  ControlArray& amplitudes() noexcept { return u_; }
  double operator()(std::size_t bin, int control) const { return u_(bin, control); }

  /// Scales each (u1,u2) and (u3,u4) pair back onto the disk of radius
  /// kMaxRabi/2, i.e. u_m, u_r <= kMaxRabi. Returns *this.
  ControlSchedule& clip_to_bounds();
  double max_rabi() const;

 private:
  ControlArray u_;
  double dt_;
};

// Bin propagator. `bin` is zero based (0 <= bin < N); throws ArgumentError
// when out of range.
ComplexMatrix3 step_propagator(const ControlSchedule& s, std::size_t bin,
                               const ErrorModel& error);

/// U(T) = U_N ... U_1 under one error model.
ComplexMatrix3 evolve(const ControlSchedule& s, const ErrorModel& error);

/// Error models for a training set; {Ideal} when kind is None or the set is empty.
std::vector<ErrorModel> training_models(ErrorKind kind, const std::vector<double>& fractions);

// Average over the training set of |Tr(U_T^dag U_N ... U_1)|^2. Maximum is
// 9 (dimension squared).
double performance(const ControlSchedule& s, const ComplexMatrix3& target, ErrorKind kind,
                   const std::vector<double>& training);

struct Evaluation {
  double performance = 0.0;  // training-set average of |Tr(U_T^dag U)|^2
  double objective = 0.0;    // performance - penalty * dt * sum u^2
  ControlArray gradient;     // d objective / d u, first order in dt
};

// Performance, penalized objective and first-order GRAPE gradient
//
//   g_k(j) = -2 Re( Tr(i dt A_j^dag H_k B_j) Tr(B_j^dag A_j) ) - 2 penalty u_k(j) dt
//
// with B_j = U_j ... U_1 and A_j = U_{j+1}^dag ... U_N^dag U_T, averaged over
// the training set. Under pulse-length error H_k carries the (1 - eps_f)
// factor of the step. Training points are reduced in set order.
Evaluation evaluate(const ControlSchedule& s, const ComplexMatrix3& target, ErrorKind kind,
                    const std::vector<double>& training, double penalty);

ControlArray gradient(const ControlSchedule& s, const ComplexMatrix3& target, ErrorKind kind,
                      const std::vector<double>& training, double penalty);

struct GrapeConfig {
  double total_time = 6.0 * kPi;
  std::size_t bins = 400;
  ComplexMatrix3 target = sequential_gate();
  ErrorKind error_kind = ErrorKind::None;
  std::vector<double> training{-0.2, -0.1, 0.0, 0.1, 0.2};
  double penalty = 0.0;           // alpha_p
  double step_size = 16.0;        // eta, restored after every accepted step
  double min_step_size = 1e-12;   // backtracking floor; below it the run stops
  std::size_t max_iterations = 5000;
  double tolerance = 1e-9;        // on objective gain over `stall_window` iterations
  std::size_t stall_window = 20;
  std::uint64_t seed = 1;
  double init_scale = 0.25;       // u_k(j) ~ U[-scale, scale] before clipping
  std::size_t restarts = 5;
  // When set, restarts stop once every training point reaches this fidelity.
  // Unset: all restarts run and the highest objective wins.
  std::optional<double> stop_fidelity;

  /// Throws ArgumentError on inconsistent settings.
  void validate() const;
};

enum class StopReason { MaxIterations, Stalled, NoAscent };
std::string to_string(StopReason reason);

struct OptimizedPulse {
  ControlSchedule schedule{1, 1.0};
  double performance = 0.0;  // final training-set average
  double objective = 0.0;    // final penalized objective
  std::size_t iterations = 0;
  std::vector<double> trace;  // objective after initialization and each accepted step
  StopReason stop = StopReason::MaxIterations;
  std::uint64_t seed = 0;     // seed of the run that produced this pulse
  std::size_t restart = 0;
  GrapeConfig config;
};

// Single seeded ascent: random initialization, then u <- clip(u + eta g)
// with eta halved until the objective improves. Throws NumericError with the
// iteration index if the objective becomes non-finite.
OptimizedPulse ascend(const GrapeConfig& config);

// config.restarts seeded ascents (seed, seed+1, ...). Keeps the run with the
// highest objective; stops early only if config.stop_fidelity is set and
// reached at every training point.
OptimizedPulse optimize(const GrapeConfig& config);

/// Gate fidelity against `target` under each error model.
std::vector<double> fidelities(const ControlSchedule& s, const ComplexMatrix3& target,
                               ErrorKind kind, const std::vector<double>& fractions);

struct PulseAmplitudes {
  double mw_amplitude = 0.0;
  double mw_phase = 0.0;  // [0, 2 pi)
  double rf_amplitude = 0.0;
  double rf_phase = 0.0;  // [0, 2 pi)
};

std::vector<PulseAmplitudes> schedule_to_pulses(const ControlSchedule& s);
ControlArray pulses_to_controls(const std::vector<PulseAmplitudes>& pulses);

// Pulse CSV: header `bin,t_start,u_m,theta_m_over_pi,u_r,theta_r_over_pi`,
// one row per bin. Values are written with 17 significant digits so that a
// re-import reproduces every control to rounding.
void write_pulse_csv(std::ostream& out, const ControlSchedule& s);

// Pulse CSV followed by `# key=value` lines describing the run.
void write_checkpoint(std::ostream& out, const OptimizedPulse& pulse,
                      double lambda_physical_hz = 1e6);

struct LoadedPulse {
  ControlSchedule schedule{1, 1.0};
  std::vector<std::pair<std::string, std::string>> metadata;  // from `# key=value`
};

/// Reads a pulse CSV or checkpoint. Throws ArgumentError on malformed input.
LoadedPulse read_pulse_csv(std::istream& in);

/// Convergence trace CSV: `iteration,objective`.
void write_trace_csv(std::ostream& out, const OptimizedPulse& pulse);

}  // namespace pulseforge::grape
