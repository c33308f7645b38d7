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

#include "pulseforge/grape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "pulseforge/errors.hpp"

namespace pulseforge::grape {

namespace {

constexpr Complex kI{0.0, 1.0};

// Uniform double in [0, 1) from the top 53 bits, independent of the
// standard library's distribution implementation.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Scale applied to the control part of the generator.
double control_scale(const ErrorModel& e) {
  return e.kind() == ErrorKind::PulseLength ? 1.0 - e.fraction() : 1.0;
}

// exp(-i t G) for the bin generator, which in the basis (|0>, |2>, |3>) is
//
//   G = [[-d, conj(a), 0], [a, 2d, b], [0, conj(b), -d]]
//
// with a = s (u1 + i u2), b = s (u3 + i u4) and d = eps_g / 3. Level 2 couples
// only to the bright state B = (conj(a)|0> + conj(b)|3>) / W, W^2 = |a|^2 + |b|^2.
// The dark state (b|0> - a|3>) / W is an eigenvector with eigenvalue -d, and
// {B, |2>} carries the real symmetric block [[-d, W], [W, 2d]], which is
// diagonalized in closed form. Exact; agrees with expm_unitary to rounding.
ComplexMatrix3 step_exponential(const ControlArray& u, std::size_t bin, const ErrorModel& e,
                                double t) {
  const auto row = static_cast<Eigen::Index>(bin);
  const double scale = control_scale(e);
  const Complex a = scale * Complex(u(row, 0), u(row, 1));
  const Complex b = scale * Complex(u(row, 2), u(row, 3));
  const double d = e.kind() == ErrorKind::OffResonance ? e.fraction() / 3.0 : 0.0;

  const double w2 = std::norm(a) + std::norm(b);
  const double half_split = 1.5 * d;
  const double r = std::sqrt(half_split * half_split + w2);
  const double c = std::cos(r * t);
  const double sinc = r > 0.0 ? std::sin(r * t) / r : t;
  const Complex mean_phase = std::polar(1.0, -0.5 * d * t);
  const Complex dark = std::polar(1.0, d * t);
  const Complex bright = mean_phase * Complex(c, half_split * sinc);   // <B|U|B>
  const Complex level2 = mean_phase * Complex(c, -half_split * sinc);  // <2|U|2>
  const Complex cross = mean_phase * Complex(0.0, -sinc);              // <B|U|2> / W
  // Projector weight onto B, written to stay finite as W -> 0.
  const Complex k = w2 > 0.0 ? (bright - dark) / w2 : Complex(0.0);

  ComplexMatrix3 m;
  m(0, 0) = dark + k * std::norm(a);
  m(0, 1) = cross * std::conj(a);
  m(0, 2) = k * std::conj(a) * b;
  m(1, 0) = cross * a;
  m(1, 1) = level2;
  m(1, 2) = cross * b;
  m(2, 0) = k * std::conj(b) * a;
  m(2, 1) = cross * std::conj(b);
  m(2, 2) = dark + k * std::norm(b);
  return m;
}

double wrap_phase(double phase) {
  double p = std::fmod(phase, 2.0 * kPi);
  if (p < 0.0) p += 2.0 * kPi;
  if (p >= 2.0 * kPi) p = 0.0;
  return p;
}

}  // namespace

const std::array<ComplexMatrix3, kControls>& control_hamiltonians() {
  static const std::array<ComplexMatrix3, kControls> hs{sigma_x(2, 0), sigma_y(2, 0),
                                                        sigma_x(2, 3), sigma_y(2, 3)};
  return hs;
}

const ComplexMatrix3& drift_generator() {
  static const ComplexMatrix3 d = z_operator() / 3.0;
  return d;
}

ControlSchedule::ControlSchedule(std::size_t bins, double total_time)
    : u_(ControlArray::Zero(static_cast<Eigen::Index>(bins), kControls)), dt_(0.0) {
  if (bins == 0) throw ArgumentError("schedule needs at least one bin");
  if (!(total_time > 0.0) || !std::isfinite(total_time)) {
    throw ArgumentError("total time must be positive");
  }
  dt_ = total_time / static_cast<double>(bins);
}

ControlSchedule::ControlSchedule(ControlArray amplitudes, double time_step)
    : u_(std::move(amplitudes)), dt_(time_step) {
  if (u_.rows() == 0) throw ArgumentError("schedule needs at least one bin");
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw ArgumentError("time step must be positive");
  if (!u_.allFinite()) throw ArgumentError("control amplitudes must be finite");
}

ControlSchedule& ControlSchedule::clip_to_bounds() {
  constexpr double radius = kMaxRabi / 2.0;
  for (Eigen::Index j = 0; j < u_.rows(); ++j) {
    for (int c = 0; c < kControls; c += 2) {
      const double r = std::hypot(u_(j, c), u_(j, c + 1));
      if (r > radius) {
        const double s = radius / r;
        u_(j, c) *= s;
        u_(j, c + 1) *= s;
      }
    }
  }
  return *this;
}

double ControlSchedule::max_rabi() const {
  double m = 0.0;
  for (Eigen::Index j = 0; j < u_.rows(); ++j) {
    m = std::max({m, 2.0 * std::hypot(u_(j, 0), u_(j, 1)), 2.0 * std::hypot(u_(j, 2), u_(j, 3))});
  }
  return m;
}

ComplexMatrix3 step_propagator(const ControlSchedule& s, std::size_t bin,
                               const ErrorModel& error) {
  if (bin >= s.bins()) {
    throw ArgumentError("bin index " + std::to_string(bin) + " out of range [0, " +
                        std::to_string(s.bins()) + ")");
  }
  return step_exponential(s.amplitudes(), bin, error, s.time_step());
}

ComplexMatrix3 evolve(const ControlSchedule& s, const ErrorModel& error) {
  ComplexMatrix3 u = ComplexMatrix3::Identity();
  for (std::size_t j = 0; j < s.bins(); ++j) u = (step_propagator(s, j, error) * u).eval();
  return u;
}

std::vector<ErrorModel> training_models(ErrorKind kind, const std::vector<double>& fractions) {
  if (kind == ErrorKind::None || fractions.empty()) return {ErrorModel::ideal()};
  std::vector<ErrorModel> models;
  models.reserve(fractions.size());
  for (double e : fractions) models.push_back(ErrorModel::of(kind, e));
  return models;
}

double performance(const ControlSchedule& s, const ComplexMatrix3& target, ErrorKind kind,
                   const std::vector<double>& training) {
  const auto models = training_models(kind, training);
  double sum = 0.0;
  for (const auto& m : models) sum += std::norm((target.adjoint() * evolve(s, m)).trace());
  return sum / static_cast<double>(models.size());
}

Evaluation evaluate(const ControlSchedule& s, const ComplexMatrix3& target, ErrorKind kind,
                    const std::vector<double>& training, double penalty) {
  const auto models = training_models(kind, training);
  const std::size_t n = s.bins();
  const double dt = s.time_step();
  const auto& hs = control_hamiltonians();

  Evaluation out;
  out.gradient = ControlArray::Zero(static_cast<Eigen::Index>(n), kControls);
  std::vector<ComplexMatrix3> steps(n);
  std::vector<ComplexMatrix3> forward(n);  // B_j = U_j ... U_1

  for (const auto& model : models) {
    ComplexMatrix3 b = ComplexMatrix3::Identity();
    for (std::size_t j = 0; j < n; ++j) {
      steps[j] = step_exponential(s.amplitudes(), j, model, dt);
      b = (steps[j] * b).eval();
      forward[j] = b;
    }
    const Complex overlap = (target.adjoint() * b).trace();
    out.performance += std::norm(overlap);

    // Tr(A_j^dag H B_j) = Tr(H B_j A_j^dag) and Tr(B_j^dag A_j) = conj(overlap)
    // for every j.
    const double scale = control_scale(model);
    ComplexMatrix3 a = target;  // A_N
    for (std::size_t j = n; j-- > 0;) {
      const ComplexMatrix3 m = forward[j] * a.adjoint();
      for (int k = 0; k < kControls; ++k) {
        const Complex t = scale * (hs[k].cwiseProduct(m.transpose())).sum();
        out.gradient(static_cast<Eigen::Index>(j), k) +=
            -2.0 * (kI * dt * t * std::conj(overlap)).real();
      }
      a = (steps[j].adjoint() * a).eval();
    }
  }

  const double count = static_cast<double>(models.size());
  out.performance /= count;
  out.gradient /= count;
  out.objective = out.performance - penalty * dt * s.amplitudes().squaredNorm();
  out.gradient -= 2.0 * penalty * dt * s.amplitudes();
  return out;
}

ControlArray gradient(const ControlSchedule& s, const ComplexMatrix3& target, ErrorKind kind,
                      const std::vector<double>& training, double penalty) {
  return evaluate(s, target, kind, training, penalty).gradient;
}

void GrapeConfig::validate() const {
  if (bins == 0) throw ArgumentError("bins must be >= 1");
  if (!(total_time > 0.0) || !std::isfinite(total_time)) {
    throw ArgumentError("total time must be positive");
  }
  if (!is_unitary(target, 1e-8)) throw ArgumentError("target gate must be unitary");
  if (error_kind != ErrorKind::None && training.empty()) {
    throw ArgumentError("training set must be non-empty when an error kind is selected");
  }
  for (double e : training) {
    if (!std::isfinite(e) || std::abs(e) > 1.0) {
      throw ArgumentError("training fractions must lie in [-1, 1]");
    }
  }
  if (!(penalty >= 0.0)) throw ArgumentError("penalty weight must be >= 0");
  if (!(step_size > 0.0)) throw ArgumentError("step size must be > 0");
  if (!(min_step_size > 0.0)) throw ArgumentError("minimum step size must be > 0");
  if (!(init_scale >= 0.0)) throw ArgumentError("initial amplitude scale must be >= 0");
  if (restarts == 0) throw ArgumentError("restarts must be >= 1");
  if (stall_window == 0) throw ArgumentError("stall window must be >= 1");
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Stalled:
      return "stalled";
    case StopReason::NoAscent:
      return "no-ascent";
    case StopReason::MaxIterations:
      break;
  }
  return "max-iterations";
}

OptimizedPulse ascend(const GrapeConfig& config) {
  config.validate();
  ControlSchedule s(config.bins, config.total_time);
  std::mt19937_64 rng(config.seed);
  auto& u = s.amplitudes();
  for (Eigen::Index j = 0; j < u.rows(); ++j) {
    for (int k = 0; k < kControls; ++k) {
      u(j, k) = config.init_scale * (2.0 * unit_uniform(rng) - 1.0);
    }
  }
  s.clip_to_bounds();

  // Numeric failures are reported with the iteration that produced them.
  const auto fail = [](std::size_t iteration, const std::string& cause) {
    std::string msg = "non-finite performance at iteration " + std::to_string(iteration);
    if (!cause.empty()) msg += ": " + cause;
    return NumericError(msg);
  };
  const auto eval = [&](const ControlSchedule& cs, std::size_t iteration) {
    Evaluation e;
    try {
      e = evaluate(cs, config.target, config.error_kind, config.training, config.penalty);
    } catch (const NumericError& ex) {
      throw fail(iteration, ex.what());
    }
    if (!std::isfinite(e.objective) || !e.gradient.allFinite()) throw fail(iteration, "");
    return e;
  };
  // Objective without the gradient pass, computed exactly as in evaluate().
  const auto objective = [&](const ControlSchedule& cs, std::size_t iteration) {
    double v = 0.0;
    try {
      v = performance(cs, config.target, config.error_kind, config.training) -
          config.penalty * cs.time_step() * cs.amplitudes().squaredNorm();
    } catch (const NumericError& ex) {
      throw fail(iteration, ex.what());
    }
    if (!std::isfinite(v)) throw fail(iteration, "");
    return v;
  };

  Evaluation current = eval(s, 0);
  OptimizedPulse out;
  out.config = config;
  out.seed = config.seed;
  out.trace.push_back(current.objective);
  out.stop = StopReason::MaxIterations;

  std::size_t it = 0;
  while (it < config.max_iterations) {
    double eta = config.step_size;
    bool accepted = false;
    while (eta >= config.min_step_size) {
      ControlSchedule trial = s;
      trial.amplitudes() += eta * current.gradient;
      trial.clip_to_bounds();
      if (objective(trial, it + 1) > current.objective) {
        Evaluation next = eval(trial, it + 1);
        if (next.objective > current.objective) {
          s = std::move(trial);
          current = std::move(next);
          accepted = true;
          break;
        }
      }
      eta *= 0.5;
    }
    if (!accepted) {
      out.stop = StopReason::NoAscent;
      break;
    }
    ++it;
    out.trace.push_back(current.objective);
    if (it >= config.stall_window &&
        out.trace[it] - out.trace[it - config.stall_window] < config.tolerance) {
      out.stop = StopReason::Stalled;
      break;
    }
  }

  out.schedule = std::move(s);
  out.performance = current.performance;
  out.objective = current.objective;
  out.iterations = it;
  return out;
}

std::vector<double> fidelities(const ControlSchedule& s, const ComplexMatrix3& target,
                               ErrorKind kind, const std::vector<double>& fractions) {
  std::vector<double> out;
  for (const auto& m : training_models(kind, fractions)) {
    out.push_back(gate_fidelity(evolve(s, m), target));
  }
  return out;
}

OptimizedPulse optimize(const GrapeConfig& config) {
  config.validate();
  OptimizedPulse best;
  bool have_best = false;
  for (std::size_t r = 0; r < config.restarts; ++r) {
    GrapeConfig run = config;
    run.seed = config.seed + r;
    OptimizedPulse pulse = ascend(run);
    pulse.restart = r;
    pulse.config = config;
    if (!have_best || pulse.objective > best.objective) {
      best = std::move(pulse);
      have_best = true;
    }
    if (!config.stop_fidelity) continue;
    const auto f = fidelities(best.schedule, config.target, config.error_kind, config.training);
    if (*std::min_element(f.begin(), f.end()) >= *config.stop_fidelity) break;
  }
  return best;
}

std::vector<PulseAmplitudes> schedule_to_pulses(const ControlSchedule& s) {
  std::vector<PulseAmplitudes> out(s.bins());
  const auto& u = s.amplitudes();
  for (std::size_t j = 0; j < s.bins(); ++j) {
    const auto row = static_cast<Eigen::Index>(j);
    out[j].mw_amplitude = 2.0 * std::hypot(u(row, 0), u(row, 1));
    out[j].mw_phase = wrap_phase(std::atan2(-u(row, 1), -u(row, 0)));
    out[j].rf_amplitude = 2.0 * std::hypot(u(row, 2), u(row, 3));
    out[j].rf_phase = wrap_phase(std::atan2(-u(row, 3), -u(row, 2)));
  }
  return out;
}

ControlArray pulses_to_controls(const std::vector<PulseAmplitudes>& pulses) {
  ControlArray u(static_cast<Eigen::Index>(pulses.size()), kControls);
  for (std::size_t j = 0; j < pulses.size(); ++j) {
    const auto row = static_cast<Eigen::Index>(j);
    const auto& p = pulses[j];
    u(row, 0) = -0.5 * p.mw_amplitude * std::cos(p.mw_phase);
    u(row, 1) = -0.5 * p.mw_amplitude * std::sin(p.mw_phase);
    u(row, 2) = -0.5 * p.rf_amplitude * std::cos(p.rf_phase);
    u(row, 3) = -0.5 * p.rf_amplitude * std::sin(p.rf_phase);
  }
  return u;
}

}  // namespace pulseforge::grape
