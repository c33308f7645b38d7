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

// Operators on the three-level subspace {|0>, |2>, |3>} of the NV electron
// spin coupled to a 13C nuclear spin.
//
//   |0> = |0>_e |0>_n      |2> = |1>_e |0>_n      |3> = |1>_e |1>_n
//
// Row/column order is fixed as (|0>, |2>, |3>). The microwave (MW) drive
// couples |0> <-> |2>, the radio-frequency (RF) drive couples |2> <-> |3>.
//
// Units: amplitudes and detunings are in units of the maximum Rabi amplitude
// Lambda, times in units of 1/Lambda. Only products u*t enter a propagator.

#pragma once

#include <complex>
#include <numbers>
#include <span>

#include <Eigen/Dense>

namespace pulseforge {

using Complex = std::complex<double>;
using ComplexMatrix3 = Eigen::Matrix3cd;
using StateVector3 = Eigen::Vector3cd;

inline constexpr double kPi = std::numbers::pi;

// Lab-frame frequencies of the hyperfine-split ground manifold. The
// rotating-frame model below is frequency free; these are reported by the
// CLI only.
struct PhysicalConstants {
  static constexpr double omega_02_hz = 2.88e9;  // |0> <-> |2> (ESR)
  static constexpr double omega_03_hz = 130e6;   // |0> <-> |3> hyperfine
  static constexpr double omega_01_hz = 2e6;     // |0> <-> |1> nuclear
};

// Basis position of a level label; throws ArgumentError unless level is 0, 2 or 3.
int basis_position(int level);

/// |p><q|
ComplexMatrix3 sigma(int p, int q);
/// sigma_pq + sigma_qp
ComplexMatrix3 sigma_x(int p, int q);
/// i (sigma_pq - sigma_qp)
ComplexMatrix3 sigma_y(int p, int q);
/// sigma_pp - sigma_qq, so that sigma_z(2,0) = -sigma_00 + sigma_22.
ComplexMatrix3 sigma_z(int p, int q);

/// Z = sigma_z(2,0) + sigma_z(2,3) = diag(-1, 2, -1). The detuning drift is (delta/3) Z.
ComplexMatrix3 z_operator();

/// Drive generator cos(phase) sigma_x + sin(phase) sigma_y on the MW (2,0)
/// or RF (2,3) block.
ComplexMatrix3 mw_drive(double phase);
ComplexMatrix3 rf_drive(double phase);

struct DriveParameters {
  double detuning = 0.0;      // delta / Lambda
  double mw_amplitude = 0.0;  // u_m >= 0
  double mw_phase = 0.0;      // theta_m
  double rf_amplitude = 0.0;  // u_r >= 0
  double rf_phase = 0.0;      // theta_r
};

// Effective rotating-frame Hamiltonian
//
//   H = (delta/3) Z - (u_m/2)(cos th_m sx20 + sin th_m sy20)
//                   - (u_r/2)(cos th_r sx23 + sin th_r sy23)
//
// assembled directly in matrix form. Throws ArgumentError for negative
// amplitudes.
ComplexMatrix3 effective_hamiltonian(const DriveParameters& drive);

double max_abs(const ComplexMatrix3& m);
bool is_hermitian(const ComplexMatrix3& m, double tol = 1e-12);
/// max |U^dag U - I|
double unitarity_error(const ComplexMatrix3& u);
bool is_unitary(const ComplexMatrix3& u, double tol = 1e-10);

// Eigen-decomposition H = V diag(w) V^dag of a Hermitian matrix.
struct HermitianEigensystem {
  Eigen::Vector3d values;
  ComplexMatrix3 vectors;

  ComplexMatrix3 reconstruct() const;
};

/// Throws NumericError if h is not Hermitian to within ~1e-10 relative.
HermitianEigensystem eigensystem(const ComplexMatrix3& h);

/// exp(-i h t) for Hermitian h, via the eigensystem of h.
ComplexMatrix3 expm_unitary(const ComplexMatrix3& h, double t);

/// Time-ordered product; factors[0] acts first, so the result is
/// factors[n-1] * ... * factors[0]. Throws ArgumentError on an empty list.
ComplexMatrix3 compose(std::span<const ComplexMatrix3> factors);

// Gate overlap fidelity |Tr(U_a^dag U_i) / Tr(U_i^dag U_i)|^(1/2).
//
// The outer square root is kept as written for this model, so F is the square
// root of the usual normalized trace overlap. It is insensitive to a global
// phase of either argument.
double gate_fidelity(const ComplexMatrix3& actual, const ComplexMatrix3& ideal);

/// Canonical basis state for level 0, 2 or 3.
StateVector3 basis_state(int level);

}  // namespace pulseforge
