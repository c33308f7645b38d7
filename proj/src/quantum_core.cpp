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

#include "pulseforge/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pulseforge/errors.hpp"

namespace pulseforge {

namespace {
constexpr Complex kI{0.0, 1.0};
}

int basis_position(int level) {
  switch (level) {
    case 0:
      return 0;
    case 2:
      return 1;
    case 3:
      return 2;
    default:
      throw ArgumentError("level index must be 0, 2 or 3, got " + std::to_string(level));
  }
}

ComplexMatrix3 sigma(int p, int q) {
  ComplexMatrix3 m = ComplexMatrix3::Zero();
  m(basis_position(p), basis_position(q)) = 1.0;
  return m;
}

ComplexMatrix3 sigma_x(int p, int q) { return sigma(p, q) + sigma(q, p); }

ComplexMatrix3 sigma_y(int p, int q) { return kI * (sigma(p, q) - sigma(q, p)); }

ComplexMatrix3 sigma_z(int p, int q) { return sigma(p, p) - sigma(q, q); }

ComplexMatrix3 z_operator() { return sigma_z(2, 0) + sigma_z(2, 3); }

ComplexMatrix3 mw_drive(double phase) {
  return std::cos(phase) * sigma_x(2, 0) + std::sin(phase) * sigma_y(2, 0);
}

ComplexMatrix3 rf_drive(double phase) {
  return std::cos(phase) * sigma_x(2, 3) + std::sin(phase) * sigma_y(2, 3);
}

ComplexMatrix3 effective_hamiltonian(const DriveParameters& d) {
  if (d.mw_amplitude < 0.0 || d.rf_amplitude < 0.0) {
    throw ArgumentError("drive amplitudes must be non-negative");
  }
  const double delta = d.detuning;
  const Complex mw = d.mw_amplitude * std::polar(1.0, d.mw_phase);
  const Complex rf = d.rf_amplitude * std::polar(1.0, d.rf_phase);
  ComplexMatrix3 h;
  h << 2.0 * delta / 3.0, std::conj(mw), 0.0,
       mw, -4.0 * delta / 3.0, rf,
       0.0, std::conj(rf), 2.0 * delta / 3.0;
  return -0.5 * h;
}

double max_abs(const ComplexMatrix3& m) { return m.cwiseAbs().maxCoeff(); }

bool is_hermitian(const ComplexMatrix3& m, double tol) {
  return max_abs(m - m.adjoint()) <= tol;
}

double unitarity_error(const ComplexMatrix3& u) {
  return max_abs(u.adjoint() * u - ComplexMatrix3::Identity());
}

bool is_unitary(const ComplexMatrix3& u, double tol) { return unitarity_error(u) <= tol; }

ComplexMatrix3 HermitianEigensystem::reconstruct() const {
  return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
}

HermitianEigensystem eigensystem(const ComplexMatrix3& h) {
  const double scale = std::max(1.0, max_abs(h));
  if (!h.allFinite() || !is_hermitian(h, 1e-10 * scale)) {
    throw NumericError("generator is not Hermitian");
  }
  const ComplexMatrix3 symmetric = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix3> solver(symmetric);
  if (solver.info() != Eigen::Success) {
    throw NumericError("Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix3 expm_unitary(const ComplexMatrix3& h, double t) {
  const HermitianEigensystem es = eigensystem(h);
  Eigen::Vector3cd phases;
  for (int k = 0; k < 3; ++k) phases(k) = std::polar(1.0, -es.values(k) * t);
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

ComplexMatrix3 compose(std::span<const ComplexMatrix3> factors) {
  if (factors.empty()) throw ArgumentError("compose: empty factor list");
  ComplexMatrix3 total = factors.front();
  for (const auto& f : factors.subspan(1)) total = (f * total).eval();
  return total;
}

double gate_fidelity(const ComplexMatrix3& actual, const ComplexMatrix3& ideal) {
  const Complex overlap = (actual.adjoint() * ideal).trace();
  const Complex norm = (ideal.adjoint() * ideal).trace();
  // Rounding can push |overlap| a hair above |norm| for U_a = U_i.
  return std::min(1.0, std::sqrt(std::abs(overlap / norm)));
}

StateVector3 basis_state(int level) {
  StateVector3 v = StateVector3::Zero();
  v(basis_position(level)) = 1.0;
  return v;
}

}  // namespace pulseforge
