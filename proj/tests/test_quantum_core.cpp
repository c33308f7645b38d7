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

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pulseforge/errors.hpp"
#include "pulseforge/pulse_sequences.hpp"
#include "pulseforge/quantum_core.hpp"
#include "test_support.hpp"

using namespace pulseforge;
using pulseforge::testing::block_rotation_y;
using pulseforge::testing::random_hermitian;
using pulseforge::testing::random_unitary;
using pulseforge::testing::taylor_expm;

namespace {
constexpr Complex kI{0.0, 1.0};
}

TEST_SUITE("quantum_core") {

TEST_CASE("sigma places a single one in basis order (0, 2, 3)") {
  const ComplexMatrix3 s = sigma(2, 3);
  CHECK(s(1, 2) == Complex(1.0, 0.0));
  CHECK(max_abs(s) == 1.0);
  CHECK(s.cwiseAbs().sum() == doctest::Approx(1.0));
  CHECK_THROWS_AS(sigma(1, 2), ArgumentError);
  CHECK_THROWS_AS(sigma(0, 4), ArgumentError);
  CHECK_THROWS_AS(basis_position(-1), ArgumentError);
}

TEST_CASE("sigma_y(2,3) and sigma_y(2,0) match their definitions") {
  ComplexMatrix3 expect23 = ComplexMatrix3::Zero();
  expect23(1, 2) = kI;
  expect23(2, 1) = -kI;
  CHECK(max_abs(sigma_y(2, 3) - expect23) == 0.0);

  // [[0, -i], [i, 0]] on the (|0>, |2>) block.
  ComplexMatrix3 expect20 = ComplexMatrix3::Zero();
  expect20(0, 1) = -kI;
  expect20(1, 0) = kI;
  CHECK(max_abs(sigma_y(2, 0) - expect20) == 0.0);
}

TEST_CASE("Z operator is diag(-1, 2, -1)") {
  const ComplexMatrix3 z = sigma_z(2, 0) + sigma_z(2, 3);
  ComplexMatrix3 expect = ComplexMatrix3::Zero();
  expect.diagonal() << -1.0, 2.0, -1.0;
  CHECK(max_abs(z - expect) == 0.0);
  CHECK(max_abs(z_operator() - expect) == 0.0);
  CHECK(max_abs(sigma_z(2, 0) - (-sigma(0, 0) + sigma(2, 2))) == 0.0);
  CHECK(max_abs(sigma_z(2, 3) - (sigma(2, 2) - sigma(3, 3))) == 0.0);
}

TEST_CASE("block Pauli algebra") {
  for (auto [p, q] : {std::pair{2, 0}, std::pair{2, 3}}) {
    const ComplexMatrix3 block = sigma(p, p) + sigma(q, q);
    const ComplexMatrix3 sx = sigma_x(p, q);
    const ComplexMatrix3 sy = sigma_y(p, q);
    CHECK(max_abs(sx * sx - block) < 1e-15);
    CHECK(max_abs(sy * sy - block) < 1e-15);
    // [sx, sy] = 2i sz on the block, with sz = sigma_pp - sigma_qq.
    CHECK(max_abs(sx * sy - sy * sx - 2.0 * kI * (sigma(q, q) - sigma(p, p))) < 1e-15);
  }
}

TEST_CASE("effective Hamiltonian special cases") {
  CHECK(max_abs(effective_hamiltonian({0.0, 0.0, 1.3, 0.0, -0.4})) == 0.0);
  CHECK(max_abs(effective_hamiltonian({0.0, 1.0, 0.0, 0.0, 0.0}) + 0.5 * sigma_x(2, 0)) < 1e-15);
  CHECK_THROWS_AS(effective_hamiltonian({0.0, -1.0, 0.0, 0.0, 0.0}), ArgumentError);
  CHECK_THROWS_AS(effective_hamiltonian({0.0, 0.0, 0.0, -0.1, 0.0}), ArgumentError);
}

TEST_CASE("matrix form equals the operator sum, 100 random drives") {
  std::mt19937_64 rng(2024);
  for (int n = 0; n < 100; ++n) {
    DriveParameters d{testing::uniform(rng, -1, 1), testing::uniform(rng, 0, 2),
                      testing::uniform(rng, -7, 7), testing::uniform(rng, 0, 2),
                      testing::uniform(rng, -7, 7)};
    const ComplexMatrix3 op =
        (d.detuning / 3.0) * (sigma_z(2, 0) + sigma_z(2, 3)) -
        (d.mw_amplitude / 2.0) *
            (std::cos(d.mw_phase) * sigma_x(2, 0) + std::sin(d.mw_phase) * sigma_y(2, 0)) -
        (d.rf_amplitude / 2.0) *
            (std::cos(d.rf_phase) * sigma_x(2, 3) + std::sin(d.rf_phase) * sigma_y(2, 3));
    const ComplexMatrix3 h = effective_hamiltonian(d);
    CHECK(max_abs(h - op) <= 1e-12);
    CHECK(is_hermitian(h));
  }
}

TEST_CASE("expm_unitary basics") {
  CHECK(max_abs(expm_unitary(ComplexMatrix3::Zero(), 3.0) - ComplexMatrix3::Identity()) == 0.0);

  // exp(-i(-sy20/2) t) = exp(i (t/2) sy20): a closed-form block rotation.
  const ComplexMatrix3 h = -0.5 * sigma_y(2, 0);
  const ComplexMatrix3 quarter = expm_unitary(h, kPi / 2);
  const double r = 1.0 / std::sqrt(2.0);
  ComplexMatrix3 expect;
  expect << r, r, 0, -r, r, 0, 0, 0, 1;
  CHECK(max_abs(quarter - expect) < 1e-14);
  CHECK(max_abs(expm_unitary(h, kPi) - block_rotation_y(2, 0, kPi / 2)) < 1e-14);

  ComplexMatrix3 bad = ComplexMatrix3::Zero();
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(expm_unitary(bad, 1.0), NumericError);
}

TEST_CASE("expm_unitary agrees with a Taylor-series oracle") {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 200; ++n) {
    const ComplexMatrix3 h = random_hermitian(rng, 2.0);
    const double t = testing::uniform(rng, -5, 5);
    const ComplexMatrix3 u = expm_unitary(h, t);
    CHECK(max_abs(u - taylor_expm(-kI * t * h)) < 1e-11);
    CHECK(unitarity_error(u) <= 1e-10);
  }
}

TEST_CASE("expm_unitary group property and eigensystem round trip") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 100; ++n) {
    const ComplexMatrix3 h = random_hermitian(rng, 3.0);
    const double t1 = testing::uniform(rng, -3, 3);
    const double t2 = testing::uniform(rng, -3, 3);
    CHECK(max_abs(expm_unitary(h, t1) * expm_unitary(h, t2) - expm_unitary(h, t1 + t2)) <= 1e-10);
    CHECK(max_abs(eigensystem(h).reconstruct() - h) <= 1e-11);
  }
}

TEST_CASE("compose multiplies in time order") {
  const ComplexMatrix3 id = ComplexMatrix3::Identity();
  CHECK(max_abs(compose(std::vector<ComplexMatrix3>{id, id}) - id) == 0.0);

  const ComplexMatrix3 um = block_rotation_y(2, 0, kPi / 4);
  const ComplexMatrix3 ur = block_rotation_y(2, 3, kPi / 2);
  CHECK(max_abs(compose(std::vector<ComplexMatrix3>{um, ur}) - ur * um) == 0.0);

  std::mt19937_64 rng(3);
  std::vector<ComplexMatrix3> seq;
  for (int n = 0; n < 6; ++n) seq.push_back(random_unitary(rng));
  std::vector<ComplexMatrix3> there_and_back = seq;
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) there_and_back.push_back(it->adjoint());
  CHECK(max_abs(compose(there_and_back) - id) <= 1e-10);

  CHECK_THROWS_AS(compose(std::vector<ComplexMatrix3>{}), ArgumentError);
}

TEST_CASE("gate fidelity") {
  std::mt19937_64 rng(5);
  const ComplexMatrix3 u = random_unitary(rng);
  CHECK(gate_fidelity(u, u) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gate_fidelity(std::polar(1.0, 0.731) * u, u) == doctest::Approx(1.0).epsilon(1e-14));

  // Pulse-length distorted sequential gate at eps_f = 0.2, built from closed-form
  // block rotations. 0.97947133517 from an independent numpy evaluation.
  const ComplexMatrix3 distorted =
      block_rotation_y(2, 3, kPi / 2 * 1.2) * block_rotation_y(2, 0, kPi / 4 * 1.2);
  const double f = gate_fidelity(distorted, sequential_gate());
  CHECK(f == doctest::Approx(0.9795).epsilon(0.0005 / 0.9795));
  CHECK(f == doctest::Approx(0.97947133517).epsilon(1e-10));
}

TEST_CASE("gate fidelity properties over random unitaries") {
  std::mt19937_64 rng(99);
  for (int n = 0; n < 300; ++n) {
    const ComplexMatrix3 a = random_unitary(rng);
    const ComplexMatrix3 b = random_unitary(rng);
    const ComplexMatrix3 w = random_unitary(rng);
    const double f = gate_fidelity(a, b);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    CHECK(gate_fidelity(a * w, b * w) == doctest::Approx(f).epsilon(1e-12));
  }
}

TEST_CASE("basis states") {
  CHECK(basis_state(3)(2) == Complex(1.0, 0.0));
  CHECK(basis_state(3).norm() == 1.0);
  CHECK_THROWS_AS(basis_state(1), ArgumentError);
}

}  // TEST_SUITE
