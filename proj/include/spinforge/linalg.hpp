// Copyright 2026 The Spinforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPINFORGE_LINALG_HPP
#define SPINFORGE_LINALG_HPP

// Dense complex matrix helpers shared by every module.
//
// Basis ordering: spin 0 is the most significant bit of a basis index, so for
// two spins the computational basis is |00>, |01>, |10>, |11>.

#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace spinforge {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// 2^n, checked against the supported register size.
Eigen::Index dimension_for(int qubits);
/// Inverse of dimension_for; throws ValidationError when dim is not 2^n.
int qubits_for_dimension(Eigen::Index dim);

/// Bit of `spin` inside basis index `index` for an n-spin register.
inline int spin_bit(std::uint64_t index, int spin, int n) {
  return static_cast<int>((index >> (n - 1 - spin)) & 1u);
}

namespace pauli {
Matrix identity();
Matrix x();
Matrix y();
Matrix z();
}  // namespace pauli

/// Spin-1/2 angular momentum operators (half the Pauli matrices).
Matrix spin_x();
Matrix spin_y();
Matrix spin_z();

Matrix kron(const Matrix& a, const Matrix& b);

/// Embeds `op` (acting on targets.size() qubits, first target most
/// significant) into an n-qubit register, identity elsewhere.
Matrix embed(const Matrix& op, std::span<const int> targets, int n);
Matrix embed(const Matrix& op, int target, int n);

/// Single-spin operator on `spin`, e.g. Iz of that spin in the full space.
Matrix spin_operator(const Matrix& op2, int spin, int n);

/// exp(-i H t) for Hermitian H, via its eigendecomposition.
Matrix propagator(const Matrix& hamiltonian, double t);

/// Eigendecomposition of a Hermitian matrix: H = W diag(values) W^dagger.
struct HermitianEigen {
  RealVector values;
  Matrix vectors;
};
HermitianEigen hermitian_eigen(const Matrix& hermitian);

/// U rho U^dagger.
Matrix conjugate(const Matrix& unitary, const Matrix& rho);

double max_abs(const Matrix& m);
bool is_hermitian(const Matrix& m, double tol);
bool is_unitary(const Matrix& m, double tol);

/// Checks V == e^{i gamma} U within `tol` (max-abs). Returns the phase gamma
/// in (-pi, pi] when the relation holds.
struct PhaseEquivalence {
  bool equal = false;
  double phase = 0.0;
};
PhaseEquivalence equal_up_to_global_phase(const Matrix& u, const Matrix& v,
                                          double tol = 1e-10);

/// Wraps an angle into [0, 2 pi).
double wrap_angle(double angle);
/// Wraps an angle into (-pi, pi].
double wrap_signed_angle(double angle);

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace spinforge

#endif  // SPINFORGE_LINALG_HPP
