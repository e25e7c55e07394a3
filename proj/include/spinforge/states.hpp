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

#ifndef SPINFORGE_STATES_HPP
#define SPINFORGE_STATES_HPP

#include <array>
#include <cstdint>
#include <span>
#include <utility>

#include "spinforge/linalg.hpp"
#include "spinforge/spin_system.hpp"

namespace spinforge {

/// Normalised pure state of an n-qubit register.
class Ket {
 public:
  explicit Ket(Vector amplitudes);
  static Ket basis(int n, std::uint64_t index);

  int qubits() const { return n_; }
  const Vector& amplitudes() const { return amplitudes_; }

  /// Global phase removed: the first nonzero amplitude is real and >= 0.
  Ket canonical() const;

 private:
  Vector amplitudes_;
  int n_;
};

/// Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  /// Checks every invariant (Hermitian and trace to 1e-12, eigenvalues to
  /// -1e-10).
  static DensityMatrix from_matrix(const Matrix& m);
  /// Skips the eigenvalue check; the matrix is Hermitised.
  static DensityMatrix trusted(const Matrix& m);
  static DensityMatrix maximally_mixed(int n);

  int qubits() const { return n_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }

 private:
  DensityMatrix(Matrix m, int n) : matrix_(std::move(m)), n_(n) {}
  Matrix matrix_;
  int n_;
};

/// Traceless part of a density matrix divided by `scale`.
struct DeviationDensityMatrix {
  Matrix matrix;
  double scale = 1.0;
};

DensityMatrix density_from_ket(const Ket& k);
DensityMatrix mix(std::span<const std::pair<double, DensityMatrix>> components);
double purity(const DensityMatrix& rho);

/// (s0, sx, sy, sz) with rho = (s0 E + sx X + sy Y + sz Z) / 2.
std::array<double, 4> bloch(const DensityMatrix& rho);

Ket ket_from_angles(double theta, double phi);

DeviationDensityMatrix deviation(const DensityMatrix& rho, double scale = 1.0);

/// Exact product over spins of (E/2 + delta_i Iz).
DensityMatrix thermal_state(const SpinSystem& sys);
/// First-order form E/2^n + sum_i delta_i Iz_i / 2^(n-1).
DensityMatrix thermal_state_linear(const SpinSystem& sys);

/// Relative units for NMR reports: delta of the first spin over 2^(n-1).
double thermal_scale(const SpinSystem& sys);

std::vector<double> populations(const DensityMatrix& rho);

}  // namespace spinforge

#endif  // SPINFORGE_STATES_HPP
