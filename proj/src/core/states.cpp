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

#include "spinforge/states.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "spinforge/errors.hpp"

namespace spinforge {

Ket::Ket(Vector amplitudes)
    : amplitudes_(std::move(amplitudes)),
      n_(qubits_for_dimension(amplitudes_.size())) {
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-12) {
    throw ValidationError("ket is not normalised: squared norm " +
                          std::to_string(norm2));
  }
}

Ket Ket::basis(int n, std::uint64_t index) {
  const Eigen::Index dim = dimension_for(n);
  if (index >= static_cast<std::uint64_t>(dim)) {
    throw ValidationError("basis index out of range");
  }
  Vector v = Vector::Zero(dim);
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return Ket(std::move(v));
}

Ket Ket::canonical() const {
  for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
    if (std::abs(amplitudes_(i)) > 1e-14) {
      const cplx phase = std::conj(amplitudes_(i)) / std::abs(amplitudes_(i));
      Vector v = amplitudes_ * phase;
      v(i) = std::abs(amplitudes_(i));
      return Ket(std::move(v));
    }
  }
  return *this;
}

DensityMatrix DensityMatrix::from_matrix(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw ValidationError("density matrix must be square");
  }
  const int n = qubits_for_dimension(m.rows());
  if (!is_hermitian(m, 1e-12)) {
    throw ValidationError("density matrix is not Hermitian");
  }
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > 1e-12) {
    throw ValidationError("density matrix trace is " + std::to_string(tr));
  }
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-10) {
    throw ValidationError("density matrix has a negative eigenvalue " +
                          std::to_string(solver.eigenvalues().minCoeff()));
  }
  return DensityMatrix(h, n);
}

DensityMatrix DensityMatrix::trusted(const Matrix& m) {
  const int n = qubits_for_dimension(m.rows());
  return DensityMatrix(0.5 * (m + m.adjoint()), n);
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
  const Eigen::Index dim = dimension_for(n);
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim),
                       n);
}

DensityMatrix density_from_ket(const Ket& k) {
  const Vector& a = k.amplitudes();
  Matrix m = a * a.adjoint();
  for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, i) = std::norm(a(i));
  return DensityMatrix::trusted(m);
}

DensityMatrix mix(std::span<const std::pair<double, DensityMatrix>> components) {
  if (components.empty()) throw ValidationError("mixture needs components");
  const Eigen::Index dim = components.front().second.dim();
  double total = 0.0;
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto& [p, rho] : components) {
    if (p < 0.0) throw ValidationError("mixture probability is negative");
    if (rho.dim() != dim) {
      throw ValidationError("mixture components differ in dimension");
    }
    total += p;
    m += p * rho.matrix();
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ValidationError("mixture probabilities sum to " +
                          std::to_string(total));
  }
  return DensityMatrix::trusted(m);
}

double purity(const DensityMatrix& rho) {
  return rho.matrix().cwiseAbs2().sum();
}

std::array<double, 4> bloch(const DensityMatrix& rho) {
  if (rho.qubits() != 1) {
    throw ValidationError("Bloch parameters need a single qubit");
  }
  const Matrix& m = rho.matrix();
  return {(m(0, 0) + m(1, 1)).real(), 2.0 * m(1, 0).real(),
          2.0 * m(1, 0).imag(), (m(0, 0) - m(1, 1)).real()};
}

Ket ket_from_angles(double theta, double phi) {
  if (!(theta >= 0.0 && theta <= kPi)) {
    throw ValidationError("co-latitude must lie in [0, pi]");
  }
  if (!(phi >= 0.0 && phi < 2.0 * kPi)) {
    throw ValidationError("azimuth must lie in [0, 2 pi)");
  }
  Vector v(2);
  v << std::cos(theta / 2.0), std::sin(theta / 2.0) * std::exp(kI * phi);
  v.normalize();
  return Ket(std::move(v));
}

DeviationDensityMatrix deviation(const DensityMatrix& rho, double scale) {
  if (scale == 0.0) throw ValidationError("deviation scale must be nonzero");
  const Eigen::Index dim = rho.dim();
  Matrix m = rho.matrix() -
             Matrix::Identity(dim, dim) / static_cast<double>(dim);
  return {m / scale, scale};
}

DensityMatrix thermal_state(const SpinSystem& sys) {
  Matrix m = Matrix::Identity(1, 1);
  for (const Spin& s : sys.spins()) {
    Matrix factor = 0.5 * pauli::identity() + s.polarisation * spin_z();
    m = kron(m, factor);
  }
  return DensityMatrix::trusted(m);
}

DensityMatrix thermal_state_linear(const SpinSystem& sys) {
  const int n = sys.size();
  const Eigen::Index dim = dimension_for(n);
  Matrix m = Matrix::Identity(dim, dim) / static_cast<double>(dim);
  for (int i = 0; i < n; ++i) {
    m += sys.spin(i).polarisation * spin_operator(spin_z(), i, n) /
         static_cast<double>(dim / 2);
  }
  return DensityMatrix::trusted(m);
}

double thermal_scale(const SpinSystem& sys) {
  return sys.spin(0).polarisation /
         static_cast<double>(dimension_for(sys.size()) / 2);
}

std::vector<double> populations(const DensityMatrix& rho) {
  std::vector<double> out(rho.dim());
  for (Eigen::Index i = 0; i < rho.dim(); ++i) {
    out[i] = rho.matrix()(i, i).real();
  }
  return out;
}

}  // namespace spinforge
