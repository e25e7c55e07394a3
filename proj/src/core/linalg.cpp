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

#include "spinforge/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "spinforge/errors.hpp"

namespace spinforge {

namespace {
constexpr int kMaxQubits = 10;
}  // namespace

Eigen::Index dimension_for(int qubits) {
  if (qubits < 1 || qubits > kMaxQubits) {
    throw ValidationError("register size must be between 1 and " +
                          std::to_string(kMaxQubits) + " qubits, got " +
                          std::to_string(qubits));
  }
  return Eigen::Index{1} << qubits;
}

int qubits_for_dimension(Eigen::Index dim) {
  for (int n = 1; n <= kMaxQubits; ++n) {
    if ((Eigen::Index{1} << n) == dim) return n;
  }
  throw ValidationError("matrix dimension " + std::to_string(dim) +
                        " is not a supported power of two");
}

namespace pauli {
Matrix identity() { return Matrix::Identity(2, 2); }
Matrix x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
Matrix y() {
  Matrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}
Matrix z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

Matrix spin_x() { return 0.5 * pauli::x(); }
Matrix spin_y() { return 0.5 * pauli::y(); }
Matrix spin_z() { return 0.5 * pauli::z(); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix embed(const Matrix& op, std::span<const int> targets, int n) {
  const auto k = static_cast<int>(targets.size());
  const Eigen::Index sub = Eigen::Index{1} << k;
  if (op.rows() != sub || op.cols() != sub) {
    throw ValidationError("operator size does not match its target count");
  }
  for (int a = 0; a < k; ++a) {
    if (targets[a] < 0 || targets[a] >= n) {
      throw ValidationError("target spin " + std::to_string(targets[a]) +
                            " outside a " + std::to_string(n) +
                            "-spin register");
    }
    for (int b = a + 1; b < k; ++b) {
      if (targets[a] == targets[b]) {
        throw ValidationError("target spins must be distinct");
      }
    }
  }
  const Eigen::Index dim = dimension_for(n);
  std::uint64_t target_mask = 0;
  for (int t : targets) target_mask |= std::uint64_t{1} << (n - 1 - t);

  auto sub_index = [&](std::uint64_t full) {
    std::uint64_t s = 0;
    for (int a = 0; a < k; ++a) {
      s = (s << 1) | static_cast<std::uint64_t>(spin_bit(full, targets[a], n));
    }
    return static_cast<Eigen::Index>(s);
  };

  Matrix out = Matrix::Zero(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto ru = static_cast<std::uint64_t>(r);
    const Eigen::Index rs = sub_index(ru);
    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto cu = static_cast<std::uint64_t>(c);
      if ((ru & ~target_mask) != (cu & ~target_mask)) continue;
      out(r, c) = op(rs, sub_index(cu));
    }
  }
  return out;
}

Matrix embed(const Matrix& op, int target, int n) {
  const int targets[] = {target};
  return embed(op, targets, n);
}

Matrix spin_operator(const Matrix& op2, int spin, int n) {
  return embed(op2, spin, n);
}

HermitianEigen hermitian_eigen(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigendecomposition failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix propagator(const Matrix& hamiltonian, double t) {
  if (t == 0.0) return Matrix::Identity(hamiltonian.rows(), hamiltonian.cols());
  const Matrix off = hamiltonian - Matrix(hamiltonian.diagonal().asDiagonal());
  if (off.cwiseAbs().maxCoeff() == 0.0) {
    Vector phases(hamiltonian.rows());
    for (Eigen::Index i = 0; i < hamiltonian.rows(); ++i) {
      phases(i) = std::exp(-kI * hamiltonian(i, i).real() * t);
    }
    return phases.asDiagonal();
  }
  const HermitianEigen eig = hermitian_eigen(hamiltonian);
  Vector phases(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    phases(i) = std::exp(-kI * eig.values(i) * t);
  }
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

Matrix conjugate(const Matrix& unitary, const Matrix& rho) {
  return unitary * rho * unitary.adjoint();
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

bool is_unitary(const Matrix& m, double tol) {
  return m.rows() == m.cols() &&
         max_abs(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())) < tol;
}

PhaseEquivalence equal_up_to_global_phase(const Matrix& u, const Matrix& v,
                                          double tol) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw ValidationError("cannot compare operators of different dimension");
  }
  Eigen::Index r = 0;
  Eigen::Index c = 0;
  u.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(u(r, c)) == 0.0) {
    return {max_abs(v) <= tol, 0.0};
  }
  const cplx ratio = v(r, c) / u(r, c);
  const double gamma = std::arg(ratio);
  const bool equal = max_abs(v - std::exp(kI * gamma) * u) <= tol;
  return {equal, gamma};
}

double wrap_angle(double angle) {
  double a = std::fmod(angle, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  if (a >= 2.0 * kPi) a = 0.0;
  return a;
}

double wrap_signed_angle(double angle) {
  double a = wrap_angle(angle);
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

}  // namespace spinforge
