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

#include "spinforge/evolution.hpp"

#include <string>

#include "spinforge/errors.hpp"

namespace spinforge {

Matrix free_hamiltonian(const SpinSystem& sys,
                        std::span<const double> frame_offsets_hz) {
  const int n = sys.size();
  if (static_cast<int>(frame_offsets_hz.size()) != n) {
    throw ValidationError("need one frame offset per spin");
  }
  const Eigen::Index dim = dimension_for(n);
  Matrix h = Matrix::Zero(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto ru = static_cast<std::uint64_t>(r);
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      const double zi = spin_bit(ru, i, n) == 0 ? 0.5 : -0.5;
      e += 2.0 * kPi * (sys.spin(i).shift_hz - frame_offsets_hz[i]) * zi;
      for (int j = i + 1; j < n; ++j) {
        const double zj = spin_bit(ru, j, n) == 0 ? 0.5 : -0.5;
        e += 2.0 * kPi * sys.j_hz(i, j) * zi * zj;
      }
    }
    h(r, r) = e;
  }
  return h;
}

Matrix coupling_hamiltonian(const SpinSystem& sys) {
  const std::vector<double> offsets = sys.shifts();
  return free_hamiltonian(sys, offsets);
}

DensityMatrix evolve(const DensityMatrix& rho, const Matrix& hamiltonian,
                     double t) {
  if (hamiltonian.rows() != rho.dim() || hamiltonian.cols() != rho.dim()) {
    throw ValidationError("Hamiltonian dimension does not match the state");
  }
  if (t < 0.0) throw ValidationError("evolution time must be non-negative");
  return DensityMatrix::trusted(conjugate(propagator(hamiltonian, t),
                                          rho.matrix()));
}

}  // namespace spinforge
