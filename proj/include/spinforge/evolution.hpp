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

#ifndef SPINFORGE_EVOLUTION_HPP
#define SPINFORGE_EVOLUTION_HPP

#include <span>

#include "spinforge/linalg.hpp"
#include "spinforge/spin_system.hpp"
#include "spinforge/states.hpp"

namespace spinforge {

/// Weak-coupling Hamiltonian in rad/s, with spin i observed in a frame
/// rotating at frame_offsets_hz[i]:
///   sum_i 2pi(nu_i - offset_i) Iz_i + sum_{i<j} pi J_ij 2 Iz_i Iz_j.
Matrix free_hamiltonian(const SpinSystem& sys,
                        std::span<const double> frame_offsets_hz);

/// Every spin on resonance: only the couplings remain.
Matrix coupling_hamiltonian(const SpinSystem& sys);

DensityMatrix evolve(const DensityMatrix& rho, const Matrix& hamiltonian,
                     double t);

}  // namespace spinforge

#endif  // SPINFORGE_EVOLUTION_HPP
