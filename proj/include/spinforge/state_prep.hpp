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

#ifndef SPINFORGE_STATE_PREP_HPP
#define SPINFORGE_STATE_PREP_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spinforge/events.hpp"
#include "spinforge/gates.hpp"
#include "spinforge/spin_system.hpp"
#include "spinforge/states.hpp"

namespace spinforge {

struct PseudoPureSpec {
  double epsilon = 1.0;
  Ket target = Ket::basis(1, 0);
};

/// (1 - eps) E / 2^n + eps |psi><psi|.
DensityMatrix pseudo_pure(const PseudoPureSpec& spec);
/// eps when the spectrum is one large eigenvalue plus 2^n - 1 equal ones
/// (within 1e-9); nullopt otherwise.
std::optional<double> epsilon_of(const DensityMatrix& rho);

struct WarrenBound {
  double exact = 0.0;
  double approx = 0.0;
};
/// Largest pseudo-pure excess obtainable from a thermal state, x = h nu / kT.
WarrenBound warren_bound(int n, double x);

struct EntanglementBounds {
  double lower = 0.0;
  double upper = 0.0;
};
EntanglementBounds entanglement_bounds(int n);
double peres_threshold();

/// Basis permutation, i -> perm[i].
using Permutation = std::vector<std::uint64_t>;

Matrix permutation_matrix(const Permutation& perm);
/// i -> 1 + ((i - 1 + shift) mod (2^n - 1)) for i > 0; 0 is fixed.
Permutation cyclic_shift(int n, int shift);
/// Network of X, CNOT and TOFFOLI gates realising `perm` (n <= 3), built
/// from Gray-code transpositions.
std::vector<GateSpec> permutation_network(const Permutation& perm);
/// The two-CNOT networks P1 and P2 for a two-spin register.
std::array<std::vector<GateSpec>, 2> two_spin_permutation_networks();

/// Average of P rho P^dagger over the identity and the given permutation
/// unitaries (all 2^n - 2 nontrivial cyclic shifts when empty). Throws when
/// |0...0> does not carry the largest population.
DensityMatrix temporal_average(const DensityMatrix& rho,
                               std::span<const Matrix> permutations = {});

struct PreparedState {
  EventList events;
  DensityMatrix state = DensityMatrix::maximally_mixed(1);
  /// Deviation of `state` in units of delta / 2 of the reference spin.
  Matrix deviation;
};

/// 60_x(S), crush, 45_x(I), couple 1/(2J), 45_{-y}(I), crush, run on the
/// linear thermal state.
PreparedState spatial_average_homonuclear(const SpinSystem& sys);

/// Flip angle on the more polarised spin that equalises z magnetisation
/// after a crush.
double equalization_angle(double delta_high, double delta_low);

/// 45_x on both spins, couple 1/(2J), 30_{-y} on both, crush. With
/// `equalize` a flip-plus-crush pre-step brings the polarisations together;
/// otherwise they must already match.
PreparedState spatial_average_heteronuclear(const SpinSystem& sys,
                                            bool equalize = true);

/// Three experiments (weights 1/3) whose outputs average to a pseudo-pure
/// state: nothing, I -> 2IzSz, S -> 2IzSz.
std::vector<EventList> product_operator_plan(const SpinSystem& sys);

/// H on spin 0 followed by the CNOT chain 0->1->...->n-1.
std::vector<GateSpec> cat_prepare(int n);
/// Keeps the identity part and the elements of coherence order +-n.
DensityMatrix cat_select(const DensityMatrix& rho);

/// Normalised block of rho on which `spin` is in state `value`.
DensityMatrix conditional_state(const DensityMatrix& rho, int spin, int value);

struct LabelResult {
  /// Chosen states: the large one first, then the three equal ones.
  std::array<std::uint64_t, 4> chosen{};
  Permutation permutation;
  std::vector<GateSpec> network;
  /// Deviation populations of |000>, |001>, |010>, |011> after relabelling.
  std::array<double, 4> conditional_populations{};
};

/// Relabels populations of a three-spin register so that a pseudo-pure
/// pattern sits on the first spin's |0> manifold. Without an explicit choice
/// the quadruple with the largest gap is used. Throws with the smallest
/// achievable spread when no triple is equal within 1e-9.
LabelResult logical_label(
    std::span<const double> populations,
    std::optional<std::array<std::uint64_t, 4>> choice = std::nullopt);

}  // namespace spinforge

#endif  // SPINFORGE_STATE_PREP_HPP
