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

#ifndef SPINFORGE_GATES_HPP
#define SPINFORGE_GATES_HPP

#include <span>
#include <string>
#include <vector>

#include "spinforge/linalg.hpp"

namespace spinforge {

/// h is the pseudo-Hadamard 90_y rotation; T_nmr is T with the energy zero
/// placed between the two levels; CT is controlled-T.
enum class GateName { X, Y, Z, H, h, T, T_nmr, CNOT, CZ, SWAP, TOFFOLI, CT };

/// Targets: controls first, then the target spin. For controlled gates
/// `control_state` selects which control value triggers the action.
struct GateSpec {
  GateName name = GateName::X;
  std::vector<int> targets;
  int control_state = 1;
};

std::string gate_name_string(GateName name);
GateName parse_gate_name(const std::string& text);
int gate_arity(GateName name);

/// Gate on its own targets (2^k x 2^k).
Matrix gate_matrix(const GateSpec& spec);
/// Gate embedded in an n-qubit register.
Matrix standard_gate(const GateSpec& spec, int n);
/// Product of a time-ordered network (first gate acts first).
Matrix network_unitary(std::span<const GateSpec> network, int n);

/// Controlled-NOT whose control has to be in `control_state`.
GateSpec cnot(int control, int target, int control_state = 1);

/// Transition-selective 180_x on the target, conditional on the control
/// being |1>: the flipped block carries -i entries.
Matrix transition_selective_cnot(int control, int target, int n);

}  // namespace spinforge

#endif  // SPINFORGE_GATES_HPP
