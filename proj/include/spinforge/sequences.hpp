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

#ifndef SPINFORGE_SEQUENCES_HPP
#define SPINFORGE_SEQUENCES_HPP

#include <optional>
#include <utility>
#include <vector>

#include "spinforge/events.hpp"
#include "spinforge/spin_system.hpp"

namespace spinforge {

/// Emitted events together with the unitary they implement:
/// sequence_propagator(events) == e^{i global_phase} claimed.
struct SynthesizedSequence {
  EventList events;
  Matrix claimed;
  double global_phase = 0.0;
};

/// Sign pattern of a refocusing echo train: signs[spin][slot] is +1 when the
/// spin is in its original orientation during the slot.
struct RefocusSchedule {
  int slots = 0;
  std::vector<std::vector<int>> signs;

  /// Delays of `slot_time` separated by 180_x pulses, plus closing pulses
  /// returning every spin to its starting orientation.
  EventList events(double slot_time) const;
  int pulse_count() const;
};

/// Sylvester-Hadamard echo train for n spins. Without `keep` every Zeeman
/// and coupling term is refocused; with it only the coupling of the kept
/// pair survives.
RefocusSchedule refocus_schedule(int n,
                                 std::optional<std::pair<int, int>> keep = {});

/// diag(1, 1, 1, e^{i theta}) on spins (i, j) from coupling evolution and
/// frame rotations. Other couplings are refocused for n > 2.
SynthesizedSequence controlled_phase_sequence(const SpinSystem& sys, int i,
                                              int j, double theta);
SynthesizedSequence cz_sequence(const SpinSystem& sys, int i, int j);

}  // namespace spinforge

#endif  // SPINFORGE_SEQUENCES_HPP
