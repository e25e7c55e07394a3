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

#ifndef SPINFORGE_EVENTS_HPP
#define SPINFORGE_EVENTS_HPP

#include <variant>
#include <vector>

#include "spinforge/linalg.hpp"
#include "spinforge/spin_system.hpp"

namespace spinforge {

/// Hard pulse on a set of spins. Angles in radians. A zero duration is an
/// ideal instantaneous rotation; otherwise the free Hamiltonian acts during
/// the pulse with nutation rate angle / duration.
struct PulseOp {
  std::vector<int> spins;
  double angle = 0.0;
  double phase = 0.0;
  double duration = 0.0;
};

struct DelayOp {
  double t = 0.0;
};

/// Zero-duration rotation exp(-i angle Iz) of one spin's frame.
struct FrameZOp {
  int spin = 0;
  double angle = 0.0;
};

/// Field-gradient pulse. `area` is a signed gradient area in arbitrary
/// units; only the ensemble crush model uses it.
struct CrushOp {
  bool preserve_zero_quantum = false;
  double area = 1.0;
};

/// Projective dephasing of the listed spins (all spins when empty).
struct MeasureOp {
  std::vector<int> spins;
};

using Event = std::variant<PulseOp, DelayOp, FrameZOp, CrushOp, MeasureOp>;
using EventList = std::vector<Event>;

/// exp(-i theta (cos(phi) Ix + sin(phi) Iy)) for one spin.
Matrix rotation_2x2(double theta, double phi);
/// exp(-i angle Iz) for one spin.
Matrix z_rotation_2x2(double angle);

/// Propagator of a unitary event on an n-spin register. Throws
/// ValidationError for crush and measure events.
Matrix event_propagator(const SpinSystem& sys, const Event& e);

/// Time-ordered product over all events, in the reference frame in which
/// each spin's shift_hz is its resonance offset.
Matrix sequence_propagator(const SpinSystem& sys, const EventList& events);

/// Validates spin indices and non-negative times; throws ValidationError
/// naming the offending event.
void validate_events(const SpinSystem& sys, const EventList& events);

}  // namespace spinforge

#endif  // SPINFORGE_EVENTS_HPP
