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

#ifndef SPINFORGE_COMPOSITE_PULSES_HPP
#define SPINFORGE_COMPOSITE_PULSES_HPP

#include <functional>
#include <vector>

#include "spinforge/linalg.hpp"

namespace spinforge {

/// Single-spin rotation by theta about the axis with azimuth `phase` and
/// co-latitude `colatitude`. Angles in radians.
struct Rotation {
  double theta = 0.0;
  double phase = 0.0;
  double colatitude = kPi / 2.0;
  double duration = 0.0;
};

/// Time-ordered: the first rotation acts first.
using PulseSequence = std::vector<Rotation>;

/// Fractional flip-angle error and off-resonance ratio Delta / omega_1.
struct ErrorModel {
  double length_fraction = 0.0;
  double offset_fraction = 0.0;
};

/// exp(-i theta (Ix sin(psi) cos(phi) + Iy sin(psi) sin(phi) + Iz cos(psi))).
Matrix pulse_propagator(const Rotation& p);
Matrix sequence_unitary(const PulseSequence& seq);

/// Flip angles scale by (1 + length_fraction); a pulse's effective field
/// gains a z component offset_fraction times its nutation rate.
PulseSequence apply_error(const PulseSequence& seq, const ErrorModel& model);

/// 90_y, theta_x, 90_-y: exactly exp(-i theta Iz).
PulseSequence composite_z(double theta);

struct CorpseAngles {
  double theta1;
  double theta2;
  double theta3;
};
CorpseAngles corpse_angles(double theta, int n1 = 1, int n2 = 1, int n3 = 0);
/// theta1_x theta2_-x theta3_x.
PulseSequence corpse(double theta, int n1 = 1, int n2 = 1, int n3 = 0);

enum class Bb1Placement { kBefore, kAfter, kMiddle };
/// First BB1 phase, phase_sign * arccos(-theta / (4 pi)).
double bb1_phase(double theta, int phase_sign = 1);
PulseSequence bb1(double theta, int phase_sign = 1,
                  Bb1Placement placement = Bb1Placement::kBefore);

/// |Tr(V U^dagger)| / d.
double propagator_fidelity(const Matrix& target, const Matrix& actual);
/// 1 - propagator_fidelity, evaluated without cancellation so that values
/// far below machine epsilon stay accurate.
double propagator_infidelity(const Matrix& target, const Matrix& actual);

enum class ErrorAxis { kLength, kOffset, kNone };

struct ErrorOrderResult {
  enum class Status { kFitted, kExact, kNonMonotone };
  Status status = Status::kFitted;
  double slope = 0.0;
  int order = 0;
  std::vector<double> errors;
  std::vector<double> infidelities;
};

/// Fits log(1 - F) against log(error) over 13 log-spaced errors in
/// [1e-4, 1e-2]. The target is the error-free propagator of builder(theta).
ErrorOrderResult error_order(
    const std::function<PulseSequence(double)>& builder, ErrorAxis axis,
    double theta);

}  // namespace spinforge

#endif  // SPINFORGE_COMPOSITE_PULSES_HPP
