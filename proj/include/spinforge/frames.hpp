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

#ifndef SPINFORGE_FRAMES_HPP
#define SPINFORGE_FRAMES_HPP

#include <span>
#include <variant>
#include <vector>

#include "spinforge/events.hpp"
#include "spinforge/gates.hpp"

namespace spinforge {

/// Per-spin abstract rotating frames. The tracked operator is
/// F = prod_k exp(-i phase_k Iz_k).
class FrameTracker {
 public:
  explicit FrameTracker(int n = 0) : phases_(n, 0.0) {}

  int size() const { return static_cast<int>(phases_.size()); }
  /// Accumulated phase of one spin in [0, 2 pi).
  double phase(int spin) const;
  double time_origin() const { return time_origin_; }
  void set_time_origin(double t) { time_origin_ = t; }

  void absorb(int spin, double angle);
  /// Frame rotations that realise F, clearing the tracker.
  std::vector<FrameZOp> emit();
  Matrix matrix() const;

 private:
  std::vector<double> phases_;
  double time_origin_ = 0.0;
};

using NetworkStep = std::variant<GateSpec, PulseOp, FrameZOp>;

Matrix network_step_unitary(const NetworkStep& step, int n);
Matrix steps_unitary(std::span<const NetworkStep> steps, int n);

struct RewrittenNetwork {
  std::vector<NetworkStep> steps;
  /// Frame still to be applied after the steps: original = F * steps.
  FrameTracker frame;
};

/// Replaces each Hadamard by a 90 degree pulse and absorbs its 180_z part
/// into the frame of that spin. Later single-spin pulse gates on a spin with
/// a nonzero frame become phase-shifted pulses, diagonal gates pass through,
/// and CNOT, TOFFOLI and SWAP first flush the frames they do not commute
/// with.
RewrittenNetwork pseudo_hadamard_rewrite(std::span<const GateSpec> network,
                                         int n);

}  // namespace spinforge

#endif  // SPINFORGE_FRAMES_HPP
