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

#include "spinforge/frames.hpp"

#include <string>

#include "spinforge/errors.hpp"

namespace spinforge {

double FrameTracker::phase(int spin) const {
  if (spin < 0 || spin >= size()) {
    throw ValidationError("frame index " + std::to_string(spin) +
                          " out of range");
  }
  return phases_[spin];
}

void FrameTracker::absorb(int spin, double angle) {
  phase(spin);
  phases_[spin] = wrap_angle(phases_[spin] + angle);
}

std::vector<FrameZOp> FrameTracker::emit() {
  std::vector<FrameZOp> out;
  for (int s = 0; s < size(); ++s) {
    if (phases_[s] != 0.0) out.push_back({s, phases_[s]});
    phases_[s] = 0.0;
  }
  return out;
}

Matrix FrameTracker::matrix() const {
  const int n = size();
  const Eigen::Index dim = dimension_for(n);
  Matrix u = Matrix::Identity(dim, dim);
  for (int s = 0; s < n; ++s) {
    if (phases_[s] != 0.0) {
      u = spin_operator(z_rotation_2x2(phases_[s]), s, n) * u;
    }
  }
  return u;
}

Matrix network_step_unitary(const NetworkStep& step, int n) {
  if (const auto* g = std::get_if<GateSpec>(&step)) return standard_gate(*g, n);
  if (const auto* p = std::get_if<PulseOp>(&step)) {
    const Matrix r = rotation_2x2(p->angle, p->phase);
    const Eigen::Index dim = dimension_for(n);
    Matrix u = Matrix::Identity(dim, dim);
    for (int s : p->spins) u = spin_operator(r, s, n) * u;
    return u;
  }
  const auto& f = std::get<FrameZOp>(step);
  return spin_operator(z_rotation_2x2(f.angle), f.spin, n);
}

Matrix steps_unitary(std::span<const NetworkStep> steps, int n) {
  const Eigen::Index dim = dimension_for(n);
  Matrix u = Matrix::Identity(dim, dim);
  for (const auto& s : steps) u = network_step_unitary(s, n) * u;
  return u;
}

RewrittenNetwork pseudo_hadamard_rewrite(std::span<const GateSpec> network,
                                         int n) {
  RewrittenNetwork out{{}, FrameTracker(n)};
  FrameTracker& frame = out.frame;

  auto pulse = [&](int spin, double angle, double phase) {
    out.steps.push_back(
        PulseOp{{spin}, angle, wrap_angle(phase - frame.phase(spin)), 0.0});
  };
  auto flush = [&](const std::vector<int>& spins) {
    for (int s : spins) {
      if (frame.phase(s) != 0.0) {
        out.steps.push_back(FrameZOp{s, frame.phase(s)});
        frame.absorb(s, -frame.phase(s));
      }
    }
  };
  auto pulse_gate = [&](const GateSpec& g, double angle, double phase) {
    const int t = g.targets.front();
    if (frame.phase(t) == 0.0) {
      out.steps.push_back(g);
    } else {
      pulse(t, angle, phase);
    }
  };

  for (const GateSpec& g : network) {
    standard_gate(g, n);
    const int t = g.targets.back();
    switch (g.name) {
      case GateName::H:
        pulse(t, kPi / 2.0, -kPi / 2.0);
        frame.absorb(t, kPi);
        break;
      case GateName::h: pulse_gate(g, kPi / 2.0, kPi / 2.0); break;
      case GateName::X: pulse_gate(g, kPi, 0.0); break;
      case GateName::Y: pulse_gate(g, kPi, kPi / 2.0); break;
      case GateName::Z:
      case GateName::T:
      case GateName::T_nmr:
      case GateName::CZ:
      case GateName::CT: out.steps.push_back(g); break;
      case GateName::CNOT:
      case GateName::TOFFOLI:
        flush({t});
        out.steps.push_back(g);
        break;
      case GateName::SWAP:
        flush(g.targets);
        out.steps.push_back(g);
        break;
    }
  }
  return out;
}

}  // namespace spinforge
