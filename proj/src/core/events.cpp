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

#include "spinforge/events.hpp"

#include <cmath>
#include <string>

#include "spinforge/errors.hpp"
#include "spinforge/evolution.hpp"

namespace spinforge {

namespace {

Matrix reference_hamiltonian(const SpinSystem& sys) {
  const std::vector<double> zeros(sys.size(), 0.0);
  return free_hamiltonian(sys, zeros);
}

Matrix pulse_hamiltonian(const PulseOp& p, int n) {
  const Matrix axis = std::cos(p.phase) * spin_x() + std::sin(p.phase) * spin_y();
  const Eigen::Index dim = dimension_for(n);
  Matrix h = Matrix::Zero(dim, dim);
  for (int s : p.spins) h += spin_operator(axis, s, n);
  return h;
}

Matrix propagate(const Matrix& h0, int n, const Event& e) {
  if (const auto* p = std::get_if<PulseOp>(&e)) {
    if (p->duration == 0.0) {
      const Matrix r = rotation_2x2(p->angle, p->phase);
      Matrix u = Matrix::Identity(h0.rows(), h0.cols());
      for (int s : p->spins) u = spin_operator(r, s, n) * u;
      return u;
    }
    const Matrix h = h0 + (p->angle / p->duration) * pulse_hamiltonian(*p, n);
    return propagator(h, p->duration);
  }
  if (const auto* d = std::get_if<DelayOp>(&e)) return propagator(h0, d->t);
  if (const auto* f = std::get_if<FrameZOp>(&e)) {
    return spin_operator(z_rotation_2x2(f->angle), f->spin, n);
  }
  throw ValidationError("crush and measure events are not unitary");
}

}  // namespace

Matrix rotation_2x2(double theta, double phi) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Matrix m(2, 2);
  m << c, -kI * s * std::exp(-kI * phi), -kI * s * std::exp(kI * phi), c;
  return m;
}

Matrix z_rotation_2x2(double angle) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = std::exp(-kI * angle / 2.0);
  m(1, 1) = std::exp(kI * angle / 2.0);
  return m;
}

Matrix event_propagator(const SpinSystem& sys, const Event& e) {
  validate_events(sys, EventList{e});
  return propagate(reference_hamiltonian(sys), sys.size(), e);
}

Matrix sequence_propagator(const SpinSystem& sys, const EventList& events) {
  validate_events(sys, events);
  const Matrix h0 = reference_hamiltonian(sys);
  Matrix u = Matrix::Identity(h0.rows(), h0.cols());
  for (const Event& e : events) u = propagate(h0, sys.size(), e) * u;
  return u;
}

void validate_events(const SpinSystem& sys, const EventList& events) {
  const int n = sys.size();
  auto check_spin = [&](int s, std::size_t k, const char* kind) {
    if (s < 0 || s >= n) {
      throw ValidationError("event " + std::to_string(k) + " (" + kind +
                            "): spin " + std::to_string(s) +
                            " does not exist in a " + std::to_string(n) +
                            "-spin system");
    }
  };
  for (std::size_t k = 0; k < events.size(); ++k) {
    const Event& e = events[k];
    if (const auto* p = std::get_if<PulseOp>(&e)) {
      if (p->spins.empty()) {
        throw ValidationError("event " + std::to_string(k) +
                              " (pulse): no spins selected");
      }
      for (std::size_t a = 0; a < p->spins.size(); ++a) {
        check_spin(p->spins[a], k, "pulse");
        for (std::size_t b = a + 1; b < p->spins.size(); ++b) {
          if (p->spins[a] == p->spins[b]) {
            throw ValidationError("event " + std::to_string(k) +
                                  " (pulse): spin listed twice");
          }
        }
      }
      if (!(p->duration >= 0.0) || !std::isfinite(p->angle) ||
          !std::isfinite(p->phase)) {
        throw ValidationError("event " + std::to_string(k) +
                              " (pulse): invalid angle, phase or duration");
      }
    } else if (const auto* d = std::get_if<DelayOp>(&e)) {
      if (!(d->t >= 0.0) || !std::isfinite(d->t)) {
        throw ValidationError("event " + std::to_string(k) +
                              " (delay): time must be non-negative");
      }
    } else if (const auto* f = std::get_if<FrameZOp>(&e)) {
      check_spin(f->spin, k, "frame_z");
    } else if (const auto* m = std::get_if<MeasureOp>(&e)) {
      for (int s : m->spins) check_spin(s, k, "measure");
    }
  }
}

}  // namespace spinforge
