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

#ifndef SPINFORGE_GRAPE_HPP
#define SPINFORGE_GRAPE_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "spinforge/linalg.hpp"

namespace spinforge {

/// Piecewise-constant RF controls. Each segment holds one (x, y) amplitude
/// pair in rad/s per RF channel: [ux_0, uy_0, ux_1, uy_1, ...].
struct ControlSequence {
  double dt = 0.0;
  std::vector<std::vector<double>> segments;
  /// (weight, scale factor) pairs for RF-inhomogeneity-robust design.
  std::vector<std::pair<double, double>> rf_scalings;

  int channels() const;
  double duration() const { return dt * static_cast<double>(segments.size()); }
};

/// Drift Hamiltonian (rad/s) and, per RF channel, its x and y operators.
struct ControlSystem {
  Matrix drift;
  std::vector<std::pair<Matrix, Matrix>> channels;
};

/// One channel driving every spin: (sum Ix, sum Iy).
ControlSystem collective_controls(const Matrix& drift);
/// One channel per spin.
ControlSystem selective_controls(const Matrix& drift);

/// Product of exp(-i (H_drift + scale (ux Ix + uy Iy)) dt), last segment
/// leftmost.
Matrix sequence_propagator(const ControlSequence& c, const ControlSystem& sys,
                           double scale = 1.0);
/// Single collective channel over `drift`.
Matrix sequence_propagator(const ControlSequence& c, const Matrix& drift,
                           double scale = 1.0);

/// |Tr(U_target^dagger U)| / d.
double control_fidelity(const ControlSequence& c, const ControlSystem& sys,
                        const Matrix& target, double scale = 1.0);

struct FidelityGradient {
  double fidelity = 0.0;
  /// d fidelity / d u, same layout as ControlSequence::segments.
  std::vector<std::vector<double>> gradient;
};

/// Gradient from one forward and one backward propagator sweep, with the
/// exact derivative of each segment exponential.
FidelityGradient grape_gradient(const ControlSequence& c,
                                const ControlSystem& sys, const Matrix& target,
                                double scale = 1.0);

/// Weighted mean of per-scale fidelities (and gradients). Weights are
/// normalised. Throws ValidationError when no scalings are present.
double robust_objective(const ControlSequence& c, const ControlSystem& sys,
                        const Matrix& target);
FidelityGradient robust_gradient(const ControlSequence& c,
                                 const ControlSystem& sys,
                                 const Matrix& target);

struct OptimizeOptions {
  int max_iters = 200;
  /// Stop when 1 - F < tol.
  double tol = 1e-4;
  /// Objective F - power_penalty * sum u^2 dt.
  double power_penalty = 0.0;
  /// Objective F - amplitude_penalty * sum max(0, |u| - amplitude_limit)^2.
  double amplitude_penalty = 0.0;
  double amplitude_limit = 0.0;
  /// Use the RF-scaling ensemble of the controls as the objective.
  bool robust = false;
};

struct OptimizeResult {
  ControlSequence controls;
  /// Fidelity after every accepted step, starting with the initial value.
  std::vector<double> trace;
  double fidelity = 0.0;
  int iterations = 0;
  bool converged = false;
  /// No ascent direction could be found; the best controls so far are kept.
  bool stalled = false;
};

OptimizeResult optimize(const ControlSequence& c0, const ControlSystem& sys,
                        const Matrix& target, const OptimizeOptions& options);

/// Smooth low-power starting pulse: per control a random offset plus a
/// half-sine ramp, amplitudes up to `amplitude` rad/s.
ControlSequence initial_controls(int segments, double dt, int channels,
                                 double amplitude, std::uint64_t seed);

/// Runs `starts` optimizations from initial_controls with seeds derived from
/// `seed` and keeps the best.
OptimizeResult optimize_multistart(int segments, double dt,
                                   const ControlSystem& sys,
                                   const Matrix& target,
                                   const OptimizeOptions& options,
                                   double amplitude, std::uint64_t seed,
                                   int starts = 4);

/// Default RF ensemble {0.95, 1.0, 1.05} with equal weights.
std::vector<std::pair<double, double>> default_rf_scalings();

/// Sub-pulse of a strongly modulated pulse: amplitude in rad/s, phase in
/// radians, frequency offset in Hz, duration in seconds.
struct SmpPulse {
  double amplitude = 0.0;
  double phase = 0.0;
  double offset_hz = 0.0;
  double duration = 0.0;
};

/// Discretises each sub-pulse with the phase ramp phi + 2 pi offset t,
/// sampled at segment midpoints and restarted for every sub-pulse.
ControlSequence smp_compile(std::span<const SmpPulse> pulses, double dt);

/// Exact propagator of the sub-pulses for a drift that commutes with the
/// total Iz of the collective channel.
Matrix smp_propagator(std::span<const SmpPulse> pulses, const Matrix& drift);

}  // namespace spinforge

#endif  // SPINFORGE_GRAPE_HPP
