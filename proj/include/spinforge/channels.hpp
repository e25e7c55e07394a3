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

#ifndef SPINFORGE_CHANNELS_HPP
#define SPINFORGE_CHANNELS_HPP

#include <span>
#include <vector>

#include "spinforge/events.hpp"
#include "spinforge/linalg.hpp"
#include "spinforge/spin_system.hpp"
#include "spinforge/states.hpp"

namespace spinforge {

/// Operator-sum map rho -> sum_k E_k rho E_k^dagger.
struct KrausChannel {
  std::vector<Matrix> operators;
};

/// max-abs deviation of sum_k E_k^dagger E_k from the identity.
double completeness_error(const KrausChannel& ch);

/// Throws ValidationError when the channel is not trace preserving within
/// 1e-10 or the dimensions differ.
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch);

KrausChannel unitary_channel(const Matrix& u);
/// Single-spin channel acting on `spin` of an n-spin register.
KrausChannel embed_channel(const KrausChannel& single, int spin, int n);

/// Derived single-spin parameters for an interval t.
struct RelaxationParams {
  double t = 0.0;
  double t1 = 1.0;
  double t2 = 1.0;
  double polarisation = 1e-5;

  /// (1 + e^{-t/T2}) / 2 with the given T2.
  double lambda() const;
  /// 1 - e^{-t/T1}.
  double gamma() const;
  /// (1 + polarisation) / 2.
  double p() const;
};

/// E0 = sqrt(lambda) E, E1 = sqrt(1 - lambda) Z.
KrausChannel phase_damping(double t, double t2);
/// Four-operator generalized amplitude damping towards E/2 + eps Iz.
KrausChannel generalized_amplitude_damping(double t, double t1, double eps_pol);

/// Generalized amplitude damping followed by phase damping with the
/// intrinsic rate 1/T2' = 1/T2 - 1/(2 T1), on one spin.
DensityMatrix relax_spin(const DensityMatrix& rho, const SpinSystem& sys,
                         int spin, double t);
/// relax_spin on every spin in turn.
DensityMatrix relax(const DensityMatrix& rho, const SpinSystem& sys, double t);

/// Total coherence order (bra minus ket Iz quantum number) of an element,
/// restricted to spins of one species class.
int coherence_order(std::uint64_t row, std::uint64_t col, const SpinSystem& sys,
                    int species_class);

/// Analytic crush: keeps elements whose coherence order vanishes within every
/// species when preserve_zero_quantum is set, and only populations otherwise.
DensityMatrix crush_gradient(const DensityMatrix& rho, const SpinSystem& sys,
                             bool preserve_zero_quantum);

/// Per-member phase applied by a gradient of signed `area` to an ensemble
/// of `samples` members, with species weights (2n + 1)^class.
struct GradientEnsemble {
  std::vector<Matrix> members;

  static GradientEnsemble from(const DensityMatrix& rho, int samples);
  void gradient(const SpinSystem& sys, double area);
  void apply_unitary(const Matrix& u);
  DensityMatrix average() const;
};

/// Ensemble-average crush (64 z-phase samples by default).
DensityMatrix crush_ensemble(const DensityMatrix& rho, const SpinSystem& sys,
                             double area = 1.0, int samples = 64);

/// Zeroes elements coupling different computational states of the listed
/// spins (every spin when empty).
DensityMatrix projective_dephase(const DensityMatrix& rho,
                                 std::span<const int> spins = {});

enum class CrushModel { kAnalytic, kEnsemble };

struct RunOptions {
  /// Apply per-spin relaxation, deferred to just before the spin's next
  /// pulse and flushed at the end.
  bool relaxation = false;
  CrushModel crush_model = CrushModel::kAnalytic;
  int ensemble_samples = 64;
};

/// Runs pulses, delays, frame rotations, crushes and measurements on a
/// density matrix.
DensityMatrix run_events(const DensityMatrix& rho, const SpinSystem& sys,
                         const EventList& events, const RunOptions& options = {});

/// run_events with relaxation enabled.
DensityMatrix segmented_relaxation_run(const DensityMatrix& rho,
                                       const SpinSystem& sys,
                                       const EventList& events);

/// Trace distance 1/2 ||a - b||_1.
double trace_distance(const Matrix& a, const Matrix& b);

}  // namespace spinforge

#endif  // SPINFORGE_CHANNELS_HPP
