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

#ifndef SPINFORGE_READOUT_HPP
#define SPINFORGE_READOUT_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spinforge/linalg.hpp"
#include "spinforge/product_operators.hpp"
#include "spinforge/spin_system.hpp"
#include "spinforge/states.hpp"

namespace spinforge {

/// One line of a stick spectrum. The amplitude is the single-quantum element
/// <r|rho|s> where r has the owning spin in |1> and s in |0>; absorption is
/// positive real.
struct SpectrumLine {
  double frequency_hz = 0.0;
  cplx amplitude{0.0, 0.0};
  int spin = 0;
  /// States of the other spins, in register order.
  std::string partner;
};

/// Lines of every spin (or of one species), in spin-major order with partner
/// states counted upwards. Zero lines are dropped unless `include_zero`.
std::vector<SpectrumLine> observable_lines(
    const Matrix& rho, const SpinSystem& sys,
    const std::optional<std::string>& species = std::nullopt,
    bool include_zero = false);

/// sum_lines amplitude * exp((i 2 pi f - 1/t2_star) t) at t = k * dwell.
/// Throws when npoints is not a power of two or a line lies outside
/// (-1/(2 dwell), 1/(2 dwell)).
std::vector<cplx> synthesize_fid(std::span<const SpectrumLine> lines,
                                 double t2_star, int npoints, double dwell);
std::vector<cplx> synthesize_fid(
    const DensityMatrix& rho, const SpinSystem& sys, double t2_star,
    int npoints, double dwell,
    const std::optional<std::string>& species = std::nullopt);

struct Spectrum {
  std::vector<double> frequency_hz;
  std::vector<cplx> values;
};

/// Discrete Fourier transform with the zero frequency centred; the first
/// point is halved so lines carry no baseline offset.
Spectrum fid_spectrum(std::span<const cplx> fid, double dwell);
/// "frequency_hz,real,imag" header followed by one row per point.
std::string spectrum_csv(const Spectrum& s);
std::string lines_csv(std::span<const SpectrumLine> lines);

enum class ReadoutMode { kHomonuclear, kHeteronuclear };

/// Bit string of a (pseudo-)pure computational basis state read from line
/// phases after 90_y readout pulses. Heteronuclear mode (two spins) excites
/// the first spin only and reads the second from which doublet line appears.
/// Throws ValidationError when the state is not an eigenstate.
std::string eigenstate_readout(const DensityMatrix& rho, const SpinSystem& sys,
                               ReadoutMode mode);

enum class ReadoutPulse { kNone, kX90, kY90 };
/// One readout pulse choice per spin.
using ExperimentSetting = std::vector<ReadoutPulse>;

struct TomographyPlan {
  std::vector<ExperimentSetting> experiments;
};

/// {none, 90_y}.
TomographyPlan one_spin_plan();
/// {none, 90_x, 90_y} on each of two spins in all combinations.
TomographyPlan nine_experiment_plan();
/// A four-experiment subset of the nine with full rank.
TomographyPlan four_experiment_plan();

/// Line amplitudes (all lines, zeros kept) after the readout pulses.
Vector simulate_experiment(const Matrix& rho, const SpinSystem& sys,
                           const ExperimentSetting& setting);

/// Signal from a state whose deviation is known, in the units the
/// reconstruction should report.
struct ReferenceSignal {
  ExperimentSetting setting;
  Vector amplitudes;
  Matrix known_deviation;
};

/// Thermal state read out with 90_y on every spin; its deviation is taken in
/// units of `scale` (thermal_scale(sys) when zero).
ReferenceSignal thermal_reference(const SpinSystem& sys, double scale = 0.0);

struct TomographyResult {
  DeviationDensityMatrix deviation;
  ProductOperatorExpansion coefficients;
  double residual = 0.0;
  int rank = 0;
};

/// Rank of the real design matrix of a plan over all 4^n - 1 coefficients.
int plan_rank(const SpinSystem& sys, const TomographyPlan& plan);

/// Least-squares reconstruction from one amplitude vector per experiment.
/// Throws on a missing reference or a rank-deficient plan.
TomographyResult reconstruct(const SpinSystem& sys, const TomographyPlan& plan,
                             std::span<const Vector> data,
                             const std::optional<ReferenceSignal>& reference);

TomographyResult tomography_1spin(const SpinSystem& sys,
                                  std::span<const Vector> data,
                                  const std::optional<ReferenceSignal>& reference);
TomographyResult tomography_2spin(const SpinSystem& sys,
                                  const TomographyPlan& plan,
                                  std::span<const Vector> data,
                                  const std::optional<ReferenceSignal>& reference);

}  // namespace spinforge

#endif  // SPINFORGE_READOUT_HPP
