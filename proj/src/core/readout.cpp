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

#include "spinforge/readout.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>
#include <unsupported/Eigen/FFT>

#include "spinforge/errors.hpp"
#include "spinforge/events.hpp"

namespace spinforge {

namespace {

constexpr double kLineFloor = 1e-14;

Matrix readout_pulse(ReadoutPulse p) {
  switch (p) {
    case ReadoutPulse::kNone: return Matrix::Identity(2, 2);
    case ReadoutPulse::kX90: return rotation_2x2(kPi / 2.0, 0.0);
    case ReadoutPulse::kY90: return rotation_2x2(kPi / 2.0, kPi / 2.0);
  }
  throw ValidationError("unknown readout pulse");
}

Matrix setting_unitary(const ExperimentSetting& setting, int n) {
  if (static_cast<int>(setting.size()) != n) {
    throw ValidationError("readout setting needs one pulse per spin");
  }
  Matrix u = Matrix::Identity(1, 1);
  for (int s = 0; s < n; ++s) u = kron(u, readout_pulse(setting[s]));
  return u;
}

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

RealMatrix stack(const Vector& v) {
  RealMatrix out(2 * v.size(), 1);
  out.col(0).head(v.size()) = v.real();
  out.col(0).tail(v.size()) = v.imag();
  return out;
}

}  // namespace

std::vector<SpectrumLine> observable_lines(const Matrix& rho,
                                           const SpinSystem& sys,
                                           const std::optional<std::string>& species,
                                           bool include_zero) {
  const int n = sys.size();
  if (rho.rows() != dimension_for(n) || rho.cols() != rho.rows()) {
    throw ValidationError("state and spin system differ in size");
  }
  std::vector<SpectrumLine> lines;
  const std::uint64_t others = std::uint64_t{1} << (n - 1);
  for (int k = 0; k < n; ++k) {
    if (species && sys.spin(k).species != *species) continue;
    const std::uint64_t kmask = std::uint64_t{1} << (n - 1 - k);
    for (std::uint64_t b = 0; b < others; ++b) {
      // Spread the partner bits around spin k.
      std::uint64_t s = 0;
      std::string partner;
      double freq = sys.spin(k).shift_hz;
      int bit_index = n - 2;
      for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        const int bit = static_cast<int>((b >> bit_index) & 1U);
        --bit_index;
        partner.push_back(bit ? '1' : '0');
        if (bit) s |= std::uint64_t{1} << (n - 1 - j);
        freq += (bit ? -0.5 : 0.5) * sys.j_hz(k, j);
      }
      const std::uint64_t r = s | kmask;
      const cplx amp = rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s));
      if (!include_zero && std::abs(amp) < kLineFloor) continue;
      lines.push_back({freq, amp, k, partner});
    }
  }
  return lines;
}

std::vector<cplx> synthesize_fid(std::span<const SpectrumLine> lines,
                                 double t2_star, int npoints, double dwell) {
  if (!is_power_of_two(npoints)) {
    throw ValidationError("FID length must be a power of two");
  }
  if (!(dwell > 0.0) || !(t2_star > 0.0)) {
    throw ValidationError("dwell and T2* must be positive");
  }
  const double nyquist = 0.5 / dwell;
  for (const SpectrumLine& l : lines) {
    if (std::abs(l.frequency_hz) >= nyquist) {
      std::ostringstream msg;
      msg << "line at " << l.frequency_hz << " Hz exceeds the Nyquist limit "
          << nyquist << " Hz";
      throw ValidationError(msg.str());
    }
  }
  std::vector<cplx> fid(npoints, cplx(0.0, 0.0));
  for (int k = 0; k < npoints; ++k) {
    const double t = k * dwell;
    for (const SpectrumLine& l : lines) {
      fid[k] += l.amplitude *
                std::exp(cplx(-t / t2_star, 2.0 * kPi * l.frequency_hz * t));
    }
  }
  return fid;
}

std::vector<cplx> synthesize_fid(const DensityMatrix& rho, const SpinSystem& sys,
                                 double t2_star, int npoints, double dwell,
                                 const std::optional<std::string>& species) {
  const auto lines = observable_lines(rho.matrix(), sys, species);
  return synthesize_fid(lines, t2_star, npoints, dwell);
}

Spectrum fid_spectrum(std::span<const cplx> fid, double dwell) {
  const int n = static_cast<int>(fid.size());
  if (!is_power_of_two(n)) throw ValidationError("FID length must be a power of two");
  if (!(dwell > 0.0)) throw ValidationError("dwell must be positive");
  Eigen::FFT<double> fft;
  std::vector<cplx> in(fid.begin(), fid.end());
  in[0] *= 0.5;
  std::vector<cplx> out;
  fft.fwd(out, in);
  Spectrum s;
  s.frequency_hz.resize(n);
  s.values.resize(n);
  for (int k = 0; k < n; ++k) {
    const int src = (k + n / 2) % n;
    const int signed_bin = k - n / 2;
    s.frequency_hz[k] = signed_bin / (n * dwell);
    s.values[k] = out[src];
  }
  return s;
}

std::string spectrum_csv(const Spectrum& s) {
  std::ostringstream out;
  out.precision(12);
  out << "frequency_hz,real,imag\n";
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    out << s.frequency_hz[k] << ',' << s.values[k].real() << ','
        << s.values[k].imag() << '\n';
  }
  return out.str();
}

std::string lines_csv(std::span<const SpectrumLine> lines) {
  std::ostringstream out;
  out.precision(12);
  out << "frequency_hz,real,imag,spin,partner\n";
  for (const SpectrumLine& l : lines) {
    out << l.frequency_hz << ',' << l.amplitude.real() << ','
        << l.amplitude.imag() << ',' << l.spin << ','
        << (l.partner.empty() ? "-" : l.partner) << '\n';
  }
  return out.str();
}

std::string eigenstate_readout(const DensityMatrix& rho, const SpinSystem& sys,
                               ReadoutMode mode) {
  const int n = sys.size();
  if (rho.qubits() != n) {
    throw ValidationError("state and spin system differ in size");
  }
  const Matrix dev =
      rho.matrix() - Matrix::Identity(rho.dim(), rho.dim()) / static_cast<double>(rho.dim());
  const double diag = dev.diagonal().cwiseAbs().maxCoeff();
  if (!(diag > 0.0)) throw ValidationError("state has no deviation to read out");
  const Matrix off = dev - Matrix(dev.diagonal().asDiagonal());
  if (max_abs(off) > 1e-9 * diag) {
    throw ValidationError("not an eigenstate: superposition detected");
  }
  const ExperimentSetting all_y(n, ReadoutPulse::kY90);
  const Vector ref = simulate_experiment(thermal_state(sys).matrix(), sys, all_y);
  const std::size_t per_spin = std::size_t{1} << (n - 1);
  std::string bits(n, '?');

  if (mode == ReadoutMode::kHomonuclear) {
    const Vector sig = simulate_experiment(rho.matrix(), sys, all_y);
    for (int k = 0; k < n; ++k) {
      cplx total(0.0, 0.0), ref_total(0.0, 0.0);
      for (std::size_t b = 0; b < per_spin; ++b) {
        total += sig(static_cast<Eigen::Index>(k * per_spin + b));
        ref_total += ref(static_cast<Eigen::Index>(k * per_spin + b));
      }
      const double projected = (total * std::conj(ref_total)).real();
      if (std::abs(projected) < 1e-9 * diag * std::abs(ref_total)) {
        throw ValidationError("not an eigenstate: spin " + std::to_string(k) +
                              " gives no signal");
      }
      bits[k] = projected > 0.0 ? '0' : '1';
    }
    return bits;
  }

  if (n != 2) {
    throw ValidationError("heteronuclear readout is defined for two spins");
  }
  ExperimentSetting one_y = {ReadoutPulse::kY90, ReadoutPulse::kNone};
  const Vector sig = simulate_experiment(rho.matrix(), sys, one_y);
  const cplx phase_ref = ref(0) + ref(1);
  const cplx l0 = sig(0), l1 = sig(1);
  const double a0 = std::abs(l0), a1 = std::abs(l1);
  const double big = std::max(a0, a1), small = std::min(a0, a1);
  if (big < 1e-9 * diag || small > 1e-6 * big) {
    throw ValidationError(
        "not an eigenstate: both or neither doublet lines observed");
  }
  const cplx line = a0 > a1 ? l0 : l1;
  bits[0] = (line * std::conj(phase_ref)).real() > 0.0 ? '0' : '1';
  bits[1] = a0 > a1 ? '0' : '1';
  return bits;
}

TomographyPlan one_spin_plan() {
  return {{{ReadoutPulse::kNone}, {ReadoutPulse::kY90}}};
}

TomographyPlan nine_experiment_plan() {
  TomographyPlan p;
  const ReadoutPulse choices[] = {ReadoutPulse::kNone, ReadoutPulse::kX90,
                                  ReadoutPulse::kY90};
  for (ReadoutPulse a : choices) {
    for (ReadoutPulse b : choices) p.experiments.push_back({a, b});
  }
  return p;
}

TomographyPlan four_experiment_plan() {
  return {{{ReadoutPulse::kNone, ReadoutPulse::kNone},
           {ReadoutPulse::kNone, ReadoutPulse::kX90},
           {ReadoutPulse::kX90, ReadoutPulse::kY90},
           {ReadoutPulse::kY90, ReadoutPulse::kY90}}};
}

Vector simulate_experiment(const Matrix& rho, const SpinSystem& sys,
                           const ExperimentSetting& setting) {
  const Matrix u = setting_unitary(setting, sys.size());
  const auto lines =
      observable_lines(u * rho * u.adjoint(), sys, std::nullopt, true);
  Vector out(static_cast<Eigen::Index>(lines.size()));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = lines[i].amplitude;
  }
  return out;
}

ReferenceSignal thermal_reference(const SpinSystem& sys, double scale) {
  const double s = scale > 0.0 ? scale : thermal_scale(sys);
  const DensityMatrix th = thermal_state(sys);
  ReferenceSignal r;
  r.setting.assign(sys.size(), ReadoutPulse::kY90);
  r.amplitudes = simulate_experiment(th.matrix(), sys, r.setting);
  r.known_deviation = deviation(th, s).matrix;
  return r;
}

namespace {

struct Design {
  RealMatrix a;
  std::vector<std::string> labels;
};

Design design_matrix(const SpinSystem& sys, const TomographyPlan& plan) {
  const int n = sys.size();
  std::vector<std::string> labels = basis_labels(n);
  labels.erase(labels.begin());
  std::vector<RealMatrix> blocks;
  Eigen::Index rows = 0;
  for (const ExperimentSetting& e : plan.experiments) {
    const Eigen::Index lines = static_cast<Eigen::Index>(n) << (n - 1);
    RealMatrix block(2 * lines, static_cast<Eigen::Index>(labels.size()));
    for (std::size_t j = 0; j < labels.size(); ++j) {
      block.col(static_cast<Eigen::Index>(j)) =
          stack(simulate_experiment(basis_operator(labels[j], n), sys, e));
    }
    rows += block.rows();
    blocks.push_back(std::move(block));
  }
  Design d{RealMatrix(rows, static_cast<Eigen::Index>(labels.size())), labels};
  Eigen::Index at = 0;
  for (const RealMatrix& b : blocks) {
    d.a.middleRows(at, b.rows()) = b;
    at += b.rows();
  }
  return d;
}

int numeric_rank(const RealMatrix& a) {
  Eigen::JacobiSVD<RealMatrix> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double floor = 1e-10 * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > floor ? 1 : 0;
  return rank;
}

}  // namespace

int plan_rank(const SpinSystem& sys, const TomographyPlan& plan) {
  if (plan.experiments.empty()) return 0;
  return numeric_rank(design_matrix(sys, plan).a);
}

TomographyResult reconstruct(const SpinSystem& sys, const TomographyPlan& plan,
                             std::span<const Vector> data,
                             const std::optional<ReferenceSignal>& reference) {
  if (!reference) {
    throw ValidationError(
        "tomography needs a reference signal for phase and amplitude");
  }
  if (data.size() != plan.experiments.size() || data.empty()) {
    throw ValidationError("one data vector per experiment is required");
  }
  const int n = sys.size();
  const Design d = design_matrix(sys, plan);
  const int rank = numeric_rank(d.a);
  if (rank < d.a.cols()) {
    throw ValidationError("tomography plan is rank deficient (rank " +
                          std::to_string(rank) + " of " +
                          std::to_string(d.a.cols()) + ")");
  }
  const Vector model =
      simulate_experiment(reference->known_deviation, sys, reference->setting);
  if (model.size() != reference->amplitudes.size() || model.norm() == 0.0) {
    throw ValidationError("reference signal does not match its known state");
  }
  const cplx gain = model.dot(reference->amplitudes) / model.squaredNorm();
  if (std::abs(gain) == 0.0) throw ValidationError("reference signal is empty");

  RealMatrix y(d.a.rows(), 1);
  Eigen::Index at = 0;
  const Eigen::Index lines = static_cast<Eigen::Index>(n) << (n - 1);
  for (const Vector& v : data) {
    if (v.size() != lines) {
      throw ValidationError("experiment data has the wrong number of lines");
    }
    y.middleRows(at, 2 * lines) = stack(v / gain);
    at += 2 * lines;
  }
  const RealVector c =
      d.a.completeOrthogonalDecomposition().solve(y).col(0);

  TomographyResult r;
  r.rank = rank;
  r.residual = (d.a * c - y.col(0)).norm();
  r.coefficients.qubits = n;
  for (std::size_t j = 0; j < d.labels.size(); ++j) {
    const double v = c(static_cast<Eigen::Index>(j));
    if (std::abs(v) >= 1e-14) r.coefficients.terms[d.labels[j]] = v;
  }
  Matrix dev = Matrix::Zero(dimension_for(n), dimension_for(n));
  for (std::size_t j = 0; j < d.labels.size(); ++j) {
    dev += c(static_cast<Eigen::Index>(j)) * basis_operator(d.labels[j], n);
  }
  r.deviation = {dev, 1.0};
  return r;
}

TomographyResult tomography_1spin(const SpinSystem& sys,
                                  std::span<const Vector> data,
                                  const std::optional<ReferenceSignal>& reference) {
  if (sys.size() != 1) throw ValidationError("one-spin tomography needs one spin");
  return reconstruct(sys, one_spin_plan(), data, reference);
}

TomographyResult tomography_2spin(const SpinSystem& sys,
                                  const TomographyPlan& plan,
                                  std::span<const Vector> data,
                                  const std::optional<ReferenceSignal>& reference) {
  if (sys.size() != 2) throw ValidationError("two-spin tomography needs two spins");
  return reconstruct(sys, plan, data, reference);
}

}  // namespace spinforge
