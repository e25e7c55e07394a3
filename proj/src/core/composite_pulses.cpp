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

#include "spinforge/composite_pulses.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "spinforge/errors.hpp"

namespace spinforge {

Matrix pulse_propagator(const Rotation& p) {
  const double nx = std::sin(p.colatitude) * std::cos(p.phase);
  const double ny = std::sin(p.colatitude) * std::sin(p.phase);
  const double nz = std::cos(p.colatitude);
  const double c = std::cos(p.theta / 2.0);
  const double s = std::sin(p.theta / 2.0);
  Matrix m(2, 2);
  m << cplx(c, -s * nz), cplx(-s * ny, -s * nx), cplx(s * ny, -s * nx),
      cplx(c, s * nz);
  return m;
}

Matrix sequence_unitary(const PulseSequence& seq) {
  Matrix u = Matrix::Identity(2, 2);
  for (const Rotation& p : seq) u = pulse_propagator(p) * u;
  return u;
}

PulseSequence apply_error(const PulseSequence& seq, const ErrorModel& model) {
  if (model.length_fraction == 0.0 && model.offset_fraction == 0.0) return seq;
  PulseSequence out;
  out.reserve(seq.size());
  for (Rotation p : seq) {
    p.theta *= 1.0 + model.length_fraction;
    if (model.offset_fraction != 0.0) {
      const double ax = std::sin(p.colatitude) * std::cos(p.phase);
      const double ay = std::sin(p.colatitude) * std::sin(p.phase);
      const double az = std::cos(p.colatitude) + model.offset_fraction;
      const double norm = std::sqrt(ax * ax + ay * ay + az * az);
      p.theta *= norm;
      p.colatitude = std::acos(az / norm);
      if (ax != 0.0 || ay != 0.0) p.phase = std::atan2(ay, ax);
    }
    out.push_back(p);
  }
  return out;
}

PulseSequence composite_z(double theta) {
  return {Rotation{kPi / 2.0, kPi / 2.0}, Rotation{theta, 0.0},
          Rotation{kPi / 2.0, 3.0 * kPi / 2.0}};
}

CorpseAngles corpse_angles(double theta, int n1, int n2, int n3) {
  const double k = std::asin(std::sin(theta / 2.0) / 2.0);
  const CorpseAngles a{2.0 * n1 * kPi + theta / 2.0 - k,
                       2.0 * n2 * kPi - 2.0 * k,
                       2.0 * n3 * kPi + theta / 2.0 - k};
  if (a.theta1 < 0.0 || a.theta2 < 0.0 || a.theta3 < 0.0) {
    throw ValidationError("CORPSE indices give a negative flip angle");
  }
  return a;
}

PulseSequence corpse(double theta, int n1, int n2, int n3) {
  const CorpseAngles a = corpse_angles(theta, n1, n2, n3);
  return {Rotation{a.theta1, 0.0}, Rotation{a.theta2, kPi},
          Rotation{a.theta3, 0.0}};
}

double bb1_phase(double theta, int phase_sign) {
  if (phase_sign != 1 && phase_sign != -1) {
    throw ValidationError("BB1 phase sign must be +1 or -1");
  }
  const double arg = -theta / (4.0 * kPi);
  if (std::abs(arg) > 1.0) {
    throw ValidationError("BB1 needs |theta| <= 4 pi");
  }
  return phase_sign * std::acos(arg);
}

PulseSequence bb1(double theta, int phase_sign, Bb1Placement placement) {
  const double phi1 = bb1_phase(theta, phase_sign);
  const PulseSequence correction = {Rotation{kPi, wrap_angle(phi1)},
                                    Rotation{2.0 * kPi, wrap_angle(3.0 * phi1)},
                                    Rotation{kPi, wrap_angle(phi1)}};
  PulseSequence out;
  switch (placement) {
    case Bb1Placement::kBefore:
      out = correction;
      out.push_back(Rotation{theta, 0.0});
      break;
    case Bb1Placement::kAfter:
      out.push_back(Rotation{theta, 0.0});
      out.insert(out.end(), correction.begin(), correction.end());
      break;
    case Bb1Placement::kMiddle:
      out.push_back(Rotation{theta / 2.0, 0.0});
      out.insert(out.end(), correction.begin(), correction.end());
      out.push_back(Rotation{theta / 2.0, 0.0});
      break;
  }
  return out;
}

double propagator_fidelity(const Matrix& target, const Matrix& actual) {
  if (target.rows() != actual.rows() || target.cols() != actual.cols() ||
      target.rows() != target.cols()) {
    throw ValidationError("fidelity needs square operators of equal size");
  }
  const cplx tr = (actual * target.adjoint()).trace();
  const cplx norm = (target * target.adjoint()).trace();
  return std::abs(tr / norm);
}

double propagator_infidelity(const Matrix& target, const Matrix& actual) {
  if (target.rows() != actual.rows() || target.cols() != actual.cols() ||
      target.rows() != target.cols()) {
    throw ValidationError("fidelity needs square operators of equal size");
  }
  const Matrix w = target.adjoint() * actual;
  const auto d = static_cast<double>(w.rows());
  if (w.rows() == 2) {
    // Remove the determinant phase, leaving [[a, b], [-b*, a*]] in SU(2).
    const cplx root = std::sqrt(w.determinant());
    const Matrix s = w / root;
    const cplx a = 0.5 * (s(0, 0) + std::conj(s(1, 1)));
    const cplx b = 0.5 * (s(0, 1) - std::conj(s(1, 0)));
    const double re = std::abs(a.real());
    return (std::norm(b) + a.imag() * a.imag()) / (1.0 + re);
  }
  Eigen::ComplexEigenSolver<Matrix> solver(w, false);
  const auto& ev = solver.eigenvalues();
  std::vector<double> delta(ev.size());
  cplx sum = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    delta[k] = std::arg(ev(k));
    sum += std::exp(kI * delta[k]);
  }
  double spread = 0.0;
  for (std::size_t j = 0; j < delta.size(); ++j) {
    for (std::size_t k = 0; k < delta.size(); ++k) {
      const double s = std::sin((delta[j] - delta[k]) / 2.0);
      spread += 2.0 * s * s;
    }
  }
  return spread / (d * (d + std::abs(sum)));
}

ErrorOrderResult error_order(
    const std::function<PulseSequence(double)>& builder, ErrorAxis axis,
    double theta) {
  const PulseSequence seq = builder(theta);
  const Matrix target = sequence_unitary(seq);
  ErrorOrderResult out;
  constexpr int kPoints = 13;
  for (int k = 0; k < kPoints; ++k) {
    const double e = std::pow(10.0, -4.0 + 2.0 * k / (kPoints - 1));
    ErrorModel model;
    if (axis == ErrorAxis::kLength) model.length_fraction = e;
    if (axis == ErrorAxis::kOffset) model.offset_fraction = e;
    out.errors.push_back(e);
    out.infidelities.push_back(
        propagator_infidelity(target, sequence_unitary(apply_error(seq, model))));
  }
  bool exact = true;
  for (double v : out.infidelities) exact = exact && v < 1e-28;
  if (exact) {
    out.status = ErrorOrderResult::Status::kExact;
    return out;
  }
  for (int k = 1; k < kPoints; ++k) {
    if (!(out.infidelities[k] > out.infidelities[k - 1]) ||
        !(out.infidelities[k - 1] > 0.0)) {
      out.status = ErrorOrderResult::Status::kNonMonotone;
      return out;
    }
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < kPoints; ++k) {
    const double x = std::log(out.errors[k]);
    const double y = std::log(out.infidelities[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  out.slope = (kPoints * sxy - sx * sy) / (kPoints * sxx - sx * sx);
  out.order = static_cast<int>(std::lround(out.slope));
  return out;
}

}  // namespace spinforge
