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

#include "spinforge/grape.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "spinforge/errors.hpp"

namespace spinforge {

namespace {

void validate(const ControlSequence& c, const ControlSystem& sys) {
  if (!(c.dt > 0.0)) throw ValidationError("segment length must be positive");
  if (sys.channels.empty()) throw ValidationError("no control channels");
  const auto width = 2 * sys.channels.size();
  for (const auto& seg : c.segments) {
    if (seg.size() != width) {
      throw ValidationError("segment has " + std::to_string(seg.size()) +
                            " amplitudes, the system expects " +
                            std::to_string(width));
    }
  }
  for (const auto& [w, s] : c.rf_scalings) {
    if (!(w > 0.0)) throw ValidationError("RF scaling weights must be positive");
    (void)s;
  }
}

Matrix segment_hamiltonian(const std::vector<double>& seg,
                           const ControlSystem& sys, double scale) {
  Matrix h = sys.drift;
  for (std::size_t k = 0; k < sys.channels.size(); ++k) {
    h += scale * (seg[2 * k] * sys.channels[k].first +
                  seg[2 * k + 1] * sys.channels[k].second);
  }
  return h;
}

Matrix total_operator(const Matrix& op2, int n) {
  const Eigen::Index dim = dimension_for(n);
  Matrix m = Matrix::Zero(dim, dim);
  for (int s = 0; s < n; ++s) m += spin_operator(op2, s, n);
  return m;
}

cplx sinc_phase(double la, double lb, double dt) {
  const double x = (la - lb) * dt / 2.0;
  const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  return -kI * dt * std::exp(-kI * (la + lb) * dt / 2.0) * sinc;
}

double penalty(const ControlSequence& c, const OptimizeOptions& o,
               std::vector<std::vector<double>>* grad) {
  double p = 0.0;
  for (std::size_t j = 0; j < c.segments.size(); ++j) {
    for (std::size_t k = 0; k < c.segments[j].size(); ++k) {
      const double u = c.segments[j][k];
      p += o.power_penalty * u * u * c.dt;
      double dp = 2.0 * o.power_penalty * u * c.dt;
      const double excess = std::abs(u) - o.amplitude_limit;
      if (o.amplitude_penalty > 0.0 && excess > 0.0) {
        p += o.amplitude_penalty * excess * excess;
        dp += 2.0 * o.amplitude_penalty * excess * (u > 0 ? 1.0 : -1.0);
      }
      if (grad) (*grad)[j][k] -= dp;
    }
  }
  return p;
}

FidelityGradient objective(const ControlSequence& c, const ControlSystem& sys,
                           const Matrix& target, const OptimizeOptions& o) {
  FidelityGradient g = o.robust ? robust_gradient(c, sys, target)
                                : grape_gradient(c, sys, target);
  g.fidelity -= penalty(c, o, &g.gradient);
  return g;
}

double objective_value(const ControlSequence& c, const ControlSystem& sys,
                       const Matrix& target, const OptimizeOptions& o) {
  const double f = o.robust ? robust_objective(c, sys, target)
                            : control_fidelity(c, sys, target);
  return f - penalty(c, o, nullptr);
}

}  // namespace

int ControlSequence::channels() const {
  if (segments.empty()) return 0;
  return static_cast<int>(segments.front().size() / 2);
}

ControlSystem collective_controls(const Matrix& drift) {
  const int n = qubits_for_dimension(drift.rows());
  return ControlSystem{drift,
                       {{total_operator(spin_x(), n), total_operator(spin_y(), n)}}};
}

ControlSystem selective_controls(const Matrix& drift) {
  const int n = qubits_for_dimension(drift.rows());
  ControlSystem sys{drift, {}};
  for (int s = 0; s < n; ++s) {
    sys.channels.emplace_back(spin_operator(spin_x(), s, n),
                              spin_operator(spin_y(), s, n));
  }
  return sys;
}

Matrix sequence_propagator(const ControlSequence& c, const ControlSystem& sys,
                           double scale) {
  validate(c, sys);
  Matrix u = Matrix::Identity(sys.drift.rows(), sys.drift.cols());
  for (const auto& seg : c.segments) {
    u = propagator(segment_hamiltonian(seg, sys, scale), c.dt) * u;
  }
  return u;
}

Matrix sequence_propagator(const ControlSequence& c, const Matrix& drift,
                           double scale) {
  return sequence_propagator(c, collective_controls(drift), scale);
}

double control_fidelity(const ControlSequence& c, const ControlSystem& sys,
                        const Matrix& target, double scale) {
  const Matrix u = sequence_propagator(c, sys, scale);
  if (target.rows() != u.rows() || target.cols() != u.cols()) {
    throw ValidationError("target does not act on the drift's space");
  }
  return std::abs((target.adjoint() * u).trace()) /
         static_cast<double>(u.rows());
}

FidelityGradient grape_gradient(const ControlSequence& c,
                                const ControlSystem& sys, const Matrix& target,
                                double scale) {
  validate(c, sys);
  const Eigen::Index dim = sys.drift.rows();
  if (target.rows() != dim || target.cols() != dim) {
    throw ValidationError("target does not act on the drift's space");
  }
  const std::size_t nseg = c.segments.size();
  std::vector<HermitianEigen> eig;
  std::vector<Matrix> steps;
  eig.reserve(nseg);
  steps.reserve(nseg);
  // Forward sweep: forward[j] = U_j ... U_1 (forward[0] = identity).
  std::vector<Matrix> forward(nseg + 1);
  forward[0] = Matrix::Identity(dim, dim);
  for (std::size_t j = 0; j < nseg; ++j) {
    eig.push_back(hermitian_eigen(segment_hamiltonian(c.segments[j], sys, scale)));
    const auto& e = eig.back();
    Vector phases(dim);
    for (Eigen::Index a = 0; a < dim; ++a) {
      phases(a) = std::exp(-kI * e.values(a) * c.dt);
    }
    steps.push_back(e.vectors * phases.asDiagonal() * e.vectors.adjoint());
    forward[j + 1] = steps.back() * forward[j];
  }
  const cplx g = (target.adjoint() * forward[nseg]).trace();
  const auto d = static_cast<double>(dim);
  FidelityGradient out;
  out.fidelity = std::abs(g) / d;
  out.gradient.assign(nseg, std::vector<double>(2 * sys.channels.size(), 0.0));
  if (std::abs(g) == 0.0) return out;

  // Backward sweep: back = U_target^dagger U_N ... U_{j+1}.
  Matrix back = target.adjoint();
  for (std::size_t jj = nseg; jj-- > 0;) {
    const auto& e = eig[jj];
    const Matrix m = e.vectors.adjoint() * forward[jj] * back * e.vectors;
    Matrix gamma(dim, dim);
    for (Eigen::Index a = 0; a < dim; ++a) {
      for (Eigen::Index b = 0; b < dim; ++b) {
        gamma(a, b) = sinc_phase(e.values(a), e.values(b), c.dt);
      }
    }
    for (std::size_t k = 0; k < sys.channels.size(); ++k) {
      for (int axis = 0; axis < 2; ++axis) {
        const Matrix& op = axis == 0 ? sys.channels[k].first : sys.channels[k].second;
        const Matrix kp = scale * (e.vectors.adjoint() * op * e.vectors);
        cplx dg = 0.0;
        for (Eigen::Index a = 0; a < dim; ++a) {
          for (Eigen::Index b = 0; b < dim; ++b) {
            dg += m(b, a) * gamma(a, b) * kp(a, b);
          }
        }
        out.gradient[jj][2 * k + axis] =
            (std::conj(g) * dg).real() / (std::abs(g) * d);
      }
    }
    back = back * steps[jj];
  }
  return out;
}

double robust_objective(const ControlSequence& c, const ControlSystem& sys,
                        const Matrix& target) {
  if (c.rf_scalings.empty()) {
    throw ValidationError("robust objective needs RF scalings");
  }
  validate(c, sys);
  double total_w = 0.0;
  double f = 0.0;
  for (const auto& [w, s] : c.rf_scalings) {
    total_w += w;
    f += w * control_fidelity(c, sys, target, s);
  }
  return f / total_w;
}

FidelityGradient robust_gradient(const ControlSequence& c,
                                 const ControlSystem& sys,
                                 const Matrix& target) {
  if (c.rf_scalings.empty()) {
    throw ValidationError("robust objective needs RF scalings");
  }
  double total_w = 0.0;
  for (const auto& rf : c.rf_scalings) total_w += rf.first;
  FidelityGradient out;
  for (const auto& [w, s] : c.rf_scalings) {
    const FidelityGradient g = grape_gradient(c, sys, target, s);
    if (out.gradient.empty()) {
      out.gradient.assign(g.gradient.size(),
                          std::vector<double>(g.gradient.front().size(), 0.0));
    }
    out.fidelity += w / total_w * g.fidelity;
    for (std::size_t j = 0; j < g.gradient.size(); ++j) {
      for (std::size_t k = 0; k < g.gradient[j].size(); ++k) {
        out.gradient[j][k] += w / total_w * g.gradient[j][k];
      }
    }
  }
  return out;
}

OptimizeResult optimize(const ControlSequence& c0, const ControlSystem& sys,
                        const Matrix& target, const OptimizeOptions& options) {
  validate(c0, sys);
  if (options.max_iters < 0) throw ValidationError("max_iters must be >= 0");
  if (options.robust && c0.rf_scalings.empty()) {
    throw ValidationError("robust optimization needs RF scalings");
  }
  OptimizeResult out;
  out.controls = c0;
  FidelityGradient current = objective(c0, sys, target, options);
  out.trace.push_back(current.fidelity);
  double step = 0.1 / (c0.dt * c0.dt);
  for (int it = 0; it < options.max_iters; ++it) {
    if (1.0 - current.fidelity < options.tol) {
      out.converged = true;
      break;
    }
    double norm2 = 0.0;
    for (const auto& row : current.gradient) {
      for (double v : row) norm2 += v * v;
    }
    if (norm2 == 0.0) {
      out.stalled = true;
      break;
    }
    bool accepted = false;
    for (int tries = 0; tries < 60; ++tries) {
      ControlSequence trial = out.controls;
      for (std::size_t j = 0; j < trial.segments.size(); ++j) {
        for (std::size_t k = 0; k < trial.segments[j].size(); ++k) {
          trial.segments[j][k] += step * current.gradient[j][k];
        }
      }
      const double value = objective_value(trial, sys, target, options);
      if (value > current.fidelity) {
        out.controls = std::move(trial);
        current = objective(out.controls, sys, target, options);
        out.trace.push_back(current.fidelity);
        step *= 2.0;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    out.iterations = it + 1;
    if (!accepted) {
      out.stalled = true;
      break;
    }
  }
  if (!out.converged && 1.0 - current.fidelity < options.tol) out.converged = true;
  out.fidelity = current.fidelity;
  return out;
}

ControlSequence initial_controls(int segments, double dt, int channels,
                                 double amplitude, std::uint64_t seed) {
  if (segments < 1 || channels < 1) {
    throw ValidationError("need at least one segment and one channel");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  ControlSequence c;
  c.dt = dt;
  c.segments.assign(segments, std::vector<double>(2 * channels, 0.0));
  for (int k = 0; k < 2 * channels; ++k) {
    const double offset = 0.5 * amplitude * coef(rng);
    const double ramp = 0.5 * amplitude * coef(rng);
    for (int j = 0; j < segments; ++j) {
      const double t = (j + 0.5) / segments;
      c.segments[j][k] = offset + ramp * std::sin(kPi * t);
    }
  }
  return c;
}

OptimizeResult optimize_multistart(int segments, double dt,
                                   const ControlSystem& sys,
                                   const Matrix& target,
                                   const OptimizeOptions& options,
                                   double amplitude, std::uint64_t seed,
                                   int starts) {
  if (starts < 1) throw ValidationError("need at least one start");
  std::mt19937_64 seeder(seed);
  OptimizeResult best;
  bool have = false;
  for (int s = 0; s < starts; ++s) {
    ControlSequence c0 = initial_controls(
        segments, dt, static_cast<int>(sys.channels.size()), amplitude, seeder());
    if (options.robust) c0.rf_scalings = default_rf_scalings();
    OptimizeResult r = optimize(c0, sys, target, options);
    if (!have || r.fidelity > best.fidelity) {
      best = std::move(r);
      have = true;
    }
    if (best.converged) break;
  }
  return best;
}

std::vector<std::pair<double, double>> default_rf_scalings() {
  return {{1.0 / 3.0, 0.95}, {1.0 / 3.0, 1.0}, {1.0 / 3.0, 1.05}};
}

ControlSequence smp_compile(std::span<const SmpPulse> pulses, double dt) {
  if (!(dt > 0.0)) throw ValidationError("segment length must be positive");
  ControlSequence c;
  c.dt = dt;
  for (std::size_t p = 0; p < pulses.size(); ++p) {
    const SmpPulse& sp = pulses[p];
    if (!(sp.duration > 0.0)) {
      throw ValidationError("sub-pulse " + std::to_string(p) +
                            " needs a positive duration");
    }
    const double ratio = sp.duration / dt;
    const auto count = static_cast<long>(std::llround(ratio));
    if (count < 1 || std::abs(count * dt - sp.duration) > 1e-9) {
      throw ValidationError("segment length does not divide sub-pulse " +
                            std::to_string(p));
    }
    for (long k = 0; k < count; ++k) {
      const double t = (static_cast<double>(k) + 0.5) * dt;
      const double phase = sp.phase + 2.0 * kPi * sp.offset_hz * t;
      c.segments.push_back(
          {sp.amplitude * std::cos(phase), sp.amplitude * std::sin(phase)});
    }
  }
  return c;
}

Matrix smp_propagator(std::span<const SmpPulse> pulses, const Matrix& drift) {
  const int n = qubits_for_dimension(drift.rows());
  const Matrix ix = total_operator(spin_x(), n);
  const Matrix iy = total_operator(spin_y(), n);
  const Matrix iz = total_operator(spin_z(), n);
  Matrix u = Matrix::Identity(drift.rows(), drift.cols());
  for (const SmpPulse& p : pulses) {
    const double w = 2.0 * kPi * p.offset_hz;
    const Matrix h = drift + p.amplitude * (std::cos(p.phase) * ix +
                                            std::sin(p.phase) * iy) -
                     w * iz;
    u = propagator(w * iz, p.duration) * propagator(h, p.duration) * u;
  }
  return u;
}

}  // namespace spinforge
