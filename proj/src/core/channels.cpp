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

#include "spinforge/channels.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "spinforge/errors.hpp"
#include "spinforge/evolution.hpp"

namespace spinforge {

namespace {

Matrix apply_single_spin(const Matrix& rho, const std::vector<Matrix>& ops,
                         int spin, int n) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const Matrix& e : ops) {
    const Matrix full = spin_operator(e, spin, n);
    out += full * rho * full.adjoint();
  }
  return out;
}

double weighted_order(std::uint64_t r, std::uint64_t c, const SpinSystem& sys) {
  const int n = sys.size();
  const double base = 2.0 * n + 1.0;
  const auto classes = sys.species_classes();
  double q = 0.0;
  for (int s = 0; s < n; ++s) {
    const int o = spin_bit(c, s, n) - spin_bit(r, s, n);
    q += std::pow(base, classes[s]) * o;
  }
  return q;
}

}  // namespace

double completeness_error(const KrausChannel& ch) {
  if (ch.operators.empty()) return std::numeric_limits<double>::infinity();
  const Eigen::Index dim = ch.operators.front().rows();
  Matrix sum = Matrix::Zero(dim, dim);
  for (const Matrix& e : ch.operators) {
    if (e.rows() != dim || e.cols() != dim) {
      return std::numeric_limits<double>::infinity();
    }
    sum += e.adjoint() * e;
  }
  return max_abs(sum - Matrix::Identity(dim, dim));
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch) {
  if (ch.operators.empty() || ch.operators.front().rows() != rho.dim()) {
    throw ValidationError("channel dimension does not match the state");
  }
  const double err = completeness_error(ch);
  if (!(err <= 1e-10)) {
    throw ValidationError("channel is not trace preserving (completeness error " +
                          std::to_string(err) + ")");
  }
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (const Matrix& e : ch.operators) out += e * rho.matrix() * e.adjoint();
  return DensityMatrix::trusted(out);
}

KrausChannel unitary_channel(const Matrix& u) { return KrausChannel{{u}}; }

KrausChannel embed_channel(const KrausChannel& single, int spin, int n) {
  KrausChannel out;
  for (const Matrix& e : single.operators) {
    out.operators.push_back(spin_operator(e, spin, n));
  }
  return out;
}

double RelaxationParams::lambda() const {
  return 0.5 * (1.0 + std::exp(-t / t2));
}
double RelaxationParams::gamma() const { return 1.0 - std::exp(-t / t1); }
double RelaxationParams::p() const { return 0.5 * (1.0 + polarisation); }

KrausChannel phase_damping(double t, double t2) {
  if (!(t >= 0.0) || !(t2 > 0.0)) {
    throw ValidationError("phase damping needs t >= 0 and T2 > 0");
  }
  const double lambda = RelaxationParams{t, 1.0, t2, 1e-5}.lambda();
  return KrausChannel{{std::sqrt(lambda) * pauli::identity(),
                       std::sqrt(1.0 - lambda) * pauli::z()}};
}

KrausChannel generalized_amplitude_damping(double t, double t1,
                                           double eps_pol) {
  if (!(t >= 0.0) || !(t1 > 0.0) || !(eps_pol > 0.0 && eps_pol <= 1.0)) {
    throw ValidationError(
        "amplitude damping needs t >= 0, T1 > 0 and polarisation in (0, 1]");
  }
  const RelaxationParams rp{t, t1, t1, eps_pol};
  const double g = rp.gamma();
  const double p = rp.p();
  Matrix e0(2, 2), e1(2, 2), e2(2, 2), e3(2, 2);
  e0 << 1, 0, 0, std::sqrt(1 - g);
  e1 << 0, std::sqrt(g), 0, 0;
  e2 << std::sqrt(1 - g), 0, 0, 1;
  e3 << 0, 0, std::sqrt(g), 0;
  return KrausChannel{{std::sqrt(p) * e0, std::sqrt(p) * e1,
                       std::sqrt(1 - p) * e2, std::sqrt(1 - p) * e3}};
}

DensityMatrix relax_spin(const DensityMatrix& rho, const SpinSystem& sys,
                         int spin, double t) {
  if (rho.qubits() != sys.size()) {
    throw ValidationError("state and spin system differ in size");
  }
  if (!(t >= 0.0)) throw ValidationError("relaxation time must be >= 0");
  const Spin& s = sys.spin(spin);
  if (s.t2_s > 2.0 * s.t1_s) {
    throw ValidationError("spin " + std::to_string(spin) +
                          ": T2 > 2 T1 is unphysical");
  }
  if (t == 0.0) return rho;
  const int n = sys.size();
  Matrix m = apply_single_spin(
      rho.matrix(),
      generalized_amplitude_damping(t, s.t1_s, s.polarisation).operators, spin,
      n);
  const double rate = 1.0 / s.t2_s - 0.5 / s.t1_s;
  if (rate > 0.0) {
    m = apply_single_spin(m, phase_damping(t, 1.0 / rate).operators, spin, n);
  }
  return DensityMatrix::trusted(m);
}

DensityMatrix relax(const DensityMatrix& rho, const SpinSystem& sys, double t) {
  DensityMatrix out = rho;
  for (int s = 0; s < sys.size(); ++s) out = relax_spin(out, sys, s, t);
  return out;
}

int coherence_order(std::uint64_t row, std::uint64_t col, const SpinSystem& sys,
                    int species_class) {
  const int n = sys.size();
  const auto classes = sys.species_classes();
  int order = 0;
  for (int s = 0; s < n; ++s) {
    if (species_class >= 0 && classes[s] != species_class) continue;
    order += spin_bit(col, s, n) - spin_bit(row, s, n);
  }
  return order;
}

DensityMatrix crush_gradient(const DensityMatrix& rho, const SpinSystem& sys,
                             bool preserve_zero_quantum) {
  if (rho.qubits() != sys.size()) {
    throw ValidationError("state and spin system differ in size");
  }
  Matrix m = rho.matrix();
  const auto classes = sys.species_classes();
  const int nclass = 1 + *std::max_element(classes.begin(), classes.end());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (r == c) continue;
      bool keep = preserve_zero_quantum;
      for (int k = 0; keep && k < nclass; ++k) {
        keep = coherence_order(static_cast<std::uint64_t>(r),
                               static_cast<std::uint64_t>(c), sys, k) == 0;
      }
      if (!keep) m(r, c) = 0.0;
    }
  }
  return DensityMatrix::trusted(m);
}

GradientEnsemble GradientEnsemble::from(const DensityMatrix& rho, int samples) {
  if (samples < 2) throw ValidationError("ensemble needs at least two members");
  return GradientEnsemble{std::vector<Matrix>(samples, rho.matrix())};
}

void GradientEnsemble::gradient(const SpinSystem& sys, double area) {
  const auto count = static_cast<double>(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) {
    const double phi = 2.0 * kPi * static_cast<double>(k) / count;
    Matrix& m = members[k];
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const double q = weighted_order(static_cast<std::uint64_t>(r),
                                        static_cast<std::uint64_t>(c), sys);
        if (q != 0.0) m(r, c) *= std::exp(-kI * phi * area * q);
      }
    }
  }
}

void GradientEnsemble::apply_unitary(const Matrix& u) {
  for (Matrix& m : members) m = u * m * u.adjoint();
}

DensityMatrix GradientEnsemble::average() const {
  Matrix sum = Matrix::Zero(members.front().rows(), members.front().cols());
  for (const Matrix& m : members) sum += m;
  return DensityMatrix::trusted(sum / static_cast<double>(members.size()));
}

DensityMatrix crush_ensemble(const DensityMatrix& rho, const SpinSystem& sys,
                             double area, int samples) {
  if (rho.qubits() != sys.size()) {
    throw ValidationError("state and spin system differ in size");
  }
  GradientEnsemble e = GradientEnsemble::from(rho, samples);
  e.gradient(sys, area);
  return e.average();
}

DensityMatrix projective_dephase(const DensityMatrix& rho,
                                 std::span<const int> spins) {
  const int n = rho.qubits();
  std::uint64_t mask = 0;
  if (spins.empty()) {
    mask = (std::uint64_t{1} << n) - 1;
  } else {
    for (int s : spins) {
      if (s < 0 || s >= n) {
        throw ValidationError("measured spin " + std::to_string(s) +
                              " out of range");
      }
      mask |= std::uint64_t{1} << (n - 1 - s);
    }
  }
  Matrix m = rho.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (((static_cast<std::uint64_t>(r) ^ static_cast<std::uint64_t>(c)) &
           mask) != 0) {
        m(r, c) = 0.0;
      }
    }
  }
  return DensityMatrix::trusted(m);
}

DensityMatrix run_events(const DensityMatrix& rho, const SpinSystem& sys,
                         const EventList& events, const RunOptions& options) {
  if (rho.qubits() != sys.size()) {
    throw ValidationError("state and spin system differ in size");
  }
  validate_events(sys, events);
  const int n = sys.size();
  const bool ensemble = options.crush_model == CrushModel::kEnsemble;
  DensityMatrix state = rho;
  GradientEnsemble members;
  if (ensemble) members = GradientEnsemble::from(rho, options.ensemble_samples);
  std::vector<double> pending(n, 0.0);

  auto current = [&]() { return ensemble ? members.average() : state; };
  auto set_state = [&](const DensityMatrix& d) {
    if (ensemble) {
      members = GradientEnsemble::from(d, options.ensemble_samples);
    } else {
      state = d;
    }
  };
  auto flush = [&](const std::vector<int>& spins) {
    if (!options.relaxation) return;
    for (int s : spins) {
      if (pending[s] <= 0.0) continue;
      if (ensemble) {
        for (Matrix& m : members.members) {
          m = relax_spin(DensityMatrix::trusted(m), sys, s, pending[s]).matrix();
        }
      } else {
        state = relax_spin(state, sys, s, pending[s]);
      }
      pending[s] = 0.0;
    }
  };
  auto unitary = [&](const Matrix& u) {
    if (ensemble) {
      members.apply_unitary(u);
    } else {
      state = DensityMatrix::trusted(conjugate(u, state.matrix()));
    }
  };
  std::vector<int> all(n);
  for (int s = 0; s < n; ++s) all[s] = s;

  for (const Event& e : events) {
    if (const auto* p = std::get_if<PulseOp>(&e)) {
      flush(p->spins);
      unitary(event_propagator(sys, e));
      for (int s = 0; s < n; ++s) pending[s] += p->duration;
    } else if (const auto* d = std::get_if<DelayOp>(&e)) {
      unitary(event_propagator(sys, e));
      for (int s = 0; s < n; ++s) pending[s] += d->t;
    } else if (std::holds_alternative<FrameZOp>(e)) {
      unitary(event_propagator(sys, e));
    } else if (const auto* c = std::get_if<CrushOp>(&e)) {
      flush(all);
      if (ensemble) {
        members.gradient(sys, c->area);
      } else {
        state = crush_gradient(state, sys, c->preserve_zero_quantum);
      }
    } else if (const auto* m = std::get_if<MeasureOp>(&e)) {
      flush(m->spins.empty() ? all : m->spins);
      set_state(projective_dephase(current(), m->spins));
    }
  }
  flush(all);
  return current();
}

DensityMatrix segmented_relaxation_run(const DensityMatrix& rho,
                                       const SpinSystem& sys,
                                       const EventList& events) {
  RunOptions o;
  o.relaxation = true;
  return run_events(rho, sys, events, o);
}

double trace_distance(const Matrix& a, const Matrix& b) {
  const Matrix d = a - b;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (d + d.adjoint()),
                                               Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace spinforge
