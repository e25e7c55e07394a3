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

#include "spinforge/state_prep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "spinforge/channels.hpp"
#include "spinforge/errors.hpp"

namespace spinforge {

namespace {

double ising_sign(const SpinSystem& sys) {
  const double j = sys.j_hz(0, 1);
  if (j == 0.0) throw ValidationError("the two spins must be coupled (J != 0)");
  return j > 0.0 ? 1.0 : -1.0;
}

double couple_time(const SpinSystem& sys) {
  return 1.0 / (2.0 * std::abs(sys.j_hz(0, 1)));
}

/// Phase of a pulse after a coupling period of length t, with the Zeeman
/// rotation of `spin` folded in.
double tracked_phase(const SpinSystem& sys, int spin, double phase, double t) {
  return wrap_angle(phase + 2.0 * kPi * sys.spin(spin).shift_hz * t);
}

void require_two(const SpinSystem& sys) {
  if (sys.size() != 2) {
    throw ValidationError("this preparation needs exactly two spins, got " +
                          std::to_string(sys.size()));
  }
}

std::vector<GateSpec> transposition_network(std::uint64_t a, std::uint64_t b,
                                            int n) {
  std::vector<std::uint64_t> path = {a};
  std::uint64_t cur = a;
  for (int bit = n - 1; bit >= 0; --bit) {
    const std::uint64_t m = std::uint64_t{1} << bit;
    if ((cur ^ b) & m) {
      cur ^= m;
      path.push_back(cur);
    }
  }
  auto swap_adjacent = [n](std::uint64_t x, std::uint64_t y) {
    const std::uint64_t diff = x ^ y;
    int target = 0;
    for (int s = 0; s < n; ++s) {
      if (diff == std::uint64_t{1} << (n - 1 - s)) target = s;
    }
    std::vector<GateSpec> flips;
    std::vector<int> controls;
    for (int s = 0; s < n; ++s) {
      if (s == target) continue;
      controls.push_back(s);
      if (spin_bit(x, s, n) == 0) flips.push_back(GateSpec{GateName::X, {s}});
    }
    std::vector<GateSpec> out = flips;
    GateSpec core;
    if (controls.empty()) {
      core = GateSpec{GateName::X, {target}};
    } else if (controls.size() == 1) {
      core = cnot(controls[0], target);
    } else {
      core = GateSpec{GateName::TOFFOLI, {controls[0], controls[1], target}};
    }
    out.push_back(core);
    out.insert(out.end(), flips.begin(), flips.end());
    return out;
  };
  std::vector<GateSpec> out;
  const std::size_t m = path.size() - 1;
  for (std::size_t k = 0; k < m; ++k) {
    auto g = swap_adjacent(path[k], path[k + 1]);
    out.insert(out.end(), g.begin(), g.end());
  }
  for (std::size_t k = m - 1; k-- > 0;) {
    auto g = swap_adjacent(path[k], path[k + 1]);
    out.insert(out.end(), g.begin(), g.end());
  }
  return out;
}

bool equal_triple(std::span<const double> p, std::uint64_t b, std::uint64_t c,
                  std::uint64_t d, double tol, double* spread) {
  const double hi = std::max({p[b], p[c], p[d]});
  const double lo = std::min({p[b], p[c], p[d]});
  *spread = hi - lo;
  return hi - lo <= tol;
}

}  // namespace

DensityMatrix pseudo_pure(const PseudoPureSpec& spec) {
  if (!(spec.epsilon >= 0.0 && spec.epsilon <= 1.0)) {
    throw ValidationError("pseudo-pure weight must lie in [0, 1]");
  }
  const Vector& a = spec.target.amplitudes();
  const auto d = static_cast<double>(a.size());
  const Matrix m = (1.0 - spec.epsilon) / d * Matrix::Identity(a.size(), a.size()) +
                   spec.epsilon * a * a.adjoint();
  return DensityMatrix::trusted(m);
}

std::optional<double> epsilon_of(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix(),
                                               Eigen::EigenvaluesOnly);
  const RealVector& ev = solver.eigenvalues();
  const Eigen::Index d = ev.size();
  const double spread = ev(d - 2) - ev(0);
  if (spread > 1e-9) return std::nullopt;
  const double rest = ev.head(d - 1).mean();
  return ev(d - 1) - rest;
}

WarrenBound warren_bound(int n, double x) {
  if (n < 1) throw ValidationError("warren bound needs n >= 1");
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw ValidationError("warren bound needs x > 0");
  }
  const double two_n = std::ldexp(1.0, n);
  WarrenBound b;
  b.exact = 2.0 * std::sinh(n * x / 2.0) /
            (two_n * std::pow(std::cosh(x / 2.0), n));
  b.approx = n * x / two_n;
  return b;
}

EntanglementBounds entanglement_bounds(int n) {
  if (n < 2) throw ValidationError("entanglement bounds need n >= 2");
  return {1.0 / (1.0 + std::ldexp(1.0, 2 * n - 1)),
          1.0 / (1.0 + std::pow(2.0, n / 2.0))};
}

double peres_threshold() { return 1.0 / 3.0; }

Matrix permutation_matrix(const Permutation& perm) {
  const auto d = static_cast<Eigen::Index>(perm.size());
  qubits_for_dimension(d);
  std::vector<bool> seen(perm.size(), false);
  Matrix m = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (perm[i] >= perm.size() || seen[perm[i]]) {
      throw ValidationError("not a permutation of the basis states");
    }
    seen[perm[i]] = true;
    m(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(i)) = 1.0;
  }
  return m;
}

Permutation cyclic_shift(int n, int shift) {
  const std::uint64_t d = static_cast<std::uint64_t>(dimension_for(n));
  const std::uint64_t period = d - 1;
  const std::uint64_t s =
      static_cast<std::uint64_t>(((shift % static_cast<int>(period)) +
                                  static_cast<int>(period)) %
                                 static_cast<int>(period));
  Permutation p(d, 0);
  for (std::uint64_t i = 1; i < d; ++i) p[i] = 1 + (i - 1 + s) % period;
  return p;
}

std::vector<GateSpec> permutation_network(const Permutation& perm) {
  permutation_matrix(perm);
  const int n = qubits_for_dimension(static_cast<Eigen::Index>(perm.size()));
  if (n > 3) {
    throw ValidationError("permutation synthesis supports at most 3 spins");
  }
  // sigma = S_1 o S_2 o ... o S_m, so S_m acts first.
  Permutation sigma = perm;
  std::vector<std::vector<GateSpec>> factors;
  for (std::uint64_t i = 0; i < sigma.size(); ++i) {
    while (sigma[i] != i) {
      const std::uint64_t j = sigma[i];
      factors.push_back(transposition_network(i, j, n));
      for (auto& v : sigma) {
        if (v == i) {
          v = j;
        } else if (v == j) {
          v = i;
        }
      }
    }
  }
  std::vector<GateSpec> out;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    out.insert(out.end(), it->begin(), it->end());
  }
  return out;
}

std::array<std::vector<GateSpec>, 2> two_spin_permutation_networks() {
  return {std::vector<GateSpec>{cnot(0, 1), cnot(1, 0)},
          std::vector<GateSpec>{cnot(1, 0), cnot(0, 1)}};
}

DensityMatrix temporal_average(const DensityMatrix& rho,
                               std::span<const Matrix> permutations) {
  const int n = rho.qubits();
  const std::vector<double> pops = populations(rho);
  const double largest = *std::max_element(pops.begin(), pops.end());
  if (pops[0] < largest - 1e-12) {
    throw ValidationError(
        "|0...0> does not carry the largest population; precede each "
        "permutation by a swap that moves the largest population there");
  }
  std::vector<Matrix> perms(permutations.begin(), permutations.end());
  if (perms.empty()) {
    if (n == 2) {
      for (const auto& net : two_spin_permutation_networks()) {
        perms.push_back(network_unitary(net, 2));
      }
    } else {
      const int period = static_cast<int>(dimension_for(n)) - 1;
      for (int s = 1; s < period; ++s) {
        perms.push_back(permutation_matrix(cyclic_shift(n, s)));
      }
    }
  }
  Matrix sum = rho.matrix();
  for (const Matrix& p : perms) {
    if (p.rows() != rho.dim()) {
      throw ValidationError("permutation dimension does not match the state");
    }
    sum += conjugate(p, rho.matrix());
  }
  return DensityMatrix::trusted(sum / static_cast<double>(perms.size() + 1));
}

PreparedState spatial_average_homonuclear(const SpinSystem& sys) {
  require_two(sys);
  if (!sys.is_homonuclear()) {
    throw ValidationError("homonuclear spatial averaging needs one species");
  }
  const double sign = ising_sign(sys);
  const double t = couple_time(sys);
  PreparedState out;
  out.events = {
      PulseOp{{1}, kPi / 3.0, 0.0, 0.0},
      CrushOp{true, 1.0},
      PulseOp{{0}, kPi / 4.0, 0.0, 0.0},
      DelayOp{t},
      PulseOp{{0}, kPi / 4.0, tracked_phase(sys, 0, -sign * kPi / 2.0, t), 0.0},
      CrushOp{true, 1.0},
  };
  out.state = run_events(thermal_state_linear(sys), sys, out.events);
  out.deviation = deviation(out.state, thermal_scale(sys)).matrix;
  return out;
}

double equalization_angle(double delta_high, double delta_low) {
  if (!(delta_high > 0.0) || !(delta_low > 0.0) || delta_low > delta_high) {
    throw ValidationError("equalisation needs 0 < delta_low <= delta_high");
  }
  return std::acos(delta_low / delta_high);
}

PreparedState spatial_average_heteronuclear(const SpinSystem& sys,
                                            bool equalize) {
  require_two(sys);
  if (sys.is_homonuclear()) {
    throw ValidationError(
        "heteronuclear spatial averaging needs two different species");
  }
  const double sign = ising_sign(sys);
  const double t = couple_time(sys);
  const double d0 = sys.spin(0).polarisation;
  const double d1 = sys.spin(1).polarisation;
  const double low = std::min(d0, d1);
  PreparedState out;
  if (std::abs(d0 - d1) > 1e-9 * std::max(d0, d1)) {
    if (!equalize) {
      throw ValidationError(
          "polarisations differ; enable the equalisation pre-step");
    }
    const int high = d0 > d1 ? 0 : 1;
    out.events.push_back(
        PulseOp{{high}, equalization_angle(std::max(d0, d1), low), 0.0, 0.0});
    out.events.push_back(CrushOp{true, 1.0});
  }
  const double phase = -sign * kPi / 2.0;
  out.events.push_back(PulseOp{{0, 1}, kPi / 4.0, 0.0, 0.0});
  out.events.push_back(DelayOp{t});
  out.events.push_back(
      PulseOp{{0}, kPi / 6.0, tracked_phase(sys, 0, phase, t), 0.0});
  out.events.push_back(
      PulseOp{{1}, kPi / 6.0, tracked_phase(sys, 1, phase, t), 0.0});
  out.events.push_back(CrushOp{true, 1.0});
  out.state = run_events(thermal_state_linear(sys), sys, out.events);
  out.deviation = deviation(out.state, low / 2.0).matrix;
  return out;
}

std::vector<EventList> product_operator_plan(const SpinSystem& sys) {
  require_two(sys);
  const double sign = ising_sign(sys);
  const double t = couple_time(sys);
  std::vector<EventList> plan(3);
  for (int spin = 0; spin < 2; ++spin) {
    plan[spin + 1] = {
        PulseOp{{spin}, kPi / 2.0, 0.0, 0.0},
        DelayOp{t},
        PulseOp{{spin},
                kPi / 2.0,
                tracked_phase(sys, spin, -sign * kPi / 2.0, t),
                0.0},
        CrushOp{true, 1.0},
    };
  }
  return plan;
}

std::vector<GateSpec> cat_prepare(int n) {
  if (n < 2) throw ValidationError("cat states need n >= 2");
  dimension_for(n);
  std::vector<GateSpec> net = {GateSpec{GateName::H, {0}}};
  for (int k = 0; k + 1 < n; ++k) net.push_back(cnot(k, k + 1));
  return net;
}

DensityMatrix cat_select(const DensityMatrix& rho) {
  const Eigen::Index d = rho.dim();
  Matrix m = Matrix::Identity(d, d) * (rho.matrix().trace() / static_cast<double>(d));
  m(0, d - 1) = rho.matrix()(0, d - 1);
  m(d - 1, 0) = rho.matrix()(d - 1, 0);
  return DensityMatrix::trusted(m);
}

DensityMatrix conditional_state(const DensityMatrix& rho, int spin, int value) {
  const int n = rho.qubits();
  if (n < 2) throw ValidationError("conditioning needs at least two spins");
  if (spin < 0 || spin >= n || (value != 0 && value != 1)) {
    throw ValidationError("invalid conditioning spin or value");
  }
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < rho.dim(); ++i) {
    if (spin_bit(static_cast<std::uint64_t>(i), spin, n) == value) idx.push_back(i);
  }
  const auto k = static_cast<Eigen::Index>(idx.size());
  Matrix block(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) block(r, c) = rho.matrix()(idx[r], idx[c]);
  }
  const double tr = block.trace().real();
  if (!(tr > 1e-15)) throw ValidationError("conditional block has zero weight");
  return DensityMatrix::trusted(block / tr);
}

LabelResult logical_label(std::span<const double> populations,
                          std::optional<std::array<std::uint64_t, 4>> choice) {
  if (populations.size() != 8) {
    throw ValidationError("logical labelling expects 8 populations (3 spins)");
  }
  double scale = 0.0;
  for (double p : populations) scale = std::max(scale, std::abs(p));
  const double tol = 1e-9 * std::max(1.0, scale);

  std::array<std::uint64_t, 4> best{};
  bool found = false;
  double best_gap = -1.0;
  double min_spread = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::array<std::uint64_t, 4>& q) {
    double spread = 0.0;
    const bool eq = equal_triple(populations, q[1], q[2], q[3], tol, &spread);
    min_spread = std::min(min_spread, spread);
    const double gap = populations[q[0]] -
                       std::max({populations[q[1]], populations[q[2]],
                                 populations[q[3]]});
    if (eq && gap > tol && gap > best_gap + tol) {
      best = q;
      best_gap = gap;
      found = true;
    }
  };
  if (choice) {
    std::array<std::uint64_t, 4> q = *choice;
    for (std::size_t a = 0; a < 4; ++a) {
      if (q[a] >= 8) throw ValidationError("chosen state out of range");
      for (std::size_t b = a + 1; b < 4; ++b) {
        if (q[a] == q[b]) throw ValidationError("chosen states must differ");
      }
    }
    consider(q);
  } else {
    for (std::uint64_t a = 0; a < 8; ++a) {
      for (std::uint64_t b = 0; b < 8; ++b) {
        for (std::uint64_t c = b + 1; c < 8; ++c) {
          for (std::uint64_t d = c + 1; d < 8; ++d) {
            if (a == b || a == c || a == d) continue;
            consider({a, b, c, d});
          }
        }
      }
    }
  }
  if (!found) {
    std::ostringstream msg;
    msg << "no pseudo-pure population pattern available; smallest spread of "
           "three populations is "
        << min_spread;
    throw ValidationError(msg.str());
  }

  LabelResult out;
  out.chosen = best;
  out.permutation.assign(8, 0);
  std::vector<bool> used(8, false);
  for (std::size_t k = 0; k < 4; ++k) {
    out.permutation[best[k]] = k;
    used[best[k]] = true;
    out.conditional_populations[k] = populations[best[k]];
  }
  std::uint64_t next = 4;
  for (std::uint64_t i = 0; i < 8; ++i) {
    if (!used[i]) out.permutation[i] = next++;
  }
  out.network = permutation_network(out.permutation);
  return out;
}

}  // namespace spinforge
