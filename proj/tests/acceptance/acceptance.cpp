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

// Acceptance runner: one PASS/FAIL line per criterion.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "spinforge/algorithms.hpp"
#include "spinforge/channels.hpp"
#include "spinforge/composite_pulses.hpp"
#include "spinforge/evolution.hpp"
#include "spinforge/gates.hpp"
#include "spinforge/grape.hpp"
#include "spinforge/product_operators.hpp"
#include "spinforge/readout.hpp"
#include "spinforge/sequences.hpp"
#include "spinforge/state_prep.hpp"
#include "spinforge/states.hpp"

namespace sf = spinforge;
using sf::cplx;
using sf::kPi;
using sf::Matrix;
using sf::Vector;

namespace {

class Outcome {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void within(double value, double bound, const std::string& what) {
    std::ostringstream s;
    s << what << " = " << value << " (bound " << bound << ")";
    require(value <= bound, s.str());
  }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

Matrix random_matrix(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

Matrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
  const Matrix m = random_matrix(dim, rng);
  return 0.5 * (m + m.adjoint());
}

Matrix random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(dim, rng));
  return qr.householderQ();
}

Matrix random_density(Eigen::Index dim, std::mt19937_64& rng) {
  const Matrix a = random_matrix(dim, rng);
  Matrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

sf::Ket random_ket(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(Eigen::Index{1} << n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(g(rng), g(rng));
  return sf::Ket(v.normalized());
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix literal(std::initializer_list<std::initializer_list<cplx>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (const cplx v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

double local_trace_distance(const Matrix& a, const Matrix& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> s(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * s.eigenvalues().cwiseAbs().sum();
}

// Global-phase-free distance min_phi |u - e^{i phi} v|.
double phase_distance(const Matrix& u, const Matrix& v) {
  const cplx overlap = (v.adjoint() * u).trace();
  const cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx(1.0);
  return max_abs(u - phase * v);
}

// Criterion 1.
Outcome gate_identities() {
  Outcome out;
  const Matrix cz = literal({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, -1}});
  for (double j : {10.0, 215.0, -37.5}) {
    const sf::SpinSystem sys = sf::SpinSystem::homonuclear(2, j);
    const sf::SynthesizedSequence seq = sf::cz_sequence(sys, 0, 1);
    const Matrix u = sf::sequence_propagator(sys, seq.events);
    out.within(phase_distance(u, cz), 1e-8, "CZ from coupling evolution, J=" + std::to_string(j));
  }

  const double r = 1.0 / std::sqrt(2.0);
  const Matrix h = literal({{r, r}, {r, -r}});
  const Matrix i2 = Matrix::Identity(2, 2);
  Matrix h_target(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) h_target(2 * a + b, 2 * c + d) = i2(a, c) * h(b, d);
  const Matrix cnot = literal({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}});
  out.within(max_abs(h_target * cz * h_target - cnot), 1e-15, "literal H.CZ.H - CNOT");

  const std::vector<sf::GateSpec> net = {
      {sf::GateName::H, {1}, 1}, {sf::GateName::CZ, {0, 1}, 1}, {sf::GateName::H, {1}, 1}};
  const Matrix composed = sf::network_unitary(net, 2);
  out.within(max_abs(composed - cnot), 1e-15, "network H.CZ.H - CNOT");
  out.within(max_abs(sf::standard_gate(sf::cnot(0, 1), 2) - cnot), 0.0, "CNOT gate");
  out.within(max_abs(sf::standard_gate({sf::GateName::CZ, {0, 1}, 1}, 2) - cz), 0.0,
             "CZ gate");

  const cplx mi(0.0, -1.0);
  const Matrix ts = literal({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, mi}, {0, 0, mi, 0}});
  out.within(max_abs(sf::transition_selective_cnot(0, 1, 2) - ts), 0.0,
             "transition-selective propagator");
  return out;
}

// Criterion 2.
Outcome composite_orders() {
  Outcome out;
  const auto naive = [](double theta) { return sf::PulseSequence{sf::Rotation{theta, 0.0}}; };
  const auto bb1 = [](double theta) { return sf::bb1(theta); };
  for (double theta : {kPi, kPi / 2}) {
    const std::string at = theta == kPi ? " at 180" : " at 90";
    const auto a = sf::error_order(naive, sf::ErrorAxis::kLength, theta);
    const auto b = sf::error_order(bb1, sf::ErrorAxis::kLength, theta);
    out.require(a.order == 2, "naive order" + at + " = " + std::to_string(a.order));
    out.within(std::abs(a.slope - 2.0), 0.2, "naive slope error" + at);
    out.require(b.order == 6, "BB1 order" + at + " = " + std::to_string(b.order));
    out.within(std::abs(b.slope - 6.0), 0.2, "BB1 slope error" + at);
    for (double e : a.errors) {
      out.require(e >= 1e-4 * (1 - 1e-12) && e <= 1e-2 * (1 + 1e-12),
                  "fit point outside [1e-4, 1e-2]");
    }
    // Local fit of log infidelity against log error.
    for (const auto* r : {&a, &b}) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const double n = static_cast<double>(r->errors.size());
      for (std::size_t k = 0; k < r->errors.size(); ++k) {
        const double x = std::log(r->errors[k]);
        const double y = std::log(r->infidelities[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      out.within(std::abs(slope - r->slope), 1e-9, "reported vs refitted slope" + at);
    }
  }
  return out;
}

// Criterion 3.
Outcome fidelity_series() {
  Outcome out;
  const double eps = 0.1;
  const Matrix ideal = literal({{0, cplx(0, -1)}, {cplx(0, -1), 0}});
  out.within(max_abs(sf::pulse_propagator({kPi, 0.0}) - ideal), 1e-15, "ideal 180x");
  const sf::PulseSequence naive = {sf::Rotation{kPi, 0.0}};
  const Matrix actual = sf::sequence_unitary(sf::apply_error(naive, {eps, 0.0}));
  const double f = sf::propagator_fidelity(ideal, actual);
  const double local =
      std::abs((actual * ideal.adjoint()).trace()) / std::abs((ideal * ideal.adjoint()).trace());
  out.within(std::abs(f - local), 1e-15, "library vs local fidelity");
  out.within(std::abs(f - std::cos(eps * kPi / 2)), 1e-12, "|F - cos(eps pi/2)|");
  out.within(std::abs(f - (1 - eps * eps * kPi * kPi / 8)), 5e-5, "|F - series|");
  return out;
}

std::vector<std::vector<double>> finite_difference(const sf::ControlSequence& c,
                                                   const sf::ControlSystem& sys,
                                                   const Matrix& target) {
  const double h = 1e-7;
  std::vector<std::vector<double>> g = c.segments;
  for (std::size_t j = 0; j < c.segments.size(); ++j) {
    for (std::size_t k = 0; k < c.segments[j].size(); ++k) {
      sf::ControlSequence plus = c;
      sf::ControlSequence minus = c;
      plus.segments[j][k] += h;
      minus.segments[j][k] -= h;
      g[j][k] = (sf::control_fidelity(plus, sys, target) -
                 sf::control_fidelity(minus, sys, target)) /
                (2 * h);
    }
  }
  return g;
}

// Criterion 4.
Outcome grape() {
  Outcome out;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> amp(-100.0, 100.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 2;
    const Eigen::Index d = Eigen::Index{1} << n;
    const Matrix drift = random_hermitian(d, rng) * 30.0;
    const sf::ControlSystem sys =
        trial % 4 == 3 ? sf::selective_controls(drift) : sf::collective_controls(drift);
    sf::ControlSequence c;
    c.dt = 1e-2;
    c.segments.assign(8, std::vector<double>(2 * sys.channels.size()));
    for (auto& seg : c.segments)
      for (double& v : seg) v = amp(rng);
    const Matrix target = random_unitary(d, rng);
    const auto g = sf::grape_gradient(c, sys, target);
    const auto fd = finite_difference(c, sys, target);
    double scale = 0.0;
    double dev = 0.0;
    for (std::size_t j = 0; j < fd.size(); ++j) {
      for (std::size_t k = 0; k < fd[j].size(); ++k) {
        scale = std::max(scale, std::abs(fd[j][k]));
        dev = std::max(dev, std::abs(g.gradient[j][k] - fd[j][k]));
      }
    }
    worst = std::max(worst, dev / scale);
  }
  out.within(worst, 1e-5, "worst relative gradient error over 20 problems");

  {
    const sf::ControlSystem sys = sf::collective_controls(Matrix::Zero(2, 2));
    const double r = 1.0 / std::sqrt(2.0);
    const Matrix target = literal({{r, cplx(0, -r)}, {cplx(0, -r), r}});
    const sf::ControlSequence c0 = sf::initial_controls(10, 1e-5, 1, 2 * kPi * 1000.0, 1);
    sf::OptimizeOptions opt;
    opt.max_iters = 200;
    opt.tol = 1e-4;
    const auto res = sf::optimize(c0, sys, target, opt);
    const Matrix u = sf::sequence_propagator(res.controls, sys);
    const double f = std::abs((target.adjoint() * u).trace()) / 2.0;
    out.require(f >= 0.999, "1-qubit 90 degree fidelity " + std::to_string(f));
  }
  {
    const sf::SpinSystem spins = sf::SpinSystem::homonuclear(2, 10.0);
    const sf::ControlSystem sys = sf::selective_controls(sf::coupling_hamiltonian(spins));
    const Matrix target = literal({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}});
    const double total = 1.5 / (2 * 10.0);
    sf::OptimizeOptions opt;
    opt.max_iters = 300;
    opt.tol = 1e-3;
    const auto res = sf::optimize_multistart(50, total / 50, sys, target, opt, 2 * kPi * 20.0, 7);
    const Matrix u = sf::sequence_propagator(res.controls, sys);
    const double f = std::abs((target.adjoint() * u).trace()) / 4.0;
    out.require(res.controls.segments.size() == 50, "CNOT segment count");
    out.within(std::abs(res.controls.duration() - total), 1e-15, "CNOT duration error");
    out.require(f >= 0.99, "CNOT fidelity " + std::to_string(f));
  }
  return out;
}

std::vector<double> deviation_populations(const Matrix& rho, double s) {
  std::vector<double> p(static_cast<std::size_t>(rho.rows()));
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    p[static_cast<std::size_t>(i)] = (rho(i, i).real() - 1.0 / static_cast<double>(rho.rows())) / s;
  }
  return p;
}

void expect_pseudo_pure_terms(Outcome& out, const Matrix& dev, double coeff,
                              const std::string& what) {
  const Matrix iz = sf::basis_operator("Iz", 2);
  const Matrix sz = sf::basis_operator("Sz", 2);
  const Matrix izsz = sf::basis_operator("IzSz", 2);
  const Matrix want = coeff * (iz + sz + izsz);
  out.within(max_abs(dev - want), 1e-8, what);
  const sf::ProductOperatorExpansion e = sf::pauli_expand(dev);
  for (const char* label : {"Iz", "Sz", "IzSz"}) {
    out.within(std::abs(e.coefficient(label) - coeff), 1e-8, what + " coefficient " + label);
  }
}

// Criterion 5.
Outcome pseudo_pure() {
  Outcome out;
  const double s = 0.01;
  const Matrix th = Vector(Eigen::Vector4cd(0.25 + s, 0.25, 0.25, 0.25 - s)).asDiagonal();
  const auto nets = sf::two_spin_permutation_networks();
  const std::vector<std::vector<double>> listed = {{1, 0, 0, -1}, {1, 0, -1, 0}, {1, -1, 0, 0}};
  std::vector<Matrix> members = {th};
  for (const auto& net : nets) {
    const Matrix u = sf::network_unitary(net, 2);
    members.push_back(u * th * u.adjoint());
  }
  std::vector<double> mean(4, 0.0);
  for (std::size_t m = 0; m < 3; ++m) {
    const auto p = deviation_populations(members[m], s);
    for (int i = 0; i < 4; ++i) {
      out.within(std::abs(p[i] - listed[m][i]), 1e-12,
                 "member " + std::to_string(m) + " population " + std::to_string(i));
      mean[i] += listed[m][i] / 3.0;
    }
  }
  const auto avg = deviation_populations(
      sf::temporal_average(sf::DensityMatrix::from_matrix(th)).matrix(), s);
  const double want[] = {1.0, -1.0 / 3, -1.0 / 3, -1.0 / 3};
  for (int i = 0; i < 4; ++i) {
    out.within(std::abs(mean[i] - want[i]), 1e-15, "mean of listed populations");
    out.within(std::abs(avg[i] - want[i]), 1e-12, "temporal average population " + std::to_string(i));
  }

  sf::Spin a, b;
  a.shift_hz = 123.0;
  b.shift_hz = -47.0;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2, 2);
  j(0, 1) = j(1, 0) = 140.0;
  const sf::SpinSystem homo({a, b}, j);
  const sf::PreparedState h = sf::spatial_average_homonuclear(homo);
  expect_pseudo_pure_terms(out, h.deviation, 0.5, "homonuclear deviation");
  const sf::DensityMatrix ran =
      sf::run_events(sf::thermal_state_linear(homo), homo, h.events);
  expect_pseudo_pure_terms(out, sf::deviation(ran, sf::thermal_scale(homo)).matrix, 0.5,
                           "homonuclear simulated events");

  b.species = "13C";
  j(0, 1) = j(1, 0) = 215.0;
  const sf::SpinSystem hetero({a, b}, j);
  const double root = std::sqrt(3.0 / 8.0);
  const sf::PreparedState het = sf::spatial_average_heteronuclear(hetero, false);
  expect_pseudo_pure_terms(out, het.deviation, root, "heteronuclear deviation");
  const sf::DensityMatrix ran_het =
      sf::run_events(sf::thermal_state_linear(hetero), hetero, het.events);
  expect_pseudo_pure_terms(out, sf::deviation(ran_het, sf::thermal_scale(hetero)).matrix, root,
                           "heteronuclear simulated events");
  return out;
}

// Criterion 6.
Outcome bounds() {
  Outcome out;
  const sf::EntanglementBounds two = sf::entanglement_bounds(2);
  out.within(std::abs(two.lower - 1.0 / 9.0), 1e-16, "|lower - 1/9|");
  out.within(std::abs(two.upper - 1.0 / 3.0), 1e-16, "|upper - 1/3|");
  out.within(std::abs(two.upper - sf::peres_threshold()), 0.0, "|upper - Peres threshold|");

  // Werner state at the threshold has a zero partial-transpose eigenvalue.
  const double r = 1.0 / std::sqrt(2.0);
  Vector psi = Vector::Zero(4);
  psi(1) = r;
  psi(2) = -r;
  const double eps = two.upper;
  const Matrix w = (1 - eps) * 0.25 * Matrix::Identity(4, 4) + eps * psi * psi.adjoint();
  Matrix pt(4, 4);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v) pt(2 * p + q, 2 * u + v) = w(2 * p + v, 2 * u + q);
  Eigen::SelfAdjointEigenSolver<Matrix> es(pt, Eigen::EigenvaluesOnly);
  out.within(std::abs(es.eigenvalues().minCoeff()), 1e-15, "min PT eigenvalue at threshold");

  double worst = 0.0;
  for (int n = 1; n <= 12; ++n) {
    for (double x : {1e-4, 1e-5, 1e-6, 1e-8}) {
      const sf::WarrenBound wb = sf::warren_bound(n, x);
      const double exact =
          2.0 * std::sinh(n * x / 2) / (std::pow(2.0, n) * std::pow(std::cosh(x / 2), n));
      out.within(std::abs(wb.exact - exact) / exact, 1e-12, "Warren exact vs local");
      out.within(std::abs(wb.approx - n * x / std::pow(2.0, n)) / wb.approx, 1e-15,
                 "Warren approx vs local");
      worst = std::max(worst, std::abs(wb.exact - wb.approx) / wb.approx);
    }
  }
  out.within(worst, 1e-4, "Warren exact/approx relative gap");
  return out;
}

int local_order(std::uint64_t row, std::uint64_t col) {
  return std::popcount(col) - std::popcount(row);
}

// Criterion 7.
Outcome channels() {
  Outcome out;
  std::vector<sf::KrausChannel> built;
  for (double t : {0.0, 0.01, 0.3, 1.0, 5.0}) {
    for (double t2 : {0.05, 1.0}) built.push_back(sf::phase_damping(t, t2));
    for (double pol : {1e-5, 0.2, 1.0}) {
      built.push_back(sf::generalized_amplitude_damping(t, 2.0, pol));
    }
  }
  std::mt19937_64 rng(7);
  for (int k = 0; k < 5; ++k) built.push_back(sf::unitary_channel(random_unitary(4, rng)));
  built.push_back(sf::embed_channel(sf::phase_damping(0.2, 0.5), 1, 3));
  built.push_back(sf::embed_channel(sf::generalized_amplitude_damping(0.2, 0.5, 0.1), 0, 2));
  double worst = 0.0;
  for (const auto& ch : built) {
    const Eigen::Index d = ch.operators.front().cols();
    Matrix sum = Matrix::Zero(d, d);
    for (const Matrix& k : ch.operators) sum += k.adjoint() * k;
    worst = std::max(worst, max_abs(sum - Matrix::Identity(d, d)));
    out.within(sf::completeness_error(ch), 1e-12, "library completeness error");
  }
  out.within(worst, 1e-12, "max |sum K^+K - 1|");

  sf::Spin a, b, c;
  a.t1_s = 2.0;
  a.t2_s = 0.5;
  a.polarisation = 0.1;
  b.species = "13C";
  b.polarisation = 0.04;
  c.t1_s = 3.0;
  c.t2_s = 0.1;
  c.polarisation = 0.3;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(3, 3);
  j(0, 1) = j(1, 0) = 100.0;
  const sf::SpinSystem sys({a, b, c}, j);
  const sf::SpinSystem pair = sf::SpinSystem::homonuclear(2, 5.0, 0.2);
  for (const sf::SpinSystem* s : {&sys, &pair}) {
    const sf::DensityMatrix th = sf::thermal_state(*s);
    for (double t : {0.0, 0.05, 1.0, 10.0}) {
      const Matrix relaxed = sf::relax(th, *s, t).matrix();
      out.within(local_trace_distance(relaxed, th.matrix()), 1e-12, "thermal trace distance");
    }
  }

  const sf::SpinSystem homo = sf::SpinSystem::homonuclear(3, 0.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix rho = random_density(8, rng);
    const sf::DensityMatrix in = sf::DensityMatrix::trusted(rho);
    const Matrix kept = sf::crush_gradient(in, homo, true).matrix();
    const Matrix gone = sf::crush_gradient(in, homo, false).matrix();
    for (Eigen::Index r = 0; r < 8; ++r) {
      for (Eigen::Index col = 0; col < 8; ++col) {
        const bool zq = local_order(r, col) == 0;
        const cplx want_kept = zq ? rho(r, col) : cplx(0.0);
        const cplx want_gone = r == col ? rho(r, col) : cplx(0.0);
        out.within(std::abs(kept(r, col) - want_kept), 1e-15, "flagged crush element");
        out.within(std::abs(gone(r, col) - want_gone), 1e-15, "unflagged crush element");
      }
    }
  }
  return out;
}

// Criterion 8.
Outcome tomography() {
  Outcome out;
  sf::Spin a, b;
  a.shift_hz = 100.0;
  b.shift_hz = -50.0;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2, 2);
  j(0, 1) = j(1, 0) = 10.0;
  const sf::SpinSystem sys({a, b}, j);
  const sf::TomographyPlan plan = sf::nine_experiment_plan();
  out.require(plan.experiments.size() == 9, "plan has nine experiments");
  const auto ref = sf::thermal_reference(sys);
  const double scale = sf::thermal_scale(sys);
  std::vector<std::string> labels;
  for (const std::string& l : sf::basis_labels(2)) {
    if (l != "E/2") labels.push_back(l);
  }
  out.require(labels.size() == 15, "fifteen product-operator labels");
  std::mt19937_64 rng(8);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    Matrix dev = random_hermitian(4, rng);
    dev -= dev.trace() / 4.0 * Matrix::Identity(4, 4);
    const Matrix rho = 0.25 * Matrix::Identity(4, 4) + scale * dev;
    std::vector<Vector> data;
    for (const auto& e : plan.experiments) data.push_back(sf::simulate_experiment(rho, sys, e));
    const auto r = sf::tomography_2spin(sys, plan, data, ref);
    for (const std::string& l : labels) {
      const Matrix op = sf::basis_operator(l, 2);
      const double want = (op * dev).trace().real() / (op * op).trace().real();
      worst = std::max(worst, std::abs(r.coefficients.coefficient(l) - want));
    }
  }
  out.within(worst, 1e-8, "max coefficient error over 50 states");
  return out;
}

std::vector<std::vector<int>> balanced_tables(int n) {
  const int size = 1 << n;
  std::vector<std::vector<int>> all;
  for (std::uint32_t mask = 0; mask < (1u << size); ++mask) {
    if (std::popcount(mask) != size / 2) continue;
    std::vector<int> t(static_cast<std::size_t>(size));
    for (int x = 0; x < size; ++x) t[static_cast<std::size_t>(x)] = (mask >> x) & 1u;
    all.push_back(t);
  }
  return all;
}

// Criterion 9.
Outcome algorithms() {
  Outcome out;
  for (sf::OracleForm form : {sf::OracleForm::kAncilla, sf::OracleForm::kRefined}) {
    for (const char* f : {"f00", "f01", "f10", "f11"}) {
      const sf::AlgorithmReport r = sf::deutsch(f, form);
      const int parity = (f[1] - '0') ^ (f[2] - '0');
      out.require(r.answer == std::to_string(parity), std::string("Deutsch answer for ") + f);
      out.require(r.oracle_calls == 1, std::string("Deutsch oracle calls for ") + f);
      out.within(std::abs(r.probabilities[static_cast<std::size_t>(parity)] - 1.0), 1e-12,
                 std::string("Deutsch certainty for ") + f);
    }
    for (int n = 1; n <= 3; ++n) {
      const int size = 1 << n;
      for (int v : {0, 1}) {
        const auto r = sf::deutsch_jozsa(sf::BooleanOracle(n, std::vector<int>(size, v)), form);
        out.require(r.answer == "constant" && r.oracle_calls == 1, "DJ constant n=" + std::to_string(n));
      }
      const auto tables = balanced_tables(n);
      int count = 0;
      for (const auto& t : tables) {
        const auto r = sf::deutsch_jozsa(sf::BooleanOracle(n, t), form);
        count += r.answer == "balanced" && r.oracle_calls == 1 ? 1 : 0;
      }
      out.require(count == static_cast<int>(tables.size()),
                  "DJ balanced n=" + std::to_string(n) + ": " + std::to_string(count) + "/" +
                      std::to_string(tables.size()));
    }
  }
  out.require(balanced_tables(3).size() == 70, "70 balanced functions on 3 bits");

  for (std::uint64_t m = 0; m < 4; ++m) {
    const std::uint64_t marked[] = {m};
    const auto r = sf::grover(sf::BooleanOracle::marking(2, marked), 1);
    out.within(std::abs(r.probabilities[m] - 1.0), 1e-12, "Grover n=2 success");
    out.require(r.oracle_calls == 1, "Grover n=2 oracle calls");
  }
  double worst = 0.0;
  for (int k = 1; k <= 4; ++k) {
    std::vector<std::uint64_t> marked;
    for (int i = 0; i < k; ++i) marked.push_back(static_cast<std::uint64_t>(3 * i + 1) % 8);
    const double theta = std::asin(std::sqrt(k / 8.0));
    for (int r = 0; r <= 6; ++r) {
      const auto rep = sf::grover(sf::BooleanOracle::marking(3, marked), r);
      double p = 0.0;
      for (std::uint64_t m : marked) p += rep.probabilities[m];
      const double want = std::pow(std::sin((2 * r + 1) * theta), 2);
      worst = std::max(worst, std::abs(p - want));
    }
  }
  out.within(worst, 1e-10, "Grover n=3 deviation from sin^2((2r+1)theta)");

  int wrong = 0;
  double gap = 0.0;
  for (long long big_n = 2; big_n <= 30; ++big_n) {
    for (long long l = 1; l <= big_n; ++l) {
      for (int m = 1; m <= 8; ++m) {
        cplx a(0.0, 0.0);
        for (int k = 0; k <= m; ++k) {
          a += std::exp(cplx(0.0, -2.0 * kPi * static_cast<double>(k * k) *
                                      static_cast<double>(big_n) / static_cast<double>(l)));
        }
        const double mag = std::abs(a) / (m + 1);
        gap = std::max(gap, std::abs(mag - std::abs(sf::gauss_sum(big_n, l, m))));
        const bool divides = big_n % l == 0;
        if ((std::abs(mag - 1.0) < 1e-9) != divides) ++wrong;
        if (sf::factor_check(big_n, l, m) != divides) ++wrong;
      }
    }
  }
  out.require(wrong == 0, "Gauss sum factor mismatches: " + std::to_string(wrong));
  out.within(gap, 1e-9, "Gauss sum library vs direct sum");
  return out;
}

// Criterion 10.
Outcome protocols() {
  Outcome out;
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const sf::Ket in = random_ket(1, rng);
    const Vector& v = in.amplitudes();
    for (auto mode : {sf::TeleportCorrection::kCoherent, sf::TeleportCorrection::kPostProcessed}) {
      const sf::TeleportResult r = sf::teleport(in, mode);
      const double f = (v.adjoint() * r.bob.matrix() * v)(0, 0).real();
      out.within(std::abs(f - 1.0), 1e-10, "teleported overlap");
      out.within(std::abs(r.fidelity - 1.0), 1e-10, "reported teleport fidelity");
      out.within(max_abs(r.alice.matrix() - 0.5 * Matrix::Identity(2, 2)), 1e-10,
                 "Alice marginal vs I/2");
    }
  }

  std::set<std::string> bells;
  std::set<std::string> decoded;
  for (const char* msg : {"00", "01", "10", "11"}) {
    const auto r = sf::dense_coding(msg);
    out.require(r.decoded == msg, std::string("dense coding decodes ") + msg);
    bells.insert(r.bell_state);
    decoded.insert(r.decoded);
  }
  out.require(bells.size() == 4 && decoded.size() == 4, "dense coding is bijective");

  for (int trial = 0; trial < 10; ++trial) {
    const sf::Ket in = random_ket(1, rng);
    const Matrix want = in.amplitudes() * in.amplitudes().adjoint();
    for (std::optional<int> e : {std::optional<int>{}, std::optional<int>{0},
                                 std::optional<int>{1}, std::optional<int>{2}}) {
      const auto r = sf::phase_flip_qec_round(in, e);
      out.within(max_abs(r.logical.matrix() - want), 1e-10, "QEC recovered state");
    }
  }
  {
    const double q = 0.1;
    const auto r = sf::phase_flip_qec_channel(sf::Ket::basis(1, 0), q);
    const double logical_error = 3 * q * q - 2 * q * q * q;
    out.within(std::abs((1.0 - r.fidelity) - logical_error), 1e-10,
               "QEC logical error vs 3q^2 - 2q^3");
  }

  const double t180 = 1e-3;
  const double omega = kPi / t180;
  for (int k : {1, 10, 1000}) {
    const double tau = t180 / k;
    const double want = std::pow(std::cos(omega * tau / 2), 2 * k);
    out.within(std::abs(sf::zeno_run(t180, k) - want), 1e-10, "Zeno k=" + std::to_string(k));
  }
  return out;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "gate identities", 1.0, gate_identities},
      {2, "composite-pulse orders", 10.0, composite_orders},
      {3, "fidelity series", 1.0, fidelity_series},
      {4, "GRAPE", 60.0, grape},
      {5, "pseudo-pure preparation", 5.0, pseudo_pure},
      {6, "bounds", 1.0, bounds},
      {7, "channels", 5.0, channels},
      {8, "tomography", 30.0, tomography},
      {9, "algorithms", 60.0, algorithms},
      {10, "protocols", 10.0, protocols},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome result;
    try {
      result = c.body();
    } catch (const std::exception& e) {
      result.require(false, std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream budget;
    budget << "runtime " << elapsed << " s";
    result.require(elapsed < c.budget_s, budget.str() + " over budget");
    const bool ok = result.failures().empty();
    std::printf("%s %d %s (%.3f s)\n", ok ? "PASS" : "FAIL", c.id, c.name, elapsed);
    for (const std::string& f : result.failures()) std::printf("    %s\n", f.c_str());
    if (!ok) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
