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

#include "spinforge/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spinforge/channels.hpp"
#include "spinforge/errors.hpp"
#include "spinforge/gates.hpp"

namespace spinforge {

namespace {

std::string bit_string(std::uint64_t value, int width) {
  std::string s(width, '0');
  for (int b = 0; b < width; ++b) {
    if ((value >> (width - 1 - b)) & 1U) s[b] = '1';
  }
  return s;
}

Matrix hadamard_all(int n, int count) {
  Matrix u = Matrix::Identity(1, 1);
  const Matrix h = gate_matrix(GateSpec{GateName::H, {0}});
  for (int s = 0; s < n; ++s) u = kron(u, s < count ? h : pauli::identity());
  return u;
}

Matrix gate(const GateSpec& g, int n) { return standard_gate(g, n); }

struct Trajectory {
  DensityMatrix state;
  std::vector<double> fidelity;
};

Trajectory run_steps(const DensityMatrix& start, const std::vector<Matrix>& steps,
                     const AlgorithmOptions& options) {
  if (options.relaxation && options.relaxation->size() != start.qubits()) {
    throw ValidationError("relaxation system size differs from the register");
  }
  if (options.step_time < 0.0) throw ValidationError("step time must be >= 0");
  Matrix ideal = start.matrix();
  DensityMatrix rho = start;
  Trajectory t{start, {}};
  for (const Matrix& u : steps) {
    ideal = conjugate(u, ideal);
    rho = DensityMatrix::trusted(conjugate(u, rho.matrix()));
    if (options.relaxation && options.step_time > 0.0) {
      rho = relax(rho, *options.relaxation, options.step_time);
    }
    t.fidelity.push_back((ideal * rho.matrix()).trace().real());
  }
  t.state = rho;
  return t;
}

std::vector<int> range(int from, int to) {
  std::vector<int> v;
  for (int i = from; i < to; ++i) v.push_back(i);
  return v;
}

void finish(AlgorithmReport& r, const Trajectory& t) {
  r.final_state = t.state;
  r.step_fidelity = t.fidelity;
  r.probabilities = outcome_probabilities(t.state, r.measured);
}

Vector bell(const std::string& name) {
  const double h = 1.0 / std::sqrt(2.0);
  Vector v = Vector::Zero(4);
  if (name == "phi+") {
    v(0) = h;
    v(3) = h;
  } else if (name == "phi-") {
    v(0) = h;
    v(3) = -h;
  } else if (name == "psi+") {
    v(1) = h;
    v(2) = h;
  } else {
    v(1) = h;
    v(2) = -h;
  }
  return v;
}

}  // namespace

BooleanOracle::BooleanOracle(int n, std::vector<int> truth_table)
    : n_(n), table_(std::move(truth_table)) {
  if (n < 1 || n > 9) throw ValidationError("oracle input size must be 1..9");
  if (table_.size() != (std::size_t{1} << n)) {
    throw ValidationError("truth table must have 2^n entries");
  }
  for (int v : table_) {
    if (v != 0 && v != 1) throw ValidationError("truth table entries must be 0 or 1");
  }
}

BooleanOracle BooleanOracle::deutsch(const std::string& name) {
  if (name.size() != 3 || name[0] != 'f' || (name[1] != '0' && name[1] != '1') ||
      (name[2] != '0' && name[2] != '1')) {
    throw ValidationError("Deutsch function must be one of f00, f01, f10, f11");
  }
  return BooleanOracle(1, {name[1] - '0', name[2] - '0'});
}

BooleanOracle BooleanOracle::marking(int n, std::span<const std::uint64_t> marked) {
  if (n < 1 || n > 9) throw ValidationError("oracle input size must be 1..9");
  std::vector<int> t(std::size_t{1} << n, 0);
  for (std::uint64_t x : marked) {
    if (x >= t.size()) throw ValidationError("marked input out of range");
    t[x] = 1;
  }
  return BooleanOracle(n, t);
}

int BooleanOracle::ones() const {
  return static_cast<int>(std::count(table_.begin(), table_.end(), 1));
}
bool BooleanOracle::is_constant() const {
  return ones() == 0 || ones() == static_cast<int>(table_.size());
}
bool BooleanOracle::is_balanced() const {
  return 2 * ones() == static_cast<int>(table_.size());
}

Matrix BooleanOracle::bit_oracle() const {
  const Eigen::Index d = Eigen::Index{2} << n_;
  Matrix u = Matrix::Zero(d, d);
  for (Eigen::Index x = 0; x < (d >> 1); ++x) {
    for (Eigen::Index y = 0; y < 2; ++y) {
      const Eigen::Index out = 2 * x + (y ^ table_[x]);
      u(out, 2 * x + y) = 1.0;
    }
  }
  return u;
}

Matrix BooleanOracle::phase_oracle() const {
  Vector d(static_cast<Eigen::Index>(table_.size()));
  for (std::size_t x = 0; x < table_.size(); ++x) {
    d(static_cast<Eigen::Index>(x)) = table_[x] ? -1.0 : 1.0;
  }
  return d.asDiagonal();
}

DensityMatrix reduced_state(const DensityMatrix& rho, std::span<const int> keep) {
  const int n = rho.qubits();
  std::uint64_t keep_mask = 0;
  for (int s : keep) {
    if (s < 0 || s >= n) throw ValidationError("kept spin out of range");
    keep_mask |= std::uint64_t{1} << (n - 1 - s);
  }
  const int k = static_cast<int>(keep.size());
  if (k == 0) throw ValidationError("keep at least one spin");
  auto sub = [&](std::uint64_t full) {
    std::uint64_t v = 0;
    for (int s : keep) v = (v << 1) | static_cast<std::uint64_t>(spin_bit(full, s, n));
    return static_cast<Eigen::Index>(v);
  };
  const Eigen::Index dk = Eigen::Index{1} << k;
  Matrix out = Matrix::Zero(dk, dk);
  for (Eigen::Index r = 0; r < rho.dim(); ++r) {
    for (Eigen::Index c = 0; c < rho.dim(); ++c) {
      const auto ru = static_cast<std::uint64_t>(r), cu = static_cast<std::uint64_t>(c);
      if ((ru & ~keep_mask) != (cu & ~keep_mask)) continue;
      out(sub(ru), sub(cu)) += rho.matrix()(r, c);
    }
  }
  return DensityMatrix::trusted(out);
}

std::vector<double> outcome_probabilities(const DensityMatrix& rho,
                                          std::span<const int> spins) {
  return populations(reduced_state(rho, spins));
}

AlgorithmReport deutsch(const std::string& f, OracleForm form,
                        const AlgorithmOptions& options) {
  const BooleanOracle oracle = BooleanOracle::deutsch(f);
  AlgorithmReport r;
  r.algorithm = "deutsch";
  r.measured = {0};
  r.oracle_calls = 1;
  Trajectory t{DensityMatrix::maximally_mixed(1), {}};
  if (form == OracleForm::kAncilla) {
    const Matrix hh = hadamard_all(2, 2);
    t = run_steps(density_from_ket(Ket::basis(2, 1)),
                  {hh, oracle.bit_oracle(), hh}, options);
  } else {
    const Matrix h = hadamard_all(1, 1);
    t = run_steps(density_from_ket(Ket::basis(1, 0)), {h, oracle.phase_oracle(), h},
                  options);
  }
  finish(r, t);
  r.answer = r.probabilities[1] > 0.5 ? "1" : "0";
  return r;
}

AlgorithmReport deutsch_jozsa(const BooleanOracle& oracle, OracleForm form,
                              const AlgorithmOptions& options) {
  const int n = oracle.bits();
  if (n > 4) throw ValidationError("Deutsch-Jozsa is limited to n <= 4");
  AlgorithmReport r;
  r.algorithm = "deutsch_jozsa";
  r.measured = range(0, n);
  r.oracle_calls = 1;
  Trajectory t{DensityMatrix::maximally_mixed(1), {}};
  if (form == OracleForm::kAncilla) {
    const Matrix h = hadamard_all(n + 1, n + 1);
    t = run_steps(density_from_ket(Ket::basis(n + 1, 1)), {h, oracle.bit_oracle(), h},
                  options);
  } else {
    const Matrix h = hadamard_all(n, n);
    t = run_steps(density_from_ket(Ket::basis(n, 0)), {h, oracle.phase_oracle(), h},
                  options);
  }
  finish(r, t);
  r.values.push_back({"p_all_zero", r.probabilities[0]});
  if (!oracle.is_constant() && !oracle.is_balanced()) {
    r.flags.push_back("promise-violating oracle");
    r.answer = "promise-violating oracle";
  } else {
    r.answer = r.probabilities[0] > 0.5 ? "constant" : "balanced";
  }
  return r;
}

int grover_default_iterations(int n, int k) {
  if (k < 1) throw ValidationError("Grover search needs at least one marked input");
  const double big_n = std::ldexp(1.0, n);
  if (k > big_n) throw ValidationError("more marked inputs than inputs");
  const int r = static_cast<int>(std::lround(kPi / 4.0 * std::sqrt(big_n / k) - 0.5));
  return std::max(1, r);
}

AlgorithmReport grover(const BooleanOracle& oracle, std::optional<int> iterations,
                       const AlgorithmOptions& options) {
  const int n = oracle.bits();
  const int k = oracle.ones();
  if (k == 0) throw ValidationError("Grover search has nothing to find (k = 0)");
  const int reps = iterations ? *iterations : grover_default_iterations(n, k);
  if (reps < 0) throw ValidationError("iteration count must be >= 0");
  const Matrix h = hadamard_all(n, n);
  Matrix u00 = Matrix::Identity(h.rows(), h.cols());
  u00(0, 0) = -1.0;
  std::vector<Matrix> steps = {h};
  for (int i = 0; i < reps; ++i) {
    steps.push_back(oracle.phase_oracle());
    steps.push_back(h);
    steps.push_back(u00);
    steps.push_back(h);
  }
  AlgorithmReport r;
  r.algorithm = "grover";
  r.measured = range(0, n);
  r.oracle_calls = reps;
  finish(r, run_steps(density_from_ket(Ket::basis(n, 0)), steps, options));
  double success = 0.0;
  const double top = *std::max_element(r.probabilities.begin(), r.probabilities.end());
  std::string answer;
  for (std::size_t x = 0; x < r.probabilities.size(); ++x) {
    if (oracle.value(x)) success += r.probabilities[x];
    if (r.probabilities[x] >= top - 1e-9) {
      if (!answer.empty()) answer += ',';
      answer += bit_string(x, n);
    }
  }
  r.answer = answer;
  r.values.push_back({"success_probability", success});
  r.values.push_back({"iterations", static_cast<double>(reps)});
  return r;
}

CountingResult quantum_counting(const BooleanOracle& oracle, int repetitions) {
  if (repetitions < 8) throw ValidationError("counting sweep needs >= 8 repetitions");
  const int n = oracle.bits();
  const Eigen::Index d = Eigen::Index{1} << n;
  const Vector s = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
  const Matrix g =
      (2.0 * s * s.adjoint() - Matrix::Identity(d, d)) * oracle.phase_oracle();
  // Control |+>, target |s>: the control coherence is <s|G^m|s> / 2.
  CountingResult out;
  Vector branch = s;
  for (int m = 0; m < repetitions; ++m) {
    const Vector upper = s / std::sqrt(2.0);
    const Vector lower = branch / std::sqrt(2.0);
    const cplx coherence = upper.dot(lower);
    out.signal.push_back(2.0 * coherence.real());
    branch = g * branch;
  }
  double num = 0.0, den = 0.0;
  for (int m = 1; m + 1 < repetitions; ++m) {
    num += out.signal[m] * (out.signal[m + 1] + out.signal[m - 1]);
    den += 2.0 * out.signal[m] * out.signal[m];
  }
  const double c = den > 0.0 ? std::clamp(num / den, -1.0, 1.0) : 1.0;
  const double omega = std::acos(c);
  out.frequency = omega / (2.0 * kPi);
  out.estimated_k = static_cast<int>(
      std::lround(static_cast<double>(d) * std::pow(std::sin(omega / 2.0), 2)));
  return out;
}

std::complex<double> gauss_sum(long long n_int, long long l, int m) {
  if (n_int < 2 || l < 1 || l > n_int || m < 1) {
    throw ValidationError("Gauss sum needs N >= 2, 1 <= l <= N and M >= 1");
  }
  std::complex<double> a(0.0, 0.0);
  const long long nr = n_int % l;
  for (long long k = 0; k <= m; ++k) {
    const long long residue = ((k * k) % l) * nr % l;
    a += std::exp(cplx(0.0, -2.0 * kPi * static_cast<double>(residue) /
                                static_cast<double>(l)));
  }
  return a / static_cast<double>(m + 1);
}

bool factor_check(long long n_int, long long l, int m, double tol) {
  return std::abs(gauss_sum(n_int, l, m)) > 1.0 - tol;
}

double zeno_run(double t180, int k) {
  if (!(t180 > 0.0)) throw ValidationError("t180 must be positive");
  if (k < 0) throw ValidationError("measurement count must be >= 0");
  DensityMatrix rho = density_from_ket(Ket::basis(1, 0));
  const int intervals = std::max(k, 1);
  const double omega = kPi / t180;
  const double tau = t180 / intervals;
  const Matrix u = propagator(omega * spin_x(), tau);
  // Survival is the weight of the branch in which every measurement gives 0.
  Matrix branch = rho.matrix();
  for (int i = 0; i < intervals; ++i) {
    branch = conjugate(u, branch);
    if (k > 0) {
      branch = projective_dephase(DensityMatrix::trusted(branch)).matrix();
      const cplx keep = branch(0, 0);
      branch.setZero();
      branch(0, 0) = keep;
    }
  }
  return branch(0, 0).real();
}

DenseCodingResult dense_coding(const std::string& message) {
  static const std::pair<const char*, GateName> kEncode[] = {
      {"00", GateName::X}, {"01", GateName::X}, {"10", GateName::Y}, {"11", GateName::Z}};
  int which = -1;
  for (int i = 0; i < 4; ++i) {
    if (message == kEncode[i].first) which = i;
  }
  if (which < 0) throw ValidationError("dense-coding message must be two bits");
  const Vector psi_minus = bell("psi-");
  Matrix op = Matrix::Identity(4, 4);
  if (which > 0) op = gate(GateSpec{kEncode[which].second, {0}}, 2);
  const Vector sent = op * psi_minus;

  DenseCodingResult r;
  r.transmitted = message;
  double best = -1.0;
  for (const char* name : {"psi-", "phi-", "phi+", "psi+"}) {
    const double overlap = std::norm(bell(name).dot(sent));
    if (overlap > best) {
      best = overlap;
      r.bell_state = name;
    }
  }
  const Matrix analyse = gate(GateSpec{GateName::H, {0}}, 2) * gate(cnot(0, 1), 2);
  DensityMatrix rho = DensityMatrix::trusted(conjugate(analyse, sent * sent.adjoint()));
  rho = projective_dephase(rho);
  const std::vector<double> p = populations(rho);
  const auto outcome = static_cast<std::uint64_t>(
      std::max_element(p.begin(), p.end()) - p.begin());
  static const char* kBellOf[] = {"phi+", "psi+", "phi-", "psi-"};
  static const std::pair<const char*, const char*> kMessageOf[] = {
      {"psi-", "00"}, {"phi-", "01"}, {"phi+", "10"}, {"psi+", "11"}};
  for (const auto& [bell_name, msg] : kMessageOf) {
    if (std::string(kBellOf[outcome]) == bell_name) r.decoded = msg;
  }
  return r;
}

TeleportResult teleport(const Ket& input, TeleportCorrection corrections) {
  if (input.qubits() != 1) throw ValidationError("teleportation input is one qubit");
  const Vector start = kron(input.amplitudes(), Ket::basis(2, 0).amplitudes());
  const int n = 3;
  const Matrix share = gate(cnot(1, 2), n) * gate(GateSpec{GateName::H, {1}}, n);
  const Matrix alice = gate(GateSpec{GateName::H, {0}}, n) * gate(cnot(0, 1), n);
  const Vector psi = alice * share * start;
  DensityMatrix rho = DensityMatrix::trusted(psi * psi.adjoint());
  const int measured[] = {0, 1};
  rho = projective_dephase(rho, measured);
  const int bob_spin[] = {2};
  const int alice_spin[] = {0};

  TeleportResult r;
  if (corrections == TeleportCorrection::kCoherent) {
    const Matrix fix = gate(GateSpec{GateName::CZ, {0, 2}}, n) * gate(cnot(1, 2), n);
    rho = DensityMatrix::trusted(conjugate(fix, rho.matrix()));
    r.bob = reduced_state(rho, bob_spin);
    r.alice = reduced_state(rho, alice_spin);
  } else {
    Matrix bob = Matrix::Zero(2, 2);
    Matrix al = Matrix::Zero(2, 2);
    for (int m0 = 0; m0 < 2; ++m0) {
      for (int m1 = 0; m1 < 2; ++m1) {
        Matrix proj = Matrix::Zero(8, 8);
        for (int b = 0; b < 2; ++b) {
          const int idx = 4 * m0 + 2 * m1 + b;
          proj(idx, idx) = 1.0;
        }
        const Matrix branch = proj * rho.matrix() * proj;
        const double p = branch.trace().real();
        if (p < 1e-15) continue;
        Matrix fix = Matrix::Identity(8, 8);
        if (m1) fix = gate(GateSpec{GateName::X, {2}}, n) * fix;
        if (m0) fix = gate(GateSpec{GateName::Z, {2}}, n) * fix;
        const DensityMatrix corrected = DensityMatrix::trusted(conjugate(fix, branch / p));
        bob += p * reduced_state(corrected, bob_spin).matrix();
        al += p * reduced_state(corrected, alice_spin).matrix();
      }
    }
    r.bob = DensityMatrix::trusted(bob);
    r.alice = DensityMatrix::trusted(al);
  }
  const Vector& a = input.amplitudes();
  r.fidelity = (a.adjoint() * r.bob.matrix() * a)(0, 0).real();
  return r;
}

namespace {

Matrix qec_encoder() {
  const int n = 3;
  return hadamard_all(n, n) * gate(cnot(0, 2), n) * gate(cnot(0, 1), n);
}

Matrix qec_decoder() {
  const int n = 3;
  return gate(GateSpec{GateName::TOFFOLI, {1, 2, 0}}, n) * gate(cnot(0, 2), n) *
         gate(cnot(0, 1), n) * hadamard_all(n, n);
}

QecResult qec_finish(const Ket& input, const DensityMatrix& encoded_noisy) {
  const DensityMatrix out =
      DensityMatrix::trusted(conjugate(qec_decoder(), encoded_noisy.matrix()));
  const int keep[] = {0};
  QecResult r;
  r.logical = reduced_state(out, keep);
  const Vector& a = input.amplitudes();
  r.fidelity = (a.adjoint() * r.logical.matrix() * a)(0, 0).real();
  return r;
}

DensityMatrix qec_encode(const Ket& input) {
  if (input.qubits() != 1) throw ValidationError("the logical input is one qubit");
  const Vector start = kron(input.amplitudes(), Ket::basis(2, 0).amplitudes());
  const Vector enc = qec_encoder() * start;
  return DensityMatrix::trusted(enc * enc.adjoint());
}

}  // namespace

QecResult phase_flip_qec_round(const Ket& input, std::optional<int> error_spin) {
  DensityMatrix rho = qec_encode(input);
  if (error_spin) {
    if (*error_spin < 0 || *error_spin > 2) throw ValidationError("error spin must be 0..2");
    const Matrix z = gate(GateSpec{GateName::Z, {*error_spin}}, 3);
    rho = DensityMatrix::trusted(conjugate(z, rho.matrix()));
  }
  return qec_finish(input, rho);
}

QecResult phase_flip_qec_channel(const Ket& input, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("error probability must be in [0, 1]");
  DensityMatrix rho = qec_encode(input);
  const KrausChannel flip{{std::sqrt(1.0 - q) * pauli::identity(), std::sqrt(q) * pauli::z()}};
  for (int s = 0; s < 3; ++s) rho = apply_channel(rho, embed_channel(flip, s, 3));
  return qec_finish(input, rho);
}

}  // namespace spinforge
