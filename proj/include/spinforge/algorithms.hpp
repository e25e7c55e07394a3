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

#ifndef SPINFORGE_ALGORITHMS_HPP
#define SPINFORGE_ALGORITHMS_HPP

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spinforge/linalg.hpp"
#include "spinforge/spin_system.hpp"
#include "spinforge/states.hpp"

namespace spinforge {

/// f: {0,1}^n -> {0,1} given by its truth table (input x read with bit 0 as
/// the most significant).
class BooleanOracle {
 public:
  BooleanOracle(int n, std::vector<int> truth_table);
  /// Named one-bit functions "f00", "f01", "f10", "f11" (fab: f(0)=a, f(1)=b).
  static BooleanOracle deutsch(const std::string& name);
  /// f(x) = 1 exactly for the listed inputs.
  static BooleanOracle marking(int n, std::span<const std::uint64_t> marked);

  int bits() const { return n_; }
  int value(std::uint64_t x) const { return table_[x]; }
  const std::vector<int>& table() const { return table_; }
  int ones() const;
  bool is_constant() const;
  bool is_balanced() const;

  /// |x>|y> -> |x>|y xor f(x)>, ancilla last.
  Matrix bit_oracle() const;
  /// |x> -> (-1)^f(x) |x>.
  Matrix phase_oracle() const;

 private:
  int n_;
  std::vector<int> table_;
};

enum class OracleForm { kAncilla, kRefined };

/// Optional relaxation applied for `step_time` after every network step.
struct AlgorithmOptions {
  std::optional<SpinSystem> relaxation;
  double step_time = 0.0;
};

struct AlgorithmReport {
  std::string algorithm;
  DensityMatrix final_state = DensityMatrix::maximally_mixed(1);
  /// Spins whose outcome distribution is reported.
  std::vector<int> measured;
  /// Outcome probabilities of the measured spins, bit strings in order.
  std::vector<double> probabilities;
  std::string answer;
  /// Fidelity with the ideal trajectory after each step.
  std::vector<double> step_fidelity;
  int oracle_calls = 0;
  std::vector<std::string> flags;
  /// Named scalar results (success probability, estimates, ...).
  std::vector<std::pair<std::string, double>> values;
};

/// Reduced state on `keep` (in the given order).
DensityMatrix reduced_state(const DensityMatrix& rho, std::span<const int> keep);
/// Outcome distribution of computational-basis measurements on `spins`.
std::vector<double> outcome_probabilities(const DensityMatrix& rho,
                                          std::span<const int> spins);

/// Parity f(0) xor f(1) with a single oracle call.
AlgorithmReport deutsch(const std::string& f, OracleForm form,
                        const AlgorithmOptions& options = {});
/// "constant", "balanced", or "promise-violating oracle" (flagged, with the
/// outcome distribution) for n <= 4.
AlgorithmReport deutsch_jozsa(const BooleanOracle& oracle, OracleForm form,
                              const AlgorithmOptions& options = {});

/// round((pi/4) sqrt(N/k) - 1/2), at least 1.
int grover_default_iterations(int n, int k);
/// Phase-oracle search; throws when no input is marked.
AlgorithmReport grover(const BooleanOracle& oracle,
                       std::optional<int> iterations = std::nullopt,
                       const AlgorithmOptions& options = {});

struct CountingResult {
  std::vector<double> signal;
  /// Oscillation frequency in cycles per repetition.
  double frequency = 0.0;
  int estimated_k = 0;
};
/// One input bit plus a control spin: the control's coherence after m
/// controlled Grover iterations, m = 0 .. repetitions-1, fitted by linear
/// prediction.
CountingResult quantum_counting(const BooleanOracle& oracle, int repetitions);

std::complex<double> gauss_sum(long long n_int, long long l, int m);
bool factor_check(long long n_int, long long l, int m, double tol = 1e-9);

/// Survival probability of |0> under a nutation that inverts the spin in
/// t180, interrupted by k equally spaced projective measurements.
double zeno_run(double t180, int k);

struct DenseCodingResult {
  std::string transmitted;
  std::string bell_state;
  std::string decoded;
};
/// Message "00", "01", "10", "11" encoded by 1, X, Y, Z on a shared |psi->.
DenseCodingResult dense_coding(const std::string& message);

enum class TeleportCorrection { kCoherent, kPostProcessed };
struct TeleportResult {
  DensityMatrix bob = DensityMatrix::maximally_mixed(1);
  DensityMatrix alice = DensityMatrix::maximally_mixed(1);
  double fidelity = 0.0;
};
TeleportResult teleport(const Ket& input, TeleportCorrection corrections);

struct QecResult {
  DensityMatrix logical = DensityMatrix::maximally_mixed(1);
  double fidelity = 0.0;
};
/// Encode, apply Z on `error_spin` (none when empty), decode and correct.
QecResult phase_flip_qec_round(const Ket& input, std::optional<int> error_spin);
/// Independent Z errors with probability q on each spin; returns the
/// decoded state of `input`.
QecResult phase_flip_qec_channel(const Ket& input, double q);

}  // namespace spinforge

#endif  // SPINFORGE_ALGORITHMS_HPP
