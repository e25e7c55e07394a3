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

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "spinforge/algorithms.hpp"
#include "spinforge/errors.hpp"
#include "test_util.hpp"

namespace spinforge {
namespace {

TEST(Oracle, PhaseKickbackMatchesPhaseOracle) {
  std::mt19937 rng(5);
  for (int n = 1; n <= 3; ++n) {
    std::vector<int> table(std::size_t{1} << n);
    for (int& v : table) v = static_cast<int>(rng() & 1U);
    const BooleanOracle f(n, table);
    Vector minus(2);
    minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    const Eigen::Index d = Eigen::Index{1} << n;
    const Matrix lhs = f.bit_oracle() * kron(Matrix::Identity(d, d), Matrix(minus));
    const Matrix rhs = kron(f.phase_oracle(), Matrix(minus));
    EXPECT_LT(max_abs(lhs - rhs), 1e-14);
    EXPECT_TRUE(is_unitary(f.bit_oracle(), 1e-12));
  }
}

TEST(Deutsch, AllFourFunctionsBothForms) {
  for (OracleForm form : {OracleForm::kAncilla, OracleForm::kRefined}) {
    for (const char* f : {"f00", "f01", "f10", "f11"}) {
      const AlgorithmReport r = deutsch(f, form);
      const std::string expect = (f[1] == f[2]) ? "0" : "1";
      EXPECT_EQ(r.answer, expect) << f;
      EXPECT_EQ(r.oracle_calls, 1);
      EXPECT_NEAR(r.probabilities[expect == "1" ? 1 : 0], 1.0, 1e-12);
    }
  }
}

TEST(Deutsch, GlobalPhaseOfConstantFunctionsInvisible) {
  const AlgorithmReport a = deutsch("f00", OracleForm::kRefined);
  const AlgorithmReport b = deutsch("f11", OracleForm::kRefined);
  EXPECT_LT(max_abs(a.final_state.matrix() - b.final_state.matrix()), 1e-14);
}

TEST(Deutsch, RejectsUnknownFunction) {
  EXPECT_THROW(deutsch("f2", OracleForm::kAncilla), ValidationError);
}

TEST(DeutschJozsa, ConstantBalancedAndPromise) {
  for (OracleForm form : {OracleForm::kAncilla, OracleForm::kRefined}) {
    std::vector<int> parity(16);
    for (int x = 0; x < 16; ++x) parity[x] = __builtin_popcount(x) & 1;
    EXPECT_EQ(deutsch_jozsa(BooleanOracle(4, parity), form).answer, "balanced");
    EXPECT_EQ(deutsch_jozsa(BooleanOracle(4, std::vector<int>(16, 1)), form).answer,
              "constant");
    EXPECT_EQ(deutsch_jozsa(BooleanOracle(2, {0, 0, 1, 1}), form).answer, "balanced");
    const AlgorithmReport bad = deutsch_jozsa(BooleanOracle(2, {1, 0, 0, 0}), form);
    ASSERT_EQ(bad.flags.size(), 1u);
    EXPECT_EQ(bad.answer, "promise-violating oracle");
  }
}

TEST(DeutschJozsa, AllZeroProbabilityIsSquaredMeanPhase) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<int> t(8);
    for (int& v : t) v = static_cast<int>(rng() & 1U);
    double mean = 0.0;
    for (int v : t) mean += v ? -1.0 : 1.0;
    mean /= 8.0;
    const AlgorithmReport r = deutsch_jozsa(BooleanOracle(3, t), OracleForm::kAncilla);
    EXPECT_NEAR(r.probabilities[0], mean * mean, 1e-12);
  }
}

TEST(Grover, TwoQubitsFindsEveryItemInOneStep) {
  for (std::uint64_t m = 0; m < 4; ++m) {
    const std::uint64_t marked[] = {m};
    const AlgorithmReport r = grover(BooleanOracle::marking(2, marked));
    EXPECT_EQ(r.oracle_calls, 1);
    EXPECT_NEAR(r.probabilities[m], 1.0, 1e-12);
  }
}

TEST(Grover, SuccessFollowsRotationFormula) {
  for (int n = 2; n <= 5; ++n) {
    for (int k : {1, 2, 3}) {
      const double big_n = std::ldexp(1.0, n);
      if (k >= big_n) continue;
      std::vector<std::uint64_t> marked;
      for (int i = 0; i < k; ++i) marked.push_back(static_cast<std::uint64_t>(i));
      const BooleanOracle f = BooleanOracle::marking(n, marked);
      const double theta = std::asin(std::sqrt(k / big_n));
      for (int r = 0; r <= 4; ++r) {
        const AlgorithmReport rep = grover(f, r);
        double success = 0.0;
        for (auto x : marked) success += rep.probabilities[x];
        EXPECT_NEAR(success, std::pow(std::sin((2 * r + 1) * theta), 2), 1e-10);
      }
    }
  }
  const std::uint64_t one[] = {5};
  EXPECT_NEAR(grover(BooleanOracle::marking(3, one), 2).probabilities[5], 0.9453125,
              1e-12);
}

TEST(Grover, EdgeCases) {
  EXPECT_THROW(grover(BooleanOracle(2, {0, 0, 0, 0})), ValidationError);
  const AlgorithmReport all = grover(BooleanOracle(2, {1, 1, 1, 1}));
  for (double p : all.probabilities) EXPECT_NEAR(p, 0.25, 1e-12);
  EXPECT_EQ(grover_default_iterations(2, 1), 1);
  EXPECT_EQ(grover_default_iterations(3, 1), 2);
}

TEST(Grover, RelaxationLowersStepFidelity) {
  const std::uint64_t marked[] = {2};
  AlgorithmOptions opt;
  opt.relaxation = SpinSystem::homonuclear(2, 10.0);
  opt.step_time = 0.05;
  const AlgorithmReport noisy = grover(BooleanOracle::marking(2, marked), {}, opt);
  const AlgorithmReport clean = grover(BooleanOracle::marking(2, marked));
  for (double f : clean.step_fidelity) EXPECT_NEAR(f, 1.0, 1e-12);
  ASSERT_EQ(noisy.step_fidelity.size(), clean.step_fidelity.size());
  EXPECT_LT(noisy.step_fidelity.back(), 0.99);
  for (std::size_t i = 1; i < noisy.step_fidelity.size(); ++i) {
    EXPECT_LE(noisy.step_fidelity[i], noisy.step_fidelity[i - 1] + 1e-12);
  }
  EXPECT_LT(noisy.probabilities[2], clean.probabilities[2]);
}

TEST(Counting, SignalFrequencyDistinguishesClasses) {
  const double expect[] = {0.0, 0.25, 0.5};
  for (int k = 0; k <= 2; ++k) {
    std::vector<int> t = {k >= 1 ? 1 : 0, k >= 2 ? 1 : 0};
    const CountingResult c = quantum_counting(BooleanOracle(1, t), 16);
    EXPECT_NEAR(c.frequency, expect[k], 1e-9) << k;
    EXPECT_EQ(c.estimated_k, k);
    // Independent check of the signal: cos(m * omega) with sin^2(omega/2) = k/N.
    const double omega = 2.0 * std::asin(std::sqrt(k / 2.0));
    for (int m = 0; m < 16; ++m) {
      EXPECT_NEAR(c.signal[m], std::cos(m * omega), 1e-12);
    }
  }
  EXPECT_THROW(quantum_counting(BooleanOracle(1, {0, 1}), 4), ValidationError);
}

TEST(GaussSum, WorkedExamples) {
  EXPECT_NEAR(std::abs(gauss_sum(15, 3, 5)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(gauss_sum(15, 2, 1)), 0.0, 1e-12);
  EXPECT_LT(std::abs(gauss_sum(15, 4, 3)), 1.0 - 1e-3);
  EXPECT_THROW(gauss_sum(15, 16, 3), ValidationError);
  EXPECT_THROW(gauss_sum(1, 1, 3), ValidationError);
}

TEST(GaussSum, ExhaustiveFactorDetection) {
  for (long long n = 2; n <= 30; ++n) {
    for (long long l = 1; l <= n; ++l) {
      for (int m = 1; m <= 8; ++m) {
        EXPECT_EQ(factor_check(n, l, m), n % l == 0) << n << " " << l << " " << m;
        EXPECT_LE(std::abs(gauss_sum(n, l, m)), 1.0 + 1e-12);
      }
    }
  }
}

TEST(Zeno, SurvivalMatchesCosinePower) {
  for (int k : {1, 2, 5, 10, 100}) {
    EXPECT_NEAR(zeno_run(1e-3, k), std::pow(std::cos(kPi / (2.0 * k)), 2.0 * k), 1e-10);
  }
  EXPECT_NEAR(zeno_run(1e-3, 10), 0.7805, 5e-5);
  EXPECT_GT(zeno_run(1e-3, 1000), 0.9975);
  EXPECT_NEAR(zeno_run(1e-3, 0), 0.0, 1e-12);
}

TEST(DenseCoding, FourMessagesRoundTrip) {
  const char* bell_of[] = {"psi-", "phi-", "phi+", "psi+"};
  const char* msgs[] = {"00", "01", "10", "11"};
  for (int i = 0; i < 4; ++i) {
    const DenseCodingResult r = dense_coding(msgs[i]);
    EXPECT_EQ(r.decoded, msgs[i]);
    EXPECT_EQ(r.bell_state, bell_of[i]);
  }
  EXPECT_THROW(dense_coding("2"), ValidationError);
}

TEST(Teleport, RandomInputsArriveIntact) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Ket in = testing::random_ket(1, rng);
    for (TeleportCorrection c :
         {TeleportCorrection::kCoherent, TeleportCorrection::kPostProcessed}) {
      const TeleportResult r = teleport(in, c);
      EXPECT_NEAR(r.fidelity, 1.0, 1e-12);
      EXPECT_LT(max_abs(r.alice.matrix() - 0.5 * Matrix::Identity(2, 2)), 1e-12);
    }
  }
}

TEST(Qec, EverySingleFlipIsCorrected) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const Ket in = testing::random_ket(1, rng);
    EXPECT_NEAR(phase_flip_qec_round(in, std::nullopt).fidelity, 1.0, 1e-12);
    for (int s = 0; s < 3; ++s) {
      EXPECT_NEAR(phase_flip_qec_round(in, s).fidelity, 1.0, 1e-12);
    }
  }
}

TEST(Qec, ResidualErrorIsCubicInFlipProbability) {
  const Ket zero = Ket::basis(1, 0);
  for (double q : {0.0, 0.05, 0.1, 0.3}) {
    const double fail = 3 * q * q * (1 - q) + q * q * q;
    EXPECT_NEAR(phase_flip_qec_channel(zero, q).fidelity, 1.0 - fail, 1e-12);
  }
  EXPECT_NEAR(1.0 - phase_flip_qec_channel(zero, 0.1).fidelity, 0.028, 1e-12);
}

TEST(Reduced, PartialTraceOfProductState) {
  std::mt19937_64 rng(3);
  const Matrix a = testing::random_density(1, rng).matrix();
  const Matrix b = testing::random_density(2, rng).matrix();
  const DensityMatrix rho = DensityMatrix::trusted(kron(a, b));
  const int first[] = {0};
  const int rest[] = {1, 2};
  EXPECT_LT(max_abs(reduced_state(rho, first).matrix() - a), 1e-14);
  EXPECT_LT(max_abs(reduced_state(rho, rest).matrix() - b), 1e-14);
}

}  // namespace
}  // namespace spinforge
