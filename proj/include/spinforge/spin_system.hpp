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

#ifndef SPINFORGE_SPIN_SYSTEM_HPP
#define SPINFORGE_SPIN_SYSTEM_HPP

#include <string>
#include <vector>

#include "spinforge/linalg.hpp"

namespace spinforge {

/// One spin-1/2 nucleus. Shifts in Hz, relaxation times in seconds.
struct Spin {
  std::string label;
  std::string species = "1H";
  double shift_hz = 0.0;
  double polarisation = 1e-5;
  double t1_s = 1.0;
  double t2_s = 1.0;
};

/// Static description of a weakly coupled n-spin molecule.
class SpinSystem {
 public:
  /// Validates: symmetric zero-diagonal couplings, t1 >= t2 > 0,
  /// 0 < polarisation <= 1, at most 10 spins.
  SpinSystem(std::vector<Spin> spins, RealMatrix j_hz);

  /// n identical spins of one species with uniform couplings.
  static SpinSystem homonuclear(int n, double j_hz, double polarisation = 1e-5);

  int size() const { return static_cast<int>(spins_.size()); }
  const std::vector<Spin>& spins() const { return spins_; }
  const Spin& spin(int i) const;
  double j_hz(int i, int j) const;
  const RealMatrix& couplings() const { return j_hz_; }

  /// Species class per spin, numbered in order of first appearance.
  std::vector<int> species_classes() const;
  bool is_homonuclear() const;

  /// Shifts of every spin, i.e. the offsets that put each spin on resonance.
  std::vector<double> shifts() const;

 private:
  static std::string spin_letter_default(int i, int n);

  std::vector<Spin> spins_;
  RealMatrix j_hz_;
};

}  // namespace spinforge

#endif  // SPINFORGE_SPIN_SYSTEM_HPP
