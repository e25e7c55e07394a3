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

#include "spinforge/spin_system.hpp"

#include <cmath>
#include <string>

#include "spinforge/errors.hpp"

namespace spinforge {

SpinSystem::SpinSystem(std::vector<Spin> spins, RealMatrix j_hz)
    : spins_(std::move(spins)), j_hz_(std::move(j_hz)) {
  const int n = size();
  if (n < 1 || n > 10) {
    throw ValidationError("a spin system needs between 1 and 10 spins, got " +
                          std::to_string(n));
  }
  if (j_hz_.size() == 0) j_hz_ = RealMatrix::Zero(n, n);
  if (j_hz_.rows() != n || j_hz_.cols() != n) {
    throw ValidationError("coupling matrix must be " + std::to_string(n) +
                          "x" + std::to_string(n));
  }
  for (int i = 0; i < n; ++i) {
    const Spin& s = spins_[i];
    if (spins_[i].label.empty()) spins_[i].label = spin_letter_default(i, n);
    if (!std::isfinite(s.shift_hz)) {
      throw ValidationError("spin " + std::to_string(i) + ": shift not finite");
    }
    if (!(s.polarisation > 0.0 && s.polarisation <= 1.0)) {
      throw ValidationError("spin " + std::to_string(i) +
                            ": polarisation must lie in (0, 1]");
    }
    if (!(s.t2_s > 0.0 && s.t1_s >= s.t2_s)) {
      throw ValidationError("spin " + std::to_string(i) +
                            ": relaxation times need t1 >= t2 > 0");
    }
    if (j_hz_(i, i) != 0.0) {
      throw ValidationError("coupling matrix diagonal must be zero");
    }
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(j_hz_(i, j)) || j_hz_(i, j) != j_hz_(j, i)) {
        throw ValidationError("coupling matrix must be finite and symmetric");
      }
    }
  }
}

std::string SpinSystem::spin_letter_default(int i, int n) {
  if (n <= 2) return i == 0 ? "I" : "S";
  return "I" + std::to_string(i + 1);
}

SpinSystem SpinSystem::homonuclear(int n, double j_hz, double polarisation) {
  if (n < 1) throw ValidationError("spin count must be positive");
  std::vector<Spin> spins(n);
  for (auto& s : spins) s.polarisation = polarisation;
  RealMatrix j = RealMatrix::Constant(n, n, j_hz);
  j.diagonal().setZero();
  return SpinSystem(std::move(spins), std::move(j));
}

const Spin& SpinSystem::spin(int i) const {
  if (i < 0 || i >= size()) {
    throw ValidationError("spin index " + std::to_string(i) + " out of range");
  }
  return spins_[i];
}

double SpinSystem::j_hz(int i, int j) const {
  spin(i);
  spin(j);
  return j_hz_(i, j);
}

std::vector<int> SpinSystem::species_classes() const {
  std::vector<std::string> seen;
  std::vector<int> out;
  for (const auto& s : spins_) {
    int k = 0;
    while (k < static_cast<int>(seen.size()) && seen[k] != s.species) ++k;
    if (k == static_cast<int>(seen.size())) seen.push_back(s.species);
    out.push_back(k);
  }
  return out;
}

bool SpinSystem::is_homonuclear() const {
  for (const auto& s : spins_) {
    if (s.species != spins_.front().species) return false;
  }
  return true;
}

std::vector<double> SpinSystem::shifts() const {
  std::vector<double> out;
  for (const auto& s : spins_) out.push_back(s.shift_hz);
  return out;
}

}  // namespace spinforge
