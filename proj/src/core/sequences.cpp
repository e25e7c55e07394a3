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

#include "spinforge/sequences.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "spinforge/errors.hpp"
#include "spinforge/gates.hpp"

namespace spinforge {

namespace {

int sylvester_sign(int row, int col) {
  return std::popcount(static_cast<unsigned>(row & col)) % 2 == 0 ? 1 : -1;
}

int next_power_of_two(int v) {
  int m = 1;
  while (m < v) m <<= 1;
  return m;
}

}  // namespace

EventList RefocusSchedule::events(double slot_time) const {
  EventList out;
  const int n = static_cast<int>(signs.size());
  std::vector<int> current(n, 1);
  auto flip_to = [&](auto wanted) {
    PulseOp p{{}, kPi, 0.0, 0.0};
    for (int s = 0; s < n; ++s) {
      if (current[s] != wanted(s)) {
        p.spins.push_back(s);
        current[s] = -current[s];
      }
    }
    if (!p.spins.empty()) out.push_back(p);
  };
  for (int t = 0; t < slots; ++t) {
    flip_to([&](int s) { return signs[s][t]; });
    out.push_back(DelayOp{slot_time});
  }
  flip_to([](int) { return 1; });
  return out;
}

int RefocusSchedule::pulse_count() const {
  int count = 0;
  for (const auto& row : signs) {
    int current = 1;
    for (int v : row) {
      if (v != current) ++count;
      current = v;
    }
    if (current != 1) ++count;
  }
  return count;
}

RefocusSchedule refocus_schedule(int n,
                                 std::optional<std::pair<int, int>> keep) {
  if (n < 2 || n > 10) {
    throw ValidationError("refocusing schedules support 2 to 10 spins");
  }
  if (keep) {
    const auto [a, b] = *keep;
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
      throw ValidationError("kept pair must name two distinct spins");
    }
  }
  const int distinct = keep ? n - 1 : n;
  const int m = next_power_of_two(distinct + 1);
  RefocusSchedule out;
  out.slots = m;
  out.signs.assign(n, std::vector<int>(m, 1));
  int next_row = 1;
  std::vector<int> row_of(n, 0);
  for (int s = 0; s < n; ++s) {
    if (keep && s == std::max(keep->first, keep->second)) {
      row_of[s] = row_of[std::min(keep->first, keep->second)];
    } else {
      row_of[s] = next_row++;
    }
    for (int t = 0; t < m; ++t) out.signs[s][t] = sylvester_sign(row_of[s], t);
  }
  return out;
}

SynthesizedSequence controlled_phase_sequence(const SpinSystem& sys, int i,
                                              int j, double theta) {
  const int n = sys.size();
  if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
    throw ValidationError("controlled phase needs two distinct spins");
  }
  const double jij = sys.j_hz(i, j);
  if (jij == 0.0) {
    throw ValidationError("spins " + std::to_string(i) + " and " +
                          std::to_string(j) +
                          " are not coupled; route through SWAP gates");
  }
  // Coupling evolution for time t contributes diag(e^{-i phi}, e^{i phi},
  // e^{i phi}, e^{-i phi}) with phi = pi J t / 2; choose theta' == theta
  // (mod 2 pi) so that t >= 0.
  double theta_eff = wrap_angle(theta);
  if (jij > 0.0 && theta_eff > 0.0) theta_eff -= 2.0 * kPi;
  const double t = -theta_eff / (2.0 * kPi * jij);
  const double phi = kPi * jij * t / 2.0;
  const double alpha = -2.0 * phi;

  SynthesizedSequence out;
  double global = phi;
  if (n == 2) {
    out.events.push_back(DelayOp{t});
    out.events.push_back(
        FrameZOp{i, alpha - 2.0 * kPi * sys.spin(i).shift_hz * t});
    out.events.push_back(
        FrameZOp{j, alpha - 2.0 * kPi * sys.spin(j).shift_hz * t});
  } else {
    const RefocusSchedule sched = refocus_schedule(n, std::make_pair(i, j));
    out.events = sched.events(t / sched.slots);
    out.events.push_back(FrameZOp{i, alpha});
    out.events.push_back(FrameZOp{j, alpha});
    global += sched.pulse_count() * (-kPi / 2.0);
  }
  out.global_phase = wrap_signed_angle(global);

  Matrix cphase = Matrix::Identity(4, 4);
  cphase(3, 3) = std::exp(kI * theta);
  const int targets[] = {i, j};
  out.claimed = embed(cphase, targets, n);
  return out;
}

SynthesizedSequence cz_sequence(const SpinSystem& sys, int i, int j) {
  return controlled_phase_sequence(sys, i, j, kPi);
}

}  // namespace spinforge
