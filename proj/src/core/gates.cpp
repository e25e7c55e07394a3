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

#include "spinforge/gates.hpp"

#include <string>

#include "spinforge/errors.hpp"

namespace spinforge {

namespace {

struct NameEntry {
  GateName name;
  const char* text;
  int arity;
};

constexpr NameEntry kNames[] = {
    {GateName::X, "X", 1},        {GateName::Y, "Y", 1},
    {GateName::Z, "Z", 1},        {GateName::H, "H", 1},
    {GateName::h, "h", 1},        {GateName::T, "T", 1},
    {GateName::T_nmr, "T_nmr", 1}, {GateName::CNOT, "CNOT", 2},
    {GateName::CZ, "CZ", 2},      {GateName::SWAP, "SWAP", 2},
    {GateName::TOFFOLI, "TOFFOLI", 3}, {GateName::CT, "CT", 2},
};

Matrix controlled(const Matrix& op, int controls, int control_state) {
  const Eigen::Index sub = op.rows();
  const Eigen::Index dim = sub << controls;
  Matrix m = Matrix::Identity(dim, dim);
  const Eigen::Index active_block =
      control_state == 1 ? (Eigen::Index{1} << controls) - 1 : 0;
  m.block(active_block * sub, active_block * sub, sub, sub) = op;
  return m;
}

}  // namespace

std::string gate_name_string(GateName name) {
  for (const auto& e : kNames) {
    if (e.name == name) return e.text;
  }
  throw ValidationError("unknown gate");
}

GateName parse_gate_name(const std::string& text) {
  for (const auto& e : kNames) {
    if (text == e.text) return e.name;
  }
  throw ValidationError("unknown gate '" + text + "'");
}

int gate_arity(GateName name) {
  for (const auto& e : kNames) {
    if (e.name == name) return e.arity;
  }
  throw ValidationError("unknown gate");
}

Matrix gate_matrix(const GateSpec& spec) {
  if (spec.control_state != 0 && spec.control_state != 1) {
    throw ValidationError("control_state must be 0 or 1");
  }
  const double r = 1.0 / std::sqrt(2.0);
  Matrix m(2, 2);
  switch (spec.name) {
    case GateName::X: return pauli::x();
    case GateName::Y: return pauli::y();
    case GateName::Z: return pauli::z();
    case GateName::H:
      m << r, r, r, -r;
      return m;
    case GateName::h:
      m << r, -r, r, r;
      return m;
    case GateName::T:
      m << 1, 0, 0, std::exp(kI * kPi / 4.0);
      return m;
    case GateName::T_nmr:
      m << std::exp(-kI * kPi / 8.0), 0, 0, std::exp(kI * kPi / 8.0);
      return m;
    case GateName::CNOT: return controlled(pauli::x(), 1, spec.control_state);
    case GateName::CZ: return controlled(pauli::z(), 1, spec.control_state);
    case GateName::CT: {
      m << 1, 0, 0, std::exp(kI * kPi / 4.0);
      return controlled(m, 1, spec.control_state);
    }
    case GateName::TOFFOLI:
      return controlled(pauli::x(), 2, spec.control_state);
    case GateName::SWAP: {
      Matrix s = Matrix::Zero(4, 4);
      s(0, 0) = s(1, 2) = s(2, 1) = s(3, 3) = 1.0;
      return s;
    }
  }
  throw ValidationError("unknown gate");
}

Matrix standard_gate(const GateSpec& spec, int n) {
  const int arity = gate_arity(spec.name);
  if (static_cast<int>(spec.targets.size()) != arity) {
    throw ValidationError(gate_name_string(spec.name) + " needs " +
                          std::to_string(arity) + " target(s)");
  }
  return embed(gate_matrix(spec), spec.targets, n);
}

Matrix network_unitary(std::span<const GateSpec> network, int n) {
  const Eigen::Index dim = dimension_for(n);
  Matrix u = Matrix::Identity(dim, dim);
  for (const auto& g : network) u = standard_gate(g, n) * u;
  return u;
}

GateSpec cnot(int control, int target, int control_state) {
  return GateSpec{GateName::CNOT, {control, target}, control_state};
}

Matrix transition_selective_cnot(int control, int target, int n) {
  Matrix block(2, 2);
  block << 0, -kI, -kI, 0;
  const int targets[] = {control, target};
  return embed(controlled(block, 1, 1), targets, n);
}

}  // namespace spinforge
