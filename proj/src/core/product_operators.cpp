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

#include "spinforge/product_operators.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "spinforge/errors.hpp"

namespace spinforge {

namespace {

// Pauli string over n spins: per spin 0 = identity, 1 = x, 2 = y, 3 = z.
using PauliString = std::vector<int>;

PauliString decode(std::uint64_t code, int n) {
  PauliString p(n);
  for (int s = n - 1; s >= 0; --s) {
    p[s] = static_cast<int>(code & 3u);
    code >>= 2;
  }
  return p;
}

std::string label_of(const PauliString& p) {
  const int n = static_cast<int>(p.size());
  std::string out;
  for (int s = 0; s < n; ++s) {
    if (p[s] == 0) continue;
    out += spin_letter(s, n);
    out += "xyz"[p[s] - 1];
  }
  return out.empty() ? "E/2" : out;
}

// Tr(P rho) in O(2^n) using P|r> = phase(r) |r xor xmask>.
cplx pauli_trace(const PauliString& p, const Matrix& rho) {
  const int n = static_cast<int>(p.size());
  std::uint64_t xmask = 0;
  for (int s = 0; s < n; ++s) {
    if (p[s] == 1 || p[s] == 2) xmask |= std::uint64_t{1} << (n - 1 - s);
  }
  cplx total = 0.0;
  for (Eigen::Index r = 0; r < rho.rows(); ++r) {
    const auto ru = static_cast<std::uint64_t>(r);
    cplx phase = 1.0;
    for (int s = 0; s < n; ++s) {
      const int bit = spin_bit(ru, s, n);
      if (p[s] == 2) phase *= bit == 0 ? kI : -kI;
      if (p[s] == 3 && bit == 1) phase = -phase;
    }
    total += phase * rho(r, static_cast<Eigen::Index>(ru ^ xmask));
  }
  return total;
}

Matrix pauli_matrix(const PauliString& p) {
  Matrix m = Matrix::Identity(1, 1);
  for (int q : p) {
    switch (q) {
      case 0: m = kron(m, pauli::identity()); break;
      case 1: m = kron(m, pauli::x()); break;
      case 2: m = kron(m, pauli::y()); break;
      default: m = kron(m, pauli::z()); break;
    }
  }
  return m;
}

PauliString parse_label(const std::string& label, int n) {
  PauliString p(n, 0);
  if (label == "E/2") return p;
  std::size_t pos = 0;
  while (pos < label.size()) {
    int spin = -1;
    for (int s = 0; s < n; ++s) {
      const std::string letter = spin_letter(s, n);
      if (label.compare(pos, letter.size(), letter) == 0 &&
          pos + letter.size() < label.size()) {
        const char axis = label[pos + letter.size()];
        if (axis == 'x' || axis == 'y' || axis == 'z') {
          spin = s;
          break;
        }
      }
    }
    if (spin < 0 || p[spin] != 0) {
      throw ValidationError("unrecognised product-operator label '" + label +
                            "'");
    }
    const std::string letter = spin_letter(spin, n);
    const char axis = label[pos + letter.size()];
    p[spin] = axis == 'x' ? 1 : axis == 'y' ? 2 : 3;
    pos += letter.size() + 1;
  }
  return p;
}

}  // namespace

std::string spin_letter(int spin, int n) {
  if (n <= 2) return spin == 0 ? "I" : "S";
  return "I" + std::to_string(spin + 1);
}

double ProductOperatorExpansion::coefficient(const std::string& label) const {
  const auto it = terms.find(label);
  return it == terms.end() ? 0.0 : it->second;
}

std::vector<std::string> basis_labels(int n) {
  dimension_for(n);
  std::vector<std::string> out;
  const std::uint64_t count = std::uint64_t{1} << (2 * n);
  for (std::uint64_t code = 0; code < count; ++code) {
    out.push_back(label_of(decode(code, n)));
  }
  return out;
}

ProductOperatorExpansion pauli_expand(const Matrix& hermitian) {
  if (hermitian.rows() != hermitian.cols()) {
    throw ValidationError("product-operator expansion needs a square matrix");
  }
  const int n = qubits_for_dimension(hermitian.rows());
  if (!is_hermitian(hermitian, 1e-10 * std::max(1.0, max_abs(hermitian)))) {
    throw ValidationError("product-operator expansion needs a Hermitian matrix");
  }
  ProductOperatorExpansion out;
  out.qubits = n;
  // Each basis element is half a Pauli string, so c = Tr(P rho) / 2^(n-1).
  const double norm = static_cast<double>(hermitian.rows()) / 2.0;
  const std::uint64_t count = std::uint64_t{1} << (2 * n);
  for (std::uint64_t code = 0; code < count; ++code) {
    const PauliString p = decode(code, n);
    const double c = pauli_trace(p, hermitian).real() / norm;
    if (std::abs(c) >= 1e-14) out.terms[label_of(p)] = c;
  }
  return out;
}

Matrix basis_operator(const std::string& label, int n) {
  return 0.5 * pauli_matrix(parse_label(label, n));
}

Matrix pauli_assemble(const ProductOperatorExpansion& expansion) {
  const int n = expansion.qubits;
  const Eigen::Index dim = dimension_for(n);
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto& [label, c] : expansion.terms) {
    m += c * basis_operator(label, n);
  }
  return m;
}

}  // namespace spinforge
