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

#ifndef SPINFORGE_PRODUCT_OPERATORS_HPP
#define SPINFORGE_PRODUCT_OPERATORS_HPP

#include <map>
#include <string>

#include "spinforge/linalg.hpp"

namespace spinforge {

/// Real coefficients over the product-operator basis. Each basis element is
/// 2^(m-1) times a product of m single-spin operators, or E/2 for m = 0, so
/// that "IzSz" stands for 2IzSz and "E/2" for half the identity.
///
/// Spin letters are I and S for one or two spins, I1, I2, ... otherwise.
struct ProductOperatorExpansion {
  int qubits = 0;
  std::map<std::string, double> terms;

  double coefficient(const std::string& label) const;
};

ProductOperatorExpansion pauli_expand(const Matrix& hermitian);
Matrix pauli_assemble(const ProductOperatorExpansion& expansion);

/// Matrix of one basis element, e.g. basis_operator("IzSz", 2) == 2 Iz Sz.
Matrix basis_operator(const std::string& label, int n);

/// Letter used for `spin` in labels.
std::string spin_letter(int spin, int n);

/// Every label of the n-spin basis, identity first.
std::vector<std::string> basis_labels(int n);

}  // namespace spinforge

#endif  // SPINFORGE_PRODUCT_OPERATORS_HPP
