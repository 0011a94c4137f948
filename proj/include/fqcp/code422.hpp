// Copyright 2026 The fqcp Authors
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


#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "fqcp/pauli.hpp"

namespace fqcp::code422 {

using cplx = std::complex<double>;

/// Block-local Paulis on qubits 0..3 (physical qubits 1..4).
PauliString stabilizer_x();
PauliString stabilizer_z();
/// Canonical logical representatives: Z1 = Z1Z3, Z2 = Z1Z2, X1 = X1X2,
/// X2 = X1X3.
PauliString logical_z1();
PauliString logical_z2();
PauliString logical_x1();
PauliString logical_x2();

/// Logical 2-qubit vectors use index a + 2b for |ab> (a = logical qubit 1);
/// physical vectors use bit j for qubit j+1.
std::vector<cplx> encode_state(const std::vector<cplx> &logical);
/// Encoded basis vector for |ab>.
std::vector<cplx> encoded_basis(int a, int b);
/// The two physical basis indices (low, high) in the support of |ab>.
std::array<int, 2> encoded_support(int a, int b);

struct Syndrome {
    int s_x = 0;
    int s_z = 0;
    bool any() const {
        return s_x || s_z;
    }
    bool operator==(const Syndrome &other) const = default;
};

/// Anticommutation bits against S_X and S_Z. Support must lie in qubits 0..3.
Syndrome syndrome(const PauliString &p);

enum class Classification { benign, detectable, undetectable_logical, detectable_logical };

const char *to_string(Classification c);

/// Anticommutation bits with the canonical logicals.
struct LogicalPattern {
    bool z1 = false;
    bool z2 = false;
    bool x1 = false;
    bool x2 = false;
    bool any() const {
        return z1 || z2 || x1 || x2;
    }
    /// Z1, Z2, X1, X2 in bits 0..3.
    int bits() const {
        return int(z1) | int(z2) << 1 | int(x1) << 2 | int(x2) << 3;
    }
    bool operator==(const LogicalPattern &other) const = default;
};

LogicalPattern logical_pattern(const PauliString &p);

struct PauliClass {
    Classification kind;
    Syndrome syn;
    LogicalPattern pattern;
};

PauliClass classify_pauli(const PauliString &p);
/// Same, but only the pattern bits in `pattern_mask` (LogicalPattern::bits
/// layout) count as logical action. Used when the state is known to be an
/// eigenstate of some logicals.
PauliClass classify_pauli(const PauliString &p, int pattern_mask);

/// Conjugation by the deforming layer U = I (x) I (x) H (x) SH, P -> U P U^dagger.
/// Bit j of `qubit_mask` enables the layer on qubit j (default: qubits 3, 4).
PauliString clifford_deform(const PauliString &p, unsigned qubit_mask = 0b1100);

/// Counts pairs of weight-1 Z memory faults whose product is an undetectable
/// logical error, optionally mapped through the deformation first.
int count_double_z_logical(bool deformed, unsigned qubit_mask = 0b1100);

/// Relative phase (high-index component over low-index component) acquired
/// by an encoded basis state under D = prod_j exp(-i theta Z_j). With
/// `relabeled`, (a, b) names the basis after conjugation by X2X3, so that
/// new |ab> = old |(1-a)(1-b)>.
cplx dfs_phase(int a, int b, double theta, bool relabeled = false);

/// Old-basis label of a relabeled basis state.
std::array<int, 2> relabel_to_old(int a, int b);

}  // namespace fqcp::code422
