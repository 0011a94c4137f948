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

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

namespace fqcp {

/// n-qubit Pauli operator i^phase * (tensor of sigma(x_j, z_j)) with
/// sigma(0,0)=I, sigma(1,0)=X, sigma(0,1)=Z, sigma(1,1)=Y. Up to 64 qubits.
struct PauliString {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    /// Power of i, in 0..3.
    std::uint8_t phase = 0;

    static PauliString identity() {
        return {};
    }
    static PauliString single(int qubit, char letter);
    /// Parses e.g. "XIZY" (qubit 0 first), optional leading sign "+", "-",
    /// "i", "-i".
    static PauliString parse(std::string_view text);

    int weight() const {
        return std::popcount(x | z);
    }
    bool is_identity() const {
        return (x | z) == 0;
    }
    char letter(int qubit) const;
    bool commutes_with(const PauliString &other) const {
        return ((std::popcount(x & other.z) + std::popcount(z & other.x)) & 1) == 0;
    }
    /// Operator product this * other.
    PauliString operator*(const PauliString &other) const;
    PauliString &operator*=(const PauliString &other) {
        return *this = *this * other;
    }
    /// Same Pauli letters, ignoring phase.
    bool same_letters(const PauliString &other) const {
        return x == other.x && z == other.z;
    }
    /// Keeps only the qubits in `mask`; the phase is kept as-is.
    PauliString restricted(std::uint64_t mask) const {
        return {x & mask, z & mask, phase};
    }
    /// Relabels qubits: bit k of the result comes from bit map[k] of this.
    PauliString mapped_from(const int *map, int count) const;

    std::string to_string(int num_qubits) const;
    bool operator==(const PauliString &other) const = default;
};

}  // namespace fqcp
