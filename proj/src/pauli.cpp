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

#include "fqcp/pauli.hpp"

#include "fqcp/errors.hpp"

namespace fqcp {

namespace {

// Exponent of i in sigma(x1,z1) * sigma(x2,z2) = i^g sigma(x1^x2, z1^z2).
int product_phase(int x1, int z1, int x2, int z2) {
    if (x1 == 0 && z1 == 0) {
        return 0;
    }
    if (x1 == 1 && z1 == 1) {
        return z2 - x2;
    }
    if (x1 == 1) {
        return z2 * (2 * x2 - 1);
    }
    return x2 * (1 - 2 * z2);
}

}  // namespace

PauliString PauliString::single(int qubit, char letter) {
    PauliString p;
    std::uint64_t bit = 1ULL << qubit;
    switch (letter) {
        case 'I':
            break;
        case 'X':
            p.x = bit;
            break;
        case 'Y':
            p.x = bit;
            p.z = bit;
            break;
        case 'Z':
            p.z = bit;
            break;
        default:
            throw InvalidParams(std::string("unknown Pauli letter '") + letter + "'");
    }
    return p;
}

PauliString PauliString::parse(std::string_view text) {
    PauliString p;
    if (text.rfind("-i", 0) == 0) {
        p.phase = 3;
        text.remove_prefix(2);
    } else if (text.rfind("+i", 0) == 0 || text.rfind("i", 0) == 0) {
        p.phase = 1;
        text.remove_prefix(text[0] == '+' ? 2 : 1);
    } else if (text.rfind("-", 0) == 0) {
        p.phase = 2;
        text.remove_prefix(1);
    } else if (text.rfind("+", 0) == 0) {
        text.remove_prefix(1);
    }
    if (text.size() > 64) {
        throw InvalidParams("Pauli strings are limited to 64 qubits");
    }
    for (std::size_t k = 0; k < text.size(); k++) {
        PauliString s = single(static_cast<int>(k), text[k]);
        p.x |= s.x;
        p.z |= s.z;
    }
    return p;
}

char PauliString::letter(int qubit) const {
    int xb = (x >> qubit) & 1;
    int zb = (z >> qubit) & 1;
    return "IZXY"[xb * 2 + zb];
}

PauliString PauliString::operator*(const PauliString &other) const {
    int g = phase + other.phase;
    std::uint64_t support = (x | z) & (other.x | other.z);
    while (support) {
        int q = std::countr_zero(support);
        support &= support - 1;
        g += product_phase((x >> q) & 1, (z >> q) & 1, (other.x >> q) & 1, (other.z >> q) & 1);
    }
    PauliString out;
    out.x = x ^ other.x;
    out.z = z ^ other.z;
    out.phase = static_cast<std::uint8_t>(((g % 4) + 4) % 4);
    return out;
}

PauliString PauliString::mapped_from(const int *map, int count) const {
    PauliString out;
    out.phase = phase;
    for (int k = 0; k < count; k++) {
        out.x |= ((x >> map[k]) & 1ULL) << k;
        out.z |= ((z >> map[k]) & 1ULL) << k;
    }
    return out;
}

std::string PauliString::to_string(int num_qubits) const {
    static const char *signs[] = {"+", "+i", "-", "-i"};
    std::string s = signs[phase];
    for (int q = 0; q < num_qubits; q++) {
        s += letter(q);
    }
    return s;
}

}  // namespace fqcp
