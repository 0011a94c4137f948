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


#include "fqcp/code422.hpp"

#include <cmath>

#include "fqcp/errors.hpp"

namespace fqcp::code422 {

PauliString stabilizer_x() {
    return PauliString::parse("XXXX");
}
PauliString stabilizer_z() {
    return PauliString::parse("ZZZZ");
}
PauliString logical_z1() {
    return PauliString::parse("ZIZI");
}
PauliString logical_z2() {
    return PauliString::parse("ZZII");
}
PauliString logical_x1() {
    return PauliString::parse("XXII");
}
PauliString logical_x2() {
    return PauliString::parse("XIXI");
}

std::array<int, 2> encoded_support(int a, int b) {
    if ((a != 0 && a != 1) || (b != 0 && b != 1)) {
        throw InvalidParams("logical labels must be 0 or 1");
    }
    // Physical bits (q1 q2 q3 q4) of the low word: q3 = a, q2 = b, q4 = a ^ b.
    int low = (b << 1) | (a << 2) | ((a ^ b) << 3);
    int high = low ^ 0xF;
    return low < high ? std::array<int, 2>{low, high} : std::array<int, 2>{high, low};
}

std::vector<cplx> encoded_basis(int a, int b) {
    std::vector<cplx> v(16, 0.0);
    auto s = encoded_support(a, b);
    v[s[0]] = M_SQRT1_2;
    v[s[1]] = M_SQRT1_2;
    return v;
}

std::vector<cplx> encode_state(const std::vector<cplx> &logical) {
    if (logical.size() != 4) {
        throw InvalidParams("logical state must have 4 amplitudes");
    }
    double norm = 0.0;
    for (const auto &c : logical) {
        norm += std::norm(c);
    }
    if (std::abs(norm - 1.0) > 1e-9) {
        throw NotNormalized("logical state has squared norm " + std::to_string(norm));
    }
    std::vector<cplx> out(16, 0.0);
    for (int k = 0; k < 4; k++) {
        auto s = encoded_support(k & 1, k >> 1);
        out[s[0]] += logical[k] * M_SQRT1_2;
        out[s[1]] += logical[k] * M_SQRT1_2;
    }
    return out;
}

namespace {

void require_block_local(const PauliString &p) {
    if (((p.x | p.z) & ~0xFULL) != 0) {
        throw InvalidParams("Pauli support must lie within one code block");
    }
}

}  // namespace

Syndrome syndrome(const PauliString &p) {
    require_block_local(p);
    return {p.commutes_with(stabilizer_x()) ? 0 : 1, p.commutes_with(stabilizer_z()) ? 0 : 1};
}

const char *to_string(Classification c) {
    switch (c) {
        case Classification::benign:
            return "benign";
        case Classification::detectable:
            return "detectable";
        case Classification::undetectable_logical:
            return "undetectable-logical";
        case Classification::detectable_logical:
            return "detectable-logical";
    }
    return "?";
}

LogicalPattern logical_pattern(const PauliString &p) {
    require_block_local(p);
    return {!p.commutes_with(logical_z1()), !p.commutes_with(logical_z2()),
            !p.commutes_with(logical_x1()), !p.commutes_with(logical_x2())};
}

PauliClass classify_pauli(const PauliString &p) {
    return classify_pauli(p, 0xF);
}

PauliClass classify_pauli(const PauliString &p, int pattern_mask) {
    PauliClass out;
    out.syn = syndrome(p);
    LogicalPattern full = logical_pattern(p);
    int bits = full.bits() & pattern_mask;
    out.pattern = {(bits & 1) != 0, (bits & 2) != 0, (bits & 4) != 0, (bits & 8) != 0};
    if (out.syn.any()) {
        out.kind = out.pattern.any() ? Classification::detectable_logical : Classification::detectable;
    } else {
        out.kind = out.pattern.any() ? Classification::undetectable_logical : Classification::benign;
    }
    return out;
}

namespace {

// H: X <-> Z, Y -> -Y.
PauliString conj_h(const PauliString &p, int q) {
    std::uint64_t bit = 1ULL << q;
    bool xb = p.x & bit;
    bool zb = p.z & bit;
    PauliString out = p;
    out.x = (p.x & ~bit) | (zb ? bit : 0);
    out.z = (p.z & ~bit) | (xb ? bit : 0);
    if (xb && zb) {
        out.phase = (out.phase + 2) % 4;
    }
    return out;
}

// S: X -> Y, Y -> -X, Z -> Z.
PauliString conj_s(const PauliString &p, int q) {
    std::uint64_t bit = 1ULL << q;
    PauliString out = p;
    if (p.x & bit) {
        if (p.z & bit) {
            out.phase = (out.phase + 2) % 4;
        }
        out.z ^= bit;
    }
    return out;
}

}  // namespace

PauliString clifford_deform(const PauliString &p, unsigned qubit_mask) {
    require_block_local(p);
    PauliString out = p;
    if (qubit_mask & 0b0100) {
        out = conj_h(out, 2);
    }
    if (qubit_mask & 0b1000) {
        // U = S H acts as H first, then S.
        out = conj_s(conj_h(out, 3), 3);
    }
    return out;
}

int count_double_z_logical(bool deformed, unsigned qubit_mask) {
    int count = 0;
    for (int i = 0; i < 4; i++) {
        for (int j = i + 1; j < 4; j++) {
            PauliString zi = PauliString::single(i, 'Z');
            PauliString zj = PauliString::single(j, 'Z');
            if (deformed) {
                zi = clifford_deform(zi, qubit_mask);
                zj = clifford_deform(zj, qubit_mask);
            }
            if (classify_pauli(zi * zj).kind == Classification::undetectable_logical) {
                count++;
            }
        }
    }
    return count;
}

std::array<int, 2> relabel_to_old(int a, int b) {
    return {1 - a, 1 - b};
}

cplx dfs_phase(int a, int b, double theta, bool relabeled) {
    if (relabeled) {
        auto old = relabel_to_old(a, b);
        a = old[0];
        b = old[1];
    }
    std::vector<cplx> v = encoded_basis(a, b);
    for (int idx = 0; idx < 16; idx++) {
        double zsum = 0.0;
        for (int q = 0; q < 4; q++) {
            zsum += ((idx >> q) & 1) ? -1.0 : 1.0;
        }
        v[idx] *= std::exp(cplx(0.0, -theta * zsum));
    }
    auto s = encoded_support(a, b);
    return v[s[1]] / v[s[0]];
}

}  // namespace fqcp::code422
