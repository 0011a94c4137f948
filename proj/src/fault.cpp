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


#include "fqcp/fault.hpp"

#include <cmath>

#include "fqcp/errors.hpp"

namespace fqcp::code422 {

namespace {

PauliString letter(int q, char c) {
    return PauliString::single(q, c);
}

PauliString with_phase(PauliString p, int phase) {
    p.phase = static_cast<std::uint8_t>(((p.phase + phase) % 4 + 4) % 4);
    return p;
}

// Image of P under a Clifford given the images of X_q and Z_q on its
// support qubits. Uses sigma(1,1) = i X Z.
PauliString conjugate_by_images(const PauliString &p, const std::vector<int> &qubits,
                                const std::vector<PauliString> &img_x, const std::vector<PauliString> &img_z) {
    std::uint64_t support = 0;
    for (int q : qubits) {
        support |= 1ULL << q;
    }
    PauliString rest{p.x & ~support, p.z & ~support, p.phase};
    PauliString acc;
    int extra = 0;
    for (std::size_t k = 0; k < qubits.size(); k++) {
        int q = qubits[k];
        bool xb = (p.x >> q) & 1;
        bool zb = (p.z >> q) & 1;
        if (xb) {
            acc *= img_x[k];
        }
        if (zb) {
            acc *= img_z[k];
        }
        if (xb && zb) {
            extra += 1;
        }
    }
    return with_phase(rest * acc, extra);
}

PauliString conj_1q(const PauliString &p, int q, Op op) {
    PauliString ix, iz;
    switch (op) {
        case Op::h:
            ix = letter(q, 'Z');
            iz = letter(q, 'X');
            break;
        case Op::s:
            ix = letter(q, 'Y');
            iz = letter(q, 'Z');
            break;
        case Op::sdg:
            ix = with_phase(letter(q, 'Y'), 2);
            iz = letter(q, 'Z');
            break;
        case Op::x:
        case Op::dd:
            ix = letter(q, 'X');
            iz = with_phase(letter(q, 'Z'), 2);
            break;
        case Op::z:
            ix = with_phase(letter(q, 'X'), 2);
            iz = letter(q, 'Z');
            break;
        default:
            return p;
    }
    return conjugate_by_images(p, {q}, {ix}, {iz});
}

}  // namespace

PauliString conjugate(const PauliString &p, const GadgetInstr &ins) {
    if (!ins.is_clifford()) {
        throw NotClifford(std::string(to_string(ins.op)) + " with angle " + std::to_string(ins.angle) +
                          " is not Clifford");
    }
    int a = ins.q0;
    int b = ins.q1;
    switch (ins.op) {
        case Op::prep:
            return {p.x & ~(1ULL << a), p.z & ~(1ULL << a), p.phase};
        case Op::measure:
        case Op::idle:
            return p;
        case Op::cx:
            return conjugate_by_images(p, {a, b}, {letter(a, 'X') * letter(b, 'X'), letter(b, 'X')},
                                       {letter(a, 'Z'), letter(a, 'Z') * letter(b, 'Z')});
        case Op::cz:
            return conjugate_by_images(p, {a, b}, {letter(a, 'X') * letter(b, 'Z'), letter(a, 'Z') * letter(b, 'X')},
                                       {letter(a, 'Z'), letter(b, 'Z')});
        case Op::xx:
        case Op::zz: {
            char c = ins.op == Op::xx ? 'X' : 'Z';
            PauliString gen = letter(a, c) * letter(b, c);
            if (p.commutes_with(gen)) {
                return p;
            }
            // U P U^dagger = (cos(phi) - i sin(phi) G) P for anticommuting P.
            long k = std::lround(ins.angle / (M_PI / 2.0));
            int km = static_cast<int>(((k % 4) + 4) % 4);
            switch (km) {
                case 0:
                    return p;
                case 2:
                    return with_phase(p, 2);
                case 1:
                    return with_phase(gen * p, 3);
                default:
                    return with_phase(gen * p, 1);
            }
        }
        default:
            return conj_1q(p, a, ins.op);
    }
}

namespace {

bool runs_in_ideal_branch(const GadgetInstr &ins) {
    return ins.cond_bit < 0 || ins.cond_value == 0;
}

int parity(const std::vector<int> &flips, const std::vector<int> &bits) {
    int s = 0;
    for (int b : bits) {
        s ^= flips[b];
    }
    return s;
}

}  // namespace

FaultOutcome propagate_pauli(const Gadget &g, const FaultLocation &fault) {
    if (!g.is_clifford()) {
        throw NotClifford("gadget " + g.name + " has non-Clifford instructions");
    }
    FaultOutcome out;
    out.location = fault;
    out.flips.assign(g.num_bits, 0);
    PauliString p = fault.flip_bit >= 0 ? PauliString{} : fault.pauli;
    if (fault.flip_bit >= 0) {
        out.flips.at(fault.flip_bit) ^= 1;
    }
    for (std::size_t k = fault.instruction + 1; k < g.ops.size(); k++) {
        const GadgetInstr &ins = g.ops[k];
        if (!runs_in_ideal_branch(ins)) {
            continue;
        }
        if (ins.op == Op::measure && ((p.x >> ins.q0) & 1)) {
            out.flips[ins.bit] ^= 1;
        }
        p = conjugate(p, ins);
    }
    for (std::size_t b = 0; b < g.blocks.size(); b++) {
        BlockOutcome bo;
        bo.residual = p.mapped_from(g.blocks[b].data(), 4);
        bo.raw = classify_pauli(bo.residual);
        int mask = b < g.output_pattern_mask.size() ? g.output_pattern_mask[b] : 0xF;
        bo.effective = classify_pauli(bo.residual, mask);
        for (const auto &d : g.detectors) {
            if (d.block == static_cast<int>(b) && parity(out.flips, d.bits)) {
                bo.flagged = true;
            }
        }
        for (const auto &o : g.observables) {
            if (o.block == static_cast<int>(b) && parity(out.flips, o.bits)) {
                bo.observable_flipped = true;
            }
        }
        bo.violation = !bo.flagged &&
                       (bo.effective.kind == Classification::undetectable_logical || bo.observable_flipped);
        out.blocks.push_back(bo);
    }
    bool any_detector = false;
    for (const auto &d : g.detectors) {
        any_detector = any_detector || parity(out.flips, d.bits);
    }
    bool logical = false;
    out.detected = any_detector;
    for (const auto &bo : out.blocks) {
        out.violation = out.violation || bo.violation;
        out.detected = out.detected || bo.effective.syn.any();
        logical = logical || bo.effective.pattern.any() || bo.observable_flipped;
    }
    if (out.violation) {
        out.classification = Classification::undetectable_logical;
    } else if (out.detected) {
        out.classification = logical ? Classification::detectable_logical : Classification::detectable;
    } else {
        out.classification = Classification::benign;
    }
    return out;
}

std::vector<FaultLocation> enumerate_faults(const Gadget &g, const FtOptions &options) {
    std::vector<FaultLocation> out;
    static const char kLetters[3] = {'X', 'Y', 'Z'};
    auto singles = [&](int instruction, int q, const std::string &kind) {
        for (char c : kLetters) {
            out.push_back({instruction, letter(q, c), -1, kind});
        }
    };
    if (options.entry_faults) {
        for (const auto &b : g.blocks) {
            for (int q : b) {
                singles(-1, q, "entry");
            }
        }
    }
    static const char kAll[4] = {'I', 'X', 'Y', 'Z'};
    for (std::size_t k = 0; k < g.ops.size(); k++) {
        const GadgetInstr &ins = g.ops[k];
        int loc = static_cast<int>(k);
        if (!runs_in_ideal_branch(ins)) {
            continue;
        }
        switch (ins.op) {
            case Op::prep:
                out.push_back({loc, letter(ins.q0, 'X'), -1, "prep"});
                break;
            case Op::measure:
                out.push_back({loc, PauliString{}, ins.bit, "measure_flip"});
                if (options.measurement_crosstalk) {
                    for (int q = 0; q < g.num_qubits; q++) {
                        if (q != ins.q0) {
                            singles(loc, q, "crosstalk");
                        }
                    }
                }
                break;
            default:
                if (ins.two_qubit()) {
                    for (int i = 0; i < 4; i++) {
                        for (int j = 0; j < 4; j++) {
                            if (i == 0 && j == 0) {
                                continue;
                            }
                            out.push_back({loc, letter(ins.q0, kAll[i]) * letter(ins.q1, kAll[j]), -1, "gate"});
                        }
                    }
                } else {
                    singles(loc, ins.q0, "gate");
                }
        }
    }
    return out;
}

FtReport ft_check(const Gadget &g, const FtOptions &options) {
    if (!g.is_clifford()) {
        throw NotClifford("gadget " + g.name + " has non-Clifford instructions");
    }
    FtReport report;
    report.gadget = g.name;
    for (Classification c : {Classification::benign, Classification::detectable, Classification::undetectable_logical,
                             Classification::detectable_logical}) {
        report.counts[c] = 0;
    }
    for (const auto &f : enumerate_faults(g, options)) {
        FaultOutcome o = propagate_pauli(g, f);
        report.total++;
        report.counts[o.classification]++;
        if (o.violation) {
            report.violations++;
            report.witnesses.push_back(o);
        }
    }
    report.fault_tolerant = report.violations == 0;
    return report;
}

nlohmann::json FaultOutcome::to_json(const Gadget &g) const {
    nlohmann::json j;
    j["instruction"] = location.instruction;
    j["kind"] = location.kind;
    if (location.flip_bit >= 0) {
        j["flip_bit"] = location.flip_bit;
    } else {
        j["pauli"] = location.pauli.to_string(g.num_qubits);
    }
    j["flips"] = flips;
    j["classification"] = to_string(classification);
    j["detected"] = detected;
    j["violation"] = violation;
    nlohmann::json blocks_j = nlohmann::json::array();
    for (const auto &b : blocks) {
        blocks_j.push_back({{"residual", b.residual.to_string(4)},
                            {"class", to_string(b.raw.kind)},
                            {"effective_class", to_string(b.effective.kind)},
                            {"flagged", b.flagged},
                            {"observable_flipped", b.observable_flipped}});
    }
    j["blocks"] = blocks_j;
    return j;
}

nlohmann::json FtReport::to_json(const Gadget &g) const {
    nlohmann::json j;
    j["gadget"] = gadget;
    j["total_faults"] = total;
    nlohmann::json c;
    for (const auto &[k, v] : counts) {
        c[to_string(k)] = v;
    }
    j["counts"] = c;
    j["unflagged_undetectable_logical"] = violations;
    j["fault_tolerant"] = fault_tolerant;
    nlohmann::json w = nlohmann::json::array();
    for (const auto &o : witnesses) {
        w.push_back(o.to_json(g));
    }
    j["witnesses"] = w;
    return j;
}

}  // namespace fqcp::code422
