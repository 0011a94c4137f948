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


#include "fqcp/gadget.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fqcp/errors.hpp"
#include "fqcp/format.hpp"

namespace fqcp::code422 {

const char *to_string(Op op) {
    switch (op) {
        case Op::prep:
            return "prep";
        case Op::h:
            return "h";
        case Op::s:
            return "s";
        case Op::sdg:
            return "sdg";
        case Op::x:
            return "x";
        case Op::z:
            return "z";
        case Op::cx:
            return "cx";
        case Op::cz:
            return "cz";
        case Op::xx:
            return "xx";
        case Op::zz:
            return "zz";
        case Op::measure:
            return "measure";
        case Op::idle:
            return "idle";
        case Op::dd:
            return "dd";
    }
    return "?";
}

bool GadgetInstr::is_clifford() const {
    if (op != Op::xx && op != Op::zz) {
        return true;
    }
    double r = angle / (M_PI / 2.0);
    return std::abs(r - std::round(r)) < 1e-9;
}

const char *to_string(GadgetKind kind) {
    switch (kind) {
        case GadgetKind::stab_meas:
            return "stab_meas";
        case GadgetKind::reset_00:
            return "reset_00";
        case GadgetKind::meas_z1:
            return "meas_Z1";
        case GadgetKind::meas_z2:
            return "meas_Z2";
        case GadgetKind::crx_intra:
            return "crx_intra";
        case GadgetKind::crx_inter:
            return "crx_inter";
    }
    return "?";
}

GadgetKind parse_gadget_kind(const std::string &name) {
    for (GadgetKind k : {GadgetKind::stab_meas, GadgetKind::reset_00, GadgetKind::meas_z1,
                         GadgetKind::meas_z2, GadgetKind::crx_intra, GadgetKind::crx_inter}) {
        if (name == to_string(k)) {
            return k;
        }
    }
    throw UnknownKind("unknown gadget kind '" + name + "'");
}

bool Gadget::is_clifford() const {
    return std::all_of(ops.begin(), ops.end(), [](const GadgetInstr &i) { return i.is_clifford(); });
}

std::set<int> Gadget::condition_bits() const {
    std::set<int> out;
    for (const auto &i : ops) {
        if (i.cond_bit >= 0) {
            out.insert(i.cond_bit);
        }
    }
    return out;
}

void Gadget::validate() const {
    auto check_qubit = [&](int q) {
        if (q < 0 || q >= num_qubits) {
            throw InvalidParams(name + ": qubit index " + std::to_string(q) + " out of range");
        }
    };
    std::vector<bool> defined(num_bits, false);
    for (const auto &i : ops) {
        check_qubit(i.q0);
        if (i.two_qubit()) {
            check_qubit(i.q1);
            if (i.q0 == i.q1) {
                throw InvalidParams(name + ": two-qubit op on a single qubit");
            }
        }
        if (i.cond_bit >= 0) {
            if (i.cond_bit >= num_bits || !defined[i.cond_bit]) {
                throw InvalidParams(name + ": condition on undefined bit " + std::to_string(i.cond_bit));
            }
        }
        if (i.op == Op::measure) {
            if (i.bit < 0 || i.bit >= num_bits) {
                throw InvalidParams(name + ": measurement bit out of range");
            }
            if (defined[i.bit]) {
                throw InvalidParams(name + ": measurement bit " + std::to_string(i.bit) + " reused");
            }
            defined[i.bit] = true;
        }
    }
    for (const auto &b : blocks) {
        for (int q : b) {
            check_qubit(q);
        }
    }
}

std::uint64_t Gadget::block_mask(int block) const {
    std::uint64_t m = 0;
    for (int q : blocks.at(block)) {
        m |= 1ULL << q;
    }
    return m;
}

std::string Gadget::netlist() const {
    std::ostringstream os;
    os << "# gadget " << name << "\n";
    os << "qubits " << num_qubits << "\n";
    os << "bits " << num_bits << "\n";
    for (std::size_t b = 0; b < blocks.size(); b++) {
        os << "block " << b;
        for (int q : blocks[b]) {
            os << " " << q;
        }
        os << "\n";
    }
    for (const auto &i : ops) {
        os << to_string(i.op) << " " << i.q0;
        if (i.two_qubit()) {
            os << " " << i.q1;
        }
        if (i.op == Op::xx || i.op == Op::zz) {
            os << " angle=" << fmt_double(i.angle);
        }
        if (i.op == Op::measure) {
            os << " -> c" << i.bit;
        }
        if (i.op == Op::dd) {
            os << " sign=" << (i.dd_sign > 0 ? "+" : "-");
        }
        if (i.cond_bit >= 0) {
            os << " if c" << i.cond_bit << "==" << i.cond_value;
        }
        os << "\n";
    }
    return os.str();
}

nlohmann::json Gadget::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["num_qubits"] = num_qubits;
    j["num_bits"] = num_bits;
    j["blocks"] = blocks;
    j["ancillas"] = ancillas;
    j["clifford"] = is_clifford();
    nlohmann::json list = nlohmann::json::array();
    for (const auto &i : ops) {
        nlohmann::json o;
        o["op"] = to_string(i.op);
        o["qubits"] = i.two_qubit() ? std::vector<int>{i.q0, i.q1} : std::vector<int>{i.q0};
        if (i.op == Op::xx || i.op == Op::zz) {
            o["angle"] = i.angle;
        }
        if (i.op == Op::measure) {
            o["bit"] = i.bit;
        }
        if (i.cond_bit >= 0) {
            o["if"] = {{"bit", i.cond_bit}, {"value", i.cond_value}};
        }
        list.push_back(o);
    }
    j["ops"] = list;
    auto checks = [](const std::vector<BitCheck> &cs) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto &c : cs) {
            a.push_back({{"label", c.label}, {"block", c.block}, {"bits", c.bits}, {"inverted", c.inverted}});
        }
        return a;
    };
    j["detectors"] = checks(detectors);
    j["observables"] = checks(observables);
    j["slice_boundaries"] = slice_boundaries;
    return j;
}

namespace {

struct Builder {
    Gadget g;

    GadgetInstr &add(Op op, int q0, int q1 = -1, double angle = 0.0) {
        GadgetInstr i;
        i.op = op;
        i.q0 = q0;
        i.q1 = q1;
        i.angle = angle;
        g.ops.push_back(i);
        return g.ops.back();
    }
    int measure(int q) {
        GadgetInstr &i = add(Op::measure, q);
        i.bit = g.num_bits++;
        return i.bit;
    }
};

constexpr int kData[4] = {0, 1, 2, 3};

// Measures S_Z into ancilla a5 and S_X into ancilla a6, flag-style
// interleaving. Returns the (S_Z, S_X) bits.
std::array<int, 2> append_stab_meas(Builder &b, int a5, int a6) {
    b.add(Op::prep, a5);
    b.add(Op::prep, a6);
    b.add(Op::h, a6);
    b.add(Op::cx, a6, kData[0]);
    b.add(Op::cx, kData[0], a5);
    b.add(Op::cx, kData[1], a5);
    b.add(Op::cx, a6, kData[1]);
    b.add(Op::cx, a6, kData[2]);
    b.add(Op::cx, kData[2], a5);
    b.add(Op::cx, kData[3], a5);
    b.add(Op::cx, a6, kData[3]);
    b.add(Op::h, a6);
    int sz = b.measure(a5);
    int sx = b.measure(a6);
    b.g.detectors.push_back({{sz}, 0, "S_Z", false});
    b.g.detectors.push_back({{sx}, 0, "S_X", false});
    return {sz, sx};
}

void append_reset_attempt(Builder &b, int cond_bit) {
    std::size_t first = b.g.ops.size();
    for (int q = 0; q < 5; q++) {
        b.add(Op::prep, q);
    }
    b.add(Op::h, 1);
    b.add(Op::cx, 1, 2);
    b.add(Op::cx, 1, 0);
    b.add(Op::cx, 2, 3);
    b.add(Op::cx, 3, 4);
    b.add(Op::cx, 0, 4);
    int flag = b.measure(4);
    if (cond_bit >= 0) {
        for (std::size_t k = first; k < b.g.ops.size(); k++) {
            b.g.ops[k].cond_bit = cond_bit;
            b.g.ops[k].cond_value = 1;
        }
    }
    b.g.detectors.push_back({{flag}, 0, "reset_flag_" + std::to_string(flag + 1), false});
}

Builder single_block(const std::string &name, int num_qubits) {
    Builder b;
    b.g.name = name;
    b.g.num_qubits = num_qubits;
    b.g.blocks = {{0, 1, 2, 3}};
    for (int q = 4; q < num_qubits; q++) {
        b.g.ancillas.push_back(q);
    }
    b.g.output_pattern_mask = {0xF};
    return b;
}

double require_theta(const GadgetSpec &spec) {
    if (!spec.theta) {
        throw InvalidParams(std::string(to_string(spec.kind)) + " requires theta");
    }
    if (!std::isfinite(*spec.theta)) {
        throw InvalidParams("theta must be finite");
    }
    return *spec.theta;
}

}  // namespace

Gadget build_gadget(const GadgetSpec &spec) {
    switch (spec.kind) {
        case GadgetKind::stab_meas: {
            Builder b = single_block("stab_meas", 6);
            append_stab_meas(b, 4, 5);
            b.g.validate();
            return b.g;
        }
        case GadgetKind::reset_00: {
            Builder b = single_block("reset_00", 5);
            append_reset_attempt(b, -1);
            append_reset_attempt(b, 0);
            // The output is the |00> logical state: only flips of Z1, Z2 matter.
            b.g.output_pattern_mask = {0b0011};
            b.g.validate();
            return b.g;
        }
        case GadgetKind::meas_z1:
        case GadgetKind::meas_z2: {
            bool first = spec.kind == GadgetKind::meas_z1;
            Builder b = single_block(first ? "meas_Z1" : "meas_Z2", 6);
            // Z1 = Z1 Z3 (partner Z2 Z4); Z2 = Z1 Z2 (partner Z3 Z4).
            std::array<int, 4> order = first ? std::array<int, 4>{0, 2, 1, 3} : std::array<int, 4>{0, 1, 2, 3};
            b.add(Op::prep, 4);
            b.add(Op::cx, order[0], 4);
            b.add(Op::cx, order[1], 4);
            int m1 = b.measure(4);
            b.add(Op::prep, 5);
            b.add(Op::cx, order[2], 5);
            b.add(Op::cx, order[3], 5);
            int m2 = b.measure(5);
            b.g.detectors.push_back({{m1, m2}, 0, "readout_parity", false});
            b.g.observables.push_back({{m1}, 0, first ? "Z1" : "Z2", false});
            append_stab_meas(b, 4, 5);
            // The measured logical is collapsed: flips of its X partner are moot.
            b.g.output_pattern_mask = {first ? 0b1011 : 0b0111};
            b.g.validate();
            return b.g;
        }
        case GadgetKind::crx_intra: {
            double theta = require_theta(spec);
            if (spec.control != 1 && spec.control != 2) {
                throw InvalidParams("crx_intra control must be 1 or 2");
            }
            Builder b = single_block("crx_intra_c" + std::to_string(spec.control), 4);
            if (spec.control == 2) {
                b.add(Op::s, 2);
                b.add(Op::s, 3);
                b.add(Op::xx, 0, 1, theta / 2);
                b.add(Op::xx, 2, 3, theta / 2);
                b.add(Op::sdg, 2);
                b.add(Op::sdg, 3);
            } else {
                b.add(Op::xx, 0, 2, theta / 2);
                b.add(Op::s, 1);
                b.add(Op::s, 3);
                b.add(Op::xx, 1, 3, theta / 2);
                b.add(Op::sdg, 1);
                b.add(Op::sdg, 3);
            }
            b.g.validate();
            return b.g;
        }
        case GadgetKind::crx_inter: {
            double theta = require_theta(spec);
            Builder b;
            b.g.name = "crx_inter";
            b.g.num_qubits = 8;
            b.g.blocks = {{0, 1, 2, 3}, {4, 5, 6, 7}};
            b.g.output_pattern_mask = {0xF, 0xF};
            auto cz_layer = [&] {
                b.add(Op::cz, 0, 4);
                b.add(Op::cz, 1, 6);
                b.add(Op::cz, 2, 5);
            };
            b.add(Op::xx, 0, 1, theta / 2);
            cz_layer();
            b.add(Op::xx, 0, 1, -theta / 2);
            b.add(Op::xx, 4, 5, -theta / 2);
            cz_layer();
            b.add(Op::xx, 4, 5, theta / 2);
            b.g.validate();
            return b.g;
        }
    }
    throw UnknownKind("unknown gadget kind");
}

Gadget build_gadget(GadgetKind kind, std::optional<double> theta, int control) {
    GadgetSpec spec;
    spec.kind = kind;
    spec.theta = theta;
    spec.control = control;
    return build_gadget(spec);
}

Gadget memory_slot(int slots) {
    if (slots < 1) {
        throw InvalidParams("memory_slot needs at least one slot");
    }
    Builder b = single_block("memory", 4);
    for (int s = 0; s < slots; s++) {
        for (int q = 0; q < 4; q++) {
            b.add(Op::idle, q);
        }
    }
    return b.g;
}

Gadget identity_gadget(int num_qubits) {
    Gadget g;
    g.name = "identity";
    g.num_qubits = num_qubits;
    if (num_qubits >= 4) {
        g.blocks = {{0, 1, 2, 3}};
        g.output_pattern_mask = {0xF};
    }
    return g;
}

int Gadget::two_qubit_count() const {
    int n = 0;
    for (const auto &ins : ops) {
        n += ins.two_qubit();
    }
    return n;
}

Gadget place(const Gadget &g, const std::vector<int> &qubit_map, int num_qubits) {
    if (static_cast<int>(qubit_map.size()) != g.num_qubits) {
        throw InvalidParams("qubit map has " + std::to_string(qubit_map.size()) + " entries, gadget has " +
                            std::to_string(g.num_qubits) + " qubits");
    }
    std::set<int> seen;
    for (int q : qubit_map) {
        if (q < 0 || q >= num_qubits || !seen.insert(q).second) {
            throw InvalidParams("qubit map must be injective into 0.." + std::to_string(num_qubits - 1));
        }
    }
    auto m = [&](int q) { return q < 0 ? q : qubit_map[q]; };
    Gadget out = g;
    out.num_qubits = num_qubits;
    for (auto &ins : out.ops) {
        ins.q0 = m(ins.q0);
        ins.q1 = m(ins.q1);
    }
    for (auto &blk : out.blocks) {
        for (auto &q : blk) {
            q = m(q);
        }
    }
    for (auto &q : out.ancillas) {
        q = m(q);
    }
    return out;
}

Gadget concat(const std::vector<Gadget> &parts) {
    if (parts.empty()) {
        throw InvalidParams("concat needs at least one gadget");
    }
    Gadget out = parts.front();
    out.name = parts.front().name;
    for (std::size_t k = 1; k < parts.size(); k++) {
        const Gadget &p = parts[k];
        if (p.num_qubits > out.num_qubits || p.blocks.size() > out.blocks.size()) {
            throw InvalidParams("concat: gadget '" + p.name + "' does not fit the first layout");
        }
        int op_offset = static_cast<int>(out.ops.size());
        int bit_offset = out.num_bits;
        out.slice_boundaries.push_back(op_offset);
        for (GadgetInstr i : p.ops) {
            if (i.bit >= 0) {
                i.bit += bit_offset;
            }
            if (i.cond_bit >= 0) {
                i.cond_bit += bit_offset;
            }
            out.ops.push_back(i);
        }
        for (BitCheck c : p.detectors) {
            for (int &b : c.bits) {
                b += bit_offset;
            }
            out.detectors.push_back(c);
        }
        for (BitCheck c : p.observables) {
            for (int &b : c.bits) {
                b += bit_offset;
            }
            out.observables.push_back(c);
        }
        for (int sb : p.slice_boundaries) {
            out.slice_boundaries.push_back(sb + op_offset);
        }
        out.num_bits += p.num_bits;
        for (std::size_t b = 0; b < p.output_pattern_mask.size(); b++) {
            out.output_pattern_mask[b] = p.output_pattern_mask[b];
        }
        out.name += "+" + p.name;
    }
    out.validate();
    return out;
}

Gadget clifford_deform(const Gadget &g, unsigned qubit_mask) {
    Gadget out = g;
    out.name = "deformed(" + g.name + ")";
    out.ops.clear();
    out.slice_boundaries.clear();
    auto deform_slot = [&](int q) -> int {
        for (const auto &b : g.blocks) {
            for (int j = 2; j < 4; j++) {
                if (b[j] == q && (qubit_mask >> j) & 1) {
                    return j;
                }
            }
        }
        return -1;
    };
    auto push = [&](Op op, int q) {
        GadgetInstr i;
        i.op = op;
        i.q0 = q;
        out.ops.push_back(i);
    };
    std::vector<int> old_to_new(g.ops.size() + 1, 0);
    for (std::size_t k = 0; k < g.ops.size(); k++) {
        old_to_new[k] = static_cast<int>(out.ops.size());
        const GadgetInstr &i = g.ops[k];
        int slot = i.op == Op::idle ? deform_slot(i.q0) : -1;
        if (slot == 2) {
            push(Op::h, i.q0);
            out.ops.push_back(i);
            push(Op::h, i.q0);
        } else if (slot == 3) {
            // U^dagger = H S^dagger (S^dagger first); U = S H (H first).
            push(Op::sdg, i.q0);
            push(Op::h, i.q0);
            out.ops.push_back(i);
            push(Op::h, i.q0);
            push(Op::s, i.q0);
        } else {
            out.ops.push_back(i);
        }
    }
    old_to_new[g.ops.size()] = static_cast<int>(out.ops.size());
    for (int sb : g.slice_boundaries) {
        out.slice_boundaries.push_back(old_to_new[sb]);
    }
    return out;
}

Gadget dfs_transform(const Gadget &g) {
    Gadget out = g;
    out.name = "dfs(" + g.name + ")";
    std::vector<GadgetInstr> frame;
    for (const auto &b : g.blocks) {
        for (int j : {1, 2}) {
            GadgetInstr i;
            i.op = Op::x;
            i.q0 = b[j];
            frame.push_back(i);
        }
    }
    out.ops = frame;
    out.ops.insert(out.ops.end(), g.ops.begin(), g.ops.end());
    out.ops.insert(out.ops.end(), frame.begin(), frame.end());
    int shift = static_cast<int>(frame.size());
    for (int &sb : out.slice_boundaries) {
        sb += shift;
    }
    for (auto &o : out.observables) {
        o.inverted = !o.inverted;
    }
    return out;
}

Gadget insert_dd(const Gadget &g, const std::vector<int> &boundaries) {
    int n = static_cast<int>(g.ops.size());
    for (int b : boundaries) {
        if (b < 0 || b > n) {
            throw InvalidParams("DD boundary " + std::to_string(b) + " outside 0.." + std::to_string(n));
        }
    }
    std::vector<int> sorted = boundaries;
    std::sort(sorted.begin(), sorted.end());
    Gadget out = g;
    out.name = "dd(" + g.name + ")";
    out.ops.clear();
    std::vector<int> old_to_new(g.ops.size() + 1, 0);
    int sign = 1;
    std::size_t next = 0;
    for (int k = 0; k <= n; k++) {
        old_to_new[k] = static_cast<int>(out.ops.size());
        while (next < sorted.size() && sorted[next] == k) {
            for (const auto &b : g.blocks) {
                for (int q : b) {
                    GadgetInstr i;
                    i.op = Op::dd;
                    i.q0 = q;
                    i.dd_sign = sign;
                    out.ops.push_back(i);
                }
            }
            sign = -sign;
            next++;
        }
        if (k < n) {
            out.ops.push_back(g.ops[k]);
        }
    }
    out.slice_boundaries.clear();
    for (int sb : g.slice_boundaries) {
        out.slice_boundaries.push_back(old_to_new[sb]);
    }
    return out;
}

}  // namespace fqcp::code422
