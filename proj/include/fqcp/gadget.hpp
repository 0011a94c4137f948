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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fqcp/pauli.hpp"
#include "json.hpp"

namespace fqcp::code422 {

enum class Op { prep, h, s, sdg, x, z, cx, cz, xx, zz, measure, idle, dd };

const char *to_string(Op op);

/// One gadget instruction. Two-qubit ops use (q0, q1), with q0 the control
/// for cx. xx/zz are exp(-i angle P(x)P / 2). `bit` is the classical output of
/// a measurement. When cond_bit >= 0 the op only runs if that bit equals
/// cond_value (a prep with a condition is a classically controlled reset).
/// dd pulses are X with a +/- phase label: (-i * dd_sign) X.
struct GadgetInstr {
    Op op;
    int q0 = -1;
    int q1 = -1;
    double angle = 0.0;
    int bit = -1;
    int cond_bit = -1;
    int cond_value = 1;
    int dd_sign = 0;

    bool two_qubit() const {
        return op == Op::cx || op == Op::cz || op == Op::xx || op == Op::zz;
    }
    /// True for every op except xx/zz rotations away from multiples of pi/2.
    bool is_clifford() const;
};

/// Parity of a set of measurement bits attached to one block. Detectors read
/// 0 in the fault-free run; observables carry logical readout.
struct BitCheck {
    std::vector<int> bits;
    int block = 0;
    std::string label;
    bool inverted = false;
};

enum class GadgetKind { stab_meas, reset_00, meas_z1, meas_z2, crx_intra, crx_inter };

const char *to_string(GadgetKind kind);
/// Accepts stab_meas, reset_00, meas_Z1, meas_Z2, crx_intra, crx_inter.
GadgetKind parse_gadget_kind(const std::string &name);

struct Gadget {
    std::string name;
    int num_qubits = 0;
    /// Physical qubit indices of each block's data qubits 1..4.
    std::vector<std::array<int, 4>> blocks;
    std::vector<int> ancillas;
    int num_bits = 0;
    std::vector<GadgetInstr> ops;
    std::vector<BitCheck> detectors;
    std::vector<BitCheck> observables;
    /// Per block: LogicalPattern bits that matter for the output. Reset
    /// outputs are Z-logical eigenstates, so only X-type flips of them
    /// (anticommutation with Z1, Z2) count; after a logical Z readout the
    /// measured qubit's X-partner bit is dropped.
    std::vector<int> output_pattern_mask;
    /// Instruction indices where one logical slice ends and the next begins;
    /// every block is in the code space there.
    std::vector<int> slice_boundaries;

    bool is_clifford() const;
    int two_qubit_count() const;
    std::set<int> condition_bits() const;
    /// Throws InvalidParams on out-of-range qubits, duplicate measurement
    /// bits, or conditions on undefined bits.
    void validate() const;
    std::uint64_t block_mask(int block) const;
    std::string netlist() const;
    nlohmann::json to_json() const;
};

struct GadgetSpec {
    GadgetKind kind = GadgetKind::stab_meas;
    /// Logical control qubit (1 or 2) for crx_intra.
    int control = 2;
    std::optional<double> theta;
};

Gadget build_gadget(const GadgetSpec &spec);
Gadget build_gadget(GadgetKind kind, std::optional<double> theta = std::nullopt, int control = 2);

/// Gadget that leaves one block idle for `slots` memory slots.
Gadget memory_slot(int slots = 1);
/// Identity gadget over `num_qubits` qubits (no instructions).
Gadget identity_gadget(int num_qubits);

/// Relabels qubit q as qubit_map[q] inside a register of `num_qubits`.
/// Throws InvalidParams if the map is short, out of range, or not injective.
Gadget place(const Gadget &g, const std::vector<int> &qubit_map, int num_qubits);

/// Runs the gadgets back to back on the same qubits (all must share the
/// layout of the first); records the joins as slice boundaries.
Gadget concat(const std::vector<Gadget> &parts);

/// Surrounds every idle of a deformed qubit with U^dagger before and U after,
/// where U = I (x) I (x) H (x) SH.
Gadget clifford_deform(const Gadget &g, unsigned qubit_mask = 0b1100);

/// Conjugates each block by X2 X3 (logical X1 X2): relabels the logical basis
/// so that new |ab> = old |(1-a)(1-b)>. Logical readouts are inverted.
Gadget dfs_transform(const Gadget &g);

/// Inserts X on all four qubits of every block before each listed
/// instruction index (index == ops.size() appends), alternating the pulse
/// phase label between consecutive insertions.
Gadget insert_dd(const Gadget &g, const std::vector<int> &boundaries);

}  // namespace fqcp::code422
