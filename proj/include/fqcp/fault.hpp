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

#include <map>
#include <string>
#include <vector>

#include "fqcp/code422.hpp"
#include "fqcp/gadget.hpp"
#include "fqcp/pauli.hpp"
#include "json.hpp"

namespace fqcp::code422 {

/// A single fault: a Pauli inserted after instruction `instruction` (-1 =
/// gadget entry), or a classical flip of measurement bit `flip_bit`.
struct FaultLocation {
    int instruction = -1;
    PauliString pauli;
    int flip_bit = -1;
    std::string kind = "entry";
};

struct BlockOutcome {
    /// Residual Pauli on the block's data qubits, relabeled to 0..3.
    PauliString residual;
    PauliClass raw;
    /// Classification counting only the logical bits that act on the output.
    PauliClass effective;
    bool flagged = false;
    bool observable_flipped = false;
    bool violation = false;
};

struct FaultOutcome {
    FaultLocation location;
    /// Per measurement bit: 1 if the fault flips it.
    std::vector<int> flips;
    std::vector<BlockOutcome> blocks;
    Classification classification = Classification::benign;
    bool detected = false;
    /// Undetectable logical action (residual or readout) on some block with
    /// none of that block's detectors fired.
    bool violation = false;

    nlohmann::json to_json(const Gadget &g) const;
};

/// Forward symplectic propagation. Conditional ops are evaluated on the
/// fault-free outcomes (all reset flags 0). Throws NotClifford.
FaultOutcome propagate_pauli(const Gadget &g, const FaultLocation &fault);

/// Conjugation of a register Pauli by one Clifford instruction.
PauliString conjugate(const PauliString &p, const GadgetInstr &ins);

struct FtOptions {
    /// Single-qubit Paulis on every data qubit before the first instruction.
    bool entry_faults = true;
    /// Single-qubit Paulis on all other qubits after each measurement.
    bool measurement_crosstalk = false;
};

/// Every single fault location: X after prep, all non-identity Paulis on the
/// support after each executed gate, measurement flips, entry faults.
std::vector<FaultLocation> enumerate_faults(const Gadget &g, const FtOptions &options = {});

struct FtReport {
    std::string gadget;
    int total = 0;
    std::map<Classification, int> counts;
    int violations = 0;
    bool fault_tolerant = true;
    std::vector<FaultOutcome> witnesses;

    nlohmann::json to_json(const Gadget &g) const;
};

FtReport ft_check(const Gadget &g, const FtOptions &options = {});

}  // namespace fqcp::code422
