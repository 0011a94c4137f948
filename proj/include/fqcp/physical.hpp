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
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "fqcp/adaptive.hpp"
#include "fqcp/gadget.hpp"
#include "fqcp/model.hpp"
#include "fqcp/observables.hpp"
#include "fqcp/rng.hpp"
#include "fqcp/statevector.hpp"
#include "json.hpp"

namespace fqcp::physical {

/// Pauli noise for gadget-level trajectories.
struct PhysicalNoise {
    /// Depolarizing rate after each single-qubit gate.
    double p1 = 0.0;
    /// Two-qubit depolarizing rate after each two-qubit gate.
    double p2 = 0.0;
    /// Z on each data qubit of a memory block at every slice boundary.
    double p_mem = 0.0;
    /// Readout flip and preparation X rate.
    double p_meas = 0.0;
    /// Blocks exposed to memory noise (model block ids for the backend,
    /// gadget block indices for run_gadget_trajectories); empty means all.
    std::vector<int> memory_blocks;

    /// Throws InvalidParams.
    void validate() const;
    bool noiseless() const {
        return p1 == 0.0 && p2 == 0.0 && p_mem == 0.0 && p_meas == 0.0;
    }
    bool memory_on(int block) const;
    nlohmann::json to_json() const;
};

/// Block b of the circuit's site range occupies qubits 4i..4i+3 with
/// i = b - block_lo; two shared ancillas follow the data qubits.
struct Layout {
    int block_lo = 0;
    int num_blocks = 0;

    int num_qubits() const {
        return 4 * num_blocks + 2;
    }
    std::array<int, 4> block_qubits(int block) const;
    int ancilla(int k) const {
        return 4 * num_blocks + k;
    }
};

/// Throws TooManyQubits above the statevector limit.
Layout layout_for(const CircuitSpec &circuit);

/// Encoded product state with the circuit's origin site excited.
code422::StateVector initial_state(const CircuitSpec &circuit, const Layout &layout);

/// <n> of a model site from logical Z expectations (Z1 Z3 for the left
/// site of a block, Z1 Z2 for the right site).
double site_occupation(const code422::StateVector &state, const Layout &layout, int site);

/// Samples gate, preparation and readout faults for one run of `g`.
std::vector<code422::InjectedFault> sample_faults(const code422::Gadget &g, const PhysicalNoise &noise,
                                                  CounterRng &rng);

/// Gadget-level quantum trajectories of the model circuit.
std::unique_ptr<adaptive::NoiseBackend> make_physical_backend(PhysicalNoise noise);

/// Exact noiseless densities for t_max <= 1 with injected resets at the given
/// rates, obtained by enumerating measurement branches and injection outcomes.
ObservableSeries exact_series(const CircuitSpec &circuit, const adaptive::RateField &injection);

/// Runs `shots` sampled trajectories of one gadget: memory Z on the listed
/// blocks at entry, then gate and readout faults; `observe` sees each final
/// branch.
void run_gadget_trajectories(const code422::Gadget &g, const code422::StateVector &input,
                             const PhysicalNoise &noise, std::uint64_t shots, std::uint64_t seed,
                             const std::function<void(std::uint64_t, const code422::Branch &)> &observe);

struct ResourceRow {
    int t = 0;
    int logical_blocks = 0;
    int qubits_without_reuse = 0;
    int qubits_with_reuse = 0;
    int max_live_sites = 0;
    std::size_t logical_gates = 0;
    /// Physical two-qubit gates of the gate layers and per-slot detection.
    std::size_t two_qubit_gates = 0;
    /// Extra two-qubit gates per executed block reset.
    int reset_two_qubit_gates = 0;

    nlohmann::json to_json() const;
};

/// One row per circuit depth 1..t_max.
std::vector<ResourceRow> resource_report(const ModelParams &params);

}  // namespace fqcp::physical
