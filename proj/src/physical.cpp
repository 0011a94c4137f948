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


#include "fqcp/physical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "fqcp/code422.hpp"
#include "fqcp/density.hpp"
#include "fqcp/errors.hpp"
#include "fqcp/format.hpp"

namespace fqcp::physical {

using code422::Branch;
using code422::BranchMode;
using code422::Gadget;
using code422::GadgetKind;
using code422::InjectedFault;
using code422::Op;
using code422::StateVector;

constexpr int kNoBlock = std::numeric_limits<int>::min();

void PhysicalNoise::validate() const {
    for (auto [name, v] : {std::pair{"p1", p1}, {"p2", p2}, {"p_mem", p_mem}, {"p_meas", p_meas}}) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw InvalidParams(std::string(name) + " must lie in [0, 1], got " + fmt_double(v));
        }
    }
}

bool PhysicalNoise::memory_on(int block) const {
    return memory_blocks.empty() || std::find(memory_blocks.begin(), memory_blocks.end(), block) != memory_blocks.end();
}

nlohmann::json PhysicalNoise::to_json() const {
    return {{"p1", p1}, {"p2", p2}, {"p_mem", p_mem}, {"p_meas", p_meas}, {"memory_blocks", memory_blocks}};
}

std::array<int, 4> Layout::block_qubits(int block) const {
    int i = block - block_lo;
    if (i < 0 || i >= num_blocks) {
        throw InvalidParams("block " + std::to_string(block) + " is outside the physical register");
    }
    return {4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3};
}

Layout layout_for(const CircuitSpec &circuit) {
    Layout l;
    l.block_lo = block_of(circuit.site_range.lo);
    l.num_blocks = block_of(circuit.site_range.hi) - l.block_lo + 1;
    if (l.num_qubits() > code422::kMaxStateQubits) {
        throw TooManyQubits("physical register for t_max=" + std::to_string(circuit.t_max()) + " needs " +
                            std::to_string(l.num_qubits()) + " qubits (" + std::to_string(l.num_blocks) +
                            " blocks + 2 ancillas), limit is " + std::to_string(code422::kMaxStateQubits));
    }
    return l;
}

StateVector initial_state(const CircuitSpec &circuit, const Layout &layout) {
    const int origin = circuit.params.origin;
    const int origin_block = block_of(origin);
    const int n = layout.num_blocks;
    std::vector<code422::cplx> amps(std::size_t{1} << layout.num_qubits(), 0.0);
    const double amp = std::pow(M_SQRT1_2, n);
    for (int choice = 0; choice < (1 << n); choice++) {
        std::size_t idx = 0;
        for (int i = 0; i < n; i++) {
            int block = layout.block_lo + i;
            int a = block == origin_block && origin == 2 * block;
            int b = block == origin_block && origin == 2 * block + 1;
            auto sup = code422::encoded_support(a, b);
            int word = sup[(choice >> i) & 1];
            auto qs = layout.block_qubits(block);
            for (int j = 0; j < 4; j++) {
                if ((word >> j) & 1) {
                    idx |= std::size_t{1} << qs[j];
                }
            }
        }
        amps[idx] = amp;
    }
    return StateVector(layout.num_qubits(), std::move(amps));
}

double site_occupation(const StateVector &state, const Layout &layout, int site) {
    int block = block_of(site);
    auto qs = layout.block_qubits(block);
    PauliString z = PauliString::single(qs[0], 'Z') * PauliString::single(site == 2 * block ? qs[2] : qs[1], 'Z');
    return (1.0 - state.expectation(z)) / 2.0;
}

std::vector<InjectedFault> sample_faults(const Gadget &g, const PhysicalNoise &noise, CounterRng &rng) {
    static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
    std::vector<InjectedFault> faults;
    const std::uint64_t t1 = bernoulli_threshold(noise.p1);
    const std::uint64_t t2 = bernoulli_threshold(noise.p2);
    const std::uint64_t tm = bernoulli_threshold(noise.p_meas);
    for (std::size_t k = 0; k < g.ops.size(); k++) {
        const auto &ins = g.ops[k];
        int loc = static_cast<int>(k);
        if (ins.op == Op::idle) {
            continue;
        }
        if (ins.op == Op::prep) {
            if (noise.p_meas > 0 && rng.bernoulli(tm)) {
                faults.push_back({loc, PauliString::single(ins.q0, 'X'), -1});
            }
        } else if (ins.op == Op::measure) {
            if (noise.p_meas > 0 && rng.bernoulli(tm)) {
                faults.push_back({loc, PauliString{}, ins.bit});
            }
        } else if (ins.two_qubit()) {
            if (noise.p2 > 0 && rng.bernoulli(t2)) {
                int r = 1 + static_cast<int>(rng.next_u32() % 15);
                faults.push_back({loc,
                                  PauliString::single(ins.q0, kLetters[r % 4]) *
                                      PauliString::single(ins.q1, kLetters[r / 4]),
                                  -1});
            }
        } else if (noise.p1 > 0 && rng.bernoulli(t1)) {
            int r = 1 + static_cast<int>(rng.next_u32() % 3);
            faults.push_back({loc, PauliString::single(ins.q0, kLetters[r]), -1});
        }
    }
    return faults;
}

namespace {

struct PlacedGadgets {
    std::map<int, Gadget> intra1;
    std::map<int, Gadget> intra2;
    std::map<int, Gadget> stab;
    std::map<int, Gadget> reset;
    /// Keyed by the left block k of the pair (2k+1, 2k+2).
    std::map<int, Gadget> inter;
};

PlacedGadgets place_all(const CircuitSpec &circuit, const Layout &layout) {
    const double theta = circuit.params.theta;
    const int nq = layout.num_qubits();
    const Gadget c1 = code422::build_gadget(GadgetKind::crx_intra, theta, 1);
    const Gadget c2 = code422::build_gadget(GadgetKind::crx_intra, theta, 2);
    const Gadget inter = code422::build_gadget(GadgetKind::crx_inter, theta);
    const Gadget stab = code422::build_gadget(GadgetKind::stab_meas);
    const Gadget reset = code422::build_gadget(GadgetKind::reset_00);
    PlacedGadgets out;
    for (int i = 0; i < layout.num_blocks; i++) {
        int block = layout.block_lo + i;
        auto q = layout.block_qubits(block);
        std::vector<int> data(q.begin(), q.end());
        out.intra1.emplace(block, code422::place(c1, data, nq));
        out.intra2.emplace(block, code422::place(c2, data, nq));
        std::vector<int> with_anc = data;
        with_anc.push_back(layout.ancilla(0));
        out.reset.emplace(block, code422::place(reset, with_anc, nq));
        with_anc.push_back(layout.ancilla(1));
        out.stab.emplace(block, code422::place(stab, with_anc, nq));
        if (i + 1 < layout.num_blocks) {
            // A = block k+1 as is; B = block k with physical qubits 2 and 3
            // swapped, which exchanges its two logical qubits.
            auto a = layout.block_qubits(block + 1);
            std::vector<int> map = {a[0], a[1], a[2], a[3], q[0], q[2], q[1], q[3]};
            out.inter.emplace(block, code422::place(inter, map, nq));
        }
    }
    return out;
}

std::set<int> inter_pairs(const Period &period) {
    std::set<int> ks;
    for (int layer = 2; layer < 4; layer++) {
        for (const Gate &g : period.layers[layer]) {
            ks.insert(block_of(std::min(g.control, g.target)));
        }
    }
    return ks;
}

class PhysicalSession : public adaptive::ShotSession {
   public:
    PhysicalSession(const CircuitSpec &circuit, const PhysicalNoise &noise, std::uint64_t seed, std::uint64_t shot)
        : circuit_(circuit),
          noise_(noise),
          layout_(layout_for(circuit)),
          gadgets_(place_all(circuit, layout_)),
          state_(initial_state(circuit, layout_)),
          noise_rng_(derive_seed(seed, "noise"), shot),
          readout_rng_(derive_seed(seed, "readout"), shot),
          mem_threshold_(bernoulli_threshold(noise.p_mem)) {
    }

    void apply_gates(int t) override {
        const Period &period = circuit_.periods[t - 1];
        memory();
        for (const Gate &g : period.layers[0]) {
            run(gadgets_.intra1.at(block_of(g.control)));
        }
        memory();
        for (const Gate &g : period.layers[1]) {
            run(gadgets_.intra2.at(block_of(g.control)));
        }
        memory();
        for (int k : inter_pairs(period)) {
            run(gadgets_.inter.at(k));
        }
        memory();
    }

    adaptive::EventKind detect(const ResetOp &op, int) override {
        auto bits = run(gadgets_.stab.at(op.block));
        if (bits[1] == 1) {
            return adaptive::EventKind::detected_sx;
        }
        if (bits[0] == 1) {
            return adaptive::EventKind::detected_sz;
        }
        return adaptive::EventKind::none;
    }

    void reset_block(const ResetOp &op, int) override {
        run(gadgets_.reset.at(op.block));
    }

    std::vector<int> active_sites(int) override {
        double u = readout_rng_.uniform();
        const auto &amps = state_.amps();
        std::size_t idx = amps.size() - 1;
        double acc = 0.0;
        for (std::size_t k = 0; k < amps.size(); k++) {
            acc += std::norm(amps[k]);
            if (u < acc) {
                idx = k;
                break;
            }
        }
        std::vector<int> out;
        for (int i = 0; i < layout_.num_blocks; i++) {
            int block = layout_.block_lo + i;
            auto q = layout_.block_qubits(block);
            auto bit = [&](int j) { return static_cast<int>((idx >> q[j]) & 1); };
            if (bit(0) ^ bit(2)) {
                out.push_back(2 * block);
            }
            if (bit(0) ^ bit(1)) {
                out.push_back(2 * block + 1);
            }
        }
        return out;
    }

    std::size_t two_qubit_gates() const override {
        return two_qubit_;
    }

    const StateVector &state() const {
        return state_;
    }
    const Layout &layout() const {
        return layout_;
    }
    const PlacedGadgets &gadgets() const {
        return gadgets_;
    }

   private:
    std::vector<int> run(const Gadget &g) {
        auto faults = sample_faults(g, noise_, noise_rng_);
        std::uint64_t branch_seed = (static_cast<std::uint64_t>(noise_rng_.next_u32()) << 32) | noise_rng_.next_u32();
        auto result = code422::apply_gadget_statevector(g, state_, faults, BranchMode::sample, branch_seed);
        state_ = std::move(result.branches.front().state);
        two_qubit_ += g.two_qubit_count();
        return std::move(result.branches.front().bits);
    }

    void memory() {
        if (noise_.p_mem == 0.0) {
            return;
        }
        for (int i = 0; i < layout_.num_blocks; i++) {
            int block = layout_.block_lo + i;
            if (!noise_.memory_on(block)) {
                continue;
            }
            for (int q : layout_.block_qubits(block)) {
                if (noise_rng_.bernoulli(mem_threshold_)) {
                    state_.apply_pauli(PauliString::single(q, 'Z'));
                }
            }
        }
    }

    const CircuitSpec &circuit_;
    PhysicalNoise noise_;
    Layout layout_;
    PlacedGadgets gadgets_;
    StateVector state_;
    CounterRng noise_rng_;
    CounterRng readout_rng_;
    std::uint64_t mem_threshold_;
    std::size_t two_qubit_ = 0;
};

class PhysicalBackend : public adaptive::NoiseBackend {
   public:
    explicit PhysicalBackend(PhysicalNoise noise) : noise_(std::move(noise)) {
        noise_.validate();
    }

    std::string kind() const override {
        return "physical_trajectory";
    }

    void check(const CircuitSpec &circuit) const override {
        layout_for(circuit);
    }

    std::unique_ptr<adaptive::ShotSession> start(const CircuitSpec &circuit, std::uint64_t seed,
                                                 std::uint64_t shot) const override {
        return std::make_unique<PhysicalSession>(circuit, noise_, seed, shot);
    }

    nlohmann::json to_json() const override {
        nlohmann::json j = noise_.to_json();
        j["kind"] = kind();
        return j;
    }

   private:
    PhysicalNoise noise_;
};

}  // namespace

std::unique_ptr<adaptive::NoiseBackend> make_physical_backend(PhysicalNoise noise) {
    return std::make_unique<PhysicalBackend>(std::move(noise));
}

ObservableSeries exact_series(const CircuitSpec &circuit, const adaptive::RateField &injection) {
    if (circuit.t_max() > 1) {
        throw InvalidParams("exact physical series supports t_max <= 1");
    }
    std::vector<double> inject = injection.by_slot(circuit);
    const PhysicalNoise none;
    PhysicalSession session(circuit, none, 0, 0);
    const Layout &layout = session.layout();
    ObservableSeries out(circuit.site_range, circuit.t_max(), circuit.params.origin);
    out.se_right.assign(circuit.t_max() + 1, 0.0);
    auto fill = [&](int t, const StateVector &s, double w, int only_block) {
        for (int site = circuit.site_range.lo; site <= circuit.site_range.hi; site++) {
            if (only_block == kNoBlock || block_of(site) == only_block) {
                out.density[t][site - circuit.site_range.lo] += w * site_occupation(s, layout, site);
            }
        }
    };
    fill(0, session.state(), 1.0, kNoBlock);
    if (circuit.t_max() == 1) {
        session.apply_gates(1);
        const StateVector &psi = session.state();
        std::set<int> slotted;
        // Each slot acts on its own block plus freshly prepared ancillas, so the
        // other slots leave this block's reduced state unchanged.
        for (const ResetOp &op : circuit.periods[0].resets) {
            slotted.insert(op.block);
            const double p_inj = inject[op.slot];
            const Gadget &reset = session.gadgets().reset.at(op.block);
            auto reset_into = [&](const StateVector &in, double w) {
                auto run = code422::apply_gadget_statevector(reset, in);
                for (const Branch &br : run.branches) {
                    fill(1, br.state, w * br.probability, op.block);
                }
            };
            auto detect = code422::apply_gadget_statevector(session.gadgets().stab.at(op.block), psi);
            for (const Branch &br : detect.branches) {
                if (br.bits[0] == 1 || br.bits[1] == 1) {
                    reset_into(br.state, br.probability);
                    continue;
                }
                if (p_inj > 0.0) {
                    reset_into(br.state, br.probability * p_inj);
                }
                fill(1, br.state, br.probability * (1.0 - p_inj), op.block);
            }
        }
        for (int i = 0; i < layout.num_blocks; i++) {
            int block = layout.block_lo + i;
            if (!slotted.count(block)) {
                fill(1, psi, 1.0, block);
            }
        }
    }
    out.fill_n_right();
    return out;
}

void run_gadget_trajectories(const Gadget &g, const StateVector &input, const PhysicalNoise &noise,
                             std::uint64_t shots, std::uint64_t seed,
                             const std::function<void(std::uint64_t, const Branch &)> &observe) {
    noise.validate();
    const std::uint64_t mem = bernoulli_threshold(noise.p_mem);
    for (std::uint64_t s = 0; s < shots; s++) {
        CounterRng rng(derive_seed(seed, "trajectory"), s);
        std::vector<InjectedFault> faults;
        if (noise.p_mem > 0.0) {
            for (int b = 0; b < static_cast<int>(g.blocks.size()); b++) {
                if (!noise.memory_on(b)) {
                    continue;
                }
                for (int q : g.blocks[b]) {
                    if (rng.bernoulli(mem)) {
                        faults.push_back({-1, PauliString::single(q, 'Z'), -1});
                    }
                }
            }
        }
        auto gate_faults = sample_faults(g, noise, rng);
        faults.insert(faults.end(), gate_faults.begin(), gate_faults.end());
        std::uint64_t branch_seed = (static_cast<std::uint64_t>(rng.next_u32()) << 32) | rng.next_u32();
        auto run = code422::apply_gadget_statevector(g, input, faults, BranchMode::sample, branch_seed);
        observe(s, run.branches.front());
    }
}

nlohmann::json ResourceRow::to_json() const {
    return {{"t", t},
            {"logical_blocks", logical_blocks},
            {"qubits_without_reuse", qubits_without_reuse},
            {"qubits_with_reuse", qubits_with_reuse},
            {"max_live_sites", max_live_sites},
            {"logical_gates", logical_gates},
            {"two_qubit_gates", two_qubit_gates},
            {"reset_two_qubit_gates", reset_two_qubit_gates}};
}

std::vector<ResourceRow> resource_report(const ModelParams &params) {
    params.validate();
    const double theta = params.theta;
    const int c1 = code422::build_gadget(GadgetKind::crx_intra, theta, 1).two_qubit_count();
    const int c2 = code422::build_gadget(GadgetKind::crx_intra, theta, 2).two_qubit_count();
    const int inter = code422::build_gadget(GadgetKind::crx_inter, theta).two_qubit_count();
    const int stab = code422::build_gadget(GadgetKind::stab_meas).two_qubit_count();
    const int reset = code422::build_gadget(GadgetKind::reset_00).two_qubit_count();
    std::vector<ResourceRow> rows;
    for (int t = 1; t <= params.t_max; t++) {
        ModelParams pt = params;
        pt.t_max = t;
        CircuitSpec c = build_circuit(pt);
        ResourceRow row;
        row.t = t;
        row.logical_blocks = block_of(c.site_range.hi) - block_of(c.site_range.lo) + 1;
        row.qubits_without_reuse = 4 * row.logical_blocks + 2;
        row.logical_gates = c.gate_count();
        row.reset_two_qubit_gates = reset;
        for (const Period &period : c.periods) {
            row.two_qubit_gates += period.layers[0].size() * c1 + period.layers[1].size() * c2 +
                                   inter_pairs(period).size() * inter + period.resets.size() * stab;
        }
        auto schedule = dm::build_reuse_schedule(c);
        std::map<int, int> live_per_block;
        int live = 0;
        int max_blocks = 0;
        for (const auto &ins : schedule.instructions) {
            if (ins.kind == dm::OpKind::admit) {
                live_per_block[block_of(ins.a)]++;
                live++;
            } else if (ins.kind == dm::OpKind::retire) {
                if (--live_per_block[block_of(ins.a)] == 0) {
                    live_per_block.erase(block_of(ins.a));
                }
                live--;
            }
            row.max_live_sites = std::max(row.max_live_sites, live);
            max_blocks = std::max(max_blocks, static_cast<int>(live_per_block.size()));
        }
        row.qubits_with_reuse = 4 * max_blocks + 2;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace fqcp::physical
