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


#include "fqcp/statevector.hpp"

#include <bit>
#include <cmath>

#include "fqcp/code422.hpp"
#include "fqcp/errors.hpp"
#include "fqcp/rng.hpp"

namespace fqcp::code422 {

namespace {

const cplx kI(0.0, 1.0);

cplx i_power(int k) {
    static const cplx table[4] = {1.0, kI, -1.0, -kI};
    return table[((k % 4) + 4) % 4];
}

void check_size(int n) {
    if (n < 0 || n > kMaxStateQubits) {
        throw TooManyQubits("statevector limited to " + std::to_string(kMaxStateQubits) + " qubits, got " +
                            std::to_string(n));
    }
}

}  // namespace

StateVector::StateVector(int num_qubits) : n_(num_qubits) {
    check_size(num_qubits);
    amps_.assign(std::size_t{1} << n_, 0.0);
    amps_[0] = 1.0;
}

StateVector::StateVector(int num_qubits, std::vector<cplx> amps) : n_(num_qubits), amps_(std::move(amps)) {
    check_size(num_qubits);
    if (amps_.size() != (std::size_t{1} << n_)) {
        throw InvalidParams("amplitude count does not match qubit count");
    }
}

void StateVector::apply_1q(int q, const Mat2 &u) {
    std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amps_.size(); i++) {
        if (i & bit) {
            continue;
        }
        cplx a0 = amps_[i];
        cplx a1 = amps_[i | bit];
        amps_[i] = u[0][0] * a0 + u[0][1] * a1;
        amps_[i | bit] = u[1][0] * a0 + u[1][1] * a1;
    }
}

void StateVector::apply_2q(int a, int b, const Mat4 &u) {
    std::size_t ba = std::size_t{1} << a;
    std::size_t bb = std::size_t{1} << b;
    for (std::size_t i = 0; i < amps_.size(); i++) {
        if (i & (ba | bb)) {
            continue;
        }
        std::size_t idx[4] = {i, i | ba, i | bb, i | ba | bb};
        cplx in[4];
        for (int k = 0; k < 4; k++) {
            in[k] = amps_[idx[k]];
        }
        for (int r = 0; r < 4; r++) {
            cplx acc = 0.0;
            for (int c = 0; c < 4; c++) {
                acc += u[r][c] * in[c];
            }
            amps_[idx[r]] = acc;
        }
    }
}

void StateVector::apply_pauli(const PauliString &p) {
    std::vector<cplx> out(amps_.size());
    cplx base = i_power(p.phase + std::popcount(p.x & p.z));
    for (std::size_t i = 0; i < amps_.size(); i++) {
        cplx f = (std::popcount(p.z & i) & 1) ? -base : base;
        out[i ^ p.x] = f * amps_[i];
    }
    amps_ = std::move(out);
}

double StateVector::expectation(const PauliString &p) const {
    cplx base = i_power(p.phase + std::popcount(p.x & p.z));
    cplx acc = 0.0;
    for (std::size_t i = 0; i < amps_.size(); i++) {
        cplx f = (std::popcount(p.z & i) & 1) ? -base : base;
        acc += std::conj(amps_[i ^ p.x]) * f * amps_[i];
    }
    return acc.real();
}

double StateVector::norm2() const {
    double s = 0.0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return s;
}

double StateVector::prob_one(int q) const {
    std::size_t bit = std::size_t{1} << q;
    double s = 0.0;
    for (std::size_t i = 0; i < amps_.size(); i++) {
        if (i & bit) {
            s += std::norm(amps_[i]);
        }
    }
    return s / norm2();
}

double StateVector::collapse(int q, int outcome) {
    double p1 = prob_one(q);
    std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amps_.size(); i++) {
        bool one = (i & bit) != 0;
        if (one != (outcome == 1)) {
            amps_[i] = 0.0;
        }
    }
    normalize();
    return outcome == 1 ? p1 : 1.0 - p1;
}

void StateVector::normalize() {
    double n = std::sqrt(norm2());
    if (n == 0.0) {
        throw NumericalInvariant("cannot normalize a zero state");
    }
    for (auto &a : amps_) {
        a /= n;
    }
}

cplx StateVector::inner(const StateVector &other) const {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < amps_.size(); i++) {
        acc += std::conj(amps_[i]) * other.amps_[i];
    }
    return acc;
}

double StateVector::overlap(const StateVector &other) const {
    return std::abs(inner(other));
}

StateVector embed(const std::vector<cplx> &low, int num_qubits) {
    check_size(num_qubits);
    std::vector<cplx> amps(std::size_t{1} << num_qubits, 0.0);
    if (low.size() > amps.size()) {
        throw InvalidParams("state does not fit the register");
    }
    std::copy(low.begin(), low.end(), amps.begin());
    return StateVector(num_qubits, std::move(amps));
}

Mat2 gate_matrix(Op op, int dd_sign) {
    const double r = M_SQRT1_2;
    switch (op) {
        case Op::h:
            return {{{r, r}, {r, -r}}};
        case Op::s:
            return {{{1.0, 0.0}, {0.0, kI}}};
        case Op::sdg:
            return {{{1.0, 0.0}, {0.0, -kI}}};
        case Op::x:
            return {{{0.0, 1.0}, {1.0, 0.0}}};
        case Op::z:
            return {{{1.0, 0.0}, {0.0, -1.0}}};
        case Op::dd: {
            cplx f = -kI * double(dd_sign);
            return {{{0.0, f}, {f, 0.0}}};
        }
        case Op::idle:
            return {{{1.0, 0.0}, {0.0, 1.0}}};
        default:
            throw InvalidParams(std::string("no single-qubit matrix for ") + to_string(op));
    }
}

Mat4 rotation_matrix(Op op, double angle) {
    Mat4 m{};
    double c = std::cos(angle / 2);
    double s = std::sin(angle / 2);
    if (op == Op::xx) {
        for (int k = 0; k < 4; k++) {
            m[k][k] = c;
            m[k ^ 3][k] = -kI * s;
        }
    } else if (op == Op::zz) {
        for (int k = 0; k < 4; k++) {
            double zz = (k == 0 || k == 3) ? 1.0 : -1.0;
            m[k][k] = std::exp(-kI * (angle / 2) * zz);
        }
    } else if (op == Op::cx) {
        m[0][0] = 1.0;
        m[2][2] = 1.0;
        m[3][1] = 1.0;
        m[1][3] = 1.0;
    } else if (op == Op::cz) {
        m[0][0] = 1.0;
        m[1][1] = 1.0;
        m[2][2] = 1.0;
        m[3][3] = -1.0;
    } else {
        throw InvalidParams(std::string("no two-qubit matrix for ") + to_string(op));
    }
    return m;
}

namespace {

void apply_faults_at(int location, const std::vector<InjectedFault> &faults, Branch &br) {
    for (const auto &f : faults) {
        if (f.location != location) {
            continue;
        }
        if (f.flip_bit >= 0) {
            if (f.flip_bit < static_cast<int>(br.bits.size()) && br.bits[f.flip_bit] >= 0) {
                br.bits[f.flip_bit] ^= 1;
            }
        } else {
            br.state.apply_pauli(f.pauli);
        }
    }
}

}  // namespace

GadgetRun apply_gadget_statevector(const Gadget &g, const StateVector &input,
                                   const std::vector<InjectedFault> &faults, BranchMode mode,
                                   std::uint64_t seed, double min_prob) {
    check_size(g.num_qubits);
    if (input.num_qubits() != g.num_qubits) {
        throw InvalidParams("input register has " + std::to_string(input.num_qubits()) + " qubits, gadget needs " +
                            std::to_string(g.num_qubits));
    }
    CounterRng rng(seed, 0);
    std::vector<Branch> branches;
    branches.push_back({input, std::vector<int>(g.num_bits, -1), 1.0});
    branches.front().state.normalize();
    apply_faults_at(-1, faults, branches.front());

    for (std::size_t k = 0; k < g.ops.size(); k++) {
        const GadgetInstr &ins = g.ops[k];
        std::vector<Branch> next;
        for (auto &br : branches) {
            bool run = ins.cond_bit < 0 || br.bits[ins.cond_bit] == ins.cond_value;
            if (!run) {
                next.push_back(std::move(br));
                continue;
            }
            if (ins.op == Op::prep || ins.op == Op::measure) {
                double p1 = br.state.prob_one(ins.q0);
                std::vector<int> outcomes;
                if (mode == BranchMode::sample) {
                    outcomes.push_back(rng.uniform() < p1 ? 1 : 0);
                } else {
                    if (1.0 - p1 > min_prob) {
                        outcomes.push_back(0);
                    }
                    if (p1 > min_prob) {
                        outcomes.push_back(1);
                    }
                }
                for (int m : outcomes) {
                    Branch nb = outcomes.size() == 1 ? std::move(br) : br;
                    double pm = nb.state.collapse(ins.q0, m);
                    if (mode == BranchMode::enumerate) {
                        nb.probability *= pm;
                    }
                    if (ins.op == Op::prep) {
                        if (m == 1) {
                            nb.state.apply_1q(ins.q0, gate_matrix(Op::x));
                        }
                    } else {
                        nb.bits[ins.bit] = m;
                    }
                    next.push_back(std::move(nb));
                }
                continue;
            }
            if (ins.two_qubit()) {
                br.state.apply_2q(ins.q0, ins.q1, rotation_matrix(ins.op, ins.angle));
            } else if (ins.op != Op::idle) {
                br.state.apply_1q(ins.q0, gate_matrix(ins.op, ins.dd_sign));
            }
            next.push_back(std::move(br));
        }
        branches = std::move(next);
        for (auto &br : branches) {
            apply_faults_at(static_cast<int>(k), faults, br);
        }
    }
    return {std::move(branches)};
}

namespace {

// Encoded product state of per-block logical labels (2 bits per block).
StateVector encode_blocks(const Gadget &g, int labels) {
    std::vector<cplx> amps(std::size_t{1} << g.num_qubits, 0.0);
    int nb = static_cast<int>(g.blocks.size());
    for (int choice = 0; choice < (1 << nb); choice++) {
        std::size_t idx = 0;
        for (int b = 0; b < nb; b++) {
            int lab = (labels >> (2 * b)) & 3;
            auto sup = encoded_support(lab & 1, lab >> 1);
            int word = sup[(choice >> b) & 1];
            for (int j = 0; j < 4; j++) {
                if ((word >> j) & 1) {
                    idx |= std::size_t{1} << g.blocks[b][j];
                }
            }
        }
        amps[idx] = std::pow(M_SQRT1_2, nb);
    }
    return StateVector(g.num_qubits, std::move(amps));
}

}  // namespace

std::vector<std::vector<cplx>> logical_matrix(const Gadget &g) {
    for (const auto &i : g.ops) {
        if (i.op == Op::prep || i.op == Op::measure) {
            throw InvalidParams("logical_matrix needs a measurement-free gadget");
        }
    }
    int nb = static_cast<int>(g.blocks.size());
    int dim = 1 << (2 * nb);
    std::vector<StateVector> basis;
    for (int y = 0; y < dim; y++) {
        basis.push_back(encode_blocks(g, y));
    }
    std::vector<std::vector<cplx>> m(dim, std::vector<cplx>(dim, 0.0));
    for (int y = 0; y < dim; y++) {
        GadgetRun run = apply_gadget_statevector(g, basis[y]);
        const StateVector &out = run.branches.front().state;
        for (int x = 0; x < dim; x++) {
            m[x][y] = basis[x].inner(out);
        }
    }
    return m;
}

}  // namespace fqcp::code422
