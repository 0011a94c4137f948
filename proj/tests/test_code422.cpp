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


#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "fqcp/code422.hpp"
#include "fqcp/errors.hpp"
#include "fqcp/fault.hpp"
#include "fqcp/gadget.hpp"
#include "fqcp/statevector.hpp"

using namespace fqcp;
using namespace fqcp::code422;

namespace {

using Mat = Eigen::MatrixXcd;
const cplx kI(0.0, 1.0);

// Dense matrix of a Pauli string; qubit j is bit j of the basis index.
Mat dense_pauli(const PauliString &p, int n) {
    Mat m = Mat::Identity(1, 1);
    for (int q = n - 1; q >= 0; q--) {
        Mat s(2, 2);
        switch (p.letter(q)) {
            case 'I':
                s << 1, 0, 0, 1;
                break;
            case 'X':
                s << 0, 1, 1, 0;
                break;
            case 'Y':
                s << 0, -kI, kI, 0;
                break;
            default:
                s << 1, 0, 0, -1;
        }
        Mat k(m.rows() * 2, m.cols() * 2);
        for (int r = 0; r < m.rows(); r++) {
            for (int c = 0; c < m.cols(); c++) {
                k.block(2 * r, 2 * c, 2, 2) = m(r, c) * s;
            }
        }
        m = k;
    }
    static const cplx phases[4] = {1.0, kI, -1.0, -kI};
    return phases[p.phase] * m;
}

PauliString random_pauli(std::mt19937_64 &rng, int n) {
    std::uniform_int_distribution<std::uint64_t> d(0, (1ULL << n) - 1);
    PauliString p;
    p.x = d(rng);
    p.z = d(rng);
    p.phase = static_cast<std::uint8_t>(rng() % 4);
    return p;
}

std::vector<cplx> random_state(std::mt19937_64 &rng, std::size_t dim) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<cplx> v(dim);
    double s = 0.0;
    for (auto &a : v) {
        a = cplx(n(rng), n(rng));
        s += std::norm(a);
    }
    for (auto &a : v) {
        a /= std::sqrt(s);
    }
    return v;
}

// Encoded state of a random logical vector over all blocks of g (bits A1,
// A2, B1, B2), ancillas in |0>.
StateVector random_encoded(const Gadget &g, std::mt19937_64 &rng) {
    int nb = static_cast<int>(g.blocks.size());
    std::vector<cplx> logical = random_state(rng, std::size_t{1} << (2 * nb));
    std::vector<cplx> amps(std::size_t{1} << g.num_qubits, 0.0);
    for (std::size_t y = 0; y < logical.size(); y++) {
        for (int choice = 0; choice < (1 << nb); choice++) {
            std::size_t idx = 0;
            for (int b = 0; b < nb; b++) {
                int lab = (y >> (2 * b)) & 3;
                int word = encoded_support(lab & 1, lab >> 1)[(choice >> b) & 1];
                for (int j = 0; j < 4; j++) {
                    if ((word >> j) & 1) {
                        idx |= std::size_t{1} << g.blocks[b][j];
                    }
                }
            }
            amps[idx] += logical[y] * std::pow(M_SQRT1_2, nb);
        }
    }
    return StateVector(g.num_qubits, amps);
}

// Logical controlled rotation exp(-i theta |1><1|_c X_t / 2) over nbits
// logical qubits, from the closed-form 2x2 rotation.
Mat controlled_rx(int nbits, int c, int t, double theta) {
    int dim = 1 << nbits;
    Mat m = Mat::Zero(dim, dim);
    double co = std::cos(theta / 2);
    double si = std::sin(theta / 2);
    for (int y = 0; y < dim; y++) {
        if (!((y >> c) & 1)) {
            m(y, y) = 1.0;
            continue;
        }
        m(y, y) += co;
        m(y ^ (1 << t), y) += -kI * si;
    }
    return m;
}

Mat to_eigen(const std::vector<std::vector<cplx>> &m) {
    Mat out(m.size(), m.size());
    for (std::size_t r = 0; r < m.size(); r++) {
        for (std::size_t c = 0; c < m.size(); c++) {
            out(r, c) = m[r][c];
        }
    }
    return out;
}

PauliString on_block(const PauliString &local, const std::array<int, 4> &block) {
    PauliString out;
    out.phase = local.phase;
    for (int j = 0; j < 4; j++) {
        out.x |= ((local.x >> j) & 1ULL) << block[j];
        out.z |= ((local.z >> j) & 1ULL) << block[j];
    }
    return out;
}

}  // namespace

TEST_SUITE("code422") {
    TEST_CASE("pauli products match dense matrices") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 200; trial++) {
            PauliString a = random_pauli(rng, 3);
            PauliString b = random_pauli(rng, 3);
            Mat prod = dense_pauli(a, 3) * dense_pauli(b, 3);
            CHECK((prod - dense_pauli(a * b, 3)).norm() < 1e-12);
            Mat comm = dense_pauli(a, 3) * dense_pauli(b, 3) - dense_pauli(b, 3) * dense_pauli(a, 3);
            CHECK(a.commutes_with(b) == (comm.norm() < 1e-12));
        }
        CHECK(PauliString::parse("XXXX").weight() == 4);
        CHECK(PauliString::parse("-iZIY").phase == 3);
        CHECK_THROWS_AS(PauliString::parse("XQ"), InvalidParams);
    }

    TEST_CASE("encode_state basis and linearity") {
        auto e00 = encode_state({1.0, 0.0, 0.0, 0.0});
        CHECK(std::abs(e00[0] - M_SQRT1_2) < 1e-15);
        CHECK(std::abs(e00[15] - M_SQRT1_2) < 1e-15);
        // |11> -> (|0110> + |1001>)/sqrt2; qubit j is bit j.
        auto e11 = encode_state({0.0, 0.0, 0.0, 1.0});
        CHECK(std::abs(e11[0b0110] - M_SQRT1_2) < 1e-15);
        CHECK(std::abs(e11[0b1001] - M_SQRT1_2) < 1e-15);
        // |01> (logical qubit 2 set) -> (|0101> + |1010>)/sqrt2 read q1..q4.
        auto e01 = encode_state({0.0, 0.0, 1.0, 0.0});
        CHECK(std::abs(e01[0b1010] - M_SQRT1_2) < 1e-15);
        CHECK(std::abs(e01[0b0101] - M_SQRT1_2) < 1e-15);
        auto bell = encode_state({M_SQRT1_2, 0.0, 0.0, M_SQRT1_2});
        StateVector s(4, bell);
        CHECK(std::abs(s.norm2() - 1.0) < 1e-12);
        CHECK(std::abs(s.expectation(stabilizer_x()) - 1.0) < 1e-12);
        CHECK(std::abs(s.expectation(stabilizer_z()) - 1.0) < 1e-12);
        CHECK_THROWS_AS(encode_state({1.0, 1.0, 0.0, 0.0}), NotNormalized);
    }

    TEST_CASE("basis states are logical eigenstates") {
        for (int a = 0; a < 2; a++) {
            for (int b = 0; b < 2; b++) {
                StateVector s(4, encoded_basis(a, b));
                CHECK(std::abs(s.expectation(stabilizer_x()) - 1.0) < 1e-12);
                CHECK(std::abs(s.expectation(stabilizer_z()) - 1.0) < 1e-12);
                CHECK(std::abs(s.expectation(logical_z1()) - (a ? -1.0 : 1.0)) < 1e-12);
                CHECK(std::abs(s.expectation(logical_z2()) - (b ? -1.0 : 1.0)) < 1e-12);
                StateVector f = s;
                f.apply_pauli(logical_x1());
                CHECK(f.overlap(StateVector(4, encoded_basis(1 - a, b))) > 1 - 1e-12);
                f = s;
                f.apply_pauli(logical_x2());
                CHECK(f.overlap(StateVector(4, encoded_basis(a, 1 - b))) > 1 - 1e-12);
            }
        }
    }

    TEST_CASE("syndrome examples and homomorphism") {
        CHECK(syndrome(PauliString{}) == Syndrome{0, 0});
        CHECK(syndrome(PauliString::parse("XIII")) == Syndrome{0, 1});
        CHECK(syndrome(PauliString::parse("ZZZZ")) == Syndrome{0, 0});
        CHECK(PauliString::parse("ZZZZ") == stabilizer_z());
        for (std::uint64_t x1 = 0; x1 < 16; x1++) {
            for (std::uint64_t z1 = 0; z1 < 16; z1++) {
                for (std::uint64_t x2 = 0; x2 < 16; x2 += 3) {
                    for (std::uint64_t z2 = 0; z2 < 16; z2 += 5) {
                        PauliString p{x1, z1, 0};
                        PauliString q{x2, z2, 0};
                        Syndrome a = syndrome(p), b = syndrome(q), c = syndrome(p * q);
                        CHECK(c.s_x == (a.s_x ^ b.s_x));
                        CHECK(c.s_z == (a.s_z ^ b.s_z));
                    }
                }
            }
        }
        CHECK_THROWS_AS(syndrome(PauliString::single(5, 'X')), InvalidParams);
    }

    TEST_CASE("classify_pauli examples") {
        PauliClass x12 = classify_pauli(PauliString::parse("XXII"));
        CHECK(x12.kind == Classification::undetectable_logical);
        CHECK(x12.pattern.z1);
        CHECK_FALSE(x12.pattern.z2);
        CHECK(classify_pauli(PauliString::parse("XIII")).kind == Classification::detectable_logical);
        CHECK(classify_pauli(stabilizer_x() * stabilizer_z()).kind == Classification::benign);
        CHECK(classify_pauli(PauliString{}).kind == Classification::benign);
        // Equivalent representatives differ by a stabilizer.
        const char *pairs[4][2] = {{"XXII", "IIXX"}, {"ZIZI", "IZIZ"}, {"XIXI", "IXIX"}, {"ZZII", "IIZZ"}};
        for (auto &pr : pairs) {
            PauliClass a = classify_pauli(PauliString::parse(pr[0]));
            PauliClass b = classify_pauli(PauliString::parse(pr[1]));
            CHECK(a.kind == b.kind);
            CHECK(a.pattern == b.pattern);
            CHECK(a.kind == Classification::undetectable_logical);
        }
    }

    TEST_CASE("clifford conjugation matches dense matrices") {
        std::mt19937_64 rng(5);
        std::vector<GadgetInstr> ops;
        for (Op op : {Op::h, Op::s, Op::sdg, Op::x, Op::z}) {
            ops.push_back({op, 1});
        }
        ops.push_back({Op::cx, 0, 2});
        ops.push_back({Op::cx, 2, 1});
        ops.push_back({Op::cz, 1, 2});
        for (double a : {M_PI / 2, -M_PI / 2, M_PI, 3 * M_PI / 2}) {
            ops.push_back({Op::xx, 0, 1, a});
            ops.push_back({Op::zz, 2, 0, a});
        }
        for (const auto &ins : ops) {
            for (int trial = 0; trial < 20; trial++) {
                PauliString p = random_pauli(rng, 3);
                PauliString img = conjugate(p, ins);
                // U P |psi> must equal img U |psi>.
                StateVector psi(3, random_state(rng, 8));
                StateVector lhs = psi;
                lhs.apply_pauli(p);
                StateVector rhs = psi;
                if (ins.two_qubit()) {
                    lhs.apply_2q(ins.q0, ins.q1, rotation_matrix(ins.op, ins.angle));
                    rhs.apply_2q(ins.q0, ins.q1, rotation_matrix(ins.op, ins.angle));
                } else {
                    lhs.apply_1q(ins.q0, gate_matrix(ins.op));
                    rhs.apply_1q(ins.q0, gate_matrix(ins.op));
                }
                rhs.apply_pauli(img);
                CHECK(std::abs(lhs.inner(rhs) - 1.0) < 1e-10);
            }
        }
        GadgetInstr t{Op::xx, 0, 1, 0.3};
        CHECK_THROWS_AS(conjugate(PauliString::parse("ZII"), t), NotClifford);
    }

    TEST_CASE("gadget construction and validation") {
        CHECK_THROWS_AS(parse_gadget_kind("toffoli"), UnknownKind);
        CHECK(parse_gadget_kind("meas_Z2") == GadgetKind::meas_z2);
        CHECK_THROWS_AS(build_gadget(GadgetKind::crx_inter), InvalidParams);
        CHECK_THROWS_AS(build_gadget(GadgetKind::crx_intra, 1.0, 3), InvalidParams);
        Gadget inter = build_gadget(GadgetKind::crx_inter, M_PI);
        CHECK(inter.is_clifford());
        for (const auto &i : inter.ops) {
            CHECK(i.is_clifford());
        }
        CHECK_FALSE(build_gadget(GadgetKind::crx_inter, 1.0).is_clifford());
        CHECK_THROWS_AS(ft_check(build_gadget(GadgetKind::crx_inter, 1.0)), NotClifford);
        Gadget reset = build_gadget(GadgetKind::reset_00);
        CHECK(reset.num_bits == 2);
        CHECK(reset.condition_bits() == std::set<int>{0});
        Gadget bad = reset;
        bad.ops.front().q0 = 9;
        CHECK_THROWS_AS(bad.validate(), InvalidParams);
        bad = reset;
        bad.ops.front().cond_bit = 1;
        CHECK_THROWS_AS(bad.validate(), InvalidParams);
        CHECK(build_gadget(GadgetKind::stab_meas).netlist().find("measure 4 -> c0") != std::string::npos);
        CHECK(inter.to_json()["ops"].size() == inter.ops.size());
    }

    TEST_CASE("stab_meas leaves encoded states unchanged") {
        Gadget g = build_gadget(GadgetKind::stab_meas);
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 10; trial++) {
            StateVector in = random_encoded(g, rng);
            GadgetRun run = apply_gadget_statevector(g, in);
            REQUIRE(run.branches.size() == 1);
            CHECK(run.branches[0].bits == std::vector<int>{0, 0});
            CHECK(run.branches[0].state.overlap(in) > 1 - 1e-10);
        }
        StateVector in = random_encoded(g, rng);
        GadgetRun hit = apply_gadget_statevector(g, in, {{-1, PauliString::single(0, 'X')}});
        REQUIRE(hit.branches.size() == 1);
        CHECK(hit.branches[0].bits == std::vector<int>{1, 0});
        GadgetRun zhit = apply_gadget_statevector(g, in, {{-1, PauliString::single(2, 'Z')}});
        CHECK(zhit.branches[0].bits == std::vector<int>{0, 1});
    }

    TEST_CASE("identity gadget and register limits") {
        Gadget id = identity_gadget(5);
        std::mt19937_64 rng(8);
        StateVector in(5, random_state(rng, 32));
        GadgetRun run = apply_gadget_statevector(id, in);
        CHECK(run.branches.size() == 1);
        CHECK(run.branches[0].state.overlap(in) > 1 - 1e-14);
        CHECK_THROWS_AS(StateVector(21), TooManyQubits);
        Gadget big = identity_gadget(21);
        CHECK_THROWS_AS(apply_gadget_statevector(big, StateVector(4)), TooManyQubits);
    }

    TEST_CASE("reset_00 prepares logical |00> from any input") {
        Gadget g = build_gadget(GadgetKind::reset_00);
        std::mt19937_64 rng(21);
        StateVector target = embed(encoded_basis(0, 0), 5);
        for (int trial = 0; trial < 3; trial++) {
            StateVector garbage(5, random_state(rng, 32));
            GadgetRun run = apply_gadget_statevector(g, garbage);
            double total = 0.0;
            for (const auto &br : run.branches) {
                total += br.probability;
                CHECK(br.bits[0] == 0);
                CHECK(br.state.overlap(target) > 1 - 1e-10);
            }
            CHECK(std::abs(total - 1.0) < 1e-10);
        }
        // A flagged first attempt triggers the second one.
        StateVector in(5);
        GadgetRun retry = apply_gadget_statevector(g, in, {{10, PauliString::single(4, 'X')}});
        for (const auto &br : retry.branches) {
            CHECK(br.bits[0] == 1);
            CHECK(br.bits[1] == 0);
            CHECK(br.state.overlap(target) > 1 - 1e-10);
        }
        // Sampling mode returns one accepted branch.
        GadgetRun s = apply_gadget_statevector(g, StateVector(5, random_state(rng, 32)), {}, BranchMode::sample, 4);
        REQUIRE(s.branches.size() == 1);
        CHECK(s.branches[0].state.overlap(target) > 1 - 1e-10);
    }

    TEST_CASE("logical Z measurements") {
        for (GadgetKind kind : {GadgetKind::meas_z1, GadgetKind::meas_z2}) {
            Gadget g = build_gadget(kind);
            for (int a = 0; a < 2; a++) {
                for (int b = 0; b < 2; b++) {
                    GadgetRun run = apply_gadget_statevector(g, embed(encoded_basis(a, b), 6));
                    REQUIRE(run.branches.size() == 1);
                    const auto &bits = run.branches[0].bits;
                    int expect = kind == GadgetKind::meas_z1 ? a : b;
                    CHECK(bits[0] == expect);
                    CHECK(bits[1] == expect);
                    CHECK(bits[2] == 0);
                    CHECK(bits[3] == 0);
                }
            }
        }
    }

    TEST_CASE("intra-block rotations implement logical CR_x") {
        for (double theta : {0.3, 3 * M_PI / 4, M_PI, -1.1}) {
            Mat c2 = to_eigen(logical_matrix(build_gadget(GadgetKind::crx_intra, theta, 2)));
            CHECK((c2 - controlled_rx(2, 1, 0, theta)).norm() < 1e-10);
            Mat c1 = to_eigen(logical_matrix(build_gadget(GadgetKind::crx_intra, theta, 1)));
            CHECK((c1 - controlled_rx(2, 0, 1, theta)).norm() < 1e-10);
        }
    }

    TEST_CASE("inter-block gadget implements the paired rotation") {
        for (double theta : {0.3, 3 * M_PI / 4, M_PI}) {
            Mat g = to_eigen(logical_matrix(build_gadget(GadgetKind::crx_inter, theta)));
            // B1-controlled rotation of A1 first, then A1-controlled of B1.
            Mat expect = controlled_rx(4, 0, 2, theta) * controlled_rx(4, 2, 0, theta);
            CHECK((g - expect).norm() < 1e-10);
        }
    }

    TEST_CASE("propagation examples") {
        Gadget inter = build_gadget(GadgetKind::crx_inter, M_PI);
        FaultOutcome o = propagate_pauli(inter, {-1, PauliString::single(4, 'Z'), -1, "entry"});
        CHECK(o.blocks[0].residual.same_letters(PauliString::parse("ZIZI")));
        CHECK(o.blocks[0].raw.kind == Classification::undetectable_logical);
        CHECK(o.blocks[0].raw.pattern.x1);
        CHECK(o.blocks[1].residual.same_letters(PauliString::parse("ZIII")));
        CHECK(o.blocks[1].raw.syn.any());
        CHECK(o.violation);

        Gadget sm = build_gadget(GadgetKind::stab_meas);
        FaultOutcome none = propagate_pauli(sm, {-1, PauliString{}, -1, "entry"});
        CHECK(none.classification == Classification::benign);
        CHECK(none.flips == std::vector<int>{0, 0});
        FaultOutcome x1 = propagate_pauli(sm, {-1, PauliString::single(0, 'X'), -1, "entry"});
        CHECK(x1.flips == std::vector<int>{1, 0});
        CHECK(x1.detected);
        CHECK_FALSE(x1.violation);
    }

    TEST_CASE("ft_check verdicts") {
        FtReport sm = ft_check(build_gadget(GadgetKind::stab_meas));
        CHECK(sm.fault_tolerant);
        CHECK(sm.violations == 0);
        CHECK(sm.total > 100);
        FtReport reset = ft_check(build_gadget(GadgetKind::reset_00));
        CHECK(reset.fault_tolerant);
        CHECK(ft_check(build_gadget(GadgetKind::meas_z1)).fault_tolerant);
        CHECK(ft_check(build_gadget(GadgetKind::meas_z2)).fault_tolerant);
        Gadget inter = build_gadget(GadgetKind::crx_inter, M_PI);
        FtReport ir = ft_check(inter);
        CHECK_FALSE(ir.fault_tolerant);
        CHECK(ir.violations >= 1);
        bool witness = false;
        for (const auto &w : ir.witnesses) {
            if (w.location.instruction == -1 && w.location.pauli.same_letters(PauliString::single(4, 'Z'))) {
                witness = true;
            }
        }
        CHECK(witness);
        CHECK(ir.to_json(inter)["witnesses"].size() == static_cast<std::size_t>(ir.violations));
        FtOptions xt;
        xt.measurement_crosstalk = true;
        Gadget sg = build_gadget(GadgetKind::stab_meas);
        CHECK(enumerate_faults(sg, xt).size() > enumerate_faults(sg).size());
    }

    TEST_CASE("propagation agrees with statevector fault injection") {
        std::vector<Gadget> gadgets = {
            build_gadget(GadgetKind::stab_meas),           build_gadget(GadgetKind::reset_00),
            build_gadget(GadgetKind::meas_z1),             build_gadget(GadgetKind::meas_z2),
            build_gadget(GadgetKind::crx_intra, M_PI, 1),  build_gadget(GadgetKind::crx_intra, M_PI, 2),
            build_gadget(GadgetKind::crx_inter, M_PI),     clifford_deform(memory_slot(2)),
        };
        std::vector<std::vector<FaultLocation>> faults;
        for (const auto &g : gadgets) {
            faults.push_back(enumerate_faults(g));
        }
        std::mt19937_64 rng(2026);
        int cases = 0;
        int classes_seen[4] = {0, 0, 0, 0};
        while (cases < 200) {
            std::size_t gi = rng() % gadgets.size();
            const Gadget &g = gadgets[gi];
            const FaultLocation &f = faults[gi][rng() % faults[gi].size()];
            FaultOutcome pred = propagate_pauli(g, f);
            bool touches_condition = false;
            for (int b : g.condition_bits()) {
                touches_condition = touches_condition || pred.flips[b];
            }
            if (touches_condition) {
                continue;
            }
            cases++;
            StateVector in = random_encoded(g, rng);
            GadgetRun ideal = apply_gadget_statevector(g, in);
            GadgetRun faulty = apply_gadget_statevector(g, in, {{f.instruction, f.pauli, f.flip_bit}});
            for (const auto &br : faulty.branches) {
                if (br.probability < 1e-9) {
                    continue;
                }
                std::vector<int> want = br.bits;
                for (std::size_t b = 0; b < want.size(); b++) {
                    if (want[b] >= 0) {
                        want[b] ^= pred.flips[b];
                    }
                }
                const Branch *match = nullptr;
                for (const auto &ib : ideal.branches) {
                    if (ib.bits == want && ib.probability > 1e-9) {
                        match = &ib;
                    }
                }
                REQUIRE(match != nullptr);
                for (std::size_t b = 0; b < g.blocks.size(); b++) {
                    const PauliString &res = pred.blocks[b].residual;
                    PauliString ops[6] = {logical_z1(), logical_z2(), logical_x1(),
                                          logical_x2(), stabilizer_x(), stabilizer_z()};
                    int measurable = 0;
                    int sv_pattern = 0;
                    Syndrome sv_syn;
                    for (int k = 0; k < 6; k++) {
                        PauliString full = on_block(ops[k], g.blocks[b]);
                        double ei = match->state.expectation(full);
                        double ef = br.state.expectation(full);
                        double sign = res.commutes_with(ops[k]) ? 1.0 : -1.0;
                        CHECK(std::abs(ef - sign * ei) < 1e-8);
                        bool flipped = std::abs(ei) > 0.05 && std::abs(ef + ei) < 1e-6;
                        if (k < 4) {
                            measurable |= (std::abs(ei) > 0.05) << k;
                            sv_pattern |= flipped << k;
                        } else if (k == 4) {
                            sv_syn.s_x = flipped;
                        } else {
                            sv_syn.s_z = flipped;
                        }
                    }
                    int mask = g.output_pattern_mask[b] & measurable;
                    PauliClass pc = classify_pauli(res, mask);
                    CHECK(pc.syn == sv_syn);
                    CHECK(pc.pattern.bits() == (sv_pattern & mask));
                    classes_seen[static_cast<int>(pc.kind)]++;
                }
            }
        }
        CHECK(classes_seen[static_cast<int>(Classification::benign)] > 0);
        CHECK(classes_seen[static_cast<int>(Classification::detectable_logical)] > 0);
        CHECK(classes_seen[static_cast<int>(Classification::undetectable_logical)] > 0);
    }

    TEST_CASE("clifford deformation") {
        CHECK(clifford_deform(PauliString::parse("IIZI")).same_letters(PauliString::parse("IIXI")));
        CHECK(clifford_deform(PauliString::parse("IIIZ")).same_letters(PauliString::parse("IIIY")));
        CHECK(clifford_deform(PauliString::parse("ZIII")) == PauliString::parse("ZIII"));
        CHECK(clifford_deform(PauliString::parse("IZII")) == PauliString::parse("IZII"));
        CHECK(count_double_z_logical(false) == 6);
        CHECK(count_double_z_logical(true) == 1);
        CHECK(count_double_z_logical(true, 0b0000) == 6);

        // Deformed memory: noiseless identity, and a Z during the slot acts
        // as the deformed Pauli on the logical frame.
        Gadget mem = clifford_deform(memory_slot(1));
        std::mt19937_64 rng(4);
        StateVector in = random_encoded(mem, rng);
        GadgetRun clean = apply_gadget_statevector(mem, in);
        CHECK(clean.branches[0].state.overlap(in) > 1 - 1e-12);
        for (int q = 0; q < 4; q++) {
            int idle_at = -1;
            for (std::size_t k = 0; k < mem.ops.size(); k++) {
                if (mem.ops[k].op == Op::idle && mem.ops[k].q0 == q) {
                    idle_at = static_cast<int>(k);
                }
            }
            REQUIRE(idle_at >= 0);
            GadgetRun hit = apply_gadget_statevector(mem, in, {{idle_at, PauliString::single(q, 'Z')}});
            StateVector expect = in;
            expect.apply_pauli(clifford_deform(PauliString::single(q, 'Z')));
            CHECK(hit.branches[0].state.overlap(expect) > 1 - 1e-12);
        }
    }

    TEST_CASE("decoherence-free relabeling") {
        for (double theta : {0.0, 0.17, 1.3}) {
            cplx ghz = dfs_phase(0, 0, theta);
            CHECK(std::abs(ghz - std::exp(cplx(0.0, 8 * theta))) < 1e-12);
            CHECK(std::abs(dfs_phase(0, 1, theta) - 1.0) < 1e-12);
            CHECK(std::abs(dfs_phase(1, 0, theta) - 1.0) < 1e-12);
            CHECK(std::abs(dfs_phase(1, 1, theta) - 1.0) < 1e-12);
            CHECK(std::abs(dfs_phase(1, 1, theta, true) - ghz) < 1e-12);
            CHECK(std::abs(dfs_phase(0, 0, theta, true) - 1.0) < 1e-12);
        }
        CHECK(relabel_to_old(1, 1) == std::array<int, 2>{0, 0});
        // X2 X3 maps old |00> to old |11>, i.e. new |00>.
        StateVector s(4, encoded_basis(0, 0));
        s.apply_pauli(PauliString::parse("IXXI"));
        CHECK(s.overlap(StateVector(4, encoded_basis(1, 1))) > 1 - 1e-12);
        Gadget reset = dfs_transform(build_gadget(GadgetKind::reset_00));
        GadgetRun run = apply_gadget_statevector(reset, StateVector(5));
        for (const auto &br : run.branches) {
            CHECK(br.state.overlap(embed(encoded_basis(1, 1), 5)) > 1 - 1e-10);
        }
        Gadget m = dfs_transform(build_gadget(GadgetKind::meas_z1));
        CHECK(m.observables[0].inverted);
    }

    TEST_CASE("dynamical decoupling insertion") {
        for (int a = 0; a < 2; a++) {
            for (int b = 0; b < 2; b++) {
                StateVector s(4, encoded_basis(a, b));
                StateVector x = s;
                x.apply_pauli(PauliString::parse("XXXX"));
                CHECK(x.overlap(s) > 1 - 1e-12);
            }
        }
        Gadget id = identity_gadget(4);
        Gadget twice = insert_dd(id, {0, 0});
        CHECK(twice.ops.size() == 8);
        CHECK(twice.ops[0].dd_sign == -twice.ops[4].dd_sign);
        std::mt19937_64 rng(9);
        StateVector any(4, random_state(rng, 16));
        GadgetRun r = apply_gadget_statevector(twice, any);
        CHECK(r.branches[0].state.overlap(any) > 1 - 1e-12);

        Gadget body = concat({build_gadget(GadgetKind::crx_intra, 0.7, 2), build_gadget(GadgetKind::crx_intra, 0.7, 1),
                              build_gadget(GadgetKind::crx_intra, 1.9, 2)});
        REQUIRE(body.slice_boundaries.size() == 2);
        std::vector<int> cuts = {0};
        cuts.insert(cuts.end(), body.slice_boundaries.begin(), body.slice_boundaries.end());
        cuts.push_back(static_cast<int>(body.ops.size()));
        Gadget dd = insert_dd(body, cuts);
        CHECK(dd.ops.size() == body.ops.size() + 16);
        for (int trial = 0; trial < 5; trial++) {
            StateVector in = random_encoded(body, rng);
            StateVector out_plain = apply_gadget_statevector(body, in).branches[0].state;
            StateVector out_dd = apply_gadget_statevector(dd, in).branches[0].state;
            CHECK(out_plain.overlap(out_dd) > 1 - 1e-10);
        }
        CHECK_THROWS_AS(insert_dd(body, {99}), InvalidParams);
    }
}
