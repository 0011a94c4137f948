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


#include <cmath>

#include "doctest.h"
#include "fqcp/code422.hpp"
#include "fqcp/density.hpp"
#include "fqcp/errors.hpp"
#include "fqcp/fault.hpp"
#include "fqcp/physical.hpp"

using namespace fqcp;
using namespace fqcp::physical;
using code422::cplx;

namespace {

CircuitSpec circuit(int t_max, double p = 0.2, int origin = 0) {
    return build_circuit({kDefaultTheta, p, t_max, origin});
}

code422::StateVector product_input(const std::vector<cplx> &a, const std::vector<cplx> &b) {
    auto ea = code422::encode_state(a);
    auto eb = code422::encode_state(b);
    std::vector<cplx> amps(256);
    for (int i = 0; i < 16; i++) {
        for (int j = 0; j < 16; j++) {
            amps[i | (j << 4)] = ea[i] * eb[j];
        }
    }
    return code422::StateVector(8, amps);
}

}  // namespace

TEST_SUITE("physical") {
    TEST_CASE("register layout and qubit limit") {
        auto l = layout_for(circuit(1));
        CHECK(l.num_blocks == 3);
        CHECK(l.num_qubits() == 14);
        CHECK(l.block_qubits(0) == std::array<int, 4>{4, 5, 6, 7});
        CHECK_THROWS_AS(l.block_qubits(5), InvalidParams);
        CHECK_THROWS_AS(layout_for(circuit(2)), TooManyQubits);
        CHECK_THROWS_AS(make_physical_backend({})->check(circuit(2)), TooManyQubits);
        PhysicalNoise bad;
        bad.p2 = 1.5;
        CHECK_THROWS_AS(make_physical_backend(bad), InvalidParams);
    }

    TEST_CASE("initial state is the encoded origin excitation") {
        for (int origin : {0, 1}) {
            auto c = circuit(1, 0.2, origin);
            auto l = layout_for(c);
            auto s = initial_state(c, l);
            CHECK(s.norm2() == doctest::Approx(1.0).epsilon(1e-12));
            for (int site = c.site_range.lo; site <= c.site_range.hi; site++) {
                CHECK(site_occupation(s, l, site) == doctest::Approx(site == origin ? 1.0 : 0.0).epsilon(1e-12));
            }
            for (int b = l.block_lo; b < l.block_lo + l.num_blocks; b++) {
                auto q = l.block_qubits(b);
                PauliString sx, sz;
                for (int j : q) {
                    sx *= PauliString::single(j, 'X');
                    sz *= PauliString::single(j, 'Z');
                }
                CHECK(s.expectation(sx) == doctest::Approx(1.0).epsilon(1e-12));
                CHECK(s.expectation(sz) == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }

    TEST_CASE("noiseless exact series equals the density-matrix engine") {
        for (double p : {0.0, 0.2, 0.5, 1.0}) {
            for (int origin : {0, 1}) {
                ModelParams mp{kDefaultTheta, p, 1, origin};
                auto c = build_circuit(mp);
                auto ex = exact_series(c, adaptive::RateField::uniform(c, p));
                auto dmr = dm::simulate(mp);
                for (int t = 0; t <= 1; t++) {
                    for (int r = c.site_range.lo; r <= c.site_range.hi; r++) {
                        CHECK(std::abs(ex.density_at(r, t) - dmr.density_at(r, t)) <= 1e-8);
                    }
                    CHECK(std::abs(ex.n_right[t] - dmr.n_right[t]) <= 1e-8);
                }
            }
        }
        ModelParams mp{kPi / 3, 0.1, 1, 0};
        auto c = build_circuit(mp);
        auto ex = exact_series(c, adaptive::RateField::uniform(c, 0.1));
        auto dmr = dm::simulate(mp);
        CHECK(std::abs(ex.n_right[1] - dmr.n_right[1]) <= 1e-8);
        CHECK_THROWS_AS(exact_series(circuit(2), adaptive::RateField::uniform(circuit(2), 0.2)), InvalidParams);
    }

    TEST_CASE("sampled noiseless trajectories agree with the density matrix") {
        auto c = circuit(1);
        const std::uint64_t m = 3000;
        auto be = make_physical_backend({});
        auto recs = adaptive::run_main(c, *be, adaptive::RateField::uniform(c, 0.2), m, 3);
        for (const auto &r : recs) {
            for (const auto &e : r.events) CHECK(e.kind == adaptive::EventKind::injected);
        }
        auto s = adaptive::record_series(recs, c);
        auto dmr = dm::simulate({kDefaultTheta, 0.2, 1, 0});
        for (int r = c.site_range.lo; r <= c.site_range.hi; r++) {
            double e = dmr.density_at(r, 1);
            CHECK(std::abs(s.density_at(r, 1) - e) <= 4 * std::sqrt(e * (1 - e) / m) + 1e-12);
        }
        auto again = adaptive::run_main(c, *be, adaptive::RateField::uniform(c, 0.2), 50, 3);
        for (std::size_t k = 0; k < 50; k++) CHECK(again[k] == recs[k]);
    }

    TEST_CASE("gate noise produces stabilizer detections") {
        auto c = circuit(1);
        PhysicalNoise n;
        n.p2 = 0.05;
        auto recs = adaptive::run_calibration(c, *make_physical_backend(n), 400, 5);
        CHECK(recs.max() > 0.0);
        CHECK(recs.max() < 0.9);
    }

    TEST_CASE("fault sampling extremes") {
        auto g = code422::build_gadget(code422::GadgetKind::stab_meas);
        CounterRng rng(1, 0);
        CHECK(sample_faults(g, {}, rng).empty());
        PhysicalNoise all{1.0, 1.0, 0.0, 1.0, {}};
        auto f = sample_faults(g, all, rng);
        CHECK(f.size() == g.ops.size());
        for (const auto &x : f) CHECK((x.flip_bit >= 0 || !x.pauli.is_identity()));
    }

    TEST_CASE("resource report counts the gates a session executes") {
        ModelParams mp{kDefaultTheta, 0.2, 2, 0};
        auto rows = resource_report(mp);
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].logical_blocks == 3);
        CHECK(rows[0].qubits_without_reuse == 14);
        CHECK(rows[1].qubits_without_reuse == 22);
        CHECK(rows[1].qubits_with_reuse <= rows[1].qubits_without_reuse);
        CHECK(rows[0].logical_gates == circuit(1).gate_count());
        auto c = circuit(1);
        auto session = make_physical_backend({})->start(c, 1, 0);
        session->apply_gates(1);
        for (const auto &op : c.periods[0].resets) CHECK(session->detect(op, 1) == adaptive::EventKind::none);
        CHECK(session->two_qubit_gates() == rows[0].two_qubit_gates);
        session->reset_block(c.periods[0].resets[0], 1);
        CHECK(session->two_qubit_gates() == rows[0].two_qubit_gates + rows[0].reset_two_qubit_gates);
    }

    TEST_CASE("memory dephasing on one block flips the partner logical at the propagated rate") {
        auto g = code422::build_gadget(code422::GadgetKind::crx_inter, kPi);
        // A = |+>|0>, B = |-i>|0>: the ideal output has A1 in the +1 eigenstate of Y1 = Y X Z I.
        auto in = product_input({M_SQRT1_2, M_SQRT1_2, 0, 0}, {M_SQRT1_2, cplx(0, -M_SQRT1_2), 0, 0});
        const PauliString y1 = PauliString::parse("YXZI");
        auto ideal = code422::apply_gadget_statevector(g, in).branches.front().state;
        REQUIRE(ideal.expectation(y1) == doctest::Approx(1.0).epsilon(1e-10));

        const double q = 0.05;
        double predicted = 0.0;
        for (int mask = 0; mask < 16; mask++) {
            PauliString e;
            for (int j = 0; j < 4; j++) {
                if ((mask >> j) & 1) e *= PauliString::single(g.blocks[1][j], 'Z');
            }
            auto out = code422::propagate_pauli(g, {-1, e, -1, "entry"});
            const auto &res = out.blocks[0].residual;
            if (!res.commutes_with(y1) && !code422::syndrome(res).any()) {
                int k = __builtin_popcount(mask);
                predicted += std::pow(q, k) * std::pow(1 - q, 4 - k);
            }
        }
        CHECK(predicted == doctest::Approx(2 * q * (1 - q)).epsilon(1e-12));

        PhysicalNoise n;
        n.p_mem = q;
        n.memory_blocks = {1};
        const std::uint64_t m = 10000;
        std::uint64_t hits = 0;
        const PauliString sx = PauliString::parse("XXXX");
        const PauliString sz = PauliString::parse("ZZZZ");
        run_gadget_trajectories(g, in, n, m, 17, [&](std::uint64_t, const code422::Branch &br) {
            if (br.state.expectation(y1) < 0 && br.state.expectation(sx) > 0 && br.state.expectation(sz) > 0) hits++;
        });
        double rate = double(hits) / m;
        CHECK(std::abs(rate - predicted) <= 4 * std::sqrt(predicted * (1 - predicted) / m));
    }
}
