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
#include <map>
#include <set>

#include "doctest.h"
#include "fqcp/density.hpp"
#include "fqcp/errors.hpp"

using namespace fqcp;
using namespace fqcp::dm;

namespace {

Eigen::MatrixXcd to_eigen(const DensityWindow &w) {
    Eigen::MatrixXcd m(w.dim(), w.dim());
    for (std::size_t i = 0; i < w.dim(); i++)
        for (std::size_t j = 0; j < w.dim(); j++) m(i, j) = w.at(i, j);
    return m;
}

// Full-cone window after running the canonical program with the fast kernels.
DensityWindow full_window(const ModelParams &params, int stop_period) {
    auto c = build_circuit(params);
    auto prog = canonical_program(c);
    std::set<int> sites;
    for (const auto &ins : prog) {
        if (ins.kind == OpKind::gate || ins.kind == OpKind::reset) {
            sites.insert(ins.a);
            if (ins.has_b()) sites.insert(ins.b);
        }
    }
    sites.insert(params.origin);
    DensityWindow w;
    for (int s : sites) w.admit(s, s == params.origin);
    for (const auto &ins : prog) {
        if (ins.period > stop_period) break;
        if (ins.kind == OpKind::gate) w.apply_crx(ins.a, ins.b, params.theta);
        if (ins.kind == OpKind::reset) {
            if (ins.has_b()) w.apply_reset(ins.a, ins.b, params.p);
            else w.apply_reset(ins.a, params.p);
        }
    }
    return w;
}

int closure_lower_bound(const CircuitSpec &c) {
    auto prog = canonical_program(c);
    auto sites = [](const Instruction &i) {
        std::vector<int> v{i.a};
        if (i.has_b()) v.push_back(i.b);
        return v;
    };
    std::vector<std::vector<std::size_t>> deps(prog.size());
    std::map<int, std::size_t> last;
    for (std::size_t i = 0; i < prog.size(); i++) {
        for (int s : sites(prog[i])) {
            if (last.count(s)) deps[i].push_back(last[s]);
            last[s] = i;
        }
    }
    int best = 1 << 30;
    for (auto [site, li] : last) {
        std::set<std::size_t> seen{li};
        std::vector<std::size_t> stack{li};
        std::set<int> touched;
        while (!stack.empty()) {
            auto i = stack.back();
            stack.pop_back();
            for (int x : sites(prog[i])) touched.insert(x);
            for (auto d : deps[i])
                if (seen.insert(d).second) stack.push_back(d);
        }
        best = std::min(best, int(touched.size()));
    }
    return best;
}

}  // namespace

TEST_SUITE("dm") {
    TEST_CASE("identity dynamics keep the seed in place") {
        for (int t : {0, 1, 4}) {
            auto s = simulate({0.0, 0.0, t, 0});
            for (int tt = 0; tt <= t; tt++) {
                CHECK(s.n_right[tt] == doctest::Approx(1).epsilon(1e-12));
                for (int r = s.sites.lo; r <= s.sites.hi; r++) {
                    CHECK(s.density_at(r, tt) == doctest::Approx(r == 0 ? 1.0 : 0.0).epsilon(1e-12));
                }
            }
        }
    }

    TEST_CASE("full reset rate empties the cone") {
        auto s = simulate({kDefaultTheta, 1.0, 4, 0});
        for (int t = 1; t <= 4; t++) CHECK(std::abs(s.n_right[t]) < 1e-12);
        auto b = simulate_bruteforce({kDefaultTheta, 1.0, 2, 0});
        for (int t = 1; t <= 2; t++) CHECK(std::abs(b.n_right[t]) < 1e-12);
    }

    TEST_CASE("brute force basics") {
        auto b0 = simulate_bruteforce({kDefaultTheta, 0.2, 0, 0});
        CHECK(b0.n_right[0] == doctest::Approx(1));
        auto b1 = simulate_bruteforce({kPi, 0.0, 1, 0});
        for (int r = b1.sites.lo; r <= b1.sites.hi; r++) {
            double d = b1.density_at(r, 1);
            CHECK(std::min(std::abs(d), std::abs(d - 1)) < 1e-10);
        }
        SimOptions small;
        small.live_cap = 6;
        CHECK_THROWS_AS(simulate_bruteforce({kDefaultTheta, 0.2, 3, 0}, small), WindowTooLarge);
        CHECK_THROWS_AS(simulate({kDefaultTheta, 0.2, 6, 0}, small), WindowTooLarge);
    }

    TEST_CASE("reuse engine matches brute force") {
        for (double theta : {0.7, kDefaultTheta}) {
            for (double p : {0.0, 0.2}) {
                for (int t : {1, 2}) {
                    ModelParams params{theta, p, t, 0};
                    auto a = simulate(params);
                    auto b = simulate_bruteforce(params);
                    for (int tt = 0; tt <= t; tt++) {
                        for (int r = a.sites.lo; r <= a.sites.hi; r++) {
                            CHECK(std::abs(a.density_at(r, tt) - b.density_at(r, tt)) < 1e-8);
                        }
                    }
                }
            }
        }
    }

    TEST_CASE("fast kernels match generic unitary and Kraus application") {
        DensityWindow a, b;
        for (int s : {0, 1, 2}) {
            a.admit(s, s == 0);
            b.admit(s, s == 0);
        }
        a.apply_crx(0, 1, 1.1);
        b.apply_unitary2(0, 1, crx_matrix(1.1));
        a.apply_crx(1, 2, 2.0);
        b.apply_unitary2(1, 2, crx_matrix(2.0));
        a.apply_crx(2, 0, 0.4);
        b.apply_unitary2(2, 0, crx_matrix(0.4));
        for (std::size_t i = 0; i < a.dim(); i++)
            for (std::size_t j = 0; j < a.dim(); j++) CHECK(std::abs(a.at(i, j) - b.at(i, j)) < 1e-13);
        // Reset as an explicit Kraus sum.
        const double p = 0.3;
        std::vector<std::array<std::array<cplx, 4>, 4>> ks;
        std::array<std::array<cplx, 4>, 4> keep{};
        for (int k = 0; k < 4; k++) keep[k][k] = std::sqrt(1 - p);
        ks.push_back(keep);
        for (int k = 0; k < 4; k++) {
            std::array<std::array<cplx, 4>, 4> jump{};
            jump[0][k] = std::sqrt(p);
            ks.push_back(jump);
        }
        a.apply_reset(2, 1, p);
        b.apply_kraus2(2, 1, ks);
        for (std::size_t i = 0; i < a.dim(); i++)
            for (std::size_t j = 0; j < a.dim(); j++) CHECK(std::abs(a.at(i, j) - b.at(i, j)) < 1e-13);
    }

    TEST_CASE("window invariants: trace, hermiticity, positivity, purity") {
        for (double p : {0.0, 0.25}) {
            ModelParams params{kDefaultTheta, p, 2, 0};
            for (int stop = 0; stop <= 2; stop++) {
                DensityWindow w = full_window(params, stop);
                REQUIRE(w.width() <= 10);
                CHECK(std::abs(w.trace() - cplx(1)) < 1e-10);
                CHECK(w.hermiticity_error() < 1e-10);
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(w));
                CHECK(es.eigenvalues().minCoeff() >= -1e-8);
                if (p == 0) CHECK(w.purity() == doctest::Approx(1).epsilon(1e-8));
            }
        }
    }

    TEST_CASE("dephasing a site before tracing it out changes nothing recorded") {
        DensityWindow w = full_window({kDefaultTheta, 0.2, 2, 0}, 2);
        for (int s : w.live_sites()) {
            DensityWindow a = w, b = w;
            b.dephase(s);
            CHECK(a.expect_n(s) == doctest::Approx(b.expect_n(s)).epsilon(1e-14));
            a.retire(s);
            b.retire(s);
            for (std::size_t i = 0; i < a.dim(); i++)
                for (std::size_t j = 0; j < a.dim(); j++) CHECK(std::abs(a.at(i, j) - b.at(i, j)) < 1e-14);
        }
    }

    TEST_CASE("admit and retire keep the remaining marginals") {
        DensityWindow w = full_window({kDefaultTheta, 0.2, 1, 0}, 1);
        std::map<int, double> before;
        for (int s : w.live_sites()) before[s] = w.expect_n(s);
        w.admit(100);
        CHECK(w.expect_n(100) == 0);
        int victim = w.live_sites().front();
        w.retire(victim);
        for (int s : w.live_sites()) {
            if (s != 100) CHECK(w.expect_n(s) == doctest::Approx(before[s]).epsilon(1e-14));
        }
    }

    TEST_CASE("reuse schedule structure and size") {
        auto s0 = build_reuse_schedule(build_circuit({kDefaultTheta, 0.2, 0, 0}));
        CHECK(s0.max_live == 1);
        int records = 0;
        for (const auto &ins : s0.instructions) {
            if (ins.kind == OpKind::record) {
                records++;
                CHECK(ins.a == 0);
            }
        }
        CHECK(records == 1);

        for (int t = 1; t <= 12; t++) {
            auto c = build_circuit({kDefaultTheta, 0.2, t, 0});
            auto s = build_reuse_schedule(c);
            int width = causal_cone(t).width();
            CHECK(s.max_live < width);
            CHECK(s.max_live <= width - t / 2);
            // No schedule can beat the smallest dependency closure of any
            // site's final instruction: all of its sites are live when that
            // site is the first one retired.
            CHECK(s.max_live == closure_lower_bound(c));

            // Every canonical instruction runs exactly once, per-site order is kept,
            // sites are live exactly between admit and retire.
            auto prog = canonical_program(c);
            std::map<int, std::vector<std::size_t>> per_site_canon;
            auto sites_of = [](const Instruction &ins) {
                std::vector<int> out{ins.a};
                if (ins.has_b()) out.push_back(ins.b);
                return out;
            };
            std::map<std::tuple<int, int, int, int>, std::size_t> index;
            for (std::size_t i = 0; i < prog.size(); i++) {
                index[{int(prog[i].kind), prog[i].period, prog[i].a, prog[i].b}] = i;
                for (int x : sites_of(prog[i])) per_site_canon[x].push_back(i);
            }
            std::set<int> live;
            std::set<std::size_t> done;
            std::map<int, std::vector<std::size_t>> per_site_run;
            for (const auto &ins : s.instructions) {
                if (ins.kind == OpKind::admit) {
                    CHECK(live.insert(ins.a).second);
                } else if (ins.kind == OpKind::retire) {
                    CHECK(live.erase(ins.a) == 1);
                    CHECK(per_site_run[ins.a].size() == per_site_canon[ins.a].size());
                } else {
                    auto it = index.find({int(ins.kind), ins.period, ins.a, ins.b});
                    REQUIRE(it != index.end());
                    CHECK(done.insert(it->second).second);
                    for (int x : sites_of(ins)) {
                        CHECK(live.count(x));
                        per_site_run[x].push_back(it->second);
                    }
                }
            }
            CHECK(done.size() == prog.size());
            CHECK(live.empty());
            CHECK(per_site_run == per_site_canon);
        }
    }

    TEST_CASE("schedule json report") {
        auto s = build_reuse_schedule(build_circuit({kDefaultTheta, 0.2, 2, 0}));
        auto j = s.to_json();
        CHECK(j["max_live"] == s.max_live);
        CHECK(j["instructions"].size() == s.instructions.size());
    }
}
