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
#include <random>
#include <sstream>

#include "doctest.h"
#include "fqcp/analysis.hpp"
#include "fqcp/errors.hpp"

using namespace fqcp;
using namespace fqcp::analysis;

TEST_SUITE("analysis") {
    TEST_CASE("power laws give their exponent") {
        std::map<int, double> o, c, scaled;
        for (int t = 1; t <= 400; t++) {
            o[t] = 2.0 * std::pow(t, 0.5);
            c[t] = 7.25;
            scaled[t] = 31.0 * o[t];
        }
        for (int dt : {1, 2, 60, 200}) {
            EffExpSeries s = effective_exponent(o, dt, 0.2);
            CHECK(s.values.size() == static_cast<std::size_t>(400 - dt));
            for (const auto &[t, d] : s.values) {
                CHECK(std::abs(d - 0.5) < 1e-12);
            }
            for (const auto &[t, d] : effective_exponent(c, dt).values) {
                CHECK(std::abs(d) < 1e-15);
            }
            EffExpSeries sc = effective_exponent(scaled, dt);
            for (const auto &[t, d] : sc.values) {
                CHECK(std::abs(d - s.values.at(t)) < 1e-12);
            }
        }
        CHECK(effective_exponent(o, 3).values.count(1));
        CHECK_FALSE(effective_exponent(o, 3).values.count(398));
    }

    TEST_CASE("nonpositive values are rejected") {
        std::map<int, double> o = {{1, 1.0}, {2, 0.0}, {3, 2.0}};
        try {
            effective_exponent(o, 1);
            FAIL("expected NonpositiveValue");
        } catch (const NonpositiveValue &e) {
            CHECK(e.t == 2);
        }
        CHECK_THROWS_AS(effective_exponent(o, 0), InvalidParams);
        // t = 0 is never an abscissa, so O(0) = 0 is fine.
        std::map<int, double> with_zero = {{0, 0.0}, {1, 1.0}, {2, 2.0}};
        CHECK(effective_exponent(with_zero, 1).values.size() == 1);
    }

    TEST_CASE("constructed crossing is recovered exactly") {
        const double theta = 0.3137;
        const double pstar = 0.2;
        std::map<double, EffExpSeries> curves;
        std::vector<int> times = {10, 20, 40, 80};
        for (double p : {0.15, 0.18, 0.21, 0.25}) {
            EffExpSeries s;
            s.p = p;
            for (int t : times) {
                double g = std::log(double(t));
                s.values[t] = theta + (p - pstar) * g;
            }
            curves[p] = s;
        }
        CrossingResult r = crossing_estimate(curves, times);
        CHECK(r.pairs.size() == 3);
        CHECK(std::abs(r.p_c - pstar) < 1e-12);
        CHECK(std::abs(r.delta_c - theta) < 1e-12);
        CHECK(r.p_scatter < 1e-12);
        // Relabeling times only changes which keys are read.
        std::map<double, EffExpSeries> relabeled;
        for (auto &[p, s] : curves) {
            EffExpSeries q = s;
            q.values.clear();
            for (int t : times) {
                q.values[t * 3 + 1] = s.values.at(t);
            }
            relabeled[p] = q;
        }
        CrossingResult r2 = crossing_estimate(relabeled, {31, 61, 121, 241});
        CHECK(std::abs(r2.p_c - r.p_c) < 1e-15);
        CHECK(r.to_json()["pairs"].size() == 3);
    }

    TEST_CASE("crossing errors") {
        std::map<double, EffExpSeries> curves;
        for (double p : {0.1, 0.2}) {
            EffExpSeries s;
            s.values = {{1, p}, {2, p + 0.1}};
            curves[p] = s;
        }
        CHECK_THROWS_AS(crossing_estimate(curves, {1, 2}), NoCrossing);
        CHECK_THROWS_AS(crossing_estimate(curves, {1}), InvalidParams);
        CHECK_THROWS_AS(crossing_estimate(curves, {1, 3}), InvalidParams);
        std::map<double, EffExpSeries> one = {{0.1, curves.at(0.1)}};
        CHECK_THROWS_AS(crossing_estimate(one, {1, 2}), InvalidParams);
    }

    TEST_CASE("bootstrap standard errors") {
        std::vector<double> flat(50, 3.5);
        CHECK(bootstrap_se(flat) == 0.0);
        std::mt19937_64 rng(99);
        std::normal_distribution<double> n(0.0, 1.0);
        std::vector<double> x(10000);
        for (auto &v : x) {
            v = n(rng);
        }
        double se = bootstrap_se(x, mean, 200, 7);
        CHECK(std::abs(se - 0.01) < 0.002);
        std::vector<double> ones(x.size(), 1.0);
        CHECK(bootstrap_se(x, ones, weighted_mean, 200, 7) == se);
        CHECK(bootstrap_se(x, mean, 200, 7) == se);
        CHECK_THROWS_AS(bootstrap_se(std::vector<double>{1.0}), TooFewSamples);
        std::ostringstream os;
        EffExpSeries s;
        s.values = {{1, 0.25}};
        write_effexp_csv(os, {{0.2, s}});
        CHECK(os.str() == "p,t,delta\n0.20000000000000001,1,0.25\n");
    }
}
