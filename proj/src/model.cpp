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

#include "fqcp/model.hpp"

#include <algorithm>
#include <cmath>

#include "fqcp/errors.hpp"

namespace fqcp {

namespace {

// Layer k acts on pairs (a, a+1) with a = 2j + offset[k]; control is on the
// left site for layers 0 and 2, on the right site for layers 1 and 3.
constexpr std::array<int, 4> kPairOffset = {0, 0, 1, 1};
constexpr std::array<bool, 4> kControlLeft = {true, false, true, false};

int floor_to_parity(int site, int parity) {
    int m = ((site % 2) + 2) % 2;
    return m == parity ? site : site - 1;
}

std::vector<Gate> layer_gates(int layer, SiteInterval &reach) {
    std::vector<Gate> gates;
    int offset = kPairOffset[layer];
    int first = floor_to_parity(reach.lo, offset);
    SiteInterval next = reach;
    for (int a = first; a <= reach.hi; a += 2) {
        int control = kControlLeft[layer] ? a : a + 1;
        int target = kControlLeft[layer] ? a + 1 : a;
        if (!reach.contains(control)) {
            continue;
        }
        gates.push_back({control, target});
        next.lo = std::min(next.lo, target);
        next.hi = std::max(next.hi, target);
    }
    reach = next;
    return gates;
}

}  // namespace

void ModelParams::validate() const {
    if (!std::isfinite(theta)) {
        throw InvalidParams("theta must be finite");
    }
    if (!(p >= 0 && p <= 1)) {
        throw InvalidParams("reset probability p must lie in [0, 1], got " + std::to_string(p));
    }
    if (t_max < 0) {
        throw InvalidParams("t_max must be non-negative, got " + std::to_string(t_max));
    }
}

double flip_prob(double theta) {
    double s = std::sin(theta / 2);
    return s * s;
}

SiteInterval causal_cone(int t, int origin) {
    SiteInterval reach{origin, origin};
    for (int step = 0; step < t; step++) {
        for (int layer = 0; layer < 4; layer++) {
            layer_gates(layer, reach);
        }
    }
    return reach;
}

CircuitSpec build_circuit(const ModelParams &params) {
    params.validate();
    CircuitSpec c;
    c.params = params;
    SiteInterval reach{params.origin, params.origin};
    c.reachable.push_back(reach);
    for (int t = 1; t <= params.t_max; t++) {
        Period period;
        for (int layer = 0; layer < 4; layer++) {
            period.layers[layer] = layer_gates(layer, reach);
        }
        for (int b = block_of(reach.lo); b <= block_of(reach.hi); b++) {
            ResetOp op{b, static_cast<int>(c.slots.size()), {reach.contains(2 * b), reach.contains(2 * b + 1)}};
            period.resets.push_back(op);
            c.slots.push_back({b, t});
        }
        c.periods.push_back(std::move(period));
        c.reachable.push_back(reach);
    }
    c.site_range = {2 * block_of(reach.lo), 2 * block_of(reach.hi) + 1};
    return c;
}

std::size_t CircuitSpec::gate_count() const {
    std::size_t n = 0;
    for (const auto &period : periods) {
        for (const auto &layer : period.layers) {
            n += layer.size();
        }
    }
    return n;
}

nlohmann::json CircuitSpec::to_json() const {
    nlohmann::json j;
    j["theta"] = params.theta;
    j["p"] = params.p;
    j["t_max"] = params.t_max;
    j["origin"] = params.origin;
    j["site_range"] = {site_range.lo, site_range.hi};
    auto &jp = j["periods"] = nlohmann::json::array();
    for (const auto &period : periods) {
        nlohmann::json entry;
        auto &layers = entry["layers"] = nlohmann::json::array();
        for (const auto &layer : period.layers) {
            auto jl = nlohmann::json::array();
            for (const auto &g : layer) {
                jl.push_back({g.control, g.target});
            }
            layers.push_back(jl);
        }
        auto &resets = entry["resets"] = nlohmann::json::array();
        for (const auto &r : period.resets) {
            resets.push_back({{"pair", {r.site(0), r.site(1)}}, {"slot", r.slot}, {"live", {r.live[0], r.live[1]}}});
        }
        jp.push_back(entry);
    }
    return j;
}

}  // namespace fqcp
