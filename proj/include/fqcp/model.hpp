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
#include <string>
#include <vector>

#include "json.hpp"

namespace fqcp {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDefaultTheta = 3 * kPi / 4;

struct ModelParams {
    double theta = kDefaultTheta;
    double p = 0.2;
    int t_max = 0;
    int origin = 0;

    /// Throws InvalidParams.
    void validate() const;
};

/// Inclusive interval of lattice sites.
struct SiteInterval {
    int lo = 0;
    int hi = 0;

    int width() const {
        return hi - lo + 1;
    }
    bool contains(int site) const {
        return lo <= site && site <= hi;
    }
    bool operator==(const SiteInterval &other) const = default;
};

struct Gate {
    int control;
    int target;
    bool operator==(const Gate &other) const = default;
};

/// Two-qubit reset on the aligned pair (2*block, 2*block+1).
///
/// `live` marks which of the two sites can be non-zero at this point. A site
/// that was never reached is exactly |0>, so resetting only the live member
/// is the same channel.
struct ResetOp {
    int block;
    int slot;
    std::array<bool, 2> live;

    int site(int k) const {
        return 2 * block + k;
    }
};

struct Period {
    std::array<std::vector<Gate>, 4> layers;
    std::vector<ResetOp> resets;
};

/// Space-time coordinate of a reset slot (block r, 1-based period t).
struct SpacetimePoint {
    int r;
    int t;
    bool operator==(const SpacetimePoint &other) const = default;
    auto operator<=>(const SpacetimePoint &other) const {
        if (auto c = t <=> other.t; c != 0) {
            return c;
        }
        return r <=> other.r;
    }
};

struct CircuitSpec {
    ModelParams params;
    std::vector<Period> periods;
    SiteInterval site_range;
    /// reachable[t] = sites that can be active after t periods (t = 0..t_max).
    std::vector<SiteInterval> reachable;
    /// Indexed by ResetOp::slot.
    std::vector<SpacetimePoint> slots;

    int t_max() const {
        return static_cast<int>(periods.size());
    }
    std::size_t gate_count() const;
    nlohmann::json to_json() const;
};

/// Target-flip probability in the fully dephased limit: sin^2(theta/2).
double flip_prob(double theta);

/// Sites reachable from `origin` after t periods of the four-layer layout.
SiteInterval causal_cone(int t, int origin = 0);

CircuitSpec build_circuit(const ModelParams &params);

/// Reset-pair index of a site (floor division by 2).
inline int block_of(int site) {
    return site >= 0 ? site / 2 : -((1 - site) / 2);
}

}  // namespace fqcp
