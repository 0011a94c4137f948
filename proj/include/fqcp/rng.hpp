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
#include <string_view>

namespace fqcp {

/// Philox4x32-10 block function. Pure: output depends only on (counter, key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer, used to spread user seeds over the key space.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives an independent seed for a named sub-component (e.g. "calibration").
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

/// Counter-based random stream keyed by (seed, stream id). The n-th draw of a
/// stream is a fixed function of (seed, stream, n), so results do not depend
/// on which thread runs a stream or in what order streams are run.
class CounterRng {
   public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint32_t next_u32() {
        if (lane_ == 4) {
            refill();
        }
        return buffer_[lane_++];
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        std::uint64_t hi = next_u32() >> 5;
        std::uint64_t lo = next_u32() >> 6;
        return static_cast<double>(hi * 67108864ULL + lo) * (1.0 / 9007199254740992.0);
    }

    /// True with probability threshold / 2^32. See `bernoulli_threshold`.
    bool bernoulli(std::uint64_t threshold) {
        return static_cast<std::uint64_t>(next_u32()) < threshold;
    }

    /// Number of 32-bit draws consumed so far.
    std::uint64_t draws() const {
        return block_ * 4 - (4 - lane_);
    }

   private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int lane_ = 4;
};

/// Integer threshold for `CounterRng::bernoulli`: round(p * 2^32), clamped.
std::uint64_t bernoulli_threshold(double p);

}  // namespace fqcp
