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

#include <cstdint>
#include <optional>
#include <vector>

#include "fqcp/model.hpp"
#include "fqcp/observables.hpp"
#include "fqcp/rng.hpp"

namespace fqcp::dephased {

/// One classical configuration over a site interval, packed 64 sites per word.
/// The interval must start on an even site so bit parity equals site parity.
class BitLattice {
   public:
    BitLattice() = default;
    explicit BitLattice(SiteInterval range);

    const SiteInterval &range() const {
        return range_;
    }
    bool get(int site) const;
    void set(int site, bool value);
    void flip(int site);
    void clear_block(int block);
    bool any() const;
    int count() const;
    /// Active sites with index >= site.
    int count_from(int site) const;
    std::vector<int> active_sites() const;

    std::vector<std::uint64_t> &words() {
        return words_;
    }
    const std::vector<std::uint64_t> &words() const {
        return words_;
    }
    bool operator==(const BitLattice &other) const = default;

   private:
    SiteInterval range_;
    std::vector<std::uint64_t> words_;
};

/// One random decision made while a shot ran. layer 0..3 are gate layers
/// (site = control), layer 4 is the reset layer (site = left site of pair).
struct Decision {
    int period;
    int layer;
    int site;
    bool fired;
    bool operator==(const Decision &other) const = default;
};

struct ShotOptions {
    /// Initially active sites; nullopt means just the origin.
    std::optional<std::vector<int>> initial_active;
    bool keep_history = false;
    bool keep_trace = false;
};

struct ShotResult {
    BitLattice final_state;
    /// n_right[t], t = 0..t_max
    std::vector<std::uint32_t> n_right;
    /// history[t] = configuration after period t (keep_history only).
    std::vector<BitLattice> history;
    std::vector<Decision> trace;
    /// First period after which the lattice was empty, or -1.
    int extinct_at = -1;
};

/// Applies the dephased rules of one period to a lattice. Shared by the
/// Monte Carlo driver and the adaptive synthetic backend.
class PeriodKernel {
   public:
    PeriodKernel(const CircuitSpec &circuit, double theta);

    /// Gate layers of `period` (1-based).
    void apply_gates(BitLattice &state, int period, CounterRng &rng, std::vector<Decision> *trace = nullptr) const;
    /// Reset layer with uniform probability p.
    void apply_resets(BitLattice &state, int period, std::uint64_t threshold, CounterRng &rng,
                      std::vector<Decision> *trace = nullptr) const;

   private:
    const CircuitSpec *circuit_;
    std::uint64_t flip_threshold_;
};

BitLattice initial_lattice(const CircuitSpec &circuit, const std::optional<std::vector<int>> &active);

ShotResult run_shot(const CircuitSpec &circuit, double theta, double p, std::uint64_t seed, std::uint64_t stream = 0,
                    const ShotOptions &options = {});

struct EnsembleOptions {
    int threads = 1;
    bool keep_per_shot = false;
    std::optional<std::vector<int>> initial_active;
};

/// Integer tally over shots [first_shot, first_shot + shots); shot s uses
/// the stream (base_seed, s), so disjoint ranges merge into the full run.
Tally run_tally(const CircuitSpec &circuit, double theta, double p, std::uint64_t shots, std::uint64_t base_seed,
                std::uint64_t first_shot = 0, const EnsembleOptions &options = {});

ObservableSeries run_ensemble(const CircuitSpec &circuit, double theta, double p, std::uint64_t shots,
                              std::uint64_t base_seed, const EnsembleOptions &options = {});

struct EnumerationOptions {
    std::uint64_t budget = 10'000'000;
    std::optional<std::vector<int>> initial_active;
};

/// Exact expectations by summing over every stochastic branch of the circuit.
/// Throws BudgetExceeded once more than `budget` branch evaluations are needed.
ObservableSeries exact_enumeration(const CircuitSpec &circuit, double theta, double p,
                                   const EnumerationOptions &options = {});

/// Walks the circuit's explicit gate and reset lists, consuming one recorded
/// decision wherever a shot would have drawn one. Returns the final state and
/// the probability of the decision path. Throws InvalidParams on mismatch.
std::pair<BitLattice, double> replay(const CircuitSpec &circuit, double theta, double p,
                                     const std::vector<Decision> &trace,
                                     const std::optional<std::vector<int>> &initial_active = std::nullopt);

}  // namespace fqcp::dephased
