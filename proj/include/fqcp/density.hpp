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

#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "fqcp/model.hpp"
#include "fqcp/observables.hpp"
#include "json.hpp"

namespace fqcp::dm {

using cplx = std::complex<double>;

/// Dense density matrix over the currently live sites. Bit k of a basis
/// index is the occupation of live_sites()[k]; storage is row-major.
class DensityWindow {
   public:
    DensityWindow();

    int width() const {
        return static_cast<int>(live_.size());
    }
    std::size_t dim() const {
        return dim_;
    }
    const std::vector<int> &live_sites() const {
        return live_;
    }
    bool is_live(int site) const;
    /// Bit position of a live site; throws if not live.
    int bit_of(int site) const;

    /// Adds a site as the new highest bit, in |0> (or |1> if `excited`).
    void admit(int site, bool excited = false);
    /// Partial trace over a site.
    void retire(int site);

    /// exp(-i theta |1><1|_c (x) X_t / 2) by an index-bit kernel.
    void apply_crx(int control, int target, double theta);
    /// rho -> (1-p) rho + p |00><00| (x) Tr_pair rho.
    void apply_reset(int a, int b, double p);
    /// Single-site version, used when the partner is known to be |0>.
    void apply_reset(int a, double p);
    /// Generic conjugation by a 4x4 unitary, u[row][col] in the basis
    /// |ab> with index = bit(a) + 2 bit(b).
    void apply_unitary2(int a, int b, const std::array<std::array<cplx, 4>, 4> &u);
    /// Sum of K rho K^dagger over 4x4 Kraus operators on (a, b).
    void apply_kraus2(int a, int b, const std::vector<std::array<std::array<cplx, 4>, 4>> &ks);
    /// Sum over 2x2 Kraus operators on one site.
    void apply_kraus1(int a, const std::vector<std::array<std::array<cplx, 2>, 2>> &ks);
    /// Removes coherences in the Z basis of one site.
    void dephase(int site);

    double expect_n(int site) const;
    cplx trace() const;
    double hermiticity_error() const;
    double purity() const;

    cplx &at(std::size_t row, std::size_t col) {
        return rho_[row * dim_ + col];
    }
    const cplx &at(std::size_t row, std::size_t col) const {
        return rho_[row * dim_ + col];
    }

   private:
    std::vector<int> live_;
    std::size_t dim_;
    std::vector<cplx> rho_;
};

enum class OpKind { admit, gate, reset, record, retire };

/// Marks an unused second operand (site indices can be negative).
constexpr int kNoSite = std::numeric_limits<int>::min();

/// One step of a window program. Gates use (a, b) = (control, target);
/// resets use a and, for pair resets, b; records and admit/retire use a.
/// `excited` is only meaningful for admit.
struct Instruction {
    OpKind kind;
    int period = 0;
    int a = 0;
    int b = kNoSite;
    bool excited = false;

    bool has_b() const {
        return b != kNoSite;
    }
    bool operator==(const Instruction &other) const = default;
};

struct ReuseSchedule {
    std::vector<Instruction> instructions;
    int max_live = 0;

    nlohmann::json to_json() const;
};

/// Gates by layer, then resets, then a record for every site touched so far,
/// period by period (no admit/retire). Period 0 records the origin.
std::vector<Instruction> canonical_program(const CircuitSpec &circuit);

/// Greedy sweep: repeatedly finish the lowest-index site that still has work
/// by running the dependency closure of its last instruction.
ReuseSchedule build_reuse_schedule(const CircuitSpec &circuit);

struct SimOptions {
    int live_cap = 13;
    /// Trace-drift tolerance checked after every instruction.
    double trace_tol = 1e-10;
    /// Also check hermiticity at every record step (costs one extra pass).
    bool check_hermiticity = false;
};

/// Runs a schedule on a window. Throws WindowTooLarge if it would exceed the
/// live cap, NumericalInvariant on trace drift.
ObservableSeries run_schedule(const CircuitSpec &circuit, const ReuseSchedule &schedule,
                              const SimOptions &options = {});

ObservableSeries simulate(const ModelParams &params, const SimOptions &options = {});

/// No reuse: every site admitted up front, channels applied through generic
/// unitary / Kraus code.
ObservableSeries simulate_bruteforce(const ModelParams &params, const SimOptions &options = {});

/// 4x4 matrix of the controlled rotation in the (control, target) basis used
/// by apply_unitary2 (control = bit 0).
std::array<std::array<cplx, 4>, 4> crx_matrix(double theta);

}  // namespace fqcp::dm
