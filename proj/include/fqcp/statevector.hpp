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
#include <complex>
#include <cstdint>
#include <vector>

#include "fqcp/gadget.hpp"
#include "fqcp/pauli.hpp"

namespace fqcp::code422 {

using cplx = std::complex<double>;
using Mat2 = std::array<std::array<cplx, 2>, 2>;
/// Basis index bit(a) + 2 bit(b).
using Mat4 = std::array<std::array<cplx, 4>, 4>;

constexpr int kMaxStateQubits = 20;

/// Pure state over n qubits; basis index bit j = qubit j.
class StateVector {
   public:
    explicit StateVector(int num_qubits);
    StateVector(int num_qubits, std::vector<cplx> amps);

    int num_qubits() const {
        return n_;
    }
    const std::vector<cplx> &amps() const {
        return amps_;
    }
    std::vector<cplx> &amps() {
        return amps_;
    }

    void apply_1q(int q, const Mat2 &u);
    void apply_2q(int a, int b, const Mat4 &u);
    void apply_pauli(const PauliString &p);
    /// <psi| P |psi> (real part; P Hermitian when its phase is real).
    double expectation(const PauliString &p) const;
    double norm2() const;
    double prob_one(int q) const;
    /// Projects qubit q onto `outcome` and renormalizes; returns the
    /// pre-projection probability.
    double collapse(int q, int outcome);
    void normalize();
    cplx inner(const StateVector &other) const;
    /// |<a|b>| for normalized states (1 means equal up to global phase).
    double overlap(const StateVector &other) const;

   private:
    int n_;
    std::vector<cplx> amps_;
};

/// Embeds a state on the first qubits into a larger register, remaining
/// qubits in |0>.
StateVector embed(const std::vector<cplx> &low, int num_qubits);

Mat2 gate_matrix(Op op, int dd_sign = 0);
/// exp(-i angle P(x)P / 2) for P = X (xx) or Z (zz).
Mat4 rotation_matrix(Op op, double angle);

/// Pauli inserted after instruction `location` (-1 = before the first).
/// Setting `flip_bit` flips that recorded measurement bit instead.
struct InjectedFault {
    int location = -1;
    PauliString pauli;
    int flip_bit = -1;
};

enum class BranchMode { enumerate, sample };

struct Branch {
    StateVector state;
    std::vector<int> bits;
    double probability = 1.0;
};

struct GadgetRun {
    std::vector<Branch> branches;
};

/// Exact execution. Enumerate mode follows every outcome with probability
/// above `min_prob`; sample mode draws outcomes from the seeded counter RNG
/// and returns one branch. Bits left unset read -1.
GadgetRun apply_gadget_statevector(const Gadget &g, const StateVector &input,
                                   const std::vector<InjectedFault> &faults = {},
                                   BranchMode mode = BranchMode::enumerate, std::uint64_t seed = 0,
                                   double min_prob = 1e-14);

/// 4x4 logical action <enc(x)| G |enc(y)> of a measurement-free single-block
/// gadget, or 16x16 for a two-block gadget (index bits: A1, A2, B1, B2).
std::vector<std::vector<cplx>> logical_matrix(const Gadget &g);

}  // namespace fqcp::code422
