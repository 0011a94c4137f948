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

#include "fqcp/density.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "fqcp/errors.hpp"

namespace fqcp::dm {

namespace {

using Mat4 = std::array<std::array<cplx, 4>, 4>;
using Mat2 = std::array<std::array<cplx, 2>, 2>;

// Spreads x so that zero bits appear at positions lo < hi.
inline std::size_t insert_two_zeros(std::size_t x, int lo, int hi) {
    std::size_t low_mask = (std::size_t{1} << lo) - 1;
    x = ((x & ~low_mask) << 1) | (x & low_mask);
    std::size_t high_mask = (std::size_t{1} << hi) - 1;
    return ((x & ~high_mask) << 1) | (x & high_mask);
}

inline std::size_t insert_zero(std::size_t x, int k) {
    std::size_t low_mask = (std::size_t{1} << k) - 1;
    return ((x & ~low_mask) << 1) | (x & low_mask);
}

template <std::size_t N>
std::array<std::array<cplx, N>, N> conj_sandwich(const std::array<std::array<cplx, N>, N> &k,
                                                 const std::array<std::array<cplx, N>, N> &m) {
    std::array<std::array<cplx, N>, N> km{};
    for (std::size_t i = 0; i < N; i++)
        for (std::size_t l = 0; l < N; l++) {
            if (k[i][l] == cplx(0)) continue;
            for (std::size_t j = 0; j < N; j++) km[i][j] += k[i][l] * m[l][j];
        }
    std::array<std::array<cplx, N>, N> out{};
    for (std::size_t i = 0; i < N; i++)
        for (std::size_t j = 0; j < N; j++)
            for (std::size_t l = 0; l < N; l++) out[i][j] += km[i][l] * std::conj(k[j][l]);
    return out;
}

std::vector<int> instruction_sites(const Instruction &ins) {
    if (ins.has_b()) {
        return {ins.a, ins.b};
    }
    return {ins.a};
}

}  // namespace

DensityWindow::DensityWindow() : dim_(1), rho_(1, cplx(1)) {
}

bool DensityWindow::is_live(int site) const {
    return std::find(live_.begin(), live_.end(), site) != live_.end();
}

int DensityWindow::bit_of(int site) const {
    auto it = std::find(live_.begin(), live_.end(), site);
    if (it == live_.end()) {
        throw InvalidParams("site " + std::to_string(site) + " is not live in the window");
    }
    return static_cast<int>(it - live_.begin());
}

void DensityWindow::admit(int site, bool excited) {
    if (is_live(site)) {
        throw InvalidParams("site " + std::to_string(site) + " admitted twice");
    }
    std::size_t nd = dim_ * 2;
    std::vector<cplx> next(nd * nd, cplx(0));
    std::size_t off = excited ? dim_ : 0;
    for (std::size_t i = 0; i < dim_; i++) {
        std::copy(&rho_[i * dim_], &rho_[i * dim_] + dim_, &next[(i + off) * nd + off]);
    }
    rho_ = std::move(next);
    dim_ = nd;
    live_.push_back(site);
}

void DensityWindow::retire(int site) {
    int k = bit_of(site);
    std::size_t nd = dim_ / 2;
    std::size_t m = std::size_t{1} << k;
    std::vector<cplx> next(nd * nd);
    for (std::size_t i = 0; i < nd; i++) {
        std::size_t i0 = insert_zero(i, k);
        for (std::size_t j = 0; j < nd; j++) {
            std::size_t j0 = insert_zero(j, k);
            next[i * nd + j] = at(i0, j0) + at(i0 | m, j0 | m);
        }
    }
    rho_ = std::move(next);
    dim_ = nd;
    live_.erase(live_.begin() + k);
}

void DensityWindow::apply_crx(int control, int target, double theta) {
    int kc = bit_of(control);
    int kt = bit_of(target);
    std::size_t mc = std::size_t{1} << kc;
    std::size_t mt = std::size_t{1} << kt;
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const cplx mis(0, -s);
    const cplx pis(0, s);
    const std::size_t quarter = dim_ / 4;
    const int lo = std::min(kc, kt);
    const int hi = std::max(kc, kt);
    // Left multiplication: mix rows i0 = (c=1,t=0) and i1 = (c=1,t=1).
    for (std::size_t x = 0; x < quarter; x++) {
        std::size_t i0 = insert_two_zeros(x, lo, hi) | mc;
        cplx *r0 = &rho_[i0 * dim_];
        cplx *r1 = &rho_[(i0 | mt) * dim_];
        for (std::size_t j = 0; j < dim_; j++) {
            cplx a = r0[j];
            cplx b = r1[j];
            r0[j] = c * a + mis * b;
            r1[j] = mis * a + c * b;
        }
    }
    // Right multiplication by the adjoint: mix columns likewise.
    for (std::size_t i = 0; i < dim_; i++) {
        cplx *row = &rho_[i * dim_];
        for (std::size_t x = 0; x < quarter; x++) {
            std::size_t j0 = insert_two_zeros(x, lo, hi) | mc;
            cplx a = row[j0];
            cplx b = row[j0 | mt];
            row[j0] = c * a + pis * b;
            row[j0 | mt] = pis * a + c * b;
        }
    }
}

void DensityWindow::apply_reset(int a, int b, double p) {
    int ka = bit_of(a);
    int kb = bit_of(b);
    std::size_t ma = std::size_t{1} << ka;
    std::size_t mb = std::size_t{1} << kb;
    const std::size_t off[4] = {0, ma, mb, ma | mb};
    const std::size_t quarter = dim_ / 4;
    const int lo = std::min(ka, kb);
    const int hi = std::max(ka, kb);
    const double keep = 1 - p;
    for (std::size_t x = 0; x < quarter; x++) {
        std::size_t i0 = insert_two_zeros(x, lo, hi);
        for (std::size_t y = 0; y < quarter; y++) {
            std::size_t j0 = insert_two_zeros(y, lo, hi);
            cplx tr = 0;
            for (int u = 0; u < 4; u++) {
                tr += at(i0 + off[u], j0 + off[u]);
            }
            for (int u = 0; u < 4; u++) {
                for (int v = 0; v < 4; v++) {
                    at(i0 + off[u], j0 + off[v]) *= keep;
                }
            }
            at(i0, j0) += p * tr;
        }
    }
}

void DensityWindow::apply_reset(int a, double p) {
    int ka = bit_of(a);
    std::size_t ma = std::size_t{1} << ka;
    const std::size_t half = dim_ / 2;
    const double keep = 1 - p;
    for (std::size_t x = 0; x < half; x++) {
        std::size_t i0 = insert_zero(x, ka);
        for (std::size_t y = 0; y < half; y++) {
            std::size_t j0 = insert_zero(y, ka);
            cplx tr = at(i0, j0) + at(i0 | ma, j0 | ma);
            at(i0, j0) = keep * at(i0, j0) + p * tr;
            at(i0 | ma, j0) *= keep;
            at(i0, j0 | ma) *= keep;
            at(i0 | ma, j0 | ma) *= keep;
        }
    }
}

void DensityWindow::apply_unitary2(int a, int b, const Mat4 &u) {
    apply_kraus2(a, b, {u});
}

void DensityWindow::apply_kraus2(int a, int b, const std::vector<Mat4> &ks) {
    int ka = bit_of(a);
    int kb = bit_of(b);
    std::size_t ma = std::size_t{1} << ka;
    std::size_t mb = std::size_t{1} << kb;
    const std::size_t off[4] = {0, ma, mb, ma | mb};
    const std::size_t quarter = dim_ / 4;
    for (std::size_t x = 0; x < quarter; x++) {
        std::size_t i0 = insert_two_zeros(x, std::min(ka, kb), std::max(ka, kb));
        for (std::size_t y = 0; y < quarter; y++) {
            std::size_t j0 = insert_two_zeros(y, std::min(ka, kb), std::max(ka, kb));
            Mat4 m;
            for (int u = 0; u < 4; u++)
                for (int v = 0; v < 4; v++) m[u][v] = at(i0 + off[u], j0 + off[v]);
            Mat4 acc{};
            for (const auto &k : ks) {
                Mat4 term = conj_sandwich(k, m);
                for (int u = 0; u < 4; u++)
                    for (int v = 0; v < 4; v++) acc[u][v] += term[u][v];
            }
            for (int u = 0; u < 4; u++)
                for (int v = 0; v < 4; v++) at(i0 + off[u], j0 + off[v]) = acc[u][v];
        }
    }
}

void DensityWindow::apply_kraus1(int a, const std::vector<Mat2> &ks) {
    int ka = bit_of(a);
    std::size_t ma = std::size_t{1} << ka;
    const std::size_t off[2] = {0, ma};
    const std::size_t half = dim_ / 2;
    for (std::size_t x = 0; x < half; x++) {
        std::size_t i0 = insert_zero(x, ka);
        for (std::size_t y = 0; y < half; y++) {
            std::size_t j0 = insert_zero(y, ka);
            Mat2 m;
            for (int u = 0; u < 2; u++)
                for (int v = 0; v < 2; v++) m[u][v] = at(i0 + off[u], j0 + off[v]);
            Mat2 acc{};
            for (const auto &k : ks) {
                Mat2 term = conj_sandwich(k, m);
                for (int u = 0; u < 2; u++)
                    for (int v = 0; v < 2; v++) acc[u][v] += term[u][v];
            }
            for (int u = 0; u < 2; u++)
                for (int v = 0; v < 2; v++) at(i0 + off[u], j0 + off[v]) = acc[u][v];
        }
    }
}

void DensityWindow::dephase(int site) {
    std::size_t m = std::size_t{1} << bit_of(site);
    for (std::size_t i = 0; i < dim_; i++) {
        for (std::size_t j = 0; j < dim_; j++) {
            if ((i ^ j) & m) {
                at(i, j) = 0;
            }
        }
    }
}

double DensityWindow::expect_n(int site) const {
    std::size_t m = std::size_t{1} << bit_of(site);
    double s = 0;
    for (std::size_t i = 0; i < dim_; i++) {
        if (i & m) {
            s += at(i, i).real();
        }
    }
    return s;
}

cplx DensityWindow::trace() const {
    cplx s = 0;
    for (std::size_t i = 0; i < dim_; i++) {
        s += at(i, i);
    }
    return s;
}

double DensityWindow::hermiticity_error() const {
    double worst = 0;
    for (std::size_t i = 0; i < dim_; i++) {
        for (std::size_t j = i; j < dim_; j++) {
            worst = std::max(worst, std::abs(at(i, j) - std::conj(at(j, i))));
        }
    }
    return worst;
}

double DensityWindow::purity() const {
    double s = 0;
    for (const auto &v : rho_) {
        s += std::norm(v);
    }
    return s;
}

std::array<std::array<cplx, 4>, 4> crx_matrix(double theta) {
    Mat4 u{};
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    u[0][0] = 1;
    u[2][2] = 1;
    u[1][1] = c;
    u[3][3] = c;
    u[1][3] = cplx(0, -s);
    u[3][1] = cplx(0, -s);
    return u;
}

nlohmann::json ReuseSchedule::to_json() const {
    static const char *names[] = {"admit", "gate", "reset", "record", "retire"};
    nlohmann::json j;
    j["max_live"] = max_live;
    auto &list = j["instructions"] = nlohmann::json::array();
    for (const auto &ins : instructions) {
        nlohmann::json e = {{"op", names[static_cast<int>(ins.kind)]}, {"t", ins.period}, {"a", ins.a}};
        if (ins.has_b()) {
            e["b"] = ins.b;
        }
        if (ins.kind == OpKind::admit && ins.excited) {
            e["excited"] = true;
        }
        list.push_back(e);
    }
    return j;
}

std::vector<Instruction> canonical_program(const CircuitSpec &circuit) {
    std::vector<Instruction> prog;
    const int origin = circuit.params.origin;
    std::set<int> touched{origin};
    prog.push_back({OpKind::record, 0, origin});
    for (int t = 1; t <= circuit.t_max(); t++) {
        const Period &period = circuit.periods[t - 1];
        for (const auto &layer : period.layers) {
            for (const Gate &g : layer) {
                prog.push_back({OpKind::gate, t, g.control, g.target});
                touched.insert(g.control);
                touched.insert(g.target);
            }
        }
        for (const ResetOp &r : period.resets) {
            if (r.live[0] && r.live[1]) {
                prog.push_back({OpKind::reset, t, r.site(0), r.site(1)});
            } else {
                prog.push_back({OpKind::reset, t, r.live[0] ? r.site(0) : r.site(1)});
            }
        }
        for (int s : touched) {
            prog.push_back({OpKind::record, t, s});
        }
    }
    return prog;
}

ReuseSchedule build_reuse_schedule(const CircuitSpec &circuit) {
    const std::vector<Instruction> prog = canonical_program(circuit);
    const std::size_t n = prog.size();
    std::vector<std::vector<std::size_t>> deps(n);
    std::map<int, std::size_t> last;
    for (std::size_t i = 0; i < n; i++) {
        for (int s : instruction_sites(prog[i])) {
            auto it = last.find(s);
            if (it != last.end()) {
                deps[i].push_back(it->second);
            }
            last[s] = i;
        }
    }

    ReuseSchedule out;
    std::vector<bool> executed(n, false);
    std::set<int> live;
    std::set<int> retired;
    const int origin = circuit.params.origin;

    auto execute = [&](std::size_t i) {
        const Instruction &ins = prog[i];
        for (int s : instruction_sites(ins)) {
            if (!live.count(s)) {
                out.instructions.push_back({OpKind::admit, ins.period, s, kNoSite, s == origin});
                live.insert(s);
                out.max_live = std::max(out.max_live, static_cast<int>(live.size()));
            }
        }
        out.instructions.push_back(ins);
        executed[i] = true;
        for (int s : instruction_sites(ins)) {
            if (last[s] == i) {
                out.instructions.push_back({OpKind::retire, ins.period, s});
                live.erase(s);
                retired.insert(s);
            }
        }
    };

    for (const auto &[site, final_index] : last) {
        if (retired.count(site)) {
            continue;
        }
        // Dependency closure of this site's last instruction.
        std::vector<std::size_t> closure;
        std::vector<std::size_t> stack{final_index};
        std::set<std::size_t> seen{final_index};
        while (!stack.empty()) {
            std::size_t i = stack.back();
            stack.pop_back();
            closure.push_back(i);
            for (std::size_t d : deps[i]) {
                if (!executed[d] && seen.insert(d).second) {
                    stack.push_back(d);
                }
            }
        }
        std::sort(closure.begin(), closure.end());
        for (std::size_t i : closure) {
            execute(i);
        }
    }
    return out;
}

ObservableSeries run_schedule(const CircuitSpec &circuit, const ReuseSchedule &schedule, const SimOptions &options) {
    if (schedule.max_live > options.live_cap) {
        throw WindowTooLarge("schedule needs " + std::to_string(schedule.max_live) + " live sites, cap is " +
                             std::to_string(options.live_cap));
    }
    const double theta = circuit.params.theta;
    const double p = circuit.params.p;
    ObservableSeries out(circuit.site_range, circuit.t_max(), circuit.params.origin);
    DensityWindow w;
    for (const Instruction &ins : schedule.instructions) {
        switch (ins.kind) {
            case OpKind::admit:
                if (w.width() + 1 > options.live_cap) {
                    throw WindowTooLarge("live cap exceeded");
                }
                w.admit(ins.a, ins.excited);
                break;
            case OpKind::gate:
                w.apply_crx(ins.a, ins.b, theta);
                break;
            case OpKind::reset:
                if (ins.has_b()) {
                    w.apply_reset(ins.a, ins.b, p);
                } else {
                    w.apply_reset(ins.a, p);
                }
                break;
            case OpKind::record:
                out.density[ins.period][ins.a - out.sites.lo] = w.expect_n(ins.a);
                if (options.check_hermiticity && w.hermiticity_error() > options.trace_tol) {
                    throw NumericalInvariant("density matrix lost hermiticity");
                }
                break;
            case OpKind::retire:
                w.retire(ins.a);
                break;
        }
        if (std::abs(w.trace() - cplx(1)) > options.trace_tol) {
            throw NumericalInvariant("trace drifted to " + std::to_string(w.trace().real()));
        }
    }
    out.fill_n_right();
    return out;
}

ObservableSeries simulate(const ModelParams &params, const SimOptions &options) {
    CircuitSpec circuit = build_circuit(params);
    return run_schedule(circuit, build_reuse_schedule(circuit), options);
}

ObservableSeries simulate_bruteforce(const ModelParams &params, const SimOptions &options) {
    CircuitSpec circuit = build_circuit(params);
    std::vector<Instruction> prog = canonical_program(circuit);
    std::set<int> sites;
    for (const auto &ins : prog) {
        for (int s : instruction_sites(ins)) {
            sites.insert(s);
        }
    }
    if (static_cast<int>(sites.size()) > options.live_cap) {
        throw WindowTooLarge("brute force needs " + std::to_string(sites.size()) + " sites, cap is " +
                             std::to_string(options.live_cap));
    }
    DensityWindow w;
    for (int s : sites) {
        w.admit(s, s == params.origin);
    }
    const Mat4 u = crx_matrix(params.theta);
    const double p = params.p;
    std::vector<Mat4> pair_kraus;
    {
        Mat4 keep{};
        for (int k = 0; k < 4; k++) keep[k][k] = std::sqrt(1 - p);
        pair_kraus.push_back(keep);
        for (int k = 0; k < 4; k++) {
            Mat4 jump{};
            jump[0][k] = std::sqrt(p);
            pair_kraus.push_back(jump);
        }
    }
    std::vector<Mat2> single_kraus;
    {
        Mat2 keep{};
        keep[0][0] = keep[1][1] = std::sqrt(1 - p);
        Mat2 j0{}, j1{};
        j0[0][0] = std::sqrt(p);
        j1[0][1] = std::sqrt(p);
        single_kraus = {keep, j0, j1};
    }

    ObservableSeries out(circuit.site_range, circuit.t_max(), params.origin);
    for (const Instruction &ins : prog) {
        switch (ins.kind) {
            case OpKind::gate:
                w.apply_unitary2(ins.a, ins.b, u);
                break;
            case OpKind::reset:
                if (ins.has_b()) {
                    w.apply_kraus2(ins.a, ins.b, pair_kraus);
                } else {
                    w.apply_kraus1(ins.a, single_kraus);
                }
                break;
            case OpKind::record:
                out.density[ins.period][ins.a - out.sites.lo] = w.expect_n(ins.a);
                break;
            default:
                break;
        }
        if (std::abs(w.trace() - cplx(1)) > options.trace_tol) {
            throw NumericalInvariant("trace drifted to " + std::to_string(w.trace().real()));
        }
    }
    out.fill_n_right();
    return out;
}

}  // namespace fqcp::dm
