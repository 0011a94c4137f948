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

#include "fqcp/dephased.hpp"

#include <bit>
#include <unordered_map>

#include "fqcp/errors.hpp"
#include "fqcp/parallel.hpp"

namespace fqcp::dephased {

namespace {

constexpr std::uint64_t kEven = 0x5555555555555555ULL;
constexpr std::uint64_t kOdd = ~kEven;

struct WordSpan {
    int lo;
    int hi;
};

WordSpan span_of(const SiteInterval &range, const SiteInterval &sites) {
    int lo = std::max(sites.lo, range.lo) - range.lo;
    int hi = std::min(sites.hi, range.hi) - range.lo;
    return {lo >> 6, hi >> 6};
}

// Evolves one shot, calling observe(t, state) after each period. Stops early
// once the lattice is empty and returns that period (or -1).
template <typename Observe>
int evolve(const CircuitSpec &circuit, const PeriodKernel &kernel, BitLattice &state, std::uint64_t reset_threshold,
           CounterRng &rng, std::vector<Decision> *trace, Observe &&observe) {
    if (!state.any()) {
        return 0;
    }
    for (int t = 1; t <= circuit.t_max(); t++) {
        kernel.apply_gates(state, t, rng, trace);
        kernel.apply_resets(state, t, reset_threshold, rng, trace);
        observe(t, state);
        if (!state.any()) {
            return t;
        }
    }
    return -1;
}

}  // namespace

BitLattice::BitLattice(SiteInterval range) : range_(range), words_((range.width() + 63) / 64, 0) {
    if (range.lo % 2 != 0) {
        throw InvalidParams("bit lattice must start on an even site");
    }
}

bool BitLattice::get(int site) const {
    if (!range_.contains(site)) {
        return false;
    }
    int k = site - range_.lo;
    return (words_[k >> 6] >> (k & 63)) & 1;
}

void BitLattice::set(int site, bool value) {
    if (!range_.contains(site)) {
        throw InvalidParams("site " + std::to_string(site) + " outside lattice");
    }
    int k = site - range_.lo;
    std::uint64_t bit = 1ULL << (k & 63);
    if (value) {
        words_[k >> 6] |= bit;
    } else {
        words_[k >> 6] &= ~bit;
    }
}

void BitLattice::flip(int site) {
    set(site, !get(site));
}

void BitLattice::clear_block(int block) {
    for (int s = 2 * block; s <= 2 * block + 1; s++) {
        if (range_.contains(s)) {
            set(s, false);
        }
    }
}

bool BitLattice::any() const {
    for (auto w : words_) {
        if (w) {
            return true;
        }
    }
    return false;
}

int BitLattice::count() const {
    int n = 0;
    for (auto w : words_) {
        n += std::popcount(w);
    }
    return n;
}

int BitLattice::count_from(int site) const {
    int n = 0;
    for (int s : active_sites()) {
        n += s >= site;
    }
    return n;
}

std::vector<int> BitLattice::active_sites() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < words_.size(); i++) {
        std::uint64_t w = words_[i];
        while (w) {
            out.push_back(range_.lo + static_cast<int>(i * 64) + std::countr_zero(w));
            w &= w - 1;
        }
    }
    return out;
}

PeriodKernel::PeriodKernel(const CircuitSpec &circuit, double theta)
    : circuit_(&circuit), flip_threshold_(bernoulli_threshold(flip_prob(theta))) {
}

void PeriodKernel::apply_gates(BitLattice &state, int period, CounterRng &rng, std::vector<Decision> *trace) const {
    auto &w = state.words();
    int base = state.range().lo;
    WordSpan span = span_of(state.range(), circuit_->reachable[period]);
    auto decide = [&](int layer, int i, int b) {
        bool fired = rng.bernoulli(flip_threshold_);
        if (trace) {
            trace->push_back({period, layer, base + 64 * i + b, fired});
        }
        return fired;
    };
    // Layer 0: control even bit, target bit+1 (same word).
    for (int i = span.lo; i <= span.hi; i++) {
        std::uint64_t m = w[i] & kEven;
        while (m) {
            int b = std::countr_zero(m);
            m &= m - 1;
            if (decide(0, i, b)) {
                w[i] ^= 2ULL << b;
            }
        }
    }
    // Layer 1: control odd bit, target bit-1 (same word).
    for (int i = span.lo; i <= span.hi; i++) {
        std::uint64_t m = w[i] & kOdd;
        while (m) {
            int b = std::countr_zero(m);
            m &= m - 1;
            if (decide(1, i, b)) {
                w[i] ^= 1ULL << (b - 1);
            }
        }
    }
    // Layer 2: control odd bit, target bit+1 (may carry into the next word).
    for (int i = span.lo; i <= span.hi; i++) {
        std::uint64_t m = w[i] & kOdd;
        while (m) {
            int b = std::countr_zero(m);
            m &= m - 1;
            if (decide(2, i, b)) {
                if (b == 63) {
                    w[i + 1] ^= 1ULL;
                } else {
                    w[i] ^= 2ULL << b;
                }
            }
        }
    }
    // Layer 3: control even bit, target bit-1 (may borrow from the previous word).
    for (int i = span.lo; i <= span.hi; i++) {
        std::uint64_t m = w[i] & kEven;
        while (m) {
            int b = std::countr_zero(m);
            m &= m - 1;
            if (decide(3, i, b)) {
                if (b == 0) {
                    w[i - 1] ^= 1ULL << 63;
                } else {
                    w[i] ^= 1ULL << (b - 1);
                }
            }
        }
    }
}

void PeriodKernel::apply_resets(BitLattice &state, int period, std::uint64_t threshold, CounterRng &rng,
                                std::vector<Decision> *trace) const {
    auto &w = state.words();
    int base = state.range().lo;
    WordSpan span = span_of(state.range(), circuit_->reachable[period]);
    for (int i = span.lo; i <= span.hi; i++) {
        std::uint64_t m = (w[i] | (w[i] >> 1)) & kEven;
        while (m) {
            int b = std::countr_zero(m);
            m &= m - 1;
            bool fired = rng.bernoulli(threshold);
            if (trace) {
                trace->push_back({period, 4, base + 64 * i + b, fired});
            }
            if (fired) {
                w[i] &= ~(3ULL << b);
            }
        }
    }
}

BitLattice initial_lattice(const CircuitSpec &circuit, const std::optional<std::vector<int>> &active) {
    BitLattice state(circuit.site_range);
    if (active) {
        for (int s : *active) {
            if (!circuit.reachable[0].contains(s)) {
                throw InvalidParams("initial active site " + std::to_string(s) + " outside the circuit's cone");
            }
            state.set(s, true);
        }
    } else {
        state.set(circuit.params.origin, true);
    }
    return state;
}

ShotResult run_shot(const CircuitSpec &circuit, double theta, double p, std::uint64_t seed, std::uint64_t stream,
                    const ShotOptions &options) {
    PeriodKernel kernel(circuit, theta);
    CounterRng rng(seed, stream);
    ShotResult out;
    BitLattice state = initial_lattice(circuit, options.initial_active);
    int origin = circuit.params.origin;
    out.n_right.assign(circuit.t_max() + 1, 0);
    out.n_right[0] = state.count_from(origin);
    if (options.keep_history) {
        out.history.assign(circuit.t_max() + 1, BitLattice(circuit.site_range));
        out.history[0] = state;
    }
    out.extinct_at = evolve(circuit, kernel, state, bernoulli_threshold(p), rng,
                            options.keep_trace ? &out.trace : nullptr, [&](int t, const BitLattice &s) {
                                out.n_right[t] = s.count_from(origin);
                                if (options.keep_history) {
                                    out.history[t] = s;
                                }
                            });
    out.final_state = std::move(state);
    return out;
}

Tally run_tally(const CircuitSpec &circuit, double theta, double p, std::uint64_t shots, std::uint64_t base_seed,
                std::uint64_t first_shot, const EnsembleOptions &options) {
    const int t_max = circuit.t_max();
    const SiteInterval sites = circuit.site_range;
    const int origin = circuit.params.origin;
    const int width = sites.width();
    const std::size_t nwords = (width + 63) / 64;
    PeriodKernel kernel(circuit, theta);
    const std::uint64_t reset_threshold = bernoulli_threshold(p);

    std::vector<std::uint64_t> right_mask(nwords, 0);
    for (int k = std::max(0, origin - sites.lo); k < width; k++) {
        right_mask[k >> 6] |= 1ULL << (k & 63);
    }

    const std::size_t chunk = 256;
    int workers = worker_count(shots, options.threads, chunk);
    std::vector<Tally> partial(workers, Tally(sites, t_max, origin));
    std::vector<std::uint32_t> per_shot;
    if (options.keep_per_shot) {
        per_shot.assign(shots * static_cast<std::size_t>(t_max + 1), 0);
    }
    const BitLattice start = initial_lattice(circuit, options.initial_active);

    parallel_chunks(shots, options.threads, chunk, [&](std::size_t begin, std::size_t end, int worker) {
        Tally &acc = partial[worker];
        for (std::size_t s = begin; s < end; s++) {
            CounterRng rng(base_seed, first_shot + s);
            BitLattice state = start;
            std::uint32_t *row = options.keep_per_shot ? &per_shot[s * (t_max + 1)] : nullptr;
            auto observe = [&](int t, const BitLattice &st) {
                const auto &w = st.words();
                WordSpan span = span_of(sites, circuit.reachable[t]);
                std::uint64_t nr = 0;
                std::uint64_t *row_counts = &acc.counts[static_cast<std::size_t>(t) * width];
                for (int i = span.lo; i <= span.hi; i++) {
                    std::uint64_t x = w[i];
                    nr += std::popcount(x & right_mask[i]);
                    while (x) {
                        row_counts[i * 64 + std::countr_zero(x)]++;
                        x &= x - 1;
                    }
                }
                acc.nr_sum[t] += nr;
                acc.nr_sumsq[t] += nr * nr;
                if (row) {
                    row[t] = static_cast<std::uint32_t>(nr);
                }
            };
            observe(0, state);
            evolve(circuit, kernel, state, reset_threshold, rng, nullptr, observe);
            acc.shots++;
        }
    });

    Tally total(sites, t_max, origin);
    for (const auto &part : partial) {
        total.merge(part);
    }
    total.per_shot_nr = std::move(per_shot);
    return total;
}

ObservableSeries run_ensemble(const CircuitSpec &circuit, double theta, double p, std::uint64_t shots,
                              std::uint64_t base_seed, const EnsembleOptions &options) {
    if (shots < 1) {
        throw InvalidParams("shots must be >= 1");
    }
    return run_tally(circuit, theta, p, shots, base_seed, 0, options).series();
}

ObservableSeries exact_enumeration(const CircuitSpec &circuit, double theta, double p,
                                   const EnumerationOptions &options) {
    const SiteInterval sites = circuit.site_range;
    if (sites.width() > 64) {
        throw BudgetExceeded("exact enumeration supports at most 64 sites");
    }
    const double q = flip_prob(theta);
    const int origin = circuit.params.origin;
    BitLattice start = initial_lattice(circuit, options.initial_active);
    std::uint64_t budget_used = 0;
    auto spend = [&](std::uint64_t n) {
        budget_used += n;
        if (budget_used > options.budget) {
            throw BudgetExceeded("exact enumeration exceeded " + std::to_string(options.budget) + " branch evaluations");
        }
    };
    auto bit = [&](int site) { return 1ULL << (site - sites.lo); };

    using Dist = std::unordered_map<std::uint64_t, double>;
    Dist dist{{start.words()[0], 1.0}};
    ObservableSeries out(sites, circuit.t_max(), origin);
    auto record = [&](int t) {
        for (const auto &[cfg, pr] : dist) {
            for (int r = sites.lo; r <= sites.hi; r++) {
                if (cfg & bit(r)) {
                    out.density[t][r - sites.lo] += pr;
                }
            }
        }
    };
    record(0);

    for (int t = 1; t <= circuit.t_max(); t++) {
        const Period &period = circuit.periods[t - 1];
        for (const auto &layer : period.layers) {
            for (const Gate &g : layer) {
                Dist next;
                next.reserve(dist.size() * 2);
                for (const auto &[cfg, pr] : dist) {
                    if (!(cfg & bit(g.control)) || q == 0) {
                        next[cfg] += pr;
                        spend(1);
                    } else if (q == 1) {
                        next[cfg ^ bit(g.target)] += pr;
                        spend(1);
                    } else {
                        next[cfg ^ bit(g.target)] += pr * q;
                        next[cfg] += pr * (1 - q);
                        spend(2);
                    }
                }
                dist = std::move(next);
            }
        }
        for (const ResetOp &op : period.resets) {
            std::uint64_t pair = 0;
            for (int k = 0; k < 2; k++) {
                if (sites.contains(op.site(k))) {
                    pair |= bit(op.site(k));
                }
            }
            Dist next;
            next.reserve(dist.size());
            for (const auto &[cfg, pr] : dist) {
                if (!(cfg & pair) || p == 0) {
                    next[cfg] += pr;
                    spend(1);
                } else if (p == 1) {
                    next[cfg & ~pair] += pr;
                    spend(1);
                } else {
                    next[cfg & ~pair] += pr * p;
                    next[cfg] += pr * (1 - p);
                    spend(2);
                }
            }
            dist = std::move(next);
        }
        record(t);
    }
    out.fill_n_right();
    return out;
}

std::pair<BitLattice, double> replay(const CircuitSpec &circuit, double theta, double p,
                                     const std::vector<Decision> &trace,
                                     const std::optional<std::vector<int>> &initial_active) {
    BitLattice state = initial_lattice(circuit, initial_active);
    const double q = flip_prob(theta);
    double prob = 1;
    std::size_t cursor = 0;
    auto take = [&](int t, int layer, int site) {
        if (cursor >= trace.size()) {
            throw InvalidParams("decision trace ended early");
        }
        const Decision &d = trace[cursor++];
        if (d.period != t || d.layer != layer || d.site != site) {
            throw InvalidParams("decision trace does not follow the circuit order");
        }
        return d.fired;
    };
    for (int t = 1; t <= circuit.t_max(); t++) {
        const Period &period = circuit.periods[t - 1];
        for (int layer = 0; layer < 4; layer++) {
            for (const Gate &g : period.layers[layer]) {
                if (!state.get(g.control)) {
                    continue;
                }
                bool fired = take(t, layer, g.control);
                prob *= fired ? q : 1 - q;
                if (fired) {
                    state.flip(g.target);
                }
            }
        }
        for (const ResetOp &op : period.resets) {
            if (!state.get(op.site(0)) && !state.get(op.site(1))) {
                continue;
            }
            bool fired = take(t, 4, op.site(0));
            prob *= fired ? p : 1 - p;
            if (fired) {
                state.clear_block(op.block);
            }
        }
    }
    if (cursor != trace.size()) {
        throw InvalidParams("decision trace has unused entries");
    }
    return {state, prob};
}

}  // namespace fqcp::dephased
