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


#include "fqcp/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "fqcp/dephased.hpp"
#include "fqcp/errors.hpp"
#include "fqcp/format.hpp"
#include "fqcp/parallel.hpp"
#include "fqcp/rng.hpp"

namespace fqcp::adaptive {

namespace {

std::string point_str(SpacetimePoint p) {
    return "(r=" + std::to_string(p.r) + ", t=" + std::to_string(p.t) + ")";
}

void require_probability(double v, const std::string &what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw InvalidParams(what + " must lie in [0, 1], got " + fmt_double(v));
    }
}

std::map<SpacetimePoint, int> slot_index(const CircuitSpec &circuit) {
    std::map<SpacetimePoint, int> idx;
    for (std::size_t k = 0; k < circuit.slots.size(); k++) {
        idx.emplace(circuit.slots[k], static_cast<int>(k));
    }
    return idx;
}

std::vector<std::uint64_t> thresholds(const std::vector<double> &rates) {
    std::vector<std::uint64_t> out(rates.size());
    for (std::size_t k = 0; k < rates.size(); k++) {
        out[k] = bernoulli_threshold(rates[k]);
    }
    return out;
}

}  // namespace

RateField RateField::uniform(const CircuitSpec &circuit, double p) {
    return from_function(circuit, [p](SpacetimePoint) { return p; });
}

RateField RateField::from_function(const CircuitSpec &circuit, const std::function<double(SpacetimePoint)> &fn) {
    RateField f;
    for (const auto &pt : circuit.slots) {
        f.set(pt, fn(pt));
    }
    return f;
}

double RateField::at(SpacetimePoint point) const {
    auto it = values_.find(point);
    if (it == values_.end()) {
        throw InvalidParams("rate field has no value at " + point_str(point));
    }
    return it->second;
}

void RateField::set(SpacetimePoint point, double value) {
    require_probability(value, "rate at " + point_str(point));
    values_[point] = value;
}

double RateField::min() const {
    double m = 1.0;
    for (const auto &[pt, v] : values_) {
        m = std::min(m, v);
    }
    return m;
}

double RateField::max() const {
    double m = 0.0;
    for (const auto &[pt, v] : values_) {
        m = std::max(m, v);
    }
    return m;
}

bool RateField::matches(const CircuitSpec &circuit) const {
    if (values_.size() != circuit.slots.size()) {
        return false;
    }
    for (const auto &pt : circuit.slots) {
        if (!contains(pt)) {
            return false;
        }
    }
    return true;
}

std::vector<double> RateField::by_slot(const CircuitSpec &circuit) const {
    if (!matches(circuit)) {
        throw InvalidParams("rate field domain (" + std::to_string(values_.size()) +
                            " points) does not match the circuit's " + std::to_string(circuit.slots.size()) +
                            " reset slots");
    }
    std::vector<double> out;
    out.reserve(circuit.slots.size());
    for (const auto &pt : circuit.slots) {
        out.push_back(values_.at(pt));
    }
    return out;
}

void RateField::write_csv(std::ostream &out) const {
    out << "t,r,p\n";
    for (const auto &[pt, v] : values_) {
        out << pt.t << ',' << pt.r << ',' << fmt_double(v) << '\n';
    }
}

RateField RateField::read_csv(std::istream &in) {
    RateField f;
    std::string line;
    bool header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header) {
            if (line.rfind("t,r,p", 0) != 0) {
                throw InvalidParams("rate CSV must start with header t,r,p");
            }
            header = true;
            continue;
        }
        std::istringstream row(line);
        std::string ts, rs, ps;
        if (!std::getline(row, ts, ',') || !std::getline(row, rs, ',') || !std::getline(row, ps, ',')) {
            throw InvalidParams("malformed rate CSV line " + std::to_string(lineno));
        }
        try {
            f.set({std::stoi(rs), std::stoi(ts)}, std::stod(ps));
        } catch (const std::logic_error &) {
            throw InvalidParams("malformed rate CSV line " + std::to_string(lineno));
        }
    }
    if (!header) {
        throw InvalidParams("rate CSV is empty");
    }
    return f;
}

const char *to_string(EventKind kind) {
    switch (kind) {
        case EventKind::none:
            return "none";
        case EventKind::injected:
            return "injected";
        case EventKind::detected_sx:
            return "detected_sx";
        case EventKind::detected_sz:
            return "detected_sz";
        case EventKind::detected_leakage:
            return "detected_leakage";
        case EventKind::detected_gadget:
            return "detected_gadget";
    }
    return "?";
}

EventKind parse_event_kind(const std::string &name) {
    for (auto k : {EventKind::none, EventKind::injected, EventKind::detected_sx, EventKind::detected_sz,
                   EventKind::detected_leakage, EventKind::detected_gadget}) {
        if (name == to_string(k)) {
            return k;
        }
    }
    throw UnknownKind("unknown event kind '" + name + "'");
}

const char *to_string(LogicalFlip flip) {
    switch (flip) {
        case LogicalFlip::x1:
            return "X1";
        case LogicalFlip::x2:
            return "X2";
        case LogicalFlip::x1x2:
            return "X1X2";
    }
    return "?";
}

LogicalFlip parse_logical_flip(const std::string &name) {
    for (auto f : {LogicalFlip::x1, LogicalFlip::x2, LogicalFlip::x1x2}) {
        if (name == to_string(f)) {
            return f;
        }
    }
    throw UnknownKind("unknown logical flip '" + name + "' (expected X1, X2 or X1X2)");
}

EventKind ShotRecord::event_at(SpacetimePoint point) const {
    for (const auto &e : events) {
        if (e.point == point) {
            return e.kind;
        }
    }
    return EventKind::none;
}

bool ShotRecord::bit(int site, int t) const {
    if (t < 0 || t >= static_cast<int>(active_by_t.size())) {
        return false;
    }
    const auto &a = active_by_t[t];
    return std::binary_search(a.begin(), a.end(), site);
}

nlohmann::json ShotRecord::to_json() const {
    nlohmann::json j;
    j["shot"] = shot;
    j["seed"] = seed;
    auto &ev = j["events"] = nlohmann::json::array();
    for (const auto &e : events) {
        ev.push_back({{"r", e.point.r}, {"t", e.point.t}, {"kind", to_string(e.kind)}});
    }
    auto &bits = j["final_bits"] = nlohmann::json::object();
    int t_final = static_cast<int>(active_by_t.size()) - 1;
    for (int r = final_sites.lo; r <= final_sites.hi && t_final >= 0; r++) {
        bits[std::to_string(r)] = bit(r, t_final) ? 1 : 0;
    }
    j["final_sites"] = {final_sites.lo, final_sites.hi};
    j["active_by_t"] = active_by_t;
    if (weight) {
        j["weight"] = *weight;
    }
    return j;
}

ShotRecord ShotRecord::from_json(const nlohmann::json &j) {
    ShotRecord rec;
    try {
        rec.shot = j.at("shot").get<std::uint64_t>();
        rec.seed = j.at("seed").get<std::uint64_t>();
        for (const auto &e : j.at("events")) {
            EventKind kind = parse_event_kind(e.at("kind").get<std::string>());
            if (kind != EventKind::none) {
                rec.events.push_back({{e.at("r").get<int>(), e.at("t").get<int>()}, kind});
            }
        }
        if (j.contains("final_sites")) {
            rec.final_sites = {j["final_sites"].at(0).get<int>(), j["final_sites"].at(1).get<int>()};
        }
        if (j.contains("active_by_t")) {
            rec.active_by_t = j["active_by_t"].get<std::vector<std::vector<int>>>();
        } else {
            std::vector<int> fin;
            for (const auto &[key, v] : j.at("final_bits").items()) {
                if (v.get<int>() != 0) {
                    fin.push_back(std::stoi(key));
                }
            }
            std::sort(fin.begin(), fin.end());
            rec.active_by_t.push_back(std::move(fin));
        }
        if (j.contains("weight")) {
            rec.weight = j["weight"].get<double>();
        }
    } catch (const nlohmann::json::exception &e) {
        throw InvalidParams(std::string("malformed shot record: ") + e.what());
    }
    return rec;
}

void write_records_jsonl(std::ostream &out, const std::vector<ShotRecord> &records) {
    for (const auto &r : records) {
        out << r.to_json().dump() << '\n';
    }
}

std::vector<ShotRecord> read_records_jsonl(std::istream &in) {
    std::vector<ShotRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception &e) {
            throw InvalidParams(std::string("malformed JSON line: ") + e.what());
        }
        out.push_back(ShotRecord::from_json(j));
    }
    return out;
}

namespace {

class SyntheticSession : public ShotSession {
   public:
    SyntheticSession(const CircuitSpec &circuit, const SyntheticParams &params, std::uint64_t seed,
                     std::uint64_t shot)
        : flip_(params.logical_flip),
          kernel_(circuit, circuit.params.theta),
          state_(dephased::initial_lattice(circuit, std::nullopt)),
          gate_rng_(derive_seed(seed, "gates"), shot),
          detect_rng_(derive_seed(seed, "detect"), shot) {
        if (params.detect.size() != 0) {
            detect_thr_ = thresholds(params.detect.by_slot(circuit));
        }
        if (params.logical_error) {
            logical_thr_ = thresholds(params.logical_error->by_slot(circuit));
        }
        double total = 0.0;
        for (double w : params.kind_weights) {
            total += w;
        }
        double acc = 0.0;
        for (int k = 0; k < 4; k++) {
            acc += params.kind_weights[k] / total;
            kind_cdf_[k] = acc;
        }
    }

    void apply_gates(int t) override {
        kernel_.apply_gates(state_, t, gate_rng_);
    }

    EventKind detect(const ResetOp &op, int) override {
        if (!logical_thr_.empty()) {
            if (detect_rng_.bernoulli(logical_thr_[op.slot])) {
                if (flip_ != LogicalFlip::x2) {
                    state_.flip(op.site(0));
                }
                if (flip_ != LogicalFlip::x1) {
                    state_.flip(op.site(1));
                }
            }
        }
        if (detect_thr_.empty()) {
            return EventKind::none;
        }
        bool fired = detect_rng_.bernoulli(detect_thr_[op.slot]);
        double u = detect_rng_.uniform();
        if (!fired) {
            return EventKind::none;
        }
        static constexpr EventKind kinds[4] = {EventKind::detected_sx, EventKind::detected_sz,
                                               EventKind::detected_leakage, EventKind::detected_gadget};
        for (int k = 0; k < 4; k++) {
            if (u < kind_cdf_[k]) {
                return kinds[k];
            }
        }
        return kinds[0];
    }

    void reset_block(const ResetOp &op, int) override {
        state_.clear_block(op.block);
    }

    std::vector<int> active_sites(int) override {
        return state_.active_sites();
    }

   private:
    LogicalFlip flip_;
    dephased::PeriodKernel kernel_;
    dephased::BitLattice state_;
    CounterRng gate_rng_;
    CounterRng detect_rng_;
    std::vector<std::uint64_t> detect_thr_;
    std::vector<std::uint64_t> logical_thr_;
    std::array<double, 4> kind_cdf_{};
};

class SyntheticBackend : public NoiseBackend {
   public:
    explicit SyntheticBackend(SyntheticParams params) : params_(std::move(params)) {
        double total = 0.0;
        for (double w : params_.kind_weights) {
            if (!(w >= 0.0) || !std::isfinite(w)) {
                throw InvalidParams("detection kind weights must be finite and non-negative");
            }
            total += w;
        }
        if (total <= 0.0) {
            throw InvalidParams("detection kind weights must not all be zero");
        }
    }

    std::string kind() const override {
        return "synthetic";
    }

    void check(const CircuitSpec &circuit) const override {
        if (params_.detect.size() != 0 && !params_.detect.matches(circuit)) {
            throw InvalidParams("synthetic detection field does not match the circuit's reset slots");
        }
        if (params_.logical_error && !params_.logical_error->matches(circuit)) {
            throw InvalidParams("synthetic logical error field does not match the circuit's reset slots");
        }
    }

    std::unique_ptr<ShotSession> start(const CircuitSpec &circuit, std::uint64_t seed,
                                       std::uint64_t shot) const override {
        return std::make_unique<SyntheticSession>(circuit, params_, seed, shot);
    }

    nlohmann::json to_json() const override {
        nlohmann::json j;
        j["kind"] = kind();
        j["detect_points"] = params_.detect.size();
        j["detect_max"] = params_.detect.size() ? params_.detect.max() : 0.0;
        j["kind_weights"] = params_.kind_weights;
        if (params_.logical_error) {
            j["logical_error_max"] = params_.logical_error->max();
            j["logical_flip"] = to_string(params_.logical_flip);
        }
        return j;
    }

   private:
    SyntheticParams params_;
};

}  // namespace

std::unique_ptr<NoiseBackend> make_synthetic_backend(SyntheticParams params) {
    return std::make_unique<SyntheticBackend>(std::move(params));
}

std::vector<ShotRecord> run_protocol(const CircuitSpec &circuit, const NoiseBackend &backend,
                                     const std::optional<RateField> &injection, std::uint64_t shots,
                                     std::uint64_t seed, const std::string &label, const RunOptions &options) {
    if (shots < 1) {
        throw InvalidParams("shots must be >= 1");
    }
    backend.check(circuit);
    std::vector<std::uint64_t> inject_thr;
    if (injection) {
        inject_thr = thresholds(injection->by_slot(circuit));
    }
    const std::uint64_t inject_seed = derive_seed(seed, label + "/inject");
    const std::uint64_t backend_seed = derive_seed(seed, label + "/backend");
    const std::size_t nslots = circuit.slots.size();
    std::vector<ShotRecord> out(shots);

    parallel_chunks(shots, options.threads, 64, [&](std::size_t begin, std::size_t end, int) {
        std::vector<std::uint32_t> draws(nslots);
        for (std::size_t s = begin; s < end; s++) {
            CounterRng inject_rng(inject_seed, s);
            for (auto &d : draws) {
                d = inject_rng.next_u32();
            }
            auto session = backend.start(circuit, backend_seed, s);
            ShotRecord &rec = out[s];
            rec.shot = s;
            rec.seed = seed;
            rec.final_sites = circuit.reachable.back();
            rec.active_by_t.reserve(circuit.t_max() + 1);
            rec.active_by_t.push_back(session->active_sites(0));
            for (int t = 1; t <= circuit.t_max(); t++) {
                session->apply_gates(t);
                for (const ResetOp &op : circuit.periods[t - 1].resets) {
                    EventKind kind = session->detect(op, t);
                    if (kind == EventKind::none && !inject_thr.empty() && draws[op.slot] < inject_thr[op.slot]) {
                        kind = EventKind::injected;
                    }
                    if (kind != EventKind::none) {
                        session->reset_block(op, t);
                        rec.events.push_back({circuit.slots[op.slot], kind});
                    }
                }
                rec.active_by_t.push_back(session->active_sites(t));
            }
        }
    });
    return out;
}

RateField run_calibration(const CircuitSpec &circuit, const NoiseBackend &backend, std::uint64_t shots,
                          std::uint64_t seed, const RunOptions &options) {
    auto records = run_protocol(circuit, backend, std::nullopt, shots, seed, "calibration", options);
    return detection_rates(records, circuit);
}

RateField injection_field(double p_target, const RateField &detect) {
    require_probability(p_target, "target reset rate");
    RateField out;
    std::vector<std::pair<int, int>> bad;
    for (const auto &[pt, d] : detect.values()) {
        if (d > p_target) {
            bad.emplace_back(pt.r, pt.t);
            continue;
        }
        out.set(pt, d < 1.0 ? (p_target - d) / (1.0 - d) : 0.0);
    }
    if (!bad.empty()) {
        std::string msg = "detection rate exceeds target " + fmt_double(p_target) + " at " +
                          std::to_string(bad.size()) + " point(s), first (r=" + std::to_string(bad[0].first) +
                          ", t=" + std::to_string(bad[0].second) + ")";
        throw DetectionExceedsTarget(msg, std::move(bad));
    }
    return out;
}

std::vector<ShotRecord> run_main(const CircuitSpec &circuit, const NoiseBackend &backend, const RateField &injection,
                                 std::uint64_t shots, std::uint64_t seed, const RunOptions &options) {
    return run_protocol(circuit, backend, injection, shots, seed, "main", options);
}

namespace {

RateField count_rates(const std::vector<ShotRecord> &records, const CircuitSpec &circuit, bool detections_only) {
    if (records.empty()) {
        throw InvalidParams("need at least one shot record");
    }
    auto idx = slot_index(circuit);
    std::vector<std::uint64_t> counts(circuit.slots.size(), 0);
    for (const auto &rec : records) {
        for (const auto &e : rec.events) {
            auto it = idx.find(e.point);
            if (it == idx.end()) {
                throw InvalidParams("record " + std::to_string(rec.shot) + " has an event at " + point_str(e.point) +
                                    " outside the circuit's reset slots");
            }
            if (!detections_only || is_detection(e.kind)) {
                counts[it->second]++;
            }
        }
    }
    RateField f;
    const double m = static_cast<double>(records.size());
    for (std::size_t k = 0; k < counts.size(); k++) {
        f.set(circuit.slots[k], static_cast<double>(counts[k]) / m);
    }
    return f;
}

struct Moments {
    double mean;
    double se;
};

Moments moments(double sum, double sumsq, double m) {
    double mean = sum / m;
    if (m < 2) {
        return {mean, 0.0};
    }
    double var = std::max(0.0, (sumsq - m * mean * mean) / (m - 1));
    return {mean, std::sqrt(var / m)};
}

// Weighted density and N_R from records; weights empty means all ones.
ObservableSeries weighted_series(const std::vector<ShotRecord> &records, const CircuitSpec &circuit,
                                 const std::vector<double> &weights, std::vector<std::vector<double>> *density_se) {
    const SiteInterval sites = circuit.site_range;
    const int t_max = circuit.t_max();
    const int origin = circuit.params.origin;
    ObservableSeries out(sites, t_max, origin);
    out.se_right.assign(t_max + 1, 0.0);
    out.shots = records.size();
    std::vector<std::vector<double>> sumsq(t_max + 1, std::vector<double>(sites.width(), 0.0));
    std::vector<double> nr_sum(t_max + 1, 0.0);
    std::vector<double> nr_sumsq(t_max + 1, 0.0);
    for (std::size_t s = 0; s < records.size(); s++) {
        const auto &rec = records[s];
        double w = weights.empty() ? 1.0 : weights[s];
        if (static_cast<int>(rec.active_by_t.size()) != t_max + 1) {
            throw InvalidParams("record " + std::to_string(rec.shot) + " covers " +
                                std::to_string(rec.active_by_t.size()) + " periods, circuit needs " +
                                std::to_string(t_max + 1));
        }
        for (int t = 0; t <= t_max; t++) {
            int nr = 0;
            for (int site : rec.active_by_t[t]) {
                if (!sites.contains(site)) {
                    throw InvalidParams("record " + std::to_string(rec.shot) + " has site " + std::to_string(site) +
                                        " outside the circuit");
                }
                out.density[t][site - sites.lo] += w;
                sumsq[t][site - sites.lo] += w * w;
                nr += site >= origin;
            }
            nr_sum[t] += w * nr;
            nr_sumsq[t] += w * w * nr * nr;
        }
    }
    const double m = static_cast<double>(records.size());
    if (density_se) {
        density_se->assign(t_max + 1, std::vector<double>(sites.width(), 0.0));
    }
    for (int t = 0; t <= t_max; t++) {
        for (int k = 0; k < sites.width(); k++) {
            Moments mo = moments(out.density[t][k], sumsq[t][k], m);
            out.density[t][k] = mo.mean;
            if (density_se) {
                (*density_se)[t][k] = mo.se;
            }
        }
        Moments mo = moments(nr_sum[t], nr_sumsq[t], m);
        out.n_right[t] = mo.mean;
        out.se_right[t] = mo.se;
    }
    return out;
}

}  // namespace

RateField empirical_rates(const std::vector<ShotRecord> &records, const CircuitSpec &circuit) {
    return count_rates(records, circuit, false);
}

RateField detection_rates(const std::vector<ShotRecord> &records, const CircuitSpec &circuit) {
    return count_rates(records, circuit, true);
}

ObservableSeries record_series(const std::vector<ShotRecord> &records, const CircuitSpec &circuit) {
    if (records.empty()) {
        throw InvalidParams("need at least one shot record");
    }
    return weighted_series(records, circuit, {}, nullptr);
}

ReweightResult reweight(std::vector<ShotRecord> &records, const CircuitSpec &circuit, double p_target,
                        const RateField &empirical, const ReweightOptions &options) {
    if (records.empty()) {
        throw InvalidParams("need at least one shot record");
    }
    if (!(p_target > 0.0 && p_target < 1.0)) {
        throw InvalidParams("target reset rate must lie strictly between 0 and 1, got " + fmt_double(p_target));
    }
    std::vector<double> phat = empirical.by_slot(circuit);
    const double m = static_cast<double>(records.size());
    ReweightResult res;
    const double lo = 1.0 / (2.0 * m);
    const double hi = 1.0 - lo;
    for (std::size_t k = 0; k < phat.size(); k++) {
        if (phat[k] == 0.0 || phat[k] == 1.0) {
            const SpacetimePoint pt = circuit.slots[k];
            if (options.strict) {
                throw DegenerateRate("empirical reset rate " + fmt_double(phat[k]) + " at " + point_str(pt) +
                                         " cannot be reweighted",
                                     pt.r, pt.t);
            }
            res.degenerate.push_back(pt);
            phat[k] = std::clamp(phat[k], lo, hi);
        }
    }
    // log w = sum_k log((1-p)/(1-ph_k)) + sum_{k reset} [log(p/ph_k) - log((1-p)/(1-ph_k))].
    double base = 0.0;
    std::vector<double> delta(phat.size());
    for (std::size_t k = 0; k < phat.size(); k++) {
        double no = std::log((1.0 - p_target) / (1.0 - phat[k]));
        base += no;
        delta[k] = std::log(p_target / phat[k]) - no;
    }
    auto idx = slot_index(circuit);
    std::vector<int> event_slots;
    res.weights.resize(records.size());
    for (std::size_t s = 0; s < records.size(); s++) {
        double lw = base;
        for (const auto &e : records[s].events) {
            auto it = idx.find(e.point);
            if (it == idx.end()) {
                throw InvalidParams("record " + std::to_string(records[s].shot) + " has an event at " +
                                    point_str(e.point) + " outside the circuit's reset slots");
            }
            lw += delta[it->second];
        }
        double w = std::exp(lw);
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw NumericalInvariant("importance weight of shot " + std::to_string(records[s].shot) +
                                     " is not a positive finite number (log weight " + fmt_double(lw) + ")");
        }
        res.weights[s] = w;
        records[s].weight = w;
    }
    Moments wm{0, 0};
    {
        double sum = 0.0;
        double sumsq = 0.0;
        for (double w : res.weights) {
            sum += w;
            sumsq += w * w;
        }
        wm = moments(sum, sumsq, m);
        res.mean_weight = wm.mean;
        res.weight_std = wm.se * std::sqrt(m);
    }
    std::vector<double> rsum(phat.size(), 0.0);
    std::vector<double> rsumsq(phat.size(), 0.0);
    for (std::size_t s = 0; s < records.size(); s++) {
        double w = res.weights[s];
        for (const auto &e : records[s].events) {
            int k = idx.at(e.point);
            rsum[k] += w;
            rsumsq[k] += w * w;
        }
    }
    for (std::size_t k = 0; k < phat.size(); k++) {
        Moments mo = moments(rsum[k], rsumsq[k], m);
        res.rates.set(circuit.slots[k], std::clamp(mo.mean, 0.0, 1.0));
        res.rates_se.set(circuit.slots[k], std::min(1.0, mo.se));
    }
    res.series = weighted_series(records, circuit, res.weights, &res.density_se);
    return res;
}

nlohmann::json ReweightResult::to_json() const {
    nlohmann::json j;
    j["mean_weight"] = mean_weight;
    j["weight_std"] = weight_std;
    j["shots"] = weights.size();
    auto &deg = j["degenerate"] = nlohmann::json::array();
    for (const auto &pt : degenerate) {
        deg.push_back({{"r", pt.r}, {"t", pt.t}});
    }
    return j;
}

}  // namespace fqcp::adaptive
