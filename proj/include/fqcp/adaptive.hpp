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
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fqcp/model.hpp"
#include "fqcp/observables.hpp"
#include "json.hpp"

namespace fqcp::adaptive {

/// Space-time map of probabilities keyed by (block r, period t).
class RateField {
   public:
    RateField() = default;

    /// Every reset slot of the circuit set to `p`.
    static RateField uniform(const CircuitSpec &circuit, double p);
    static RateField from_function(const CircuitSpec &circuit, const std::function<double(SpacetimePoint)> &fn);

    /// Throws InvalidParams if the point is absent.
    double at(SpacetimePoint point) const;
    bool contains(SpacetimePoint point) const {
        return values_.count(point) != 0;
    }
    /// Throws InvalidParams unless value lies in [0, 1].
    void set(SpacetimePoint point, double value);
    const std::map<SpacetimePoint, double> &values() const {
        return values_;
    }
    std::size_t size() const {
        return values_.size();
    }
    double min() const;
    double max() const;
    /// True when the domain is exactly the circuit's reset slots.
    bool matches(const CircuitSpec &circuit) const;
    /// Values in the circuit's slot order; throws InvalidParams on a domain mismatch.
    std::vector<double> by_slot(const CircuitSpec &circuit) const;

    /// Columns t,r,p.
    void write_csv(std::ostream &out) const;
    static RateField read_csv(std::istream &in);

    bool operator==(const RateField &other) const = default;

   private:
    std::map<SpacetimePoint, double> values_;
};

enum class EventKind { none, injected, detected_sx, detected_sz, detected_leakage, detected_gadget };

const char *to_string(EventKind kind);
EventKind parse_event_kind(const std::string &name);
inline bool is_detection(EventKind kind) {
    return kind != EventKind::none && kind != EventKind::injected;
}

struct Event {
    SpacetimePoint point;
    EventKind kind;
    bool operator==(const Event &other) const = default;
};

struct ShotRecord {
    std::uint64_t shot = 0;
    std::uint64_t seed = 0;
    /// Non-none events in slot order; absent points are `none`.
    std::vector<Event> events;
    /// Active sites after each period, t = 0..t_max.
    std::vector<std::vector<int>> active_by_t;
    /// Sites covered by final_bits (the final reachable interval).
    SiteInterval final_sites;
    std::optional<double> weight;

    EventKind event_at(SpacetimePoint point) const;
    /// m_s(r, t).
    bool reset_at(SpacetimePoint point) const {
        return event_at(point) != EventKind::none;
    }
    /// n_s(r, t); zero for sites never recorded active.
    bool bit(int site, int t) const;

    nlohmann::json to_json() const;
    static ShotRecord from_json(const nlohmann::json &j);
    bool operator==(const ShotRecord &other) const = default;
};

void write_records_jsonl(std::ostream &out, const std::vector<ShotRecord> &records);
std::vector<ShotRecord> read_records_jsonl(std::istream &in);

/// One shot of a backend: owns the simulated state for that shot.
class ShotSession {
   public:
    virtual ~ShotSession() = default;
    /// Unitary layers of period t (1-based).
    virtual void apply_gates(int t) = 0;
    /// Detection at a reset slot; `none` if nothing fired.
    virtual EventKind detect(const ResetOp &op, int t) = 0;
    virtual void reset_block(const ResetOp &op, int t) = 0;
    /// Active sites after period t (sampled for quantum backends).
    virtual std::vector<int> active_sites(int t) = 0;
    /// Physical two-qubit gates executed so far (0 for classical backends).
    virtual std::size_t two_qubit_gates() const {
        return 0;
    }
};

class NoiseBackend {
   public:
    virtual ~NoiseBackend() = default;
    virtual std::string kind() const = 0;
    /// Throws if the backend cannot run this circuit.
    virtual void check(const CircuitSpec &circuit) const = 0;
    /// Sessions with equal (seed, shot) produce identical event streams. The
    /// session refers to `circuit`, which must outlive it.
    virtual std::unique_ptr<ShotSession> start(const CircuitSpec &circuit, std::uint64_t seed,
                                               std::uint64_t shot) const = 0;
    virtual nlohmann::json to_json() const = 0;
};

/// Logical Pauli applied by the synthetic backend's logical error field.
enum class LogicalFlip { x1, x2, x1x2 };

const char *to_string(LogicalFlip flip);
LogicalFlip parse_logical_flip(const std::string &name);

struct SyntheticParams {
    /// Per-slot detection probability; an empty field means no detections.
    RateField detect;
    /// Relative weights of detected_sx, detected_sz, detected_leakage, detected_gadget.
    std::array<double, 4> kind_weights{0.5, 0.5, 0.0, 0.0};
    /// Optional per-slot rate of an undetectable logical flip, applied before detection.
    std::optional<RateField> logical_error;
    LogicalFlip logical_flip = LogicalFlip::x1;
};

/// Classical dephased-model state with i.i.d. detection events.
std::unique_ptr<NoiseBackend> make_synthetic_backend(SyntheticParams params);

struct RunOptions {
    int threads = 1;
};

/// Shared driver: per slot, detection first, then an injected reset if the
/// pre-drawn uniform falls under the injection rate. `label` separates the
/// random streams of calibration and main runs.
std::vector<ShotRecord> run_protocol(const CircuitSpec &circuit, const NoiseBackend &backend,
                                     const std::optional<RateField> &injection, std::uint64_t shots,
                                     std::uint64_t seed, const std::string &label, const RunOptions &options = {});

/// Injection disabled; returns detections / shots per slot.
RateField run_calibration(const CircuitSpec &circuit, const NoiseBackend &backend, std::uint64_t shots,
                          std::uint64_t seed, const RunOptions &options = {});

/// (p - d) / (1 - d) pointwise; throws DetectionExceedsTarget listing every
/// point with d > p.
RateField injection_field(double p_target, const RateField &detect);

std::vector<ShotRecord> run_main(const CircuitSpec &circuit, const NoiseBackend &backend, const RateField &injection,
                                 std::uint64_t shots, std::uint64_t seed, const RunOptions &options = {});

/// Fraction of records with a reset at each circuit slot.
RateField empirical_rates(const std::vector<ShotRecord> &records, const CircuitSpec &circuit);
/// Fraction of records with a detection event at each circuit slot.
RateField detection_rates(const std::vector<ShotRecord> &records, const CircuitSpec &circuit);

struct ReweightOptions {
    /// Throw DegenerateRate instead of clipping p-hat in {0, 1}.
    bool strict = false;
};

struct ReweightResult {
    std::vector<double> weights;
    double mean_weight = 0.0;
    double weight_std = 0.0;
    /// Points whose empirical rate was clipped.
    std::vector<SpacetimePoint> degenerate;
    /// (1/M) sum_s w_s m_s(r, t) and its standard error.
    RateField rates;
    RateField rates_se;
    /// Weighted density and N_R(t) with standard errors.
    ObservableSeries series;
    std::vector<std::vector<double>> density_se;

    nlohmann::json to_json() const;
};

/// Importance weights w_s = prod (p / p-hat)^m ((1 - p) / (1 - p-hat))^(1 - m),
/// accumulated in log space. Stores the weights into the records.
ReweightResult reweight(std::vector<ShotRecord> &records, const CircuitSpec &circuit, double p_target,
                        const RateField &empirical, const ReweightOptions &options = {});

/// Unweighted estimate of density and N_R(t) from records.
ObservableSeries record_series(const std::vector<ShotRecord> &records, const CircuitSpec &circuit);

}  // namespace fqcp::adaptive
