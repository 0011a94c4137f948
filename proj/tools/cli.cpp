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


#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <new>
#include <sstream>

#include "CLI11.hpp"
#include "fqcp/adaptive.hpp"
#include "fqcp/analysis.hpp"
#include "fqcp/dephased.hpp"
#include "fqcp/density.hpp"
#include "fqcp/errors.hpp"
#include "fqcp/fault.hpp"
#include "fqcp/format.hpp"
#include "fqcp/gadget.hpp"
#include "fqcp/physical.hpp"
#include "fqcp/rng.hpp"

namespace fqcp::cli {

namespace fs = std::filesystem;

namespace {

void require(bool ok, const std::string &msg) {
    if (!ok) {
        throw InvalidParams(msg);
    }
}

bool is_probability(double v) {
    return v >= 0.0 && v <= 1.0;
}

std::ofstream open_out(const RunConfig &c, const std::string &name) {
    fs::create_directories(c.out);
    fs::path path = fs::path(c.out) / name;
    std::ofstream f(path);
    if (!f) {
        throw InvalidParams("cannot write " + path.string());
    }
    return f;
}

std::ifstream open_in(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw InvalidParams("cannot read " + path);
    }
    return f;
}

void header(std::ostream &os, const RunConfig &c) {
    os << "# config " << c.to_json().dump() << '\n';
}

void write_json(const RunConfig &c, const std::string &name, nlohmann::json body) {
    body["config"] = c.to_json();
    auto f = open_out(c, name);
    f << body.dump(2) << '\n';
}

ModelParams model(const RunConfig &c, double p) {
    ModelParams mp{c.theta, p, c.t, c.origin};
    mp.validate();
    return mp;
}

// Rows of a CSV with a header line; '#' lines are skipped.
struct Table {
    std::map<std::string, int> columns;
    std::vector<std::vector<std::string>> rows;

    const std::string &get(std::size_t row, const std::string &col) const {
        auto it = columns.find(col);
        if (it == columns.end()) {
            throw InvalidParams("missing CSV column '" + col + "'");
        }
        return rows.at(row).at(it->second);
    }
    double num(std::size_t row, const std::string &col) const {
        try {
            return std::stod(get(row, col));
        } catch (const std::logic_error &) {
            throw InvalidParams("non-numeric value in CSV column '" + col + "'");
        }
    }
};

Table read_table(const std::string &path) {
    auto f = open_in(path);
    Table t;
    std::string line;
    bool have_header = false;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (!have_header) {
            for (std::size_t k = 0; k < cells.size(); k++) {
                t.columns[cells[k]] = static_cast<int>(k);
            }
            have_header = true;
        } else {
            if (cells.size() != t.columns.size()) {
                throw InvalidParams("ragged CSV row in " + path);
            }
            t.rows.push_back(std::move(cells));
        }
    }
    if (!have_header) {
        throw InvalidParams("empty CSV file " + path);
    }
    return t;
}

adaptive::RateField read_field(const std::string &path) {
    auto f = open_in(path);
    return adaptive::RateField::read_csv(f);
}

void write_field(const RunConfig &c, const std::string &name, const adaptive::RateField &field) {
    auto f = open_out(c, name);
    header(f, c);
    field.write_csv(f);
}

void write_series_rows(std::ostream &os, double p, const ObservableSeries &s) {
    for (int t = 0; t <= s.t_max(); t++) {
        double se = s.se_right.empty() ? 0.0 : s.se_right[t];
        os << fmt_double(p) << ',' << t << ',' << fmt_double(s.n_right[t]) << ',' << fmt_double(se) << ','
           << s.shots << '\n';
    }
}

void write_density_rows(std::ostream &os, double p, const ObservableSeries &s) {
    for (int t = 0; t <= s.t_max(); t++) {
        for (int r = s.sites.lo; r <= s.sites.hi; r++) {
            os << fmt_double(p) << ',' << t << ',' << r << ',' << fmt_double(s.density_at(r, t)) << ',' << s.shots
               << '\n';
        }
    }
}

// Effective exponents and, for at least two p values, the crossing report.
void write_exponents(const RunConfig &c, const std::map<double, std::map<int, double>> &series, int t_max) {
    std::map<double, analysis::EffExpSeries> curves;
    for (const auto &[p, s] : series) {
        curves[p] = analysis::effective_exponent(s, c.dt, p);
    }
    {
        auto f = open_out(c, "effexp.csv");
        header(f, c);
        analysis::write_effexp_csv(f, curves);
    }
    if (curves.size() >= 2) {
        std::vector<int> times = c.times.empty() ? default_times(t_max, c.dt) : c.times;
        auto res = analysis::crossing_estimate(curves, times);
        nlohmann::json body = res.to_json();
        body["times"] = times;
        write_json(c, "crossing.json", body);
        std::cout << "crossing p_c=" << fmt_double(res.p_c) << " delta_c=" << fmt_double(res.delta_c) << '\n';
    }
}

void run_dephased(const RunConfig &c) {
    auto series_f = open_out(c, "dephased_series.csv");
    auto density_f = open_out(c, "dephased_density.csv");
    header(series_f, c);
    header(density_f, c);
    series_f << "p,t,mean_NR,se_NR,shots\n";
    density_f << "p,t,r,mean_n,shots\n";
    std::ofstream per_shot_f;
    if (c.store_shots) {
        per_shot_f = open_out(c, "dephased_per_shot.csv");
        header(per_shot_f, c);
        per_shot_f << "p,shot,t,NR\n";
    }
    std::map<double, std::map<int, double>> nr;
    for (double p : c.p_grid) {
        CircuitSpec circuit = build_circuit(model(c, p));
        dephased::EnsembleOptions opt;
        opt.threads = c.threads;
        opt.keep_per_shot = c.store_shots;
        std::uint64_t seed = derive_seed(c.seed, "dephased/p=" + fmt_double(p));
        auto s = dephased::run_ensemble(circuit, c.theta, p, c.shots, seed, opt);
        write_series_rows(series_f, p, s);
        write_density_rows(density_f, p, s);
        if (c.store_shots) {
            const int w = s.t_max() + 1;
            for (std::uint64_t shot = 0; shot < c.shots; shot++) {
                for (int t = 0; t < w; t++) {
                    per_shot_f << fmt_double(p) << ',' << shot << ',' << t << ',' << s.per_shot_nr[shot * w + t]
                               << '\n';
                }
            }
        }
        for (int t = 0; t <= s.t_max(); t++) {
            nr[p][t] = s.n_right[t];
        }
        std::cout << "dephased p=" << fmt_double(p) << " N_R(" << c.t << ")=" << fmt_double(s.n_right[c.t]) << " +- "
                  << fmt_double(s.se_right[c.t]) << '\n';
    }
    if (c.dt > 0) {
        write_exponents(c, nr, c.t);
    }
}

void run_dm(const RunConfig &c) {
    auto series_f = open_out(c, "dm_series.csv");
    auto density_f = open_out(c, "dm_density.csv");
    header(series_f, c);
    header(density_f, c);
    series_f << "p,t,mean_NR,se_NR,shots\n";
    density_f << "p,t,r,mean_n,shots\n";
    dm::SimOptions opt;
    opt.live_cap = c.live_cap;
    std::map<double, std::map<int, double>> nr;
    for (double p : c.p_grid) {
        auto s = dm::simulate(model(c, p), opt);
        write_series_rows(series_f, p, s);
        write_density_rows(density_f, p, s);
        for (int t = 0; t <= s.t_max(); t++) {
            nr[p][t] = s.n_right[t];
        }
        std::cout << "dm p=" << fmt_double(p) << " N_R(" << c.t << ")=" << fmt_double(s.n_right[c.t]) << '\n';
    }
    ModelParams mp = model(c, c.p());
    nlohmann::json report;
    report["schedule"] = dm::build_reuse_schedule(build_circuit(mp)).to_json();
    auto &rows = report["resources"] = nlohmann::json::array();
    for (const auto &row : physical::resource_report(mp)) {
        rows.push_back(row.to_json());
    }
    write_json(c, "dm_schedule.json", report);
    if (c.dt > 0) {
        write_exponents(c, nr, c.t);
    }
}

void run_ftcheck(const RunConfig &c) {
    using code422::GadgetKind;
    code422::FtOptions opt;
    opt.measurement_crosstalk = c.crosstalk;
    std::vector<code422::Gadget> gadgets = {
        code422::build_gadget(GadgetKind::stab_meas),
        code422::build_gadget(GadgetKind::reset_00),
        code422::build_gadget(GadgetKind::meas_z1),
        code422::build_gadget(GadgetKind::meas_z2),
        code422::build_gadget(GadgetKind::crx_intra, kPi, 1),
        code422::build_gadget(GadgetKind::crx_intra, kPi, 2),
        code422::build_gadget(GadgetKind::crx_inter, kPi),
    };
    nlohmann::json body;
    auto &reports = body["reports"] = nlohmann::json::array();
    for (const auto &g : gadgets) {
        auto rep = code422::ft_check(g, opt);
        reports.push_back(rep.to_json(g));
        std::cout << g.name << ": " << (rep.fault_tolerant ? "fault-tolerant" : "NOT fault-tolerant") << " ("
                  << rep.violations << " violations / " << rep.total << " faults)\n";
    }
    write_json(c, "ftcheck.json", body);
}

std::unique_ptr<adaptive::NoiseBackend> make_backend(const RunConfig &c, const CircuitSpec &circuit) {
    if (c.backend == "physical") {
        physical::PhysicalNoise n{c.p1, c.p2, c.p_mem, c.p_meas, c.memory_blocks};
        return physical::make_physical_backend(n);
    }
    adaptive::SyntheticParams sp;
    if (!c.detect_field.empty()) {
        sp.detect = read_field(c.detect_field);
    } else if (c.detect_ramp >= 0.0) {
        const double top = c.detect_ramp;
        const int t_max = circuit.t_max();
        sp.detect = adaptive::RateField::from_function(circuit, [&](SpacetimePoint pt) { return top * pt.t / t_max; });
    }
    if (sp.detect.size() != 0) {
        write_field(c, "detect_field.csv", sp.detect);
    }
    if (!c.logical_error_field.empty()) {
        sp.logical_error = read_field(c.logical_error_field);
        sp.logical_flip = adaptive::parse_logical_flip(c.logical_flip);
    }
    return adaptive::make_synthetic_backend(std::move(sp));
}

void run_adaptive(const RunConfig &c) {
    ModelParams mp = model(c, c.p());
    CircuitSpec circuit = build_circuit(mp);
    auto backend = make_backend(c, circuit);
    backend->check(circuit);
    adaptive::RunOptions opt;
    opt.threads = c.threads;
    adaptive::RateField injection;
    if (!c.injection_field.empty()) {
        injection = read_field(c.injection_field);
    } else {
        std::uint64_t cal = c.calibration_shots ? c.calibration_shots : c.shots;
        auto detect = adaptive::run_calibration(circuit, *backend, cal, c.seed, opt);
        write_field(c, "calibration.csv", detect);
        injection = adaptive::injection_field(c.p(), detect);
    }
    write_field(c, "injection.csv", injection);
    auto records = adaptive::run_main(circuit, *backend, injection, c.shots, c.seed, opt);
    {
        auto f = open_out(c, "records.jsonl");
        adaptive::write_records_jsonl(f, records);
    }
    auto emp = adaptive::empirical_rates(records, circuit);
    write_field(c, "empirical.csv", emp);
    nlohmann::json meta;
    meta["backend"] = backend->to_json();
    meta["slots"] = circuit.slots.size();
    auto &rows = meta["resources"] = nlohmann::json::array();
    for (const auto &row : physical::resource_report(mp)) {
        rows.push_back(row.to_json());
    }
    write_json(c, "records_meta.json", meta);
    std::cout << "adaptive: " << records.size() << " shots, " << circuit.slots.size()
              << " reset slots, empirical reset rate in [" << fmt_double(emp.min()) << ", " << fmt_double(emp.max())
              << "]\n";
}

std::vector<adaptive::ShotRecord> load_records(const std::string &path) {
    auto f = open_in(path);
    auto records = adaptive::read_records_jsonl(f);
    require(!records.empty(), "no shot records in " + path);
    return records;
}

CircuitSpec circuit_for_records(const RunConfig &c, const std::vector<adaptive::ShotRecord> &records) {
    int t = static_cast<int>(records.front().active_by_t.size()) - 1;
    require(c.t == 0 || c.t == t, "records cover t_max=" + std::to_string(t) + " but --t is " + std::to_string(c.t));
    return build_circuit({c.theta, c.p(), t, c.origin});
}

void run_reweight(const RunConfig &c) {
    auto records = load_records(c.records);
    CircuitSpec circuit = circuit_for_records(c, records);
    auto emp = adaptive::empirical_rates(records, circuit);
    adaptive::ReweightOptions opt;
    opt.strict = c.strict_reweight;
    auto res = adaptive::reweight(records, circuit, c.p(), emp, opt);
    {
        auto f = open_out(c, "reweighted_rates.csv");
        header(f, c);
        f << "t,r,p,se\n";
        for (const auto &[pt, v] : res.rates.values()) {
            f << pt.t << ',' << pt.r << ',' << fmt_double(v) << ',' << fmt_double(res.rates_se.at(pt)) << '\n';
        }
    }
    {
        auto f = open_out(c, "reweighted_series.csv");
        header(f, c);
        f << "p,t,mean_NR,se_NR,shots\n";
        write_series_rows(f, c.p(), res.series);
    }
    {
        auto f = open_out(c, "reweighted_density.csv");
        header(f, c);
        f << "p,t,r,mean_n,se,shots\n";
        for (int t = 0; t <= res.series.t_max(); t++) {
            for (int r = res.series.sites.lo; r <= res.series.sites.hi; r++) {
                f << fmt_double(c.p()) << ',' << t << ',' << r << ',' << fmt_double(res.series.density_at(r, t)) << ','
                  << fmt_double(res.density_se[t][r - res.series.sites.lo]) << ',' << res.series.shots << '\n';
            }
        }
    }
    {
        auto f = open_out(c, "records_weighted.jsonl");
        adaptive::write_records_jsonl(f, records);
    }
    write_json(c, "reweight_summary.json", res.to_json());
    double lo = 1.0;
    double hi = 0.0;
    for (const auto &[pt, v] : res.rates.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::cout << "reweight: mean weight " << fmt_double(res.mean_weight) << ", reweighted reset rate in ["
              << fmt_double(lo) << ", " << fmt_double(hi) << "], " << res.degenerate.size() << " degenerate points\n";
}

void run_analyze(const RunConfig &c) {
    if (!c.input.empty()) {
        Table tab = read_table(c.input);
        std::map<double, std::map<int, double>> nr;
        int t_max = 0;
        for (std::size_t k = 0; k < tab.rows.size(); k++) {
            int t = static_cast<int>(tab.num(k, "t"));
            nr[tab.num(k, "p")][t] = tab.num(k, "mean_NR");
            t_max = std::max(t_max, t);
        }
        write_exponents(c, nr, t_max);
    }
    if (!c.per_shot.empty()) {
        Table tab = read_table(c.per_shot);
        std::map<std::pair<double, int>, std::vector<double>> samples;
        for (std::size_t k = 0; k < tab.rows.size(); k++) {
            samples[{tab.num(k, "p"), static_cast<int>(tab.num(k, "t"))}].push_back(tab.num(k, "NR"));
        }
        auto f = open_out(c, "bootstrap.csv");
        header(f, c);
        f << "p,t,mean_NR,bootstrap_se\n";
        for (const auto &[key, v] : samples) {
            std::uint64_t seed = derive_seed(c.seed, "bootstrap/p=" + fmt_double(key.first) + "/t=" +
                                                         std::to_string(key.second));
            f << fmt_double(key.first) << ',' << key.second << ',' << fmt_double(analysis::mean(v)) << ','
              << fmt_double(analysis::bootstrap_se(v, analysis::mean, c.resamples, seed)) << '\n';
        }
    }
    if (!c.records.empty()) {
        auto records = load_records(c.records);
        CircuitSpec circuit = circuit_for_records(c, records);
        std::vector<double> w;
        for (const auto &r : records) {
            require(r.weight.has_value(), "records need weights (run reweight first)");
            w.push_back(*r.weight);
        }
        auto f = open_out(c, "bootstrap_weighted.csv");
        header(f, c);
        f << "t,mean_NR,bootstrap_se\n";
        for (int t = 0; t <= circuit.t_max(); t++) {
            std::vector<double> v;
            for (const auto &r : records) {
                double n = 0;
                for (int site : r.active_by_t.at(t)) {
                    n += site >= circuit.params.origin;
                }
                v.push_back(n);
            }
            std::uint64_t seed = derive_seed(c.seed, "bootstrap/weighted/t=" + std::to_string(t));
            f << t << ',' << fmt_double(analysis::weighted_mean(v, w)) << ','
              << fmt_double(analysis::bootstrap_se(v, w, analysis::weighted_mean, c.resamples, seed)) << '\n';
        }
    }
}

}  // namespace

std::vector<int> default_times(int t_max, int dt) {
    std::vector<int> times;
    for (int t = std::max(1, dt / 2); t + dt <= t_max; t *= 2) {
        times.push_back(t);
    }
    return times;
}

void RunConfig::validate() const {
    static const std::vector<std::string> known = {"dephased", "dm", "ftcheck", "adaptive", "reweight", "analyze"};
    require(std::find(known.begin(), known.end(), subcommand) != known.end(),
            "unknown subcommand '" + subcommand + "'");
    require(std::isfinite(theta), "--theta must be finite");
    require(threads >= 0, "--threads must be >= 0");
    for (double p : p_grid) {
        require(is_probability(p), "reset probabilities must lie in [0, 1], got " + fmt_double(p));
    }
    for (auto [name, v] : {std::pair{"--p1", p1}, {"--p2", p2}, {"--p-mem", p_mem}, {"--p-meas", p_meas}}) {
        require(is_probability(v), std::string(name) + " must lie in [0, 1]");
    }
    require(dt >= 0, "--dt must be >= 0");
    require(resamples >= 1, "--resamples must be >= 1");
    if (subcommand == "dephased" || subcommand == "dm") {
        require(!p_grid.empty(), subcommand + " needs --p or --p-grid");
        require(t >= 1, "--t must be >= 1");
    }
    if (subcommand == "dephased") {
        require(shots >= 1, "--shots must be >= 1");
    }
    if (subcommand == "dm") {
        require(live_cap >= 1, "--live-cap must be >= 1");
    }
    if (subcommand == "adaptive" || subcommand == "reweight") {
        require(p_grid.size() == 1, subcommand + " needs exactly one target --p");
        require(p() > 0.0 && p() < 1.0, "target --p must lie strictly between 0 and 1");
    }
    if (subcommand == "adaptive") {
        require(t >= 1, "--t must be >= 1");
        require(shots >= 1, "--shots must be >= 1");
        require(backend == "synthetic" || backend == "physical", "--backend must be synthetic or physical");
        require(detect_field.empty() || detect_ramp < 0.0, "use only one of --detect-field and --detect-ramp");
        require(detect_ramp < 0.0 || is_probability(detect_ramp), "--detect-ramp must lie in [0, 1]");
        require(backend == "synthetic" || (detect_field.empty() && detect_ramp < 0.0 && logical_error_field.empty()),
                "detection and logical error fields apply to the synthetic backend only");
    }
    if (subcommand == "reweight") {
        require(!records.empty(), "reweight needs --records");
    }
    if (subcommand == "analyze") {
        require(!input.empty() || !per_shot.empty() || !records.empty(),
                "analyze needs --input, --per-shot or --records");
        require(input.empty() || dt >= 1, "analyze --input needs --dt >= 1");
    }
}

nlohmann::json RunConfig::to_json() const {
    return {{"subcommand", subcommand},
            {"theta", theta},
            {"p_grid", p_grid},
            {"t", t},
            {"dt", dt},
            {"origin", origin},
            {"shots", shots},
            {"calibration_shots", calibration_shots},
            {"seed", seed},
            {"backend", backend},
            {"strict_reweight", strict_reweight},
            {"store_shots", store_shots},
            {"live_cap", live_cap},
            {"crosstalk", crosstalk},
            {"detect_field", detect_field},
            {"detect_ramp", detect_ramp},
            {"injection_field", injection_field},
            {"logical_error_field", logical_error_field},
            {"logical_flip", logical_flip},
            {"p1", p1},
            {"p2", p2},
            {"p_mem", p_mem},
            {"p_meas", p_meas},
            {"memory_blocks", memory_blocks},
            {"records", records},
            {"input", input},
            {"per_shot", per_shot},
            {"times", times},
            {"resamples", resamples}};
}

void run(const RunConfig &config) {
    if (config.subcommand == "dephased") {
        run_dephased(config);
    } else if (config.subcommand == "dm") {
        run_dm(config);
    } else if (config.subcommand == "ftcheck") {
        run_ftcheck(config);
    } else if (config.subcommand == "adaptive") {
        run_adaptive(config);
    } else if (config.subcommand == "reweight") {
        run_reweight(config);
    } else if (config.subcommand == "analyze") {
        run_analyze(config);
    } else {
        throw InvalidParams("unknown subcommand '" + config.subcommand + "'");
    }
}

int main(int argc, const char *const *argv) {
    CLI::App app{"fqcp: Floquet quantum contact process simulators and adaptive error-detection pipeline"};
    app.set_config("--config", "", "Flat key = value configuration file; command-line flags override it");
    app.require_subcommand(1);
    RunConfig c;
    c.theta = kDefaultTheta;
    c.t = 10;
    c.shots = 1000;
    c.seed = 1;
    double p_single = -1.0;
    auto *p_opt = app.add_option("--p", p_single, "Reset probability (target rate for adaptive/reweight)");
    auto *grid_opt = app.add_option("--p-grid", c.p_grid, "Comma-separated reset probabilities")->delimiter(',');
    p_opt->excludes(grid_opt);
    app.add_option("--theta", c.theta, "Rotation angle of the controlled gates")->capture_default_str();
    auto *t_opt = app.add_option("--t", c.t, "Number of periods (reweight/analyze infer it from records)");
    app.add_option("--dt", c.dt, "Lag for effective exponents (0 = none)")->capture_default_str();
    app.add_option("--origin", c.origin, "Initially active site")->capture_default_str();
    app.add_option("--shots", c.shots, "Monte Carlo shots")->capture_default_str();
    app.add_option("--calibration-shots", c.calibration_shots, "Calibration shots (0 = --shots)");
    app.add_option("--seed", c.seed, "Master seed; all streams derive from it")->capture_default_str();
    app.add_option("--threads", c.threads, "Worker threads (0 = all cores)")->capture_default_str();
    app.add_option("--out", c.out, "Output directory")->capture_default_str();
    app.add_option("--backend", c.backend, "Adaptive backend: synthetic or physical")->capture_default_str();
    app.add_flag("--strict-reweight", c.strict_reweight, "Fail on empirical rates of 0 or 1 instead of clipping");
    app.add_flag("--store-shots", c.store_shots, "Write per-shot N_R values");
    app.add_option("--live-cap", c.live_cap, "Density-matrix live-site cap")->capture_default_str();
    app.add_flag("--crosstalk", c.crosstalk, "ftcheck: add measurement crosstalk faults");
    app.add_option("--detect-field", c.detect_field, "Synthetic detection field CSV (t,r,p)");
    app.add_option("--detect-ramp", c.detect_ramp, "Synthetic detection field rising linearly in t to this value");
    app.add_option("--injection-field", c.injection_field, "Use this injection field CSV instead of calibrating");
    app.add_option("--logical-error-field", c.logical_error_field, "Synthetic logical error field CSV");
    app.add_option("--logical-flip", c.logical_flip, "Logical flip of the error field: X1, X2 or X1X2");
    app.add_option("--p1", c.p1, "Physical single-qubit depolarizing rate");
    app.add_option("--p2", c.p2, "Physical two-qubit depolarizing rate");
    app.add_option("--p-mem", c.p_mem, "Physical memory dephasing per slice");
    app.add_option("--p-meas", c.p_meas, "Physical readout/preparation flip rate");
    app.add_option("--memory-blocks", c.memory_blocks, "Blocks exposed to memory noise (default all)")
        ->delimiter(',');
    app.add_option("--records", c.records, "Shot records (JSON lines)");
    app.add_option("--input", c.input, "Series CSV (p,t,mean_NR,...) for analyze");
    app.add_option("--per-shot", c.per_shot, "Per-shot CSV (p,shot,t,NR) for bootstrap errors");
    app.add_option("--times", c.times, "Comma-separated crossing times")->delimiter(',');
    app.add_option("--resamples", c.resamples, "Bootstrap resamples")->capture_default_str();
    for (auto [name, help] : {std::pair{"dephased", "Fully dephased Monte Carlo ensemble"},
                              {"dm", "Exact density-matrix profiles with qubit reuse"},
                              {"ftcheck", "Single-fault enumeration of the code gadgets"},
                              {"adaptive", "Calibration, injection and main run"},
                              {"reweight", "Importance reweighting of shot records"},
                              {"analyze", "Effective exponents, crossings and bootstrap errors"}}) {
        app.add_subcommand(name, help)->fallthrough();
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ErrorClass::config);
    }
    c.subcommand = app.get_subcommands().front()->get_name();
    if (t_opt->count() == 0 && (c.subcommand == "reweight" || c.subcommand == "analyze")) {
        c.t = 0;
    }
    if (p_opt->count() > 0) {
        c.p_grid = {p_single};
    }
    try {
        c.validate();
        run(c);
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.error_class());
    } catch (const std::bad_alloc &) {
        std::cerr << "error: out of memory\n";
        return static_cast<int>(ErrorClass::resource);
    } catch (const fs::filesystem_error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ErrorClass::config);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace fqcp::cli
