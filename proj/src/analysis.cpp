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


#include "fqcp/analysis.hpp"

#include <cmath>
#include <random>

#include "fqcp/errors.hpp"
#include "fqcp/format.hpp"

namespace fqcp::analysis {

EffExpSeries effective_exponent(const std::map<int, double> &series, int dt, double p) {
    if (dt < 1) {
        throw InvalidParams("dt must be at least 1");
    }
    EffExpSeries out;
    out.p = p;
    out.dt = dt;
    for (const auto &[t, value] : series) {
        if (t < 1) {
            continue;
        }
        auto later = series.find(t + dt);
        if (later == series.end()) {
            continue;
        }
        if (!(value > 0.0)) {
            throw NonpositiveValue("observable is not positive at t=" + std::to_string(t), t);
        }
        if (!(later->second > 0.0)) {
            throw NonpositiveValue("observable is not positive at t=" + std::to_string(t + dt), t + dt);
        }
        out.values[t] = (std::log(later->second) - std::log(value)) / (std::log(double(t + dt)) - std::log(double(t)));
    }
    return out;
}

namespace {

double sample_std(const std::vector<double> &v) {
    if (v.size() < 2) {
        return 0.0;
    }
    double m = mean(v);
    double s = 0.0;
    for (double x : v) {
        s += (x - m) * (x - m);
    }
    return std::sqrt(s / double(v.size() - 1));
}

}  // namespace

CrossingResult crossing_estimate(const std::map<double, EffExpSeries> &curves, const std::vector<int> &times) {
    if (curves.size() < 2) {
        throw InvalidParams("crossing needs at least 2 p values");
    }
    if (times.size() < 2) {
        throw InvalidParams("crossing needs at least 2 times");
    }
    std::vector<double> ps;
    for (const auto &[p, s] : curves) {
        for (int t : times) {
            if (!s.values.count(t)) {
                throw InvalidParams("effective exponent missing at t=" + std::to_string(t));
            }
        }
        ps.push_back(p);
    }
    CrossingResult out;
    for (std::size_t k = 0; k + 1 < times.size(); k++) {
        int t1 = times[k];
        int t2 = times[k + 1];
        auto d1 = [&](std::size_t i) { return curves.at(ps[i]).values.at(t1); };
        auto gap = [&](std::size_t i) { return curves.at(ps[i]).values.at(t2) - d1(i); };
        bool found = false;
        for (std::size_t i = 0; i + 1 < ps.size() && !found; i++) {
            double g0 = gap(i);
            double g1 = gap(i + 1);
            if (g0 == 0.0) {
                out.pairs.push_back({t1, t2, ps[i], d1(i)});
                found = true;
            } else if ((g0 < 0.0) != (g1 < 0.0) || g1 == 0.0) {
                double f = g0 / (g0 - g1);
                double pc = ps[i] + f * (ps[i + 1] - ps[i]);
                double dc = d1(i) + f * (d1(i + 1) - d1(i));
                out.pairs.push_back({t1, t2, pc, dc});
                found = true;
            }
        }
        if (!found) {
            out.skipped.push_back({t1, t2});
        }
    }
    if (out.pairs.empty()) {
        throw NoCrossing("effective-exponent curves do not cross inside the p grid");
    }
    std::vector<double> pcs, dcs;
    for (const auto &c : out.pairs) {
        pcs.push_back(c.p);
        dcs.push_back(c.delta);
    }
    out.p_c = mean(pcs);
    out.delta_c = mean(dcs);
    out.p_scatter = sample_std(pcs);
    out.delta_scatter = sample_std(dcs);
    return out;
}

nlohmann::json CrossingResult::to_json() const {
    nlohmann::json j;
    j["p_c"] = p_c;
    j["delta_c"] = delta_c;
    j["p_scatter"] = p_scatter;
    j["delta_scatter"] = delta_scatter;
    nlohmann::json ps = nlohmann::json::array();
    for (const auto &c : pairs) {
        ps.push_back({{"t1", c.t1}, {"t2", c.t2}, {"p", c.p}, {"delta", c.delta}});
    }
    j["pairs"] = ps;
    nlohmann::json sk = nlohmann::json::array();
    for (const auto &[a, b] : skipped) {
        sk.push_back({a, b});
    }
    j["skipped_pairs"] = sk;
    return j;
}

double mean(const std::vector<double> &v) {
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return v.empty() ? 0.0 : s / double(v.size());
}

double weighted_mean(const std::vector<double> &v, const std::vector<double> &w) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); i++) {
        s += w[i] * v[i];
    }
    return v.empty() ? 0.0 : s / double(v.size());
}

double bootstrap_se(const std::vector<double> &samples, const Statistic &stat, int resamples, std::uint64_t seed) {
    std::vector<double> ones(samples.size(), 1.0);
    return bootstrap_se(
        samples, ones, [&](const std::vector<double> &v, const std::vector<double> &) { return stat(v); }, resamples,
        seed);
}

double bootstrap_se(const std::vector<double> &samples, const std::vector<double> &weights,
                    const WeightedStatistic &stat, int resamples, std::uint64_t seed) {
    if (samples.size() < 2) {
        throw TooFewSamples("bootstrap needs at least 2 samples");
    }
    if (weights.size() != samples.size()) {
        throw InvalidParams("weights and samples differ in length");
    }
    if (resamples < 2) {
        throw InvalidParams("bootstrap needs at least 2 resamples");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
    std::vector<double> v(samples.size()), w(samples.size()), stats;
    stats.reserve(resamples);
    for (int r = 0; r < resamples; r++) {
        for (std::size_t i = 0; i < samples.size(); i++) {
            std::size_t k = pick(rng);
            v[i] = samples[k];
            w[i] = weights[k];
        }
        stats.push_back(stat(v, w));
    }
    return sample_std(stats);
}

void write_effexp_csv(std::ostream &os, const std::map<double, EffExpSeries> &curves) {
    os << "p,t,delta\n";
    for (const auto &[p, s] : curves) {
        for (const auto &[t, d] : s.values) {
            os << fmt_double(p) << "," << t << "," << fmt_double(d) << "\n";
        }
    }
}

}  // namespace fqcp::analysis
