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
#include <limits>
#include <map>
#include <ostream>
#include <vector>

#include "json.hpp"

namespace fqcp::analysis {

/// delta_O(t) = [log O(t+dt) - log O(t)] / [log(t+dt) - log t], stored at the
/// left endpoint t.
struct EffExpSeries {
    double p = std::numeric_limits<double>::quiet_NaN();
    int dt = 1;
    std::map<int, double> values;
};

/// Uses every t >= 1 with t and t+dt both present. Throws NonpositiveValue
/// if a used O(t) is not strictly positive, InvalidParams if dt < 1.
EffExpSeries effective_exponent(const std::map<int, double> &series, int dt,
                                double p = std::numeric_limits<double>::quiet_NaN());

struct PairCrossing {
    int t1;
    int t2;
    double p;
    double delta;
};

struct CrossingResult {
    double p_c = 0.0;
    double delta_c = 0.0;
    /// Sample standard deviation over the crossing time pairs (0 for one pair).
    double p_scatter = 0.0;
    double delta_scatter = 0.0;
    std::vector<PairCrossing> pairs;
    /// Adjacent time pairs whose curves did not cross on the grid.
    std::vector<std::pair<int, int>> skipped;

    nlohmann::json to_json() const;
};

/// For each adjacent pair of `times`, the p where the linearly interpolated
/// delta(p; t1) and delta(p; t2) meet (first sign change on the sorted grid).
/// Pairs without a crossing are skipped; throws NoCrossing if none cross,
/// InvalidParams for fewer than 2 p values or times, or a missing time.
CrossingResult crossing_estimate(const std::map<double, EffExpSeries> &curves, const std::vector<int> &times);

using Statistic = std::function<double(const std::vector<double> &)>;
using WeightedStatistic = std::function<double(const std::vector<double> &, const std::vector<double> &)>;

double mean(const std::vector<double> &v);
/// (1/M) sum w_s v_s.
double weighted_mean(const std::vector<double> &v, const std::vector<double> &w);

/// Standard deviation of the statistic over resamples with replacement.
/// Deterministic in `seed`. Throws TooFewSamples for fewer than 2 samples.
double bootstrap_se(const std::vector<double> &samples, const Statistic &stat = mean, int resamples = 200,
                    std::uint64_t seed = 0);
/// Resamples (value, weight) pairs jointly; with all weights 1 and the
/// default statistic this reproduces the unweighted result for the same seed.
double bootstrap_se(const std::vector<double> &samples, const std::vector<double> &weights,
                    const WeightedStatistic &stat = weighted_mean, int resamples = 200, std::uint64_t seed = 0);

/// CSV with columns p,t,delta.
void write_effexp_csv(std::ostream &os, const std::map<double, EffExpSeries> &curves);

}  // namespace fqcp::analysis
