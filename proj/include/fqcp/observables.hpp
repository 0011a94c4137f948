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
#include <iosfwd>
#include <string>
#include <vector>

#include "fqcp/model.hpp"

namespace fqcp {

/// Mean site occupations n(r,t) and right-half totals N_R(t) for t = 0..t_max.
///
/// Exact backends leave `shots` at 0 and `se_right` empty.
struct ObservableSeries {
    SiteInterval sites;
    int origin = 0;
    /// density[t][r - sites.lo]
    std::vector<std::vector<double>> density;
    std::vector<double> n_right;
    std::vector<double> se_right;
    std::uint64_t shots = 0;
    /// Optional per-shot N_R samples, row-major [shot][t].
    std::vector<std::uint32_t> per_shot_nr;

    ObservableSeries() = default;
    ObservableSeries(SiteInterval sites, int t_max, int origin);

    int t_max() const {
        return static_cast<int>(n_right.size()) - 1;
    }
    /// Zero outside `sites`.
    double density_at(int r, int t) const;
    /// Binomial standard error of density_at (0 for exact series).
    double density_se(int r, int t) const;
    /// Recomputes n_right from density (exact backends).
    void fill_n_right();

    void write_density_csv(std::ostream &out) const;
    void write_series_csv(std::ostream &out) const;
};

/// Integer shot counts; merging tallies is exact and order independent.
struct Tally {
    SiteInterval sites;
    int origin = 0;
    std::uint64_t shots = 0;
    /// counts[t * width + (r - sites.lo)]
    std::vector<std::uint64_t> counts;
    std::vector<std::uint64_t> nr_sum;
    std::vector<std::uint64_t> nr_sumsq;
    std::vector<std::uint32_t> per_shot_nr;

    Tally() = default;
    Tally(SiteInterval sites, int t_max, int origin);

    int t_max() const {
        return static_cast<int>(nr_sum.size()) - 1;
    }
    void merge(const Tally &other);
    ObservableSeries series() const;
    bool operator==(const Tally &other) const = default;
};

}  // namespace fqcp
