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

#include "fqcp/observables.hpp"

#include <cmath>
#include <ostream>

#include "fqcp/errors.hpp"
#include "fqcp/format.hpp"

namespace fqcp {

ObservableSeries::ObservableSeries(SiteInterval sites, int t_max, int origin)
    : sites(sites),
      origin(origin),
      density(t_max + 1, std::vector<double>(sites.width(), 0.0)),
      n_right(t_max + 1, 0.0) {
}

double ObservableSeries::density_at(int r, int t) const {
    if (t < 0 || t > t_max() || !sites.contains(r)) {
        return 0;
    }
    return density[t][r - sites.lo];
}

double ObservableSeries::density_se(int r, int t) const {
    if (shots == 0) {
        return 0;
    }
    double m = density_at(r, t);
    return std::sqrt(m * (1 - m) / static_cast<double>(shots));
}

void ObservableSeries::fill_n_right() {
    for (int t = 0; t <= t_max(); t++) {
        double s = 0;
        for (int r = std::max(origin, sites.lo); r <= sites.hi; r++) {
            s += density[t][r - sites.lo];
        }
        n_right[t] = s;
    }
}

void ObservableSeries::write_density_csv(std::ostream &out) const {
    out << "t,r,mean_n,shots\n";
    for (int t = 0; t <= t_max(); t++) {
        for (int r = sites.lo; r <= sites.hi; r++) {
            out << t << ',' << r << ',' << fmt_double(density[t][r - sites.lo]) << ',' << shots << '\n';
        }
    }
}

void ObservableSeries::write_series_csv(std::ostream &out) const {
    out << "t,mean_NR,se_NR,shots\n";
    for (int t = 0; t <= t_max(); t++) {
        double se = se_right.empty() ? 0.0 : se_right[t];
        out << t << ',' << fmt_double(n_right[t]) << ',' << fmt_double(se) << ',' << shots << '\n';
    }
}

Tally::Tally(SiteInterval sites, int t_max, int origin)
    : sites(sites),
      origin(origin),
      counts(static_cast<std::size_t>(t_max + 1) * sites.width(), 0),
      nr_sum(t_max + 1, 0),
      nr_sumsq(t_max + 1, 0) {
}

void Tally::merge(const Tally &other) {
    if (other.sites != sites || other.t_max() != t_max()) {
        throw InvalidParams("cannot merge tallies over different geometries");
    }
    shots += other.shots;
    for (std::size_t k = 0; k < counts.size(); k++) {
        counts[k] += other.counts[k];
    }
    for (std::size_t k = 0; k < nr_sum.size(); k++) {
        nr_sum[k] += other.nr_sum[k];
        nr_sumsq[k] += other.nr_sumsq[k];
    }
    per_shot_nr.insert(per_shot_nr.end(), other.per_shot_nr.begin(), other.per_shot_nr.end());
}

ObservableSeries Tally::series() const {
    ObservableSeries s(sites, t_max(), origin);
    s.shots = shots;
    s.se_right.assign(t_max() + 1, 0.0);
    if (shots == 0) {
        return s;
    }
    double m = static_cast<double>(shots);
    int w = sites.width();
    for (int t = 0; t <= t_max(); t++) {
        for (int k = 0; k < w; k++) {
            s.density[t][k] = static_cast<double>(counts[static_cast<std::size_t>(t) * w + k]) / m;
        }
        double mean = static_cast<double>(nr_sum[t]) / m;
        s.n_right[t] = mean;
        if (shots > 1) {
            double var = (static_cast<double>(nr_sumsq[t]) / m - mean * mean) * m / (m - 1);
            s.se_right[t] = std::sqrt(std::max(var, 0.0) / m);
        }
    }
    s.per_shot_nr = per_shot_nr;
    return s;
}

}  // namespace fqcp
