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
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace fqcp::cli {

struct RunConfig {
    std::string subcommand;
    double theta = 0.0;
    std::vector<double> p_grid;
    int t = 0;
    int dt = 0;
    int origin = 0;
    std::uint64_t shots = 0;
    std::uint64_t calibration_shots = 0;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out = ".";
    std::string backend = "synthetic";
    bool strict_reweight = false;
    bool store_shots = false;
    int live_cap = 13;
    bool crosstalk = false;
    std::string detect_field;
    /// Synthetic detection field rising linearly in t up to this value (< 0: unused).
    double detect_ramp = -1.0;
    std::string injection_field;
    std::string logical_error_field;
    std::string logical_flip = "X1";
    double p1 = 0.0;
    double p2 = 0.0;
    double p_mem = 0.0;
    double p_meas = 0.0;
    std::vector<int> memory_blocks;
    std::string records;
    std::string input;
    std::string per_shot;
    std::vector<int> times;
    int resamples = 200;

    /// Target reset rate for single-p subcommands.
    double p() const {
        return p_grid.empty() ? 0.0 : p_grid.front();
    }
    /// Throws InvalidParams when the subcommand's requirements are unmet.
    void validate() const;
    nlohmann::json to_json() const;
};

/// Parses argv (flags override values from --config) and runs the
/// subcommand. Returns the process exit status: 0 ok, 2 config, 3 resource,
/// 4 numerical invariant.
int main(int argc, const char *const *argv);

/// Runs an already validated configuration; throws fqcp::Error.
void run(const RunConfig &config);

/// Doubling times dt/2, dt, 2dt, ... with t + dt <= t_max.
std::vector<int> default_times(int t_max, int dt);

}  // namespace fqcp::cli
