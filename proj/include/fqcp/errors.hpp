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

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fqcp {

/// Coarse failure classes. The CLI maps these onto process exit codes.
enum class ErrorClass {
    config = 2,
    resource = 3,
    numerical = 4,
};

class Error : public std::runtime_error {
   public:
    Error(ErrorClass cls, const std::string &what) : std::runtime_error(what), cls_(cls) {
    }
    ErrorClass error_class() const noexcept {
        return cls_;
    }

   private:
    ErrorClass cls_;
};

struct InvalidParams : Error {
    explicit InvalidParams(const std::string &what) : Error(ErrorClass::config, what) {
    }
};

struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string &what) : Error(ErrorClass::resource, what) {
    }
};

struct WindowTooLarge : Error {
    explicit WindowTooLarge(const std::string &what) : Error(ErrorClass::resource, what) {
    }
};

struct TooManyQubits : Error {
    explicit TooManyQubits(const std::string &what) : Error(ErrorClass::resource, what) {
    }
};

struct NotClifford : Error {
    explicit NotClifford(const std::string &what) : Error(ErrorClass::config, what) {
    }
};

struct NotNormalized : Error {
    explicit NotNormalized(const std::string &what) : Error(ErrorClass::config, what) {
    }
};

struct UnknownKind : Error {
    explicit UnknownKind(const std::string &what) : Error(ErrorClass::config, what) {
    }
};

struct NumericalInvariant : Error {
    explicit NumericalInvariant(const std::string &what) : Error(ErrorClass::numerical, what) {
    }
};

struct NonpositiveValue : Error {
    NonpositiveValue(const std::string &what, int t) : Error(ErrorClass::numerical, what), t(t) {
    }
    int t;
};

struct NoCrossing : Error {
    explicit NoCrossing(const std::string &what) : Error(ErrorClass::numerical, what) {
    }
};

struct TooFewSamples : Error {
    explicit TooFewSamples(const std::string &what) : Error(ErrorClass::config, what) {
    }
};

/// Detection rate above the target reset rate; `points` holds every
/// offending (r, t).
struct DetectionExceedsTarget : Error {
    DetectionExceedsTarget(const std::string &what, std::vector<std::pair<int, int>> points)
        : Error(ErrorClass::config, what), points(std::move(points)) {
    }
    std::vector<std::pair<int, int>> points;
};

/// Empirical rate of 0 or 1 at (r, t) under strict reweighting.
struct DegenerateRate : Error {
    DegenerateRate(const std::string &what, int r, int t) : Error(ErrorClass::numerical, what), r(r), t(t) {
    }
    int r;
    int t;
};

}  // namespace fqcp
