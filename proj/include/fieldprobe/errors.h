// Copyright 2026 The fieldprobe Authors
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

#ifndef FIELDPROBE_ERRORS_H
#define FIELDPROBE_ERRORS_H

#include <stdexcept>
#include <string>
#include <vector>

namespace fieldprobe {

/// Malformed or inconsistent experiment configuration. CLI exit code 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A numeric procedure failed to converge or to produce a trustworthy value. CLI exit code 3.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Regularized quadrature whose epsilon extrapolation (or tail-stability check) exceeded tolerance.
struct ConvergenceError : NumericError {
    ConvergenceError(const std::string &message, std::vector<double> damping_rates, std::vector<double> re_values,
                     std::vector<double> im_values)
        : NumericError(message),
          damping_rates(std::move(damping_rates)),
          re_values(std::move(re_values)),
          im_values(std::move(im_values)) {
    }
    std::vector<double> damping_rates;
    std::vector<double> re_values;
    std::vector<double> im_values;
};

/// Unreadable input or unwritable output. CLI exit code 4.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fieldprobe

#endif
