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

#ifndef FIELDPROBE_IDENTITIES_H
#define FIELDPROBE_IDENTITIES_H

#include <cstdint>
#include <string>
#include <vector>

namespace fieldprobe {

/// One closed-form integral checked against direct quadrature of a sampled integrand.
struct IdentityCheck {
    std::string kernel;  // "fresnel" or "dirichlet"
    double a = 0;
    double b = 0;
    double numeric = 0;
    double expected = 0;
    /// Relative for the Fresnel identity, absolute for the Dirichlet one.
    double error = 0;
    double tolerance = 0;
    bool converged = true;
    std::string message;

    bool passed() const {
        return converged && error <= tolerance;
    }
};

/// int T sin(T^2/A) sin(B T) dT for `pairs` (A, B) drawn uniformly from [1, 30] x [0.1, 10].
/// Tolerance 1e-4 relative.
std::vector<IdentityCheck> fresnel_identity_checks(std::size_t pairs = 100, std::uint64_t seed = 20260101);

/// int sin(A T) cos(B T) / T dT over A, B in {0.5, 1.0, ..., 5.0}. Tolerance 1e-4 absolute.
std::vector<IdentityCheck> dirichlet_identity_checks();

}  // namespace fieldprobe

#endif
