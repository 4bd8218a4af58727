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

#include "fieldprobe/identities.h"

#include <cmath>
#include <random>

#include "fieldprobe/errors.h"
#include "fieldprobe/transforms.h"

namespace fieldprobe {

namespace {

// Uniform on [lo, hi) from the top 53 bits; identical on every standard library.
double uniform(std::mt19937_64 &rng, double lo, double hi) {
    return lo + (hi - lo) * double(rng() >> 11) * 0x1.0p-53;
}

template <typename F>
PolarizationSignal sampled(const TimeGrid &grid, F f) {
    std::vector<Complex> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); i++) {
        values[i] = f(grid[i]);
    }
    return PolarizationSignal(grid, std::move(values), SignalMeta{});
}

void evaluate(IdentityCheck &check, const TransformPlan &plan, const PolarizationSignal &signal, bool relative) {
    try {
        check.numeric = plan.apply(signal).value.real();
    } catch (const ConvergenceError &e) {
        check.converged = false;
        check.message = e.what();
        return;
    }
    check.error = std::abs(check.numeric - check.expected);
    if (relative) {
        check.error /= std::abs(check.expected);
    }
}

}  // namespace

std::vector<IdentityCheck> fresnel_identity_checks(std::size_t pairs, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<IdentityCheck> out;
    for (std::size_t k = 0; k < pairs; k++) {
        IdentityCheck check;
        check.kernel = "fresnel";
        check.a = uniform(rng, 1, 30);
        check.b = uniform(rng, 0.1, 10);
        check.expected = fresnel_closed_form(check.a, check.b);
        check.tolerance = 1e-4;

        auto spec = TransformSpec::fresnel(check.a, TransformSpec::Backend::kDirectQuadrature);
        double t_max = default_tail_policy(spec).t_max;
        // Keep the kernel phase advance per panel near 1 rad at the cutoff.
        double top_frequency = 2 * t_max / check.a + check.b;
        auto grid = TimeGrid::uniform(0, t_max, std::size_t(std::ceil(t_max * top_frequency / 1.2)) + 1);
        TransformPlan plan(grid, spec);
        double b = check.b;
        evaluate(check, plan, sampled(grid, [b](double t) { return std::sin(b * t); }), true);
        out.push_back(std::move(check));
    }
    return out;
}

std::vector<IdentityCheck> dirichlet_identity_checks() {
    auto spec = TransformSpec::dirichlet(TransformSpec::Backend::kDirectQuadrature);
    double t_max = default_tail_policy(spec).t_max;
    auto grid = TimeGrid::uniform(0, t_max, std::size_t(std::ceil(t_max / 0.025)) + 1);
    TransformPlan plan(grid, spec);
    std::vector<IdentityCheck> out;
    for (int i = 1; i <= 10; i++) {
        for (int j = 1; j <= 10; j++) {
            IdentityCheck check;
            check.kernel = "dirichlet";
            check.a = 0.5 * i;
            check.b = 0.5 * j;
            check.expected = dirichlet_closed_form(check.a, check.b);
            check.tolerance = 1e-4;
            double a = check.a, b = check.b;
            evaluate(check, plan, sampled(grid, [a, b](double t) { return std::sin(a * t) * std::cos(b * t); }),
                     false);
            out.push_back(std::move(check));
        }
    }
    return out;
}

}  // namespace fieldprobe
