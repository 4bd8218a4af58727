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

// Panel-wise quadrature of kernel(T) * S(T) on sampled signals.
//
// Each grid interval is a panel integrated with 8-point Gauss-Legendre; S is
// evaluated at the nodes by degree-7 Lagrange interpolation over the nearest
// 8 samples, the kernel exactly. Everything is linear in the samples, so the
// plan is a set of weight vectors.

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fieldprobe/transforms.h"
#include "transform_plans.h"

namespace fieldprobe {

namespace {

constexpr std::size_t kStencil = 8;

constexpr std::array<double, 8> kGaussNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363,
};
constexpr std::array<double, 8> kGaussWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763,
};

// C-infinity step: 1 for x <= 0, 0 for x >= 1.
double smooth_step_down(double x) {
    if (x <= 0) {
        return 1;
    }
    if (x >= 1) {
        return 0;
    }
    double keep = std::exp(-1 / (1 - x));
    double drop = std::exp(-1 / x);
    return keep / (keep + drop);
}

// Weights of the damped, tapered integral for each rate.
std::vector<std::vector<double>> damped_weights(std::span<const double> grid, const TransformSpec &spec,
                                                double cutoff, double taper_fraction,
                                                std::span<const double> rates) {
    std::size_t n = grid.size();
    std::size_t m = std::min(kStencil, n);
    double taper_start = cutoff * (1 - taper_fraction);
    bool dirichlet = spec.kernel == TransformSpec::Kernel::kDirichlet;

    std::vector<std::vector<double>> out(rates.size(), std::vector<double>(n));
    std::array<double, kStencil> basis{};
    for (std::size_t i = 0; i + 1 < n && grid[i] < cutoff; i++) {
        double lo = grid[i];
        double hi = std::min(grid[i + 1], cutoff);
        double mid = (lo + hi) / 2;
        double half = (hi - lo) / 2;
        std::size_t start = i >= 3 ? i - 3 : 0;
        start = std::min(start, n - m);

        for (std::size_t g = 0; g < kGaussNodes.size(); g++) {
            double x = mid + half * kGaussNodes[g];
            for (std::size_t j = 0; j < m; j++) {
                double l = 1;
                double tj = grid[start + j];
                for (std::size_t k = 0; k < m; k++) {
                    if (k != j) {
                        l *= (x - grid[start + k]) / (tj - grid[start + k]);
                    }
                }
                basis[j] = l;
            }
            double kernel = dirichlet ? 1 / x : x * std::sin(x * x / spec.fresnel_a);
            double base = half * kGaussWeights[g] * kernel *
                          smooth_step_down((x - taper_start) / (cutoff - taper_start));
            // Protocol signals vanish at T = 0; integrate (S(T) - S(0)) / T on the first panel
            // so that the 1/T kernel sees the analytic limit S'(0).
            bool remove_offset = dirichlet && i == 0;
            for (std::size_t r = 0; r < rates.size(); r++) {
                double f = base * std::exp(-rates[r] * x);
                auto &w = out[r];
                for (std::size_t j = 0; j < m; j++) {
                    w[start + j] += f * basis[j];
                }
                if (remove_offset) {
                    w[0] -= f;
                }
            }
        }
    }
    return out;
}

// Lagrange coefficients of the polynomial through (rates[k], .) evaluated at 0.
std::vector<double> extrapolation_coefficients(std::span<const double> rates) {
    std::vector<double> c(rates.size(), 1.0);
    for (std::size_t k = 0; k < rates.size(); k++) {
        for (std::size_t l = 0; l < rates.size(); l++) {
            if (l != k) {
                c[k] *= rates[l] / (rates[l] - rates[k]);
            }
        }
    }
    return c;
}

std::vector<double> combine(const std::vector<std::vector<double>> &per_rate, std::size_t first,
                            std::span<const double> coefficients) {
    std::vector<double> out(per_rate[0].size());
    for (std::size_t k = 0; k < coefficients.size(); k++) {
        const auto &w = per_rate[first + k];
        for (std::size_t i = 0; i < out.size(); i++) {
            out[i] += coefficients[k] * w[i];
        }
    }
    return out;
}

}  // namespace

std::shared_ptr<TransformPlan::QuadraturePlan> build_quadrature_plan(std::span<const double> grid,
                                                                     const TransformSpec &spec,
                                                                     const TailPolicy &tail) {
    tail.validate();
    if (grid.size() < 2) {
        throw std::invalid_argument("direct quadrature needs at least 2 samples");
    }
    if (grid[0] != 0) {
        throw std::invalid_argument("direct quadrature requires the grid to start at T = 0");
    }
    if (grid.back() < tail.t_max * (1 - 1e-12)) {
        std::stringstream ss;
        ss << "grid ends at T = " << grid.back() << " before the quadrature cutoff t_max = " << tail.t_max;
        throw std::invalid_argument(ss.str());
    }

    auto plan = std::make_shared<TransformPlan::QuadraturePlan>();
    plan->tail = tail;
    plan->rates = tail.damping_rates;
    plan->per_rate = damped_weights(grid, spec, tail.t_max, tail.taper_fraction, plan->rates);
    auto alt_per_rate = damped_weights(grid, spec, 0.9 * tail.t_max, tail.taper_fraction, plan->rates);

    std::size_t used = std::size_t(tail.extrapolation_order) + 1;
    std::size_t first = plan->rates.size() - used;
    std::span<const double> used_rates(plan->rates.data() + first, used);
    auto coeffs = extrapolation_coefficients(used_rates);
    plan->main = combine(plan->per_rate, first, coeffs);
    plan->alt = combine(alt_per_rate, first, coeffs);
    if (used >= 2) {
        auto lower = extrapolation_coefficients(used_rates.subspan(1));
        plan->lower = combine(plan->per_rate, first + 1, lower);
    } else if (first >= 1) {
        plan->lower = plan->per_rate[first - 1];
    } else {
        plan->lower = plan->main;
    }
    return plan;
}

}  // namespace fieldprobe
