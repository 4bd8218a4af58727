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

#ifndef FIELDPROBE_SRC_TRANSFORM_PLANS_H
#define FIELDPROBE_SRC_TRANSFORM_PLANS_H

#include <Eigen/Dense>

#include "fieldprobe/transforms.h"

namespace fieldprobe {

struct TransformPlan::FitPlan {
    std::vector<SpectralAtom> atoms;
    Eigen::MatrixXd design;  // samples x atoms
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
    Eigen::VectorXd atom_transforms;  // empty until a kernel is attached
    std::vector<double> weights;

    /// Complex least-squares amplitudes for the given samples.
    std::vector<Complex> solve(std::span<const Complex> samples) const;
    double residual(std::span<const Complex> samples, std::span<const Complex> amplitudes) const;
};

/// Builds and factors the design matrix; rejects indistinguishable atoms.
std::shared_ptr<TransformPlan::FitPlan> build_fit_plan(std::span<const double> grid,
                                                       std::span<const SpectralAtom> atoms);
/// Attaches per-atom closed-form transforms and the equivalent sample weights.
void attach_kernel(TransformPlan::FitPlan &plan, const TransformSpec &spec);

struct TransformPlan::QuadraturePlan {
    TailPolicy tail;
    std::vector<double> rates;                  // damping rates actually used, decreasing
    std::vector<std::vector<double>> per_rate;  // sample weights of each damped integral
    std::vector<double> main;                   // extrapolated functional
    std::vector<double> lower;                  // one order lower
    std::vector<double> alt;                    // extrapolated with cutoff at 0.9 t_max
};

std::shared_ptr<TransformPlan::QuadraturePlan> build_quadrature_plan(std::span<const double> grid,
                                                                     const TransformSpec &spec,
                                                                     const TailPolicy &tail);

}  // namespace fieldprobe

#endif
