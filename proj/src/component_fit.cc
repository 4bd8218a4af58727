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

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fieldprobe/transforms.h"
#include "transform_plans.h"

namespace fieldprobe {

namespace {

// Atoms whose sampled columns are this close to parallel cannot be separated.
constexpr double kMaxColumnCoherence = 1 - 1e-8;

std::string describe(const SpectralAtom &atom, std::size_t index) {
    std::stringstream ss;
    ss.precision(17);
    ss << index << " (frequencies";
    for (const auto &term : atom.terms) {
        ss << " " << term.frequency;
    }
    ss << ")";
    return ss.str();
}

}  // namespace

std::shared_ptr<TransformPlan::FitPlan> build_fit_plan(std::span<const double> grid,
                                                       std::span<const SpectralAtom> atoms) {
    if (atoms.empty()) {
        throw std::invalid_argument("component fit needs at least one dictionary atom");
    }
    auto rows = Eigen::Index(grid.size());
    auto cols = Eigen::Index(atoms.size());
    if (rows < cols) {
        throw std::invalid_argument("component fit has more dictionary atoms than samples");
    }
    auto plan = std::make_shared<TransformPlan::FitPlan>();
    plan->atoms.assign(atoms.begin(), atoms.end());
    plan->design.resize(rows, cols);
    for (Eigen::Index j = 0; j < cols; j++) {
        for (Eigen::Index i = 0; i < rows; i++) {
            plan->design(i, j) = atoms[std::size_t(j)].value_at(grid[std::size_t(i)]);
        }
    }

    Eigen::MatrixXd gram = plan->design.transpose() * plan->design;
    for (Eigen::Index j = 0; j < cols; j++) {
        if (!(gram(j, j) > 0)) {
            throw std::invalid_argument("dictionary atom " + describe(atoms[std::size_t(j)], std::size_t(j)) +
                                        " vanishes on the sampling grid");
        }
    }
    for (Eigen::Index j = 0; j < cols; j++) {
        for (Eigen::Index k = j + 1; k < cols; k++) {
            double coherence = std::abs(gram(j, k)) / std::sqrt(gram(j, j) * gram(k, k));
            if (coherence > kMaxColumnCoherence) {
                throw std::invalid_argument("ill-conditioned dictionary: atoms " +
                                            describe(atoms[std::size_t(j)], std::size_t(j)) + " and " +
                                            describe(atoms[std::size_t(k)], std::size_t(k)) +
                                            " are indistinguishable on this grid");
            }
        }
    }

    plan->qr.setThreshold(1e-10);
    plan->qr.compute(plan->design);
    if (plan->qr.rank() < cols) {
        auto dropped = std::size_t(plan->qr.colsPermutation().indices()[cols - 1]);
        throw std::invalid_argument("ill-conditioned dictionary: rank " + std::to_string(plan->qr.rank()) + " < " +
                                    std::to_string(cols) + " atoms; first dependent atom " +
                                    describe(atoms[dropped], dropped));
    }
    return plan;
}

void attach_kernel(TransformPlan::FitPlan &plan, const TransformSpec &spec) {
    auto cols = Eigen::Index(plan.atoms.size());
    plan.atom_transforms.resize(cols);
    for (Eigen::Index j = 0; j < cols; j++) {
        plan.atom_transforms[j] = spec.atom_transform(plan.atoms[std::size_t(j)]);
    }
    // transform = c^T X^+ s, so the sample weights are (X^+)^T c = Q R^-T P^T c.
    Eigen::VectorXd permuted = plan.qr.colsPermutation().transpose() * plan.atom_transforms;
    Eigen::VectorXd z = plan.qr.matrixR()
                            .topLeftCorner(cols, cols)
                            .template triangularView<Eigen::Upper>()
                            .transpose()
                            .solve(permuted);
    Eigen::VectorXd padded = Eigen::VectorXd::Zero(plan.design.rows());
    padded.head(cols) = z;
    Eigen::VectorXd w = plan.qr.householderQ() * padded;
    plan.weights.assign(w.data(), w.data() + w.size());
}

std::vector<Complex> TransformPlan::FitPlan::solve(std::span<const Complex> samples) const {
    auto rows = Eigen::Index(samples.size());
    Eigen::MatrixXd rhs(rows, 2);
    for (Eigen::Index i = 0; i < rows; i++) {
        rhs(i, 0) = samples[std::size_t(i)].real();
        rhs(i, 1) = samples[std::size_t(i)].imag();
    }
    Eigen::MatrixXd sol = qr.solve(rhs);
    std::vector<Complex> amps(std::size_t(sol.rows()));
    for (Eigen::Index j = 0; j < sol.rows(); j++) {
        amps[std::size_t(j)] = {sol(j, 0), sol(j, 1)};
    }
    return amps;
}

double TransformPlan::FitPlan::residual(std::span<const Complex> samples, std::span<const Complex> amplitudes) const {
    double total = 0;
    for (Eigen::Index i = 0; i < design.rows(); i++) {
        Complex model{0};
        for (Eigen::Index j = 0; j < design.cols(); j++) {
            model += design(i, j) * amplitudes[std::size_t(j)];
        }
        total += std::norm(samples[std::size_t(i)] - model);
    }
    return std::sqrt(total / double(design.rows()));
}

ComponentDecomposition fit_components(const PolarizationSignal &signal, std::span<const SpectralAtom> atoms) {
    auto plan = build_fit_plan(signal.grid.samples(), atoms);
    ComponentDecomposition out;
    out.atoms = plan->atoms;
    out.amplitudes = plan->solve(signal.values);
    out.residual = plan->residual(signal.values, out.amplitudes);
    return out;
}

ComponentDecomposition fit_components(const PolarizationSignal &signal, std::span<const double> frequencies) {
    std::vector<SpectralAtom> atoms;
    atoms.reserve(frequencies.size());
    for (double f : frequencies) {
        atoms.push_back(SpectralAtom::sine(f));
    }
    return fit_components(signal, atoms);
}

}  // namespace fieldprobe
