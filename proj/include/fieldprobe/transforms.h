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

#ifndef FIELDPROBE_TRANSFORMS_H
#define FIELDPROBE_TRANSFORMS_H

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fieldprobe/jc_dynamics.h"

namespace fieldprobe {

/// int_0^inf T sin(T^2/A) sin(B T) dT = (A B / 4) sqrt(pi A / 2) (cos(A B^2 / 4) + sin(A B^2 / 4)).
/// The integral converges only in the Abel sense. Odd in B. Requires A > 0.
double fresnel_closed_form(double a, double b);

/// int_0^inf sin(A T) cos(B T) / T dT for A, B >= 0:
/// pi/2 if A > B, pi/4 if A == B > 0, 0 if B > A or A == 0.
double dirichlet_closed_form(double a, double b);

struct SineTerm {
    double frequency;
    double weight;
};

/// A fixed linear combination of sines sharing one fitted amplitude.
struct SpectralAtom {
    std::vector<SineTerm> terms;

    static SpectralAtom sine(double frequency);
    /// sin(a T) cos(b T) = [sin((a+b) T) + sin((a-b) T)] / 2; equal frequencies are merged.
    static SpectralAtom sine_cosine(double a, double b);
    /// sin(plus T) - sin(minus T).
    static SpectralAtom sine_difference(double plus, double minus);

    double value_at(double t) const;
    double max_frequency() const;
};

struct ComponentDecomposition {
    std::vector<SpectralAtom> atoms;
    std::vector<Complex> amplitudes;
    /// RMS of |signal - model| over the samples.
    double residual = 0;
};

/// Least-squares projection of the sampled signal onto single-frequency sines.
/// Throws std::invalid_argument naming the offending pair when two atoms are
/// numerically indistinguishable on the grid.
ComponentDecomposition fit_components(const PolarizationSignal &signal, std::span<const double> frequencies);
ComponentDecomposition fit_components(const PolarizationSignal &signal, std::span<const SpectralAtom> atoms);

/// Regularization of the improper integral for direct quadrature.
///
/// The integrand is multiplied by exp(-eps T) and by a C-infinity step that
/// falls from 1 at (1 - taper_fraction) t_max to 0 at t_max; the damped
/// integrals are extrapolated polynomially to eps -> 0.
struct TailPolicy {
    double t_max = 0;
    /// Strictly decreasing positive damping rates eps_k.
    std::vector<double> damping_rates;
    int extrapolation_order = 2;
    double taper_fraction = 0.25;
    /// Convergence requires both diagnostics <= tolerance * (1 + |value|) (+ 5 sigma of shot noise).
    /// The order-to-order delta overstates the true error by one to two decades.
    double tolerance = 1e-3;

    void validate() const;
};

struct TransformSpec {
    enum class Kernel { kFresnel, kDirichlet };
    enum class Backend { kComponentFit, kDirectQuadrature };

    Kernel kernel = Kernel::kFresnel;
    /// Fresnel parameter A (ignored for the Dirichlet kernel).
    double fresnel_a = 0;
    Backend backend = Backend::kComponentFit;
    /// Defaults to default_tail_policy(*this) when absent.
    std::optional<TailPolicy> tail;

    static TransformSpec fresnel(double a, Backend backend = Backend::kComponentFit);
    static TransformSpec dirichlet(Backend backend = Backend::kComponentFit);

    /// Closed-form transform of sin(frequency T).
    double sine_transform(double frequency) const;
    double atom_transform(const SpectralAtom &atom) const;
    void validate() const;
};

std::string to_string(TransformSpec::Kernel kernel);
std::string to_string(TransformSpec::Backend backend);

/// t_max = 40 A (Fresnel) or 2000 (Dirichlet); rates 1/t_max, 1/(4 t_max), 1/(16 t_max); order 2.
TailPolicy default_tail_policy(const TransformSpec &spec);

struct TransformReport {
    TransformSpec::Backend backend = TransformSpec::Backend::kComponentFit;
    // Component fit.
    std::size_t atom_count = 0;
    double fit_residual = 0;
    // Direct quadrature.
    double t_max = 0;
    std::vector<double> damping_rates;
    std::vector<Complex> damped_values;
    /// |highest-order minus next-lower-order extrapolation|.
    double extrapolation_delta = 0;
    /// |value minus value recomputed with a cutoff at 0.9 t_max|.
    double tail_delta = 0;
    /// Shot-noise standard error of the transform value (0 for noise-free signals).
    double std_error = 0;
};

struct TransformResult {
    Complex value;
    TransformReport report;
};

/// A transform specialized to one sampling grid. The transform is linear in the
/// samples, so a plan is built once and applied to any number of signals.
class TransformPlan {
   public:
    TransformPlan(const TimeGrid &grid, const TransformSpec &spec, std::span<const SpectralAtom> dictionary = {});

    /// Throws ConvergenceError when direct quadrature diagnostics exceed the tail tolerance.
    TransformResult apply(const PolarizationSignal &signal) const;

    const TransformSpec &spec() const {
        return spec_;
    }
    /// Real weights w_i with transform = sum_i w_i S(T_i).
    std::span<const double> weights() const;

    struct FitPlan;
    struct QuadraturePlan;

   private:
    TransformSpec spec_;
    std::vector<double> grid_;
    std::shared_ptr<const FitPlan> fit_;
    std::shared_ptr<const QuadraturePlan> quad_;
};

/// COMPONENT_FIT requires a dictionary; DIRECT_QUADRATURE ignores it.
TransformResult transform_signal(const PolarizationSignal &signal, const TransformSpec &spec,
                                 std::span<const SpectralAtom> dictionary = {});

}  // namespace fieldprobe

#endif
