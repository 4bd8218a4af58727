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

#ifndef FIELDPROBE_FOCK_H
#define FIELDPROBE_FOCK_H

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fieldprobe {

using Complex = std::complex<double>;

/// Truncated single-mode Fock space spanning photon numbers 0..dim-1.
class HilbertSpec {
   public:
    explicit HilbertSpec(std::size_t dim);
    std::size_t dim() const {
        return dim_;
    }
    bool operator==(const HilbertSpec &) const = default;

   private:
    std::size_t dim_;
};

/// Amplitudes over Fock states with no normalization requirement.
///
/// Operator actions return these so that norms keep carrying expectation-value
/// information (e.g. |a|psi>|^2 = <n>).
class FieldVector {
   public:
    explicit FieldVector(HilbertSpec space);
    FieldVector(HilbertSpec space, std::vector<Complex> amplitudes);

    const HilbertSpec &space() const {
        return space_;
    }
    std::size_t dim() const {
        return amps_.size();
    }
    std::span<const Complex> amplitudes() const {
        return amps_;
    }
    Complex operator[](std::size_t n) const {
        return amps_[n];
    }
    double norm_squared() const;

   private:
    HilbertSpec space_;
    std::vector<Complex> amps_;
};

/// <lhs|rhs>.
Complex inner(const FieldVector &lhs, const FieldVector &rhs);

/// A pure field state: amplitudes with unit norm (to 1e-12).
class FockVector {
   public:
    /// Normalizes the given amplitudes. Throws std::invalid_argument on a zero or non-finite vector.
    static FockVector from_amplitudes(HilbertSpec space, std::vector<Complex> amplitudes);

    const FieldVector &vector() const {
        return vec_;
    }
    const HilbertSpec &space() const {
        return vec_.space();
    }
    std::size_t dim() const {
        return vec_.dim();
    }
    std::span<const Complex> amplitudes() const {
        return vec_.amplitudes();
    }
    Complex operator[](std::size_t n) const {
        return vec_[n];
    }

    /// The state multiplied by a global phase e^{i phase}.
    FockVector with_global_phase(double phase) const;
    /// Phase-space rotation c_n -> e^{i n angle} c_n.
    FockVector rotated(double angle) const;

   private:
    explicit FockVector(FieldVector vec) : vec_(std::move(vec)) {
    }
    FieldVector vec_;
};

/// Factories refuse states whose untruncated weight beyond dim-1 exceeds this.
inline constexpr double kDefaultLeakageBound = 1e-10;

FockVector make_fock(std::size_t n, HilbertSpec space);
FockVector make_coherent(Complex alpha, HilbertSpec space, double leakage_bound = kDefaultLeakageBound);
/// D(alpha) S(xi)|0> with xi = r e^{i theta}, S(xi) = exp[(xi* a^2 - xi a^dag^2)/2].
FockVector make_squeezed(Complex alpha, double r, double theta, HilbertSpec space,
                         double leakage_bound = kDefaultLeakageBound);

/// Poisson weight of a coherent state beyond photon number dim-1.
double coherent_leakage(Complex alpha, std::size_t dim);
/// Weight of D(alpha)S(xi)|0> beyond photon number dim-1.
double squeezed_leakage(Complex alpha, double r, double theta, std::size_t dim);

enum class Ladder { kLower, kRaise, kNumber };
enum class SgShift { kLower, kRaise };

/// Result of an operator action. `dropped_weight` is the squared norm that a
/// raising step pushed past the truncation edge (zero for all other actions).
struct OperatorImage {
    FieldVector vector;
    double dropped_weight = 0;
};

OperatorImage apply_ladder(const FieldVector &state, Ladder which);
/// Susskind-Glogower V (lower) or V^dag (raise), applied `power` times (1 or 2).
OperatorImage apply_sg(const FieldVector &state, SgShift which, int power = 1);

/// Which expectation value to take. X = a + a^dag, Y = -i(a - a^dag).
struct MomentKind {
    enum class Family { kAPow, kADagPow, kNumber, kSgRaisePow, kSgMixed, kX, kX2, kY, kY2, kVarX, kVarY };
    Family family;
    int power = 1;

    static MomentKind a_pow(int k);
    static MomentKind adag_pow(int k);
    static MomentKind number() {
        return {Family::kNumber, 1};
    }
    static MomentKind sg_raise_pow(int k);
    /// <(V^dag)^4 V^2>.
    static MomentKind sg_mixed() {
        return {Family::kSgMixed, 1};
    }
    static MomentKind x() {
        return {Family::kX, 1};
    }
    static MomentKind x2() {
        return {Family::kX2, 1};
    }
    static MomentKind y() {
        return {Family::kY, 1};
    }
    static MomentKind y2() {
        return {Family::kY2, 1};
    }
    static MomentKind var_x() {
        return {Family::kVarX, 1};
    }
    static MomentKind var_y() {
        return {Family::kVarY, 1};
    }

    /// Stable text name, e.g. "adag^2", "sg_raise^1", "var_x".
    std::string name() const;
    static MomentKind from_name(std::string_view name);

    bool operator==(const MomentKind &) const = default;
};

/// Exact expectation value in the truncated basis.
///
/// Second moments of the quadratures use <X^2> = <a^2> + <a^dag^2> + 2<n> + 1
/// (the untruncated commutator), so they carry no truncation-edge artifact.
Complex expect_moment(const FockVector &state, MomentKind kind);

}  // namespace fieldprobe

#endif
