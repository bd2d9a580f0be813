// Copyright 2026 The h10flow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Truncated bosonic Fock space and the operators living on it.
//
// Every operator here is the compression of the infinite-dimensional one onto
// the span of |n1 ... nK> with 0 <= ni <= di.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "h10/diophantine.hpp"

namespace h10 {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Lexicographic bijection between multi-indices (last mode fastest) and flat
/// positions. Position 0 is the vacuum.
class BasisMap {
public:
    explicit BasisMap(std::vector<unsigned> cutoffs);

    std::size_t modes() const noexcept { return cutoffs_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    const std::vector<unsigned>& cutoffs() const noexcept { return cutoffs_; }

    std::size_t flat(std::span<const unsigned> index) const;
    MultiIndex unflat(std::size_t position) const;
    /// Distance between positions that differ by one quantum in `mode`.
    std::size_t stride(std::size_t mode) const { return strides_.at(mode); }

    friend bool operator==(const BasisMap& a, const BasisMap& b) { return a.cutoffs_ == b.cutoffs_; }

private:
    std::vector<unsigned> cutoffs_;
    std::vector<std::size_t> strides_;
    std::size_t dim_ = 1;
};

/// Dense complex matrix, Hermitian to 1e-12 absolute (checked on construction).
class HermitianOperator {
public:
    static constexpr double kTolerance = 1e-12;

    explicit HermitianOperator(ComplexMatrix entries);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    const ComplexMatrix& matrix() const noexcept { return entries_; }
    Complex operator()(std::size_t row, std::size_t col) const { return entries_(row, col); }
    /// Largest |entry|.
    double max_abs() const { return entries_.cwiseAbs().maxCoeff(); }

    HermitianOperator operator-(const HermitianOperator& rhs) const;

private:
    ComplexMatrix entries_;
};

/// Unit-norm amplitude vector over a truncated basis.
struct WaveFunction {
    ComplexVector amplitudes;
    std::vector<unsigned> cutoffs;

    double norm() const { return amplitudes.norm(); }
    double probability(std::size_t position) const { return std::norm(amplitudes(position)); }
};

enum class ScheduleKind { Linear, Smoothstep };

/// Interpolation schedule f on [0,1] with f(0) = 0, f(1) = 1, non-decreasing.
class Schedule {
public:
    explicit Schedule(ScheduleKind kind = ScheduleKind::Linear) : kind_(kind) {}

    /// "linear" or "smooth"; DomainError otherwise.
    static Schedule from_name(std::string_view name);

    ScheduleKind kind() const noexcept { return kind_; }
    std::string name() const;
    double value(double s) const;
    double derivative(double s) const;

private:
    ScheduleKind kind_;
};

/// Everything needed to build 𝔥(s) for one Diophantine polynomial.
struct ProblemInstance {
    Polynomial polynomial;
    BasisMap basis;
    std::vector<double> lambdas;
    std::vector<Complex> alphas;
    Schedule schedule;
};

struct InstanceOptions {
    /// Empty means choose_lambdas(K).
    std::vector<double> lambdas;
    /// Empty means 1 + 0i for every mode.
    std::vector<Complex> alphas;
    Schedule schedule{};
};

/// Validates arities, lambda positivity, and that D(n)^2 is exactly
/// representable over the whole cutoff box.
ProblemInstance make_instance(Polynomial p, std::vector<unsigned> cutoffs, InstanceOptions options = {});

/// Single-mode annihilation operator: a(n-1, n) = sqrt(n).
ComplexMatrix annihilation_matrix(unsigned cutoff);
ComplexMatrix creation_matrix(unsigned cutoff);

/// Diagonal operator with entry D(n)^2 at multi-index n.
HermitianOperator build_hp(const Polynomial& p, const BasisMap& basis);

/// sum_i lambda_i (a_i^dagger - conj(alpha_i)) (a_i - alpha_i), each term
/// tridiagonal in its own mode and identity elsewhere.
HermitianOperator build_hi(const ProblemInstance& instance);

/// Tensor product of truncated coherent states, renormalized. If a mode loses
/// more than 1e-6 of probability to truncation a message is appended to
/// `warnings` (when non-null).
WaveFunction coherent_state(std::span<const Complex> alphas, const BasisMap& basis,
                            std::vector<std::string>* warnings = nullptr);

/// H_I + f(s) (H_P - H_I). Returns H_I at s = 0 and H_P at s = 1 exactly.
HermitianOperator interpolate(const HermitianOperator& hi, const HermitianOperator& hp, const Schedule& schedule,
                              double s);

/// sqrt of the first K primes.
std::vector<double> choose_lambdas(std::size_t modes);

}  // namespace h10
