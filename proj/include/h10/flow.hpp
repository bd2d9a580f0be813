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

// Spectral flow of 𝔥(s) = H_I + f(s) W, W = H_P - H_I.
//
// The lowest M eigenpairs are carried from s = 0 to s = 1. Each step predicts
// with the first-order flow equations
//
//   dE_q/ds  = f'(s) <E_q|W|E_q>
//   d|E_q>/ds = f'(s) sum_{l != q} <E_l|W|E_q> / (E_q - E_l) |E_l>
//
// (sum restricted to the tracked states), corrects with a dense eigensolve,
// and fixes eigenvector phases so that <E_q(s)|E_q(s+ds)> is real positive.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "h10/errors.hpp"
#include "h10/fock.hpp"

namespace h10 {

struct FlowState {
    double s = 0.0;
    RealVector eigenvalues;
    /// dim x M, orthonormal columns.
    ComplexMatrix eigenvectors;
    /// Smallest adjacent gap among the tracked eigenvalues (+inf if M == 1).
    double gap_floor = 0.0;

    std::size_t tracked() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

struct FlowStepRecord {
    double eps = 0.0;
    std::size_t truncation = 0;
    /// Largest predictor/corrector eigenvalue discrepancy.
    double remainder = 0.0;
    /// Smallest |<predicted|corrected>| over tracked columns.
    double min_overlap = 1.0;
    /// max_q |<E_q|dE_q/ds>| of the predictor, read off the expansion
    /// coefficients (gauge condition).
    double gauge_residual = 0.0;
    /// max_q |Im <reference_q|aligned_q>| after alignment.
    double phase_residual = 0.0;
    /// min_q Re <reference_q|aligned_q> after alignment.
    double min_aligned_overlap = 1.0;
    /// True when the step reached s = 1 by eigensolve alone because the
    /// endpoint spectrum is degenerate.
    bool corrector_only = false;
};

struct FlowPath {
    std::vector<FlowState> states;
    /// step_log[i] describes the step that produced states[i + 1].
    std::vector<FlowStepRecord> step_log;
    std::vector<std::string> diagnostics;

    const FlowState& final_state() const { return states.back(); }
    double final_ground_energy() const { return states.back().eigenvalues(0); }
};

/// Two tracked eigenvalues came within gap_eps of each other.
class GapCollapse : public Error {
public:
    GapCollapse(double s, std::size_t q, std::size_t l, double gap);

    double s() const noexcept { return s_; }
    std::size_t q() const noexcept { return q_; }
    std::size_t l() const noexcept { return l_; }
    double gap() const noexcept { return gap_; }

    /// Path accepted before the failure (empty when thrown by flow_derivatives).
    FlowPath partial_path;

private:
    double s_;
    std::size_t q_;
    std::size_t l_;
    double gap_;
};

/// Candidate eigenvectors could not be matched one-to-one with the reference.
class AmbiguousMatch : public Error {
public:
    AmbiguousMatch(std::size_t column, double best_overlap);

    std::size_t column() const noexcept { return column_; }
    double best_overlap() const noexcept { return best_overlap_; }
    FlowPath partial_path;

private:
    std::size_t column_;
    double best_overlap_;
};

/// Adaptive step size fell below the configured minimum.
class StepUnderflow : public Error {
public:
    StepUnderflow(double s, double eps);
    FlowPath partial_path;
};

/// Lowest M eigenpairs of `h`, ascending.
FlowState eigensolve(const HermitianOperator& h, std::size_t tracked, double s = 0.0);

struct FlowDerivatives {
    RealVector d_eigenvalues;
    /// dim x M.
    ComplexMatrix d_eigenvectors;
    /// M x M expansion of d_eigenvectors in the tracked basis. Diagonal is
    /// zero by construction.
    ComplexMatrix coefficients;
};

inline constexpr double kDefaultGapEps = 1e-6;

FlowDerivatives flow_derivatives(const FlowState& state, const HermitianOperator& w, double fprime,
                                 double gap_eps = kDefaultGapEps);

/// Reorders candidate columns to follow the reference and, when
/// `fix_phase` is set, rotates each so that <reference_q|candidate_q> > 0.
/// The candidate may carry more columns than the reference; the best
/// matches are kept.
FlowState gauge_align(const ComplexMatrix& reference, const FlowState& candidate, bool fix_phase = true);

struct FlowOptions {
    double gap_eps = kDefaultGapEps;
    double initial_step = 1e-2;
    double max_step = 0.05;
    double min_step = 1e-9;
    double shrink = 0.5;
    double grow = 1.5;
    double min_overlap = 0.9;
    bool fix_phase = true;
};

/// Predictor-corrector continuation from s = 0 to s = 1.
FlowPath continue_flow(const ProblemInstance& instance, std::size_t tracked, double tol, const FlowOptions& options = {});

struct SnapResult {
    unsigned long snapped = 0;
    bool confident = false;

    bool solvable() const noexcept { return snapped == 0 && confident; }
};

/// Nearest non-negative integer; confident when within 0.3.
SnapResult snap_verdict(double e0_final);

/// Columns: s, E_0..E_{M-1}, gap_floor, eps, N.
void write_flow_csv(std::ostream& out, const FlowPath& path);

}  // namespace h10
