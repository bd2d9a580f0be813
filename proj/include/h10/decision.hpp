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

// Combines the exhaustive oracle, the spectral flow, and the adiabatic sweep
// into one verdict. A finite box can only ever certify "no solution inside
// the box", never global unsolvability.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "h10/diophantine.hpp"
#include "h10/dynamics.hpp"
#include "h10/flow.hpp"
#include "h10/fock.hpp"

namespace h10 {

enum class VerdictStatus { SolvableWithWitness, NoSolutionWithinBox, Inconclusive };

std::string_view to_string(VerdictStatus status);

struct Verdict {
    VerdictStatus status = VerdictStatus::Inconclusive;
    std::optional<MultiIndex> witness;
    /// E_0(1) from the continuation; empty if the flow failed.
    std::optional<double> e0_flow;
    BigInt e0_oracle;
    std::optional<MultiIndex> dynamics_identified;
    std::vector<unsigned> cutoffs;
    std::vector<std::string> diagnostics;
};

struct DecisionConfig {
    InstanceOptions instance{};
    std::size_t tracked = 6;
    double flow_tol = 1e-6;
    FlowOptions flow{};
    SweepOptions sweep{.max_rounds = 10};
    std::uint64_t enumeration_cap = kDefaultEnumerationCap;
    bool run_flow = true;
    bool run_dynamics = true;
};

inline constexpr std::string_view kBoundaryDiagnostic = "attained at box boundary - escalate cutoff";

/// Intermediate results of decide, for tracing.
struct DecisionTrace {
    std::optional<FlowPath> flow;
    std::optional<SweepResult> sweep;
};

Verdict decide(const Polynomial& p, const std::vector<unsigned>& cutoffs, const DecisionConfig& config = {},
               DecisionTrace* trace = nullptr);

struct StudyRung {
    std::vector<unsigned> cutoffs;
    Verdict verdict;
    /// Every oracle minimizer touches the upper face of the box.
    bool minimum_on_boundary = false;
};

struct StudyReport {
    std::vector<StudyRung> rungs;
    /// Same status on every rung.
    bool verdict_stable = true;
    /// Same e0_oracle on every rung.
    bool e0_stable = true;
    /// Some rung had its minimum on the boundary and a later one did not.
    bool minimum_left_boundary = false;
    /// Index of the first rung whose status differs from rung 0.
    std::optional<std::size_t> first_change;
};

StudyReport convergence_study(const Polynomial& p, const std::vector<std::vector<unsigned>>& ladder,
                              const DecisionConfig& config = {});

}  // namespace h10
