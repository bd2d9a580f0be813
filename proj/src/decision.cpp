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

#include "h10/decision.hpp"

#include <algorithm>
#include <sstream>

#include "h10/errors.hpp"

namespace h10 {

namespace {

std::string format_index(const MultiIndex& n) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < n.size(); ++i) os << (i ? "," : "") << n[i];
    os << ')';
    return os.str();
}

}  // namespace

std::string_view to_string(VerdictStatus status) {
    switch (status) {
        case VerdictStatus::SolvableWithWitness: return "SolvableWithWitness";
        case VerdictStatus::NoSolutionWithinBox: return "NoSolutionWithinBox";
        case VerdictStatus::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

Verdict decide(const Polynomial& p, const std::vector<unsigned>& cutoffs, const DecisionConfig& config,
               DecisionTrace* trace) {
    const ProblemInstance instance = make_instance(p, cutoffs, config.instance);

    Verdict v;
    v.cutoffs = cutoffs;

    // (a) exhaustive oracle
    const LatticeBox box = LatticeBox::from_cutoffs(cutoffs);
    const MinSquareResult oracle = brute_force_min_square(p, box, config.enumeration_cap);
    v.e0_oracle = oracle.min_value;
    const bool all_on_boundary = std::all_of(oracle.witnesses.begin(), oracle.witnesses.end(),
                                             [&](const MultiIndex& n) { return box.on_upper_face(n); });
    if (all_on_boundary) {
        v.diagnostics.push_back("oracle: minimum " + oracle.min_value.get_str() + " " +
                                std::string(kBoundaryDiagnostic));
    }

    // (b) spectral flow
    std::optional<SnapResult> snap;
    if (config.run_flow) {
        const std::size_t tracked = std::min(config.tracked, instance.basis.dim());
        try {
            const FlowPath path = continue_flow(instance, tracked, config.flow_tol, config.flow);
            v.e0_flow = path.final_ground_energy();
            snap = snap_verdict(*v.e0_flow);
            for (const auto& d : path.diagnostics) v.diagnostics.push_back("flow: " + d);
            if (trace != nullptr) trace->flow = path;
            if (!snap->confident) {
                v.diagnostics.push_back("flow: E_0(1) is not within 0.3 of an integer");
            } else if (BigInt(snap->snapped) != oracle.min_value) {
                v.diagnostics.push_back("flow: snapped E_0(1)=" + std::to_string(snap->snapped) +
                                        " disagrees with oracle minimum " + oracle.min_value.get_str());
            }
        } catch (const Error& e) {
            v.diagnostics.push_back(std::string("flow: failed: ") + e.what());
        }
    }

    // (c) adiabatic sweep with exact confirmation
    std::optional<BigInt> dynamics_value;
    if (config.run_dynamics) {
        try {
            const SweepResult sweep = tau_sweep(instance, config.sweep);
            v.dynamics_identified = sweep.identified;
            if (trace != nullptr) trace->sweep = sweep;
            if (sweep.identified) {
                const BigInt d = evaluate(p, *sweep.identified);
                dynamics_value = d * d;
                if (*dynamics_value != oracle.min_value) {
                    v.diagnostics.push_back("dynamics: identified " + format_index(*sweep.identified) +
                                            " with D^2=" + dynamics_value->get_str() +
                                            " but oracle minimum is " + oracle.min_value.get_str());
                }
            } else {
                std::string msg = "dynamics: no Fock state exceeded occupation 1/2 after " +
                                  std::to_string(sweep.history.size()) + " rounds";
                if (!sweep.history.empty()) {
                    const auto& top = sweep.history.back().top_occupations;
                    double cluster = 0.0;
                    for (const auto& occ : top) {
                        const BigInt d = evaluate(p, occ.state);
                        if (d * d == oracle.min_value) cluster += occ.probability;
                    }
                    std::ostringstream os;
                    os << "; occupation of oracle minimizers among top states " << cluster;
                    msg += os.str();
                }
                v.diagnostics.push_back(msg);
            }
        } catch (const Error& e) {
            v.diagnostics.push_back(std::string("dynamics: failed: ") + e.what());
        }
    }

    // Oracle witnesses come first so the reported witness is the
    // lexicographically smallest solution in the box.
    if (oracle.min_value == 0) {
        v.witness = oracle.witnesses.front();
    } else if (v.dynamics_identified && dynamics_value && *dynamics_value == 0) {
        v.witness = v.dynamics_identified;
    }

    if (v.witness) {
        // Exact confirmation; floating point never decides solvability.
        if (evaluate(p, *v.witness) != 0) throw Error("internal: unconfirmed witness");
        v.status = VerdictStatus::SolvableWithWitness;
        if (oracle.min_value != 0) {
            v.diagnostics.push_back("oracle: missed the dynamics witness " + format_index(*v.witness));
        }
    } else {
        const bool flow_agrees = snap && snap->confident && snap->snapped >= 1;
        const bool dynamics_agrees = dynamics_value && *dynamics_value >= 1;
        if (oracle.min_value >= 1 && flow_agrees && dynamics_agrees) {
            v.status = VerdictStatus::NoSolutionWithinBox;
        } else {
            v.status = VerdictStatus::Inconclusive;
            if (!flow_agrees) v.diagnostics.push_back("inconclusive: flow did not confirm a minimum >= 1");
            if (!dynamics_agrees) v.diagnostics.push_back("inconclusive: dynamics did not confirm a minimum >= 1");
        }
    }
    return v;
}

StudyReport convergence_study(const Polynomial& p, const std::vector<std::vector<unsigned>>& ladder,
                              const DecisionConfig& config) {
    if (ladder.empty()) throw DomainError("cutoff ladder is empty");
    for (std::size_t i = 1; i < ladder.size(); ++i) {
        if (ladder[i].size() != ladder[i - 1].size()) throw ArityError("ladder rungs have different lengths");
        for (std::size_t k = 0; k < ladder[i].size(); ++k) {
            if (ladder[i][k] < ladder[i - 1][k]) throw DomainError("cutoff ladder must be non-decreasing");
        }
    }

    StudyReport report;
    bool seen_boundary = false;
    for (const auto& cutoffs : ladder) {
        StudyRung rung;
        rung.cutoffs = cutoffs;
        rung.verdict = decide(p, cutoffs, config);
        const LatticeBox box = LatticeBox::from_cutoffs(cutoffs);
        const MinSquareResult oracle = brute_force_min_square(p, box, config.enumeration_cap);
        rung.minimum_on_boundary = std::all_of(oracle.witnesses.begin(), oracle.witnesses.end(),
                                               [&](const MultiIndex& n) { return box.on_upper_face(n); });
        if (seen_boundary && !rung.minimum_on_boundary) report.minimum_left_boundary = true;
        seen_boundary = seen_boundary || rung.minimum_on_boundary;

        if (!report.rungs.empty()) {
            const Verdict& first = report.rungs.front().verdict;
            if (rung.verdict.status != first.status) {
                report.verdict_stable = false;
                if (!report.first_change) report.first_change = report.rungs.size();
            }
            if (rung.verdict.e0_oracle != first.e0_oracle) report.e0_stable = false;
        }
        report.rungs.push_back(std::move(rung));
    }
    return report;
}

}  // namespace h10
