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

// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "cli.hpp"
#include "h10/decision.hpp"
#include "h10/dynamics.hpp"
#include "h10/flow.hpp"
#include "h10/fock.hpp"
#include "oracles.hpp"

using namespace h10;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ":" << o.detail.str() << " ("
              << std::fixed << std::setprecision(1) << secs << " s)" << std::defaultfloat << std::endl;
}

const ProblemInstance& shifted() {
    static const ProblemInstance inst = make_instance(parse("x1 - 1"), {8});
    return inst;
}

const ProblemInstance& square() {
    static const ProblemInstance inst = make_instance(parse("(x1 + 1)^2"), {8});
    return inst;
}

const FlowPath& shifted_path() {
    static const FlowPath path = continue_flow(shifted(), 6, 1e-6);
    return path;
}

const FlowPath& square_path() {
    static const FlowPath path = continue_flow(square(), 6, 1e-6);
    return path;
}

bool has_boundary_diagnostic(const Verdict& v) {
    return std::any_of(v.diagnostics.begin(), v.diagnostics.end(),
                       [](const std::string& d) { return d.find(kBoundaryDiagnostic) != std::string::npos; });
}

}  // namespace

int main() {
    std::cout << std::setprecision(3);

    criterion(1, "min diagonal of H_P equals the exhaustive minimum on 20 random polynomials", [](Outcome& o) {
        std::mt19937_64 rng(20260101);
        int equal = 0;
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t k = 1 + trial % 2;
            const Polynomial p = testing::random_polynomial(rng, k, 3, 9, 5);
            const std::vector<unsigned> cutoffs(k, k == 1 ? 15u : 8u);
            const double diag_min = build_hp(p, BasisMap(cutoffs)).matrix().diagonal().real().minCoeff();
            const BigInt oracle = brute_force_min_square(p, LatticeBox::from_cutoffs(cutoffs)).min_value;
            if (BigInt(diag_min) == oracle && oracle.fits_slong_p()) ++equal;
        }
        o.detail << " " << equal << "/20 exact";
        o.require(equal == 20, "exact equality on every instance");
    });

    criterion(2, "H_I ground energy 0 and ground vector is the coherent state (alpha=1, lambda=sqrt2, d=15)",
              [](Outcome& o) {
                  const auto inst = make_instance(parse("x1"), {15}, {.lambdas = {std::sqrt(2.0)}, .alphas = {1.0}});
                  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(build_hi(inst).matrix());
                  const double e0 = solver.eigenvalues()(0);
                  const WaveFunction psi = coherent_state(inst.alphas, inst.basis);
                  const double overlap2 = std::norm(solver.eigenvectors().col(0).dot(psi.amplitudes));
                  o.detail << " E0=" << e0 << " |overlap|^2=1-" << 1.0 - overlap2;
                  o.require(std::abs(e0) <= 1e-8, "|E0| <= 1e-8");
                  o.require(overlap2 >= 1.0 - 1e-6, "|overlap|^2 >= 1 - 1e-6");
              });

    criterion(3, "Hellmann-Feynman residual along the x1 - 1 path (d=8, M=6)", [](Outcome& o) {
        const HermitianOperator w = build_hp(shifted().polynomial, shifted().basis) - build_hi(shifted());
        const auto& states = shifted_path().states;
        double worst = 0.0;
        for (std::size_t i = 1; i + 1 < states.size(); ++i) {
            const double h1 = states[i].s - states[i - 1].s;
            const double h2 = states[i + 1].s - states[i].s;
            const double fm = states[i - 1].eigenvalues(0), f0 = states[i].eigenvalues(0),
                         fp = states[i + 1].eigenvalues(0);
            // Second-order difference on a non-uniform grid.
            const double slope = (h1 * h1 * fp - h2 * h2 * fm + (h2 * h2 - h1 * h1) * f0) / (h1 * h2 * (h1 + h2));
            const auto v = states[i].eigenvectors.col(0);
            const double hf = shifted().schedule.derivative(states[i].s) * v.dot(w.matrix() * v).real();
            worst = std::max(worst, std::abs(slope - hf));
        }
        o.detail << " " << states.size() - 2 << " interior points, max residual " << worst;
        o.require(states.size() > 2, "interior points exist");
        o.require(worst <= 1e-5, "residual <= 1e-5");
    });

    criterion(4, "flow endpoints E0(1) = 0 and 1 with confident snaps", [](Outcome& o) {
        const double a = shifted_path().final_ground_energy();
        const double b = square_path().final_ground_energy();
        const SnapResult sa = snap_verdict(a), sb = snap_verdict(b);
        o.detail << " x1-1: E0=" << a << " snap=(" << sa.snapped << "," << sa.confident << ");"
                 << " (x1+1)^2: E0=" << b << " snap=(" << sb.snapped << "," << sb.confident << ")";
        o.require(std::abs(a) <= 1e-6, "x1 - 1 endpoint within 1e-6 of 0");
        o.require(std::abs(b - 1.0) <= 1e-6, "(x1+1)^2 endpoint within 1e-6 of 1");
        o.require(sa.snapped == 0 && sa.confident, "snap (0, true)");
        o.require(sb.snapped == 1 && sb.confident, "snap (1, true)");
    });

    criterion(5, "gauge component zero and aligned overlaps real-positive on every accepted step", [](Outcome& o) {
        double gauge = 0.0, phase = 0.0, min_real = 1.0;
        std::size_t steps = 0;
        for (const FlowPath* path : {&shifted_path(), &square_path()}) {
            for (const FlowStepRecord& rec : path->step_log) {
                if (rec.corrector_only) continue;
                ++steps;
                gauge = std::max(gauge, rec.gauge_residual);
                phase = std::max(phase, rec.phase_residual);
                min_real = std::min(min_real, rec.min_aligned_overlap);
            }
        }
        o.detail << " " << steps << " steps, max |<E_q|dE_q>|=" << gauge << ", max |Im overlap|=" << phase
                 << ", min Re overlap=" << min_real;
        o.require(gauge == 0.0, "gauge component exactly 0");
        o.require(phase <= 1e-10, "imaginary overlap <= 1e-10");
        o.require(min_real > 0.0, "real part positive");
    });

    criterion(6, "unitarity at tau=100, steps=20000 and second-order convergence", [](Outcome& o) {
        const EvolutionReport base = evolve(shifted(), 100.0, 20000);
        const ComplexVector b = evolve(shifted(), 100.0, 40000).final_state.amplitudes;
        const ComplexVector c = evolve(shifted(), 100.0, 80000).final_state.amplitudes;
        const double ratio = (base.final_state.amplitudes - b).cwiseAbs().maxCoeff() / (b - c).cwiseAbs().maxCoeff();
        o.detail << " norm_drift=" << base.norm_drift << " error ratio=" << ratio;
        o.require(base.norm_drift <= 1e-8, "norm_drift <= 1e-8");
        o.require(ratio >= 3.5 && ratio <= 4.5, "ratio in [3.5, 4.5]");
    });

    criterion(7, "tau sweep identifies (1) for x1 - 1 and (0) for (x1+1)^2", [](Outcome& o) {
        SweepOptions opts;
        opts.max_rounds = 12;
        const SweepResult a = tau_sweep(shifted(), opts);
        const SweepResult b = tau_sweep(square(), opts);
        o.require(a.identified == MultiIndex{1}, "x1 - 1 identifies (1)");
        o.require(b.identified == MultiIndex{0}, "(x1+1)^2 identifies (0)");
        if (!a.identified || !b.identified) return;
        const double pa = a.history.back().final_state.probability(shifted().basis.flat(*a.identified));
        const BigInt da = evaluate(shifted().polynomial, *a.identified);
        const BigInt db = evaluate(square().polynomial, *b.identified);
        o.detail << " x1-1: (1) p=" << pa << " at tau=" << a.history.back().tau << ", D=" << da.get_str()
                 << "; (x1+1)^2: (0) at tau=" << b.history.back().tau << ", D^2=" << BigInt(db * db).get_str();
        o.require(pa > 0.5, "occupation > 1/2");
        o.require(da == 0, "D(1) = 0");
        o.require(db * db == 1, "D(0)^2 = 1");
    });

    criterion(8, "decide verdicts on the fixture set with the boundary flag only for x1 - 3 at (2)", [](Outcome& o) {
        struct Case {
            const char* poly;
            std::vector<unsigned> cutoffs;
            VerdictStatus status;
            std::optional<MultiIndex> witness;
            bool boundary;
        };
        const std::vector<Case> cases = {
            {"x1 - 1", {8}, VerdictStatus::SolvableWithWitness, MultiIndex{1}, false},
            {"(x1 + 1)^2", {8}, VerdictStatus::NoSolutionWithinBox, std::nullopt, false},
            {"x1^2 + x2^2 - 25", {6, 6}, VerdictStatus::SolvableWithWitness, MultiIndex{0, 5}, false},
            {"x1 - 3", {2}, VerdictStatus::NoSolutionWithinBox, std::nullopt, true},
            {"x1 - 3", {4}, VerdictStatus::SolvableWithWitness, MultiIndex{3}, false},
        };
        for (const Case& c : cases) {
            const Polynomial p = parse(c.poly);
            const Verdict v = decide(p, c.cutoffs);
            o.detail << " " << c.poly << ":" << to_string(v.status);
            const std::string tag = std::string(c.poly) + " ";
            o.require(v.status == c.status, tag + "status");
            o.require(v.witness == c.witness, tag + "witness");
            o.require(has_boundary_diagnostic(v) == c.boundary, tag + "boundary diagnostic");
            if (v.witness) o.require(evaluate(p, *v.witness) == 0, tag + "witness confirmed");
            if (c.status == VerdictStatus::NoSolutionWithinBox) o.require(v.e0_oracle >= 1, tag + "e0_oracle >= 1");
        }
    });

    criterion(9, "E0(1) stable under M 6->10 and cutoff 8->12", [](Outcome& o) {
        // M = 10 needs at least 10 basis states, so it is paired with d = 12.
        double worst = 0.0;
        for (const char* text : {"x1 - 1", "(x1 + 1)^2"}) {
            const Polynomial p = parse(text);
            const double base = continue_flow(make_instance(p, {8}), 6, 1e-6).final_ground_energy();
            const double more_d = continue_flow(make_instance(p, {12}), 6, 1e-6).final_ground_energy();
            const double more_m = continue_flow(make_instance(p, {12}), 10, 1e-6).final_ground_energy();
            worst = std::max({worst, std::abs(more_m - base), std::abs(more_d - base)});
        }
        o.detail << " max change " << worst;
        o.require(worst <= 1e-6, "change <= 1e-6");
    });

    criterion(10, "identical configuration gives byte-identical JSON", [](Outcome& o) {
        const std::vector<std::vector<std::string>> configs = {
            {"h10", "decide", "--poly", "x1 - 3", "--cutoffs", "4"},
            {"h10", "decide", "--poly", "(x1+1)^2", "--cutoffs", "8"},
            {"h10", "flow", "--poly", "x1 - 1", "--cutoffs", "8"},
            {"h10", "sweep", "--poly", "x1 - 1", "--cutoffs", "8", "--max-rounds", "12"},
        };
        int identical = 0;
        for (const auto& args : configs) {
            std::ostringstream out1, out2, err;
            const int c1 = cli::run(args, out1, err);
            const int c2 = cli::run(args, out2, err);
            if (c1 == c2 && out1.str() == out2.str() && !out1.str().empty()) ++identical;
        }
        o.detail << " " << identical << "/" << configs.size() << " configurations identical";
        o.require(identical == static_cast<int>(configs.size()), "byte-identical output");
    });

    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
