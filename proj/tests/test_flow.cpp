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

#include <doctest.h>

#include <cmath>
#include <random>
#include <tuple>
#include <sstream>

#include "h10/flow.hpp"
#include "oracles.hpp"

using namespace h10;

namespace {

// Shared fixture paths; each takes a few seconds so compute once.
const FlowPath& shifted_path() {
    static const FlowPath path = continue_flow(make_instance(parse("x1 - 1"), {8}), 6, 1e-6);
    return path;
}

const FlowPath& square_path() {
    static const FlowPath path = continue_flow(make_instance(parse("(x1 + 1)^2"), {8}), 6, 1e-6);
    return path;
}

FlowState state_from(const ComplexMatrix& vectors, std::vector<double> values) {
    FlowState st;
    st.eigenvectors = vectors;
    st.eigenvalues = Eigen::Map<RealVector>(values.data(), static_cast<Eigen::Index>(values.size()));
    return st;
}

// Derivative at x from neighbours at x - h1 and x + h2 (second order).
double central_difference(double fm, double f0, double fp, double h1, double h2) {
    return (h1 * h1 * fp - h2 * h2 * fm + (h2 * h2 - h1 * h1) * f0) / (h1 * h2 * (h1 + h2));
}

}  // namespace

TEST_CASE("eigensolve examples") {
    const auto inst = make_instance(parse("x1"), {3}, {.lambdas = {std::sqrt(2.0)}, .alphas = {0.0}});
    const FlowState st = eigensolve(build_hi(inst), 4);
    for (int n = 0; n < 4; ++n) CHECK(st.eigenvalues(n) == doctest::Approx(n * std::sqrt(2.0)).epsilon(1e-14));

    const FlowState hp = eigensolve(build_hp(parse("x1 - 1"), BasisMap({2})), 3);
    CHECK(hp.eigenvalues(0) == 0.0);
    CHECK(hp.eigenvalues(1) == 1.0);
    CHECK(hp.eigenvalues(2) == 1.0);
    CHECK(hp.gap_floor == 0.0);

    CHECK_THROWS_AS(eigensolve(build_hp(parse("x1"), BasisMap({2})), 4), DomainError);
    CHECK_THROWS_AS(eigensolve(build_hp(parse("x1"), BasisMap({2})), 0), DomainError);
}

TEST_CASE("property: eigensolve reconstructs random hermitian matrices") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix h = testing::random_hermitian(rng, 8);
        const FlowState st = eigensolve(HermitianOperator(h), 8);
        ComplexMatrix rebuilt = st.eigenvectors * st.eigenvalues.cast<Complex>().asDiagonal() *
                                st.eigenvectors.adjoint();
        CHECK((rebuilt - h).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((st.eigenvectors.adjoint() * st.eigenvectors - ComplexMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() <
              1e-10);
        const auto reference = testing::general_eigenvalues(h);
        for (int q = 0; q < 8; ++q) {
            CHECK(std::abs(st.eigenvalues(q) - reference[q]) < 1e-10);
            CHECK((h * st.eigenvectors.col(q) - st.eigenvalues(q) * st.eigenvectors.col(q)).norm() < 1e-10);
        }
        for (int q = 1; q < 8; ++q) CHECK(st.eigenvalues(q - 1) <= st.eigenvalues(q));
    }
}

TEST_CASE("flow derivatives") {
    SUBCASE("W diagonal in the eigenbasis gives no vector motion") {
        const ComplexMatrix basis = ComplexMatrix::Identity(4, 4).leftCols(3);
        const FlowState st = state_from(basis, {0.0, 1.0, 2.5});
        ComplexMatrix w = ComplexMatrix::Zero(4, 4);
        w.diagonal() << 3.0, -1.0, 0.5, 7.0;
        const FlowDerivatives d = flow_derivatives(st, HermitianOperator(w), 2.0);
        CHECK(d.d_eigenvectors.cwiseAbs().maxCoeff() == 0.0);
        CHECK(d.d_eigenvalues(0) == 6.0);
        CHECK(d.d_eigenvalues(1) == -2.0);
        CHECK(d.d_eigenvalues(2) == 1.0);
    }
    SUBCASE("eigenvalue slope matches finite differences of eigensolve") {
        const auto inst = make_instance(parse("x1*x2 - 2"), {3, 2}, {.alphas = {{0.7, 0.2}, 1.1}});
        const HermitianOperator hi = build_hi(inst);
        const HermitianOperator hp = build_hp(inst.polynomial, inst.basis);
        const HermitianOperator w = hp - hi;
        const double h = 1e-4;
        for (double s : {0.2, 0.5, 0.8}) {
            const FlowState st = eigensolve(interpolate(hi, hp, inst.schedule, s), 5, s);
            const FlowDerivatives d = flow_derivatives(st, w, inst.schedule.derivative(s));
            const FlowState up = eigensolve(interpolate(hi, hp, inst.schedule, s + h), 5);
            const FlowState down = eigensolve(interpolate(hi, hp, inst.schedule, s - h), 5);
            for (int q = 0; q < 5; ++q) {
                const double fd = (up.eigenvalues(q) - down.eigenvalues(q)) / (2 * h);
                CHECK(std::abs(fd - d.d_eigenvalues(q)) < 1e-5);
            }
            // Gauge component vanishes identically.
            for (int q = 0; q < 5; ++q) CHECK(d.coefficients(q, q) == Complex(0.0));
            CHECK((st.eigenvectors.adjoint() * d.d_eigenvectors).diagonal().cwiseAbs().maxCoeff() < 1e-14);
        }
    }
    SUBCASE("near-degenerate pair raises GapCollapse") {
        const FlowState st = state_from(ComplexMatrix::Identity(3, 3), {0.0, 1.0, 1.0 + 1e-8});
        try {
            flow_derivatives(st, HermitianOperator(ComplexMatrix::Identity(3, 3)), 1.0);
            FAIL("expected GapCollapse");
        } catch (const GapCollapse& e) {
            CHECK(e.q() == 1);
            CHECK(e.l() == 2);
            CHECK(e.gap() < 1e-6);
            CHECK(e.partial_path.states.empty());
        }
    }
}

TEST_CASE("gauge_align") {
    std::mt19937_64 rng(13);
    const ComplexMatrix h = testing::random_hermitian(rng, 4);
    const FlowState st = eigensolve(HermitianOperator(h), 4);

    SUBCASE("identity") {
        const FlowState out = gauge_align(st.eigenvectors, st);
        CHECK((out.eigenvectors - st.eigenvectors).cwiseAbs().maxCoeff() < 1e-15);
        CHECK(out.eigenvalues == st.eigenvalues);
    }
    SUBCASE("phase restored") {
        FlowState rotated = st;
        const Complex phase = std::polar(1.0, 2.1);
        rotated.eigenvectors.col(2) *= phase;
        const FlowState out = gauge_align(st.eigenvectors, rotated);
        CHECK((out.eigenvectors - st.eigenvectors).cwiseAbs().maxCoeff() < 1e-14);
        const Complex ov = st.eigenvectors.col(2).dot(out.eigenvectors.col(2));
        CHECK(std::abs(ov.imag()) < 1e-14);
        CHECK(ov.real() > 0.0);
    }
    SUBCASE("swapped columns are put back") {
        FlowState swapped = st;
        swapped.eigenvectors.col(1).swap(swapped.eigenvectors.col(3));
        std::swap(swapped.eigenvalues(1), swapped.eigenvalues(3));
        const FlowState out = gauge_align(st.eigenvectors, swapped);
        CHECK(out.eigenvalues == st.eigenvalues);
        CHECK((out.eigenvectors - st.eigenvectors).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("no clear match") {
        ComplexMatrix ref = ComplexMatrix::Zero(5, 1);
        ref(0, 0) = 1.0;
        ComplexMatrix spread = ComplexMatrix::Zero(5, 2);
        spread.col(0).setConstant(1.0 / std::sqrt(5.0));
        spread(1, 1) = 1.0 / std::sqrt(2.0);
        spread(2, 1) = -1.0 / std::sqrt(2.0);
        try {
            gauge_align(ref, state_from(spread, {0.0, 1.0}));
            FAIL("expected AmbiguousMatch");
        } catch (const AmbiguousMatch& e) {
            CHECK(e.column() == 0);
            CHECK(e.best_overlap() == doctest::Approx(1.0 / std::sqrt(5.0)));
        }
    }
    SUBCASE("two references claiming one column") {
        ComplexMatrix ref(2, 2);
        ref << 1.0, 1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0);
        ComplexMatrix cand(2, 2);
        cand << 0.8, -0.6, 0.6, 0.8;
        try {
            gauge_align(ref, state_from(cand, {0.0, 1.0}));
            FAIL("expected AmbiguousMatch");
        } catch (const AmbiguousMatch& e) {
            CHECK(e.column() == 1);
        }
    }
}

TEST_CASE("continue_flow endpoint fixtures") {
    const FlowPath& a = shifted_path();
    CHECK(std::abs(a.final_ground_energy()) < 1e-6);
    CHECK(a.final_state().s == 1.0);
    const SnapResult sa = snap_verdict(a.final_ground_energy());
    CHECK(sa.snapped == 0);
    CHECK(sa.confident);
    CHECK(sa.solvable());

    const FlowPath& b = square_path();
    CHECK(std::abs(b.final_ground_energy() - 1.0) < 1e-6);
    const SnapResult sb = snap_verdict(b.final_ground_energy());
    CHECK(sb.snapped == 1);
    CHECK(sb.confident);
    CHECK_FALSE(sb.solvable());

    // Endpoint equals the minimum diagonal entry of H_P.
    const HermitianOperator hp = build_hp(parse("(x1 + 1)^2"), BasisMap({8}));
    CHECK(std::abs(b.final_ground_energy() - hp.matrix().diagonal().real().minCoeff()) < 1e-6);
}

TEST_CASE("continue_flow starts from the direct eigensolve of H_I") {
    const auto inst = make_instance(parse("x1 - 1"), {8});
    const FlowState direct = eigensolve(build_hi(inst), 6);
    const FlowState& first = shifted_path().states.front();
    CHECK(first.s == 0.0);
    CHECK(first.eigenvalues == direct.eigenvalues);
    CHECK(first.eigenvectors == direct.eigenvectors);
}

TEST_CASE("continue_flow path invariants") {
    for (const FlowPath* path : {&shifted_path(), &square_path()}) {
        const auto& states = path->states;
        REQUIRE(states.size() == path->step_log.size() + 1);
        for (std::size_t i = 1; i < states.size(); ++i) CHECK(states[i].s > states[i - 1].s);
        for (const FlowStepRecord& rec : path->step_log) {
            if (rec.corrector_only) continue;
            CHECK(rec.remainder <= 1e-6);
            CHECK(rec.min_overlap >= 1.0 - 1e-6);
            CHECK(rec.eps <= 0.05);
            CHECK(rec.gauge_residual == 0.0);
            CHECK(rec.phase_residual <= 1e-10);
            CHECK(rec.min_aligned_overlap > 0.0);
        }
        for (const FlowState& st : states) {
            const Eigen::Index m = st.eigenvectors.cols();
            CHECK((st.eigenvectors.adjoint() * st.eigenvectors - ComplexMatrix::Identity(m, m)).cwiseAbs().maxCoeff() <
                  1e-10);
        }
    }
}

TEST_CASE("property: Hellmann-Feynman holds along the stored path") {
    const auto inst = make_instance(parse("x1 - 1"), {8});
    const HermitianOperator w = build_hp(inst.polynomial, inst.basis) - build_hi(inst);
    const auto& states = shifted_path().states;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < states.size(); ++i) {
        const double h1 = states[i].s - states[i - 1].s;
        const double h2 = states[i + 1].s - states[i].s;
        const double fd = central_difference(states[i - 1].eigenvalues(0), states[i].eigenvalues(0),
                                             states[i + 1].eigenvalues(0), h1, h2);
        const auto v = states[i].eigenvectors.col(0);
        const double hf = inst.schedule.derivative(states[i].s) * v.dot(w.matrix() * v).real();
        worst = std::max(worst, std::abs(fd - hf));
    }
    CHECK(worst <= 1e-5);
}

TEST_CASE("phase fixing does not change eigenvalues") {
    const auto inst = make_instance(parse("(x1 + 1)^2"), {8});
    FlowOptions free_phase;
    free_phase.fix_phase = false;
    const FlowPath loose = continue_flow(inst, 6, 1e-6, free_phase);
    const FlowPath& fixed = square_path();
    REQUIRE(loose.states.size() == fixed.states.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < loose.states.size(); ++i) {
        CHECK(loose.states[i].s == fixed.states[i].s);
        worst = std::max(worst, (loose.states[i].eigenvalues - fixed.states[i].eigenvalues).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("endpoint is stable under more tracked states and larger cutoffs") {
    const double base = square_path().final_ground_energy();
    const FlowPath wide = continue_flow(make_instance(parse("(x1 + 1)^2"), {12}), 10, 1e-6);
    CHECK(std::abs(wide.final_ground_energy() - base) <= 1e-6);
}

TEST_CASE("continue_flow errors") {
    const auto inst = make_instance(parse("(x1 + 1)^2"), {8});
    CHECK_THROWS_AS(continue_flow(inst, 1, 1e-6), DomainError);
    CHECK_THROWS_AS(continue_flow(inst, 4, 0.0), DomainError);
    CHECK_THROWS_AS(continue_flow(inst, 12, 1e-6), DomainError);

    SUBCASE("gap collapse carries the partial path") {
        FlowOptions opts;
        opts.gap_eps = 2.0;
        try {
            continue_flow(inst, 4, 1e-6, opts);
            FAIL("expected GapCollapse");
        } catch (const GapCollapse& e) {
            CHECK(e.s() == 0.0);
            REQUIRE(e.partial_path.states.size() == 1);
            CHECK(e.partial_path.states.front().s == 0.0);
        }
    }
    SUBCASE("step underflow") {
        FlowOptions opts;
        opts.initial_step = 1e-3;
        opts.min_step = 1e-3;
        try {
            continue_flow(inst, 4, 1e-15, opts);
            FAIL("expected StepUnderflow");
        } catch (const StepUnderflow& e) {
            CHECK(e.partial_path.states.size() == 1);
        }
    }
}

TEST_CASE("degenerate endpoint spectrum is reached") {
    for (const auto& [text, cutoff, tracked] :
         {std::tuple{"x1 - 1", 2u, std::size_t{3}}, std::tuple{"x1 - 1", 8u, std::size_t{6}},
          std::tuple{"x1 - 2", 5u, std::size_t{4}}}) {
        CAPTURE(text);
        const auto inst = make_instance(parse(text), {cutoff});
        const FlowPath path = continue_flow(inst, tracked, 1e-6);
        std::vector<double> diag;
        const HermitianOperator hp = build_hp(inst.polynomial, inst.basis);
        for (std::size_t j = 0; j < hp.dim(); ++j) diag.push_back(hp(j, j).real());
        std::sort(diag.begin(), diag.end());
        for (std::size_t q = 0; q < tracked; ++q) CHECK(std::abs(path.final_state().eigenvalues(q) - diag[q]) < 1e-6);
        // A corrector-only segment can only be the last one, and is reported.
        for (std::size_t i = 0; i < path.step_log.size(); ++i) {
            if (!path.step_log[i].corrector_only) continue;
            CHECK(i + 1 == path.step_log.size());
            CHECK_FALSE(path.diagnostics.empty());
        }
    }
}

TEST_CASE("snap_verdict") {
    CHECK(snap_verdict(0.02).snapped == 0);
    CHECK(snap_verdict(0.02).confident);
    CHECK(snap_verdict(0.97).snapped == 1);
    CHECK(snap_verdict(0.97).confident);
    CHECK(snap_verdict(0.45).snapped == 0);
    CHECK_FALSE(snap_verdict(0.45).confident);
    CHECK(snap_verdict(-0.2).snapped == 0);
    CHECK_THROWS_AS(snap_verdict(-0.6), DomainError);
}

TEST_CASE("flow trace csv") {
    std::ostringstream out;
    write_flow_csv(out, square_path());
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "s,E_0,E_1,E_2,E_3,E_4,E_5,gap_floor,eps,N");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == square_path().states.size());
}
