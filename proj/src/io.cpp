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

#include "h10/io.hpp"

#include "h10/errors.hpp"

namespace h10::io {

namespace {

Json optional_index(const std::optional<MultiIndex>& n) { return n ? Json(*n) : Json(nullptr); }

Json complex_pair(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw DomainError("complex entry must be a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Json big_to_json(const BigInt& value) {
    if (value.fits_slong_p()) return Json(static_cast<long long>(value.get_si()));
    return Json(value.get_str());
}

Json polynomial_to_json(const Polynomial& p) {
    Json monomials = Json::array();
    for (const auto& m : p.monomials()) {
        monomials.push_back({{"coefficient", big_to_json(m.coefficient)}, {"exponents", m.exponents}});
    }
    return {{"num_vars", p.num_vars()},
            {"canonical", to_string(p)},
            {"degree", p.total_degree()},
            {"monomials", std::move(monomials)}};
}

Json oracle_to_json(const MinSquareResult& result) {
    return {{"min", big_to_json(result.min_value)}, {"witnesses", result.witnesses}};
}

Json operator_to_json(const HermitianOperator& op, const std::vector<unsigned>& cutoffs) {
    Json entries = Json::array();
    const ComplexMatrix& m = op.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back(complex_pair(m(r, c)));
    }
    return {{"dim", op.dim()}, {"cutoffs", cutoffs}, {"entries", std::move(entries)}};
}

HermitianOperator operator_from_json(const Json& j) {
    const auto dim = j.at("dim").get<std::size_t>();
    const Json& entries = j.at("entries");
    if (entries.size() != dim * dim) throw DomainError("operator entry count does not match dim^2");
    ComplexMatrix m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) m(r, c) = complex_from(entries[r * dim + c]);
    }
    return HermitianOperator(std::move(m));
}

Json state_to_json(const WaveFunction& psi) {
    Json entries = Json::array();
    for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i) entries.push_back(complex_pair(psi.amplitudes(i)));
    return {{"dim", psi.amplitudes.size()}, {"cutoffs", psi.cutoffs}, {"entries", std::move(entries)}};
}

WaveFunction state_from_json(const Json& j) {
    const auto dim = j.at("dim").get<std::size_t>();
    const Json& entries = j.at("entries");
    if (entries.size() != dim) throw DomainError("state entry count does not match dim");
    WaveFunction psi;
    psi.cutoffs = j.at("cutoffs").get<std::vector<unsigned>>();
    psi.amplitudes.resize(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) psi.amplitudes(static_cast<Eigen::Index>(i)) = complex_from(entries[i]);
    return psi;
}

Json flow_to_json(const FlowPath& path) {
    const FlowState& last = path.final_state();
    const SnapResult snap = snap_verdict(last.eigenvalues(0));
    std::vector<double> finals(last.eigenvalues.data(), last.eigenvalues.data() + last.eigenvalues.size());
    double max_remainder = 0.0;
    std::size_t corrector_only = 0;
    for (const auto& rec : path.step_log) {
        max_remainder = std::max(max_remainder, rec.remainder);
        corrector_only += rec.corrector_only ? 1 : 0;
    }
    return {{"tracked", last.tracked()},
            {"steps", path.step_log.size()},
            {"e0_final", last.eigenvalues(0)},
            {"snapped", snap.snapped},
            {"confident", snap.confident},
            {"final_eigenvalues", finals},
            {"max_remainder", max_remainder},
            {"corrector_only_steps", corrector_only},
            {"diagnostics", path.diagnostics}};
}

Json evolution_to_json(const EvolutionReport& report) {
    Json top = Json::array();
    for (const auto& occ : report.top_occupations) {
        top.push_back({{"state", occ.state}, {"probability", occ.probability}});
    }
    return {{"tau", report.tau},
            {"steps", report.steps},
            {"norm_drift", report.norm_drift},
            {"max_step_defect", report.max_step_defect},
            {"identified", optional_index(identify_ground(report))},
            {"top_occupations", std::move(top)},
            {"warnings", report.warnings}};
}

Json sweep_to_json(const SweepResult& result, const Polynomial& p) {
    Json history = Json::array();
    for (const auto& r : result.history) history.push_back(evolution_to_json(r));
    Json out = {{"identified", optional_index(result.identified)}};
    if (result.identified) {
        const BigInt d = evaluate(p, *result.identified);
        out["d_value"] = big_to_json(d);
        out["confirmed_solution"] = (d == 0);
    }
    out["rounds"] = result.history.size();
    out["history"] = std::move(history);
    return out;
}

Json verdict_to_json(const Verdict& v) {
    return {{"status", std::string(to_string(v.status))},
            {"witness", optional_index(v.witness)},
            {"e0_flow", v.e0_flow ? Json(*v.e0_flow) : Json(nullptr)},
            {"e0_oracle", big_to_json(v.e0_oracle)},
            {"dynamics_identified", optional_index(v.dynamics_identified)},
            {"cutoffs", v.cutoffs},
            {"diagnostics", v.diagnostics}};
}

Json study_to_json(const StudyReport& report) {
    Json rungs = Json::array();
    for (const auto& r : report.rungs) {
        rungs.push_back({{"cutoffs", r.cutoffs},
                         {"minimum_on_boundary", r.minimum_on_boundary},
                         {"verdict", verdict_to_json(r.verdict)}});
    }
    return {{"verdict_stable", report.verdict_stable},
            {"e0_stable", report.e0_stable},
            {"minimum_left_boundary", report.minimum_left_boundary},
            {"first_change", report.first_change ? Json(*report.first_change) : Json(nullptr)},
            {"rungs", std::move(rungs)}};
}

}  // namespace h10::io
