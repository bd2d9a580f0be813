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

#include "h10/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>

#include "spectral.hpp"

#include "h10/errors.hpp"

namespace h10 {

namespace {

std::vector<Occupation> top_occupations(const WaveFunction& psi, const BasisMap& basis, std::size_t count) {
    std::vector<std::size_t> order(basis.dim());
    std::iota(order.begin(), order.end(), 0);
    // Stable on ties so the report is deterministic.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return psi.probability(a) > psi.probability(b); });
    std::vector<Occupation> out;
    for (std::size_t i = 0; i < std::min(count, order.size()); ++i) {
        out.push_back({basis.unflat(order[i]), psi.probability(order[i])});
    }
    return out;
}

}  // namespace

EvolutionReport evolve(const ProblemInstance& instance, double tau, std::size_t steps, const EvolveOptions& options) {
    std::vector<std::string> warnings;
    WaveFunction initial = coherent_state(instance.alphas, instance.basis, &warnings);
    EvolutionReport report = evolve_from(instance, std::move(initial), tau, steps, options);
    report.warnings.insert(report.warnings.begin(), warnings.begin(), warnings.end());
    return report;
}

EvolutionReport evolve_from(const ProblemInstance& instance, WaveFunction initial, double tau, std::size_t steps,
                            const EvolveOptions& options) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("evolution time must be positive");
    if (steps == 0) throw DomainError("evolution needs at least one step");
    if (static_cast<std::size_t>(initial.amplitudes.size()) != instance.basis.dim()) {
        throw ArityError("initial state does not match the basis dimension");
    }

    const HermitianOperator hi = build_hi(instance);
    const HermitianOperator hp = build_hp(instance.polynomial, instance.basis);
    const HermitianOperator w = hp - hi;

    EvolutionReport report;
    report.tau = tau;
    report.steps = steps;

    const double guard = std::ceil(10.0 * tau * w.max_abs());
    if (static_cast<double>(steps) < guard) {
        report.warnings.push_back("resolution guard: " + std::to_string(steps) + " steps for tau=" +
                                  std::to_string(tau) + " is below the recommended " +
                                  std::to_string(static_cast<long long>(guard)));
    }

    Eigen::Index ground_candidate = 0;
    hp.matrix().diagonal().real().minCoeff(&ground_candidate);

    ComplexVector psi = std::move(initial.amplitudes);
    const double initial_norm = psi.norm();
    const double dt = tau / static_cast<double>(steps);

    auto emit_probe = [&](std::size_t k) {
        if (!options.probe || options.probe_every == 0) return;
        if (k % options.probe_every != 0 && k != steps) return;
        options.probe({dt * static_cast<double>(k), psi.norm(), std::norm(psi(ground_candidate))});
    };
    emit_probe(0);

    detail::HermitianEigensolver solver;
    ComplexVector coeffs;
    double previous_norm = initial_norm;
    for (std::size_t k = 0; k < steps; ++k) {
        const double s_mid = (static_cast<double>(k) + 0.5) / static_cast<double>(steps);
        const HermitianOperator h = interpolate(hi, hp, instance.schedule, s_mid);
        solver.compute(h.matrix());

        coeffs.noalias() = solver.eigenvectors().adjoint() * psi;
        for (Eigen::Index q = 0; q < coeffs.size(); ++q) {
            coeffs(q) *= std::polar(1.0, -dt * solver.eigenvalues()(q));
        }
        psi.noalias() = solver.eigenvectors() * coeffs;

        if (!psi.allFinite()) {
            throw NonFiniteAmplitude("non-finite amplitude at step " + std::to_string(k + 1) + "; reduce dt");
        }
        const double norm = psi.norm();
        report.max_step_defect = std::max(report.max_step_defect, std::abs(norm - previous_norm));
        previous_norm = norm;
        emit_probe(k + 1);
    }

    report.norm_drift = std::abs(psi.norm() - 1.0);
    report.final_state = WaveFunction{std::move(psi), instance.basis.cutoffs()};
    report.top_occupations = top_occupations(report.final_state, instance.basis, options.top_count);
    return report;
}

std::optional<MultiIndex> identify_ground(const EvolutionReport& report) {
    const BasisMap basis(report.final_state.cutoffs);
    for (std::size_t j = 0; j < basis.dim(); ++j) {
        if (report.final_state.probability(j) > 0.5) return basis.unflat(j);
    }
    return std::nullopt;
}

std::size_t sweep_steps(const SweepOptions& options, double tau) {
    return std::max(options.min_steps, static_cast<std::size_t>(std::ceil(options.steps_per_tau * tau)));
}

SweepResult tau_sweep(const ProblemInstance& instance, const SweepOptions& options) {
    if (!(options.tau0 > 0.0)) throw DomainError("tau0 must be positive");
    if (!(options.growth > 1.0)) throw DomainError("tau growth factor must exceed 1");

    SweepResult result;
    double tau = options.tau0;
    for (std::size_t round = 0; round < options.max_rounds; ++round, tau *= options.growth) {
        result.history.push_back(evolve(instance, tau, sweep_steps(options, tau)));
        if (auto found = identify_ground(result.history.back())) {
            result.identified = std::move(found);
            break;
        }
    }
    return result;
}

ProbeCsvWriter::ProbeCsvWriter(std::ostream& out) : out_(&out) {
    *out_ << "t,norm,ground_candidate_occupation\n";
    *out_ << std::setprecision(17);
}

void ProbeCsvWriter::operator()(const ProbeSample& sample) {
    *out_ << sample.t << ',' << sample.norm << ',' << sample.ground_candidate_occupation << '\n';
}

}  // namespace h10
