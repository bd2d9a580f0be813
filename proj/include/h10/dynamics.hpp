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

// Adiabatic Schrodinger evolution i d/dt |psi> = 𝔥(t/tau) |psi> from the
// coherent ground state of H_I, and the occupation-probability readout.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "h10/fock.hpp"

namespace h10 {

struct Occupation {
    MultiIndex state;
    double probability = 0.0;
};

struct EvolutionReport {
    double tau = 0.0;
    WaveFunction final_state;
    /// | ||psi(tau)|| - 1 |, not renormalized away.
    double norm_drift = 0.0;
    std::size_t steps = 0;
    /// Largest single-step change of the norm.
    double max_step_defect = 0.0;
    /// Most occupied Fock states, descending.
    std::vector<Occupation> top_occupations;
    std::vector<std::string> warnings;
};

/// One probe sample: time, norm, occupation of the lowest H_P diagonal state.
struct ProbeSample {
    double t = 0.0;
    double norm = 0.0;
    double ground_candidate_occupation = 0.0;
};

struct EvolveOptions {
    /// Number of entries kept in EvolutionReport::top_occupations.
    std::size_t top_count = 8;
    /// Emit a probe sample every `probe_every` steps (0 disables).
    std::size_t probe_every = 0;
    std::function<void(const ProbeSample&)> probe;
};

/// Midpoint exponential stepping: each of `steps` steps applies
/// exp(-i dt 𝔥(s_mid)) through the eigendecomposition of 𝔥(s_mid).
EvolutionReport evolve(const ProblemInstance& instance, double tau, std::size_t steps,
                       const EvolveOptions& options = {});

/// Same as evolve, starting from an arbitrary state instead of the coherent
/// ground state of H_I.
EvolutionReport evolve_from(const ProblemInstance& instance, WaveFunction initial, double tau, std::size_t steps,
                            const EvolveOptions& options = {});

/// The Fock state with occupation strictly above 1/2, if any.
std::optional<MultiIndex> identify_ground(const EvolutionReport& report);

struct SweepOptions {
    double tau0 = 1.0;
    double growth = 2.0;
    std::size_t max_rounds = 16;
    /// steps = max(min_steps, ceil(steps_per_tau * tau)).
    double steps_per_tau = 200.0;
    std::size_t min_steps = 1000;
};

struct SweepResult {
    std::optional<MultiIndex> identified;
    std::vector<EvolutionReport> history;
};

std::size_t sweep_steps(const SweepOptions& options, double tau);

/// Evolves at tau0 * growth^k, k = 0, 1, ..., until identify_ground succeeds.
SweepResult tau_sweep(const ProblemInstance& instance, const SweepOptions& options = {});

/// CSV writer for probe samples: header "t,norm,ground_candidate_occupation".
class ProbeCsvWriter {
public:
    explicit ProbeCsvWriter(std::ostream& out);
    void operator()(const ProbeSample& sample);

private:
    std::ostream* out_;
};

}  // namespace h10
