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

// JSON layouts. Operators and states use
//   {"dim": n, "cutoffs": [...], "entries": [[re, im], ...]}
// with matrix entries in row-major order. Big integers are JSON numbers when
// they fit in int64 and decimal strings otherwise.

#include <vector>

#include <json.hpp>

#include "h10/decision.hpp"
#include "h10/diophantine.hpp"
#include "h10/dynamics.hpp"
#include "h10/flow.hpp"
#include "h10/fock.hpp"

namespace h10::io {

using Json = nlohmann::ordered_json;

Json big_to_json(const BigInt& value);

Json polynomial_to_json(const Polynomial& p);
Json oracle_to_json(const MinSquareResult& result);

Json operator_to_json(const HermitianOperator& op, const std::vector<unsigned>& cutoffs);
HermitianOperator operator_from_json(const Json& j);
Json state_to_json(const WaveFunction& psi);
WaveFunction state_from_json(const Json& j);

Json flow_to_json(const FlowPath& path);
Json evolution_to_json(const EvolutionReport& report);
Json sweep_to_json(const SweepResult& result, const Polynomial& p);
Json verdict_to_json(const Verdict& verdict);
Json study_to_json(const StudyReport& report);

}  // namespace h10::io
