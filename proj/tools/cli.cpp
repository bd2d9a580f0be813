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

#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "h10/decision.hpp"
#include "h10/io.hpp"

namespace h10::cli {

namespace {

struct RunConfig {
    std::string poly;
    std::string cutoffs;
    std::string alphas;
    std::string lambdas;
    std::string schedule = "linear";
    std::string out;
    std::string trace;
    std::string dump;
    double tol = 1e-6;
    std::size_t tracked = 6;
    double tau0 = 1.0;
    double growth = 2.0;
    std::size_t max_rounds = 10;
    double steps_per_tau = 200.0;
    std::size_t min_steps = 1000;
    double tau = 10.0;
    std::size_t steps = 0;
    std::string ladder;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
    std::vector<T> values;
    for (const auto& part : split(text, ',')) {
        std::istringstream is(part);
        T v{};
        if (!(is >> v) || !(is >> std::ws).eof()) {
            throw UsageError(std::string("invalid ") + what + " entry '" + part + "'");
        }
        values.push_back(v);
    }
    if (values.empty()) throw UsageError(std::string("empty ") + what + " list");
    return values;
}

std::vector<unsigned> parse_cutoffs(const std::string& text, std::size_t k) {
    if (text.empty()) return std::vector<unsigned>(k, 8);
    std::vector<unsigned> c;
    for (long v : parse_list<long>(text, "cutoff")) {
        if (v < 1) throw UsageError("cutoffs must be positive integers");
        c.push_back(static_cast<unsigned>(v));
    }
    if (c.size() != k) {
        throw UsageError("got " + std::to_string(c.size()) + " cutoffs but the polynomial has " + std::to_string(k) +
                         " variables");
    }
    return c;
}

InstanceOptions instance_options(const RunConfig& cfg) {
    InstanceOptions opts;
    if (!cfg.lambdas.empty()) opts.lambdas = parse_list<double>(cfg.lambdas, "lambda");
    if (!cfg.alphas.empty()) {
        for (double a : parse_list<double>(cfg.alphas, "alpha")) opts.alphas.emplace_back(a, 0.0);
    }
    opts.schedule = Schedule::from_name(cfg.schedule);
    return opts;
}

SweepOptions sweep_options(const RunConfig& cfg) {
    SweepOptions s;
    s.tau0 = cfg.tau0;
    s.growth = cfg.growth;
    s.max_rounds = cfg.max_rounds;
    s.steps_per_tau = cfg.steps_per_tau;
    s.min_steps = cfg.min_steps;
    return s;
}

DecisionConfig decision_config(const RunConfig& cfg) {
    DecisionConfig d;
    d.instance = instance_options(cfg);
    d.tracked = cfg.tracked;
    d.flow_tol = cfg.tol;
    d.sweep = sweep_options(cfg);
    return d;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << content;
}

void emit(const RunConfig& cfg, const io::Json& j, std::ostream& out) {
    const std::string text = j.dump(2) + "\n";
    if (cfg.out.empty()) {
        out << text;
    } else {
        write_file(cfg.out, text);
    }
}

void dump_operators(const RunConfig& cfg, const ProblemInstance& inst) {
    if (cfg.dump.empty()) return;
    const auto& cutoffs = inst.basis.cutoffs();
    write_file(cfg.dump + "_hi.json", io::operator_to_json(build_hi(inst), cutoffs).dump() + "\n");
    write_file(cfg.dump + "_hp.json", io::operator_to_json(build_hp(inst.polynomial, inst.basis), cutoffs).dump() + "\n");
    write_file(cfg.dump + "_psi0.json", io::state_to_json(coherent_state(inst.alphas, inst.basis)).dump() + "\n");
}

void write_sweep_csv(const std::string& path, const SweepResult& sweep) {
    std::ostringstream os;
    os << "round,tau,steps,top_probability,norm_drift\n" << std::setprecision(17);
    for (std::size_t i = 0; i < sweep.history.size(); ++i) {
        const auto& r = sweep.history[i];
        const double top = r.top_occupations.empty() ? 0.0 : r.top_occupations.front().probability;
        os << i << ',' << r.tau << ',' << r.steps << ',' << top << ',' << r.norm_drift << '\n';
    }
    write_file(path, os.str());
}

void write_flow_trace(const std::string& path, const FlowPath& flow) {
    std::ostringstream os;
    write_flow_csv(os, flow);
    write_file(path, os.str());
}

int cmd_parse(const RunConfig& cfg, std::ostream& out) {
    emit(cfg, io::polynomial_to_json(parse(cfg.poly)), out);
    return kExitOk;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
    const Polynomial p = parse(cfg.poly);
    const auto cutoffs = parse_cutoffs(cfg.cutoffs, p.num_vars());
    emit(cfg, io::oracle_to_json(brute_force_min_square(p, LatticeBox::from_cutoffs(cutoffs))), out);
    return kExitOk;
}

int cmd_flow(const RunConfig& cfg, std::ostream& out) {
    const Polynomial p = parse(cfg.poly);
    const auto inst = make_instance(p, parse_cutoffs(cfg.cutoffs, p.num_vars()), instance_options(cfg));
    dump_operators(cfg, inst);
    const std::size_t tracked = std::min(cfg.tracked, inst.basis.dim());
    try {
        const FlowPath path = continue_flow(inst, tracked, cfg.tol);
        if (!cfg.trace.empty()) write_flow_trace(cfg.trace + "_flow.csv", path);
        emit(cfg, io::flow_to_json(path), out);
        return kExitOk;
    } catch (const GapCollapse& e) {
        if (!cfg.trace.empty() && !e.partial_path.states.empty()) write_flow_trace(cfg.trace + "_flow.csv", e.partial_path);
        emit(cfg, {{"error", e.what()}, {"accepted_steps", e.partial_path.step_log.size()}}, out);
    } catch (const AmbiguousMatch& e) {
        emit(cfg, {{"error", e.what()}, {"accepted_steps", e.partial_path.step_log.size()}}, out);
    } catch (const StepUnderflow& e) {
        emit(cfg, {{"error", e.what()}, {"accepted_steps", e.partial_path.step_log.size()}}, out);
    }
    return kExitInconclusive;
}

int cmd_evolve(const RunConfig& cfg, std::ostream& out) {
    const Polynomial p = parse(cfg.poly);
    const auto inst = make_instance(p, parse_cutoffs(cfg.cutoffs, p.num_vars()), instance_options(cfg));
    dump_operators(cfg, inst);
    if (!(cfg.tau > 0.0)) throw UsageError("--tau must be positive");
    const std::size_t steps =
        cfg.steps > 0 ? cfg.steps : sweep_steps(sweep_options(cfg), cfg.tau);

    EvolveOptions opts;
    std::ofstream probe_file;
    std::optional<ProbeCsvWriter> writer;
    if (!cfg.trace.empty()) {
        probe_file.open(cfg.trace + "_evolve.csv");
        if (!probe_file) throw std::runtime_error("cannot open trace file");
        writer.emplace(probe_file);
        opts.probe_every = std::max<std::size_t>(1, steps / 1000);
        opts.probe = [&](const ProbeSample& s) { (*writer)(s); };
    }
    emit(cfg, io::evolution_to_json(evolve(inst, cfg.tau, steps, opts)), out);
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    const Polynomial p = parse(cfg.poly);
    const auto inst = make_instance(p, parse_cutoffs(cfg.cutoffs, p.num_vars()), instance_options(cfg));
    dump_operators(cfg, inst);
    const SweepResult sweep = tau_sweep(inst, sweep_options(cfg));
    if (!cfg.trace.empty()) write_sweep_csv(cfg.trace + "_sweep.csv", sweep);
    emit(cfg, io::sweep_to_json(sweep, p), out);
    return sweep.identified ? kExitOk : kExitInconclusive;
}

int cmd_decide(const RunConfig& cfg, std::ostream& out) {
    const Polynomial p = parse(cfg.poly);
    const auto cutoffs = parse_cutoffs(cfg.cutoffs, p.num_vars());
    DecisionTrace trace;
    const Verdict v = decide(p, cutoffs, decision_config(cfg), cfg.trace.empty() ? nullptr : &trace);
    if (trace.flow) write_flow_trace(cfg.trace + "_flow.csv", *trace.flow);
    if (trace.sweep) write_sweep_csv(cfg.trace + "_sweep.csv", *trace.sweep);
    emit(cfg, io::verdict_to_json(v), out);
    return v.status == VerdictStatus::Inconclusive ? kExitInconclusive : kExitOk;
}

int cmd_study(const RunConfig& cfg, std::ostream& out) {
    const Polynomial p = parse(cfg.poly);
    std::vector<std::vector<unsigned>> ladder;
    if (cfg.ladder.empty()) throw UsageError("study needs --ladder, e.g. \"2;4;8\" or \"2,2;4,4\"");
    for (const auto& rung : split(cfg.ladder, ';')) ladder.push_back(parse_cutoffs(rung, p.num_vars()));
    const StudyReport report = convergence_study(p, ladder, decision_config(cfg));
    emit(cfg, io::study_to_json(report), out);
    for (const auto& r : report.rungs) {
        if (r.verdict.status == VerdictStatus::Inconclusive) return kExitInconclusive;
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Decide small Diophantine equations through spectral flow and adiabatic evolution"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--poly", cfg.poly, "Polynomial D, e.g. \"x1^2 + x2^2 - 25\"")->required();
        sub->add_option("--cutoffs", cfg.cutoffs, "Per-mode occupation cutoffs, comma separated (default 8)");
        sub->add_option("--alphas", cfg.alphas, "Coherent-state amplitudes, comma separated (default 1)");
        sub->add_option("--lambdas", cfg.lambdas, "H_I mode weights, comma separated (default sqrt of primes)");
        sub->add_option("--schedule", cfg.schedule, "Interpolation schedule")
            ->check(CLI::IsMember({"linear", "smooth"}));
        sub->add_option("--out", cfg.out, "Write JSON here instead of stdout");
        sub->add_option("--trace", cfg.trace, "Path prefix for CSV traces");
        sub->add_option("--dump", cfg.dump, "Path prefix for operator/state JSON dumps");
        sub->add_option("--tol", cfg.tol, "Continuation tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--tracked", cfg.tracked, "Number of tracked eigenstates M")->check(CLI::Range(2, 1 << 20));
        sub->add_option("--tau0", cfg.tau0, "First sweep duration")->check(CLI::PositiveNumber);
        sub->add_option("--growth", cfg.growth, "Sweep duration growth factor")->check(CLI::Range(1.0000001, 1e9));
        sub->add_option("--max-rounds", cfg.max_rounds, "Sweep rounds");
        sub->add_option("--steps-per-tau", cfg.steps_per_tau, "Time steps per unit duration")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* parse_cmd = app.add_subcommand("parse", "Print the canonical expanded polynomial");
    CLI::App* oracle_cmd = app.add_subcommand("oracle", "Exhaustive minimum of D^2 over the cutoff box");
    CLI::App* flow_cmd = app.add_subcommand("flow", "Spectral-flow continuation from H_I to H_P");
    CLI::App* evolve_cmd = app.add_subcommand("evolve", "One adiabatic Schrodinger evolution");
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Evolve for growing durations until a state exceeds 1/2");
    CLI::App* decide_cmd = app.add_subcommand("decide", "Combined verdict from oracle, flow and dynamics");
    CLI::App* study_cmd = app.add_subcommand("study", "Run decide over a ladder of cutoffs");
    for (CLI::App* sub : {parse_cmd, oracle_cmd, flow_cmd, evolve_cmd, sweep_cmd, decide_cmd, study_cmd}) {
        add_common(sub);
    }
    evolve_cmd->add_option("--tau", cfg.tau, "Evolution duration")->check(CLI::PositiveNumber);
    evolve_cmd->add_option("--steps", cfg.steps, "Time steps (default from --steps-per-tau)");
    study_cmd->add_option("--ladder", cfg.ladder, "Cutoff rungs separated by ';'")->required();

    std::vector<const char*> args;
    args.reserve(argv.size());
    for (const auto& a : argv) args.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(args.size()), args.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (parse_cmd->parsed()) return cmd_parse(cfg, out);
        if (oracle_cmd->parsed()) return cmd_oracle(cfg, out);
        if (flow_cmd->parsed()) return cmd_flow(cfg, out);
        if (evolve_cmd->parsed()) return cmd_evolve(cfg, out);
        if (sweep_cmd->parsed()) return cmd_sweep(cfg, out);
        if (decide_cmd->parsed()) return cmd_decide(cfg, out);
        if (study_cmd->parsed()) return cmd_study(cfg, out);
    } catch (const ParseError& e) {
        err << "syntax error: " << e.message() << " at position " << e.position() << "\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace h10::cli
