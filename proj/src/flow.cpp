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

#include "h10/flow.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "spectral.hpp"

namespace h10 {

namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

double smallest_gap(const RealVector& values) {
    if (values.size() < 2) return std::numeric_limits<double>::infinity();
    std::vector<double> sorted(values.data(), values.data() + values.size());
    std::sort(sorted.begin(), sorted.end());
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < sorted.size(); ++i) gap = std::min(gap, sorted[i] - sorted[i - 1]);
    return gap;
}

}  // namespace

GapCollapse::GapCollapse(double s, std::size_t q, std::size_t l, double gap)
    : Error("gap collapse at s=" + format_double(s) + " between tracked states " + std::to_string(q) + " and " +
            std::to_string(l) + " (gap " + format_double(gap) + ")"),
      s_(s),
      q_(q),
      l_(l),
      gap_(gap) {}

AmbiguousMatch::AmbiguousMatch(std::size_t column, double best_overlap)
    : Error("eigenvector " + std::to_string(column) + " has no clear continuation (best overlap " +
            format_double(best_overlap) + ")"),
      column_(column),
      best_overlap_(best_overlap) {}

StepUnderflow::StepUnderflow(double s, double eps)
    : Error("continuation step size " + format_double(eps) + " underflowed at s=" + format_double(s)) {}

FlowState eigensolve(const HermitianOperator& h, std::size_t tracked, double s) {
    if (tracked == 0 || tracked > h.dim()) {
        throw DomainError("cannot track " + std::to_string(tracked) + " states of a " + std::to_string(h.dim()) +
                          "-dimensional operator");
    }
    detail::HermitianEigensolver solver;
    solver.compute(h.matrix());
    const auto m = static_cast<Eigen::Index>(tracked);
    FlowState state;
    state.s = s;
    state.eigenvalues = solver.eigenvalues().head(m);
    state.eigenvectors = solver.eigenvectors().leftCols(m);
    state.gap_floor = smallest_gap(state.eigenvalues);
    return state;
}

FlowDerivatives flow_derivatives(const FlowState& state, const HermitianOperator& w, double fprime,
                                 double gap_eps) {
    const ComplexMatrix& v = state.eigenvectors;
    const Eigen::Index m = v.cols();
    if (static_cast<std::size_t>(v.rows()) != w.dim()) throw ArityError("state and operator dimensions differ");

    for (Eigen::Index q = 0; q < m; ++q) {
        for (Eigen::Index l = q + 1; l < m; ++l) {
            const double gap = std::abs(state.eigenvalues(q) - state.eigenvalues(l));
            if (gap <= gap_eps) {
                throw GapCollapse(state.s, static_cast<std::size_t>(q), static_cast<std::size_t>(l), gap);
            }
        }
    }

    // Matrix elements <E_l|W|E_q> in the tracked basis.
    const ComplexMatrix wq = v.adjoint() * w.matrix() * v;

    FlowDerivatives out;
    out.d_eigenvalues.resize(m);
    out.coefficients = ComplexMatrix::Zero(m, m);
    for (Eigen::Index q = 0; q < m; ++q) {
        out.d_eigenvalues(q) = fprime * wq(q, q).real();
        for (Eigen::Index l = 0; l < m; ++l) {
            if (l == q) continue;
            out.coefficients(l, q) = fprime * wq(l, q) / (state.eigenvalues(q) - state.eigenvalues(l));
        }
    }
    out.d_eigenvectors = v * out.coefficients;
    return out;
}

FlowState gauge_align(const ComplexMatrix& reference, const FlowState& candidate, bool fix_phase) {
    const Eigen::Index m = reference.cols();
    const Eigen::Index available = candidate.eigenvectors.cols();
    if (reference.rows() != candidate.eigenvectors.rows() || available < m) {
        throw ArityError("reference and candidate eigenvector shapes are incompatible");
    }

    const ComplexMatrix overlaps = reference.adjoint() * candidate.eigenvectors;
    std::vector<Eigen::Index> assignment(static_cast<std::size_t>(m));
    std::vector<bool> taken(static_cast<std::size_t>(available), false);
    for (Eigen::Index q = 0; q < m; ++q) {
        Eigen::Index best = 0;
        const double best_abs = overlaps.row(q).cwiseAbs().maxCoeff(&best);
        if (best_abs < 0.5 || taken[static_cast<std::size_t>(best)]) {
            throw AmbiguousMatch(static_cast<std::size_t>(q), best_abs);
        }
        taken[static_cast<std::size_t>(best)] = true;
        assignment[static_cast<std::size_t>(q)] = best;
    }

    FlowState out;
    out.s = candidate.s;
    out.eigenvalues.resize(m);
    out.eigenvectors.resize(reference.rows(), m);
    for (Eigen::Index q = 0; q < m; ++q) {
        const Eigen::Index c = assignment[static_cast<std::size_t>(q)];
        out.eigenvalues(q) = candidate.eigenvalues(c);
        out.eigenvectors.col(q) = candidate.eigenvectors.col(c);
        if (fix_phase) {
            const Complex o = overlaps(q, c);
            out.eigenvectors.col(q) *= std::conj(o) / std::abs(o);
        }
    }
    out.gap_floor = smallest_gap(out.eigenvalues);
    return out;
}

namespace {

// Whether tracked states q and l meet at s = 1 (H_P is diagonal, so its
// lowest eigenvalues are its sorted diagonal).
bool degenerate_at_endpoint(const HermitianOperator& hp, std::size_t q, std::size_t l, double gap_eps) {
    std::vector<double> diag(hp.dim());
    for (std::size_t j = 0; j < hp.dim(); ++j) diag[j] = hp(j, j).real();
    std::sort(diag.begin(), diag.end());
    const std::size_t lo = std::min(q, l);
    const std::size_t hi = std::max(q, l);
    if (hi >= diag.size()) return false;
    return diag[hi] - diag[lo] <= gap_eps;
}

}  // namespace

FlowPath continue_flow(const ProblemInstance& instance, std::size_t tracked, double tol, const FlowOptions& options) {
    if (tracked < 2) throw DomainError("continuation needs at least two tracked states");
    if (!(tol > 0.0)) throw DomainError("continuation tolerance must be positive");

    const HermitianOperator hi = build_hi(instance);
    const HermitianOperator hp = build_hp(instance.polynomial, instance.basis);
    const HermitianOperator w = hp - hi;
    if (tracked > hi.dim()) throw DomainError("more tracked states than basis dimension");

    const double overlap_floor = std::max(options.min_overlap, 1.0 - tol);

    FlowPath path;
    path.states.push_back(eigensolve(hi, tracked, 0.0));

    // Eigensolve alone carries the flow to s = 1 when the endpoint spectrum is
    // degenerate and the flow equations are singular there.
    auto finish_by_corrector = [&](const std::string& why) {
        const FlowState& current = path.states.back();
        FlowState candidate = eigensolve(hp, tracked, 1.0);
        FlowStepRecord rec;
        rec.eps = 1.0 - current.s;
        rec.truncation = tracked;
        rec.corrector_only = true;
        try {
            candidate = gauge_align(current.eigenvectors, candidate, options.fix_phase);
            const ComplexMatrix ov = current.eigenvectors.adjoint() * candidate.eigenvectors;
            rec.min_aligned_overlap = ov.diagonal().real().minCoeff();
            rec.phase_residual = ov.diagonal().imag().cwiseAbs().maxCoeff();
        } catch (const AmbiguousMatch&) {
            path.diagnostics.push_back("endpoint eigenvectors not aligned (degenerate H_P subspace)");
            rec.min_aligned_overlap = 0.0;
        }
        path.diagnostics.push_back(why);
        path.step_log.push_back(rec);
        path.states.push_back(std::move(candidate));
    };

    double eps = std::min(options.initial_step, options.max_step);
    int consecutive = 0;

    while (path.states.back().s < 1.0) {
        const FlowState& current = path.states.back();
        const double remaining = 1.0 - current.s;
        const double h = std::min(eps, remaining);
        const double s_next = (h >= remaining) ? 1.0 : current.s + h;
        const double fprime = instance.schedule.derivative(current.s);

        FlowDerivatives deriv;
        try {
            deriv = flow_derivatives(current, w, fprime, options.gap_eps);
        } catch (GapCollapse& gc) {
            if (degenerate_at_endpoint(hp, gc.q(), gc.l(), options.gap_eps)) {
                finish_by_corrector("endpoint degeneracy: " + std::string(gc.what()) +
                                    "; final segment covered by eigensolve");
                break;
            }
            gc.partial_path = path;
            throw;
        }

        const RealVector predicted_values = current.eigenvalues + h * deriv.d_eigenvalues;
        const ComplexMatrix predicted_vectors = current.eigenvectors + h * deriv.d_eigenvectors;

        auto reject = [&](auto&& error) {
            consecutive = 0;
            eps *= options.shrink;
            if (eps < options.min_step) {
                error.partial_path = path;
                throw error;
            }
        };

        FlowState corrected = eigensolve(interpolate(hi, hp, instance.schedule, s_next), tracked, s_next);
        FlowState aligned;
        try {
            aligned = gauge_align(current.eigenvectors, corrected, options.fix_phase);
        } catch (AmbiguousMatch& am) {
            if (eps * options.shrink < options.min_step && s_next == 1.0) {
                finish_by_corrector("eigenvector matching failed next to s=1; final segment covered by eigensolve");
                break;
            }
            reject(am);
            continue;
        }

        const double discrepancy = (predicted_values - aligned.eigenvalues).cwiseAbs().maxCoeff();
        double min_overlap = 1.0;
        for (Eigen::Index q = 0; q < predicted_vectors.cols(); ++q) {
            const auto p = predicted_vectors.col(q);
            min_overlap = std::min(min_overlap, std::abs(p.dot(aligned.eigenvectors.col(q))) / p.norm());
        }

        if (discrepancy > tol || min_overlap < overlap_floor) {
            reject(StepUnderflow(current.s, eps * options.shrink));
            continue;
        }

        FlowStepRecord rec;
        rec.eps = h;
        rec.truncation = tracked;
        rec.remainder = discrepancy;
        rec.min_overlap = min_overlap;
        rec.gauge_residual = deriv.coefficients.diagonal().cwiseAbs().maxCoeff();
        const ComplexMatrix ov = current.eigenvectors.adjoint() * aligned.eigenvectors;
        rec.phase_residual = options.fix_phase ? ov.diagonal().imag().cwiseAbs().maxCoeff() : 0.0;
        rec.min_aligned_overlap = options.fix_phase ? ov.diagonal().real().minCoeff() : ov.diagonal().cwiseAbs().minCoeff();

        path.step_log.push_back(rec);
        path.states.push_back(std::move(aligned));

        if (++consecutive >= 2) {
            eps = std::min(eps * options.grow, options.max_step);
            consecutive = 0;
        }
    }
    return path;
}

SnapResult snap_verdict(double e0_final) {
    if (!(e0_final >= -0.5)) throw DomainError("ground energy below -0.5 cannot come from a non-negative spectrum");
    const double rounded = std::max(0.0, std::round(e0_final));
    SnapResult out;
    out.snapped = static_cast<unsigned long>(rounded);
    out.confident = std::abs(e0_final - rounded) < 0.3;
    return out;
}

void write_flow_csv(std::ostream& out, const FlowPath& path) {
    const std::size_t m = path.states.empty() ? 0 : path.states.front().tracked();
    out << "s";
    for (std::size_t q = 0; q < m; ++q) out << ",E_" << q;
    out << ",gap_floor,eps,N\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < path.states.size(); ++i) {
        const FlowState& st = path.states[i];
        out << st.s;
        for (Eigen::Index q = 0; q < st.eigenvalues.size(); ++q) out << ',' << st.eigenvalues(q);
        const double eps = i == 0 ? 0.0 : path.step_log[i - 1].eps;
        out << ',' << st.gap_floor << ',' << eps << ',' << m << '\n';
    }
}

}  // namespace h10
