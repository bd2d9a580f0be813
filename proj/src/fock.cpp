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

#include "h10/fock.hpp"

#include <cmath>
#include <limits>

#include "h10/errors.hpp"

namespace h10 {

BasisMap::BasisMap(std::vector<unsigned> cutoffs) : cutoffs_(std::move(cutoffs)) {
    if (cutoffs_.empty()) throw DomainError("basis needs at least one mode");
    strides_.assign(cutoffs_.size(), 1);
    for (std::size_t i = cutoffs_.size(); i-- > 0;) {
        if (cutoffs_[i] == 0) throw DomainError("mode cutoffs must be positive");
        strides_[i] = dim_;
        const std::size_t side = std::size_t(cutoffs_[i]) + 1;
        if (dim_ > std::numeric_limits<std::size_t>::max() / side) throw DomainError("basis dimension overflows");
        dim_ *= side;
    }
}

std::size_t BasisMap::flat(std::span<const unsigned> index) const {
    if (index.size() != cutoffs_.size()) throw ArityError("multi-index has wrong number of modes");
    std::size_t j = 0;
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (index[i] > cutoffs_[i]) throw DomainError("occupation exceeds mode cutoff");
        j += index[i] * strides_[i];
    }
    return j;
}

MultiIndex BasisMap::unflat(std::size_t position) const {
    if (position >= dim_) throw DomainError("basis position out of range");
    MultiIndex n(cutoffs_.size());
    for (std::size_t i = 0; i < cutoffs_.size(); ++i) {
        n[i] = static_cast<unsigned>(position / strides_[i]);
        position %= strides_[i];
    }
    return n;
}

HermitianOperator::HermitianOperator(ComplexMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) throw DomainError("operator matrix must be square");
    const double defect = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (!(defect <= kTolerance)) {
        throw DomainError("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
    }
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& rhs) const {
    if (rhs.dim() != dim()) throw ArityError("operator dimensions differ");
    return HermitianOperator(entries_ - rhs.entries_);
}

Schedule Schedule::from_name(std::string_view name) {
    if (name == "linear") return Schedule(ScheduleKind::Linear);
    if (name == "smooth" || name == "smoothstep") return Schedule(ScheduleKind::Smoothstep);
    throw DomainError("unknown schedule '" + std::string(name) + "'");
}

std::string Schedule::name() const { return kind_ == ScheduleKind::Linear ? "linear" : "smooth"; }

double Schedule::value(double s) const {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    switch (kind_) {
        case ScheduleKind::Linear: return s;
        case ScheduleKind::Smoothstep: return s * s * (3.0 - 2.0 * s);
    }
    return s;
}

double Schedule::derivative(double s) const {
    switch (kind_) {
        case ScheduleKind::Linear: return 1.0;
        case ScheduleKind::Smoothstep: return 6.0 * s * (1.0 - s);
    }
    return 1.0;
}

ProblemInstance make_instance(Polynomial p, std::vector<unsigned> cutoffs, InstanceOptions options) {
    if (cutoffs.size() != p.num_vars()) {
        throw ArityError("got " + std::to_string(cutoffs.size()) + " cutoffs for " + std::to_string(p.num_vars()) +
                         " variables");
    }
    BasisMap basis(std::move(cutoffs));
    const std::size_t k = basis.modes();

    std::vector<double> lambdas = options.lambdas.empty() ? choose_lambdas(k) : std::move(options.lambdas);
    if (lambdas.size() != k) throw ArityError("lambda count does not match variable count");
    for (double l : lambdas) {
        if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("lambdas must be positive and finite");
    }

    std::vector<Complex> alphas = options.alphas.empty() ? std::vector<Complex>(k, Complex(1.0, 0.0))
                                                         : std::move(options.alphas);
    if (alphas.size() != k) throw ArityError("alpha count does not match variable count");
    for (const Complex& a : alphas) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw DomainError("alphas must be finite");
    }

    // Precision contract: every D(n)^2 must be an exact double.
    for (std::size_t j = 0; j < basis.dim(); ++j) {
        const BigInt v = evaluate(p, basis.unflat(j));
        to_exact_double(v * v);
    }

    return ProblemInstance{std::move(p), std::move(basis), std::move(lambdas), std::move(alphas), options.schedule};
}

ComplexMatrix annihilation_matrix(unsigned cutoff) {
    if (cutoff == 0) throw DomainError("cutoff must be at least 1");
    ComplexMatrix a = ComplexMatrix::Zero(cutoff + 1, cutoff + 1);
    for (unsigned n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

ComplexMatrix creation_matrix(unsigned cutoff) { return annihilation_matrix(cutoff).adjoint(); }

HermitianOperator build_hp(const Polynomial& p, const BasisMap& basis) {
    if (p.num_vars() != basis.modes()) throw ArityError("polynomial and basis disagree on the number of modes");
    ComplexMatrix h = ComplexMatrix::Zero(basis.dim(), basis.dim());
    for (std::size_t j = 0; j < basis.dim(); ++j) {
        const BigInt v = evaluate(p, basis.unflat(j));
        h(j, j) = to_exact_double(v * v);
    }
    return HermitianOperator(std::move(h));
}

HermitianOperator build_hi(const ProblemInstance& instance) {
    const BasisMap& basis = instance.basis;
    const std::size_t dim = basis.dim();
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
        const MultiIndex n = basis.unflat(j);
        for (std::size_t i = 0; i < basis.modes(); ++i) {
            const double lambda = instance.lambdas[i];
            const Complex alpha = instance.alphas[i];
            // lambda (n - alpha a^dagger - conj(alpha) a + |alpha|^2)
            h(j, j) += lambda * (static_cast<double>(n[i]) + std::norm(alpha));
            if (n[i] < basis.cutoffs()[i]) {
                const std::size_t up = j + basis.stride(i);
                const double amp = std::sqrt(static_cast<double>(n[i]) + 1.0);
                h(up, j) += -lambda * alpha * amp;
                h(j, up) += -lambda * std::conj(alpha) * amp;
            }
        }
    }
    return HermitianOperator(std::move(h));
}

WaveFunction coherent_state(std::span<const Complex> alphas, const BasisMap& basis,
                            std::vector<std::string>* warnings) {
    if (alphas.size() != basis.modes()) throw ArityError("alpha count does not match basis modes");

    std::vector<ComplexVector> factors;
    factors.reserve(alphas.size());
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const unsigned d = basis.cutoffs()[i];
        const Complex alpha = alphas[i];
        ComplexVector v(d + 1);
        // e^{-|a|^2/2} a^n / sqrt(n!) by recurrence c_{n} = c_{n-1} a / sqrt(n)
        v(0) = std::exp(-0.5 * std::norm(alpha));
        for (unsigned n = 1; n <= d; ++n) v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
        const double kept = v.squaredNorm();
        const double tail = 1.0 - kept;
        if (tail > 1e-6 && warnings != nullptr) {
            warnings->push_back("coherent state of mode " + std::to_string(i + 1) + " loses " + std::to_string(tail) +
                                " of its probability to truncation at cutoff " + std::to_string(d) +
                                "; consider a larger cutoff");
        }
        v /= std::sqrt(kept);
        factors.push_back(std::move(v));
    }

    ComplexVector psi(basis.dim());
    for (std::size_t j = 0; j < basis.dim(); ++j) {
        const MultiIndex n = basis.unflat(j);
        Complex amp(1.0, 0.0);
        for (std::size_t i = 0; i < n.size(); ++i) amp *= factors[i](n[i]);
        psi(j) = amp;
    }
    psi.normalize();
    return WaveFunction{std::move(psi), basis.cutoffs()};
}

HermitianOperator interpolate(const HermitianOperator& hi, const HermitianOperator& hp, const Schedule& schedule,
                              double s) {
    if (!(s >= 0.0 && s <= 1.0)) throw DomainError("interpolation parameter must lie in [0,1]");
    if (hi.dim() != hp.dim()) throw ArityError("operator dimensions differ");
    const double f = schedule.value(s);
    if (f == 0.0) return hi;
    if (f == 1.0) return hp;
    return HermitianOperator(hi.matrix() + f * (hp.matrix() - hi.matrix()));
}

std::vector<double> choose_lambdas(std::size_t modes) {
    if (modes == 0) throw DomainError("need at least one mode");
    std::vector<double> out;
    out.reserve(modes);
    for (unsigned candidate = 2; out.size() < modes; ++candidate) {
        bool prime = true;
        for (unsigned d = 2; d * d <= candidate; ++d) {
            if (candidate % d == 0) {
                prime = false;
                break;
            }
        }
        if (prime) out.push_back(std::sqrt(static_cast<double>(candidate)));
    }
    return out;
}

}  // namespace h10
