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

#include <Eigen/Eigenvalues>

#include "h10/errors.hpp"
#include "h10/fock.hpp"

namespace h10::detail {

/// Dense Hermitian eigensolver. Matrices with an identically zero imaginary
/// part (real alphas) go through the real symmetric solver.
class HermitianEigensolver {
public:
    void compute(const ComplexMatrix& h) {
        if (h.imag().isZero(0.0)) {
            real_.compute(h.real());
            if (real_.info() != Eigen::Success) throw EigensolverError("symmetric eigensolver did not converge");
            values_ = real_.eigenvalues();
            vectors_ = real_.eigenvectors().cast<Complex>();
        } else {
            complex_.compute(h);
            if (complex_.info() != Eigen::Success) throw EigensolverError("Hermitian eigensolver did not converge");
            values_ = complex_.eigenvalues();
            vectors_ = complex_.eigenvectors();
        }
    }

    const RealVector& eigenvalues() const { return values_; }
    const ComplexMatrix& eigenvectors() const { return vectors_; }

private:
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> real_;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> complex_;
    RealVector values_;
    ComplexMatrix vectors_;
};

}  // namespace h10::detail
