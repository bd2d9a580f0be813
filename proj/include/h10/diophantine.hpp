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

// Exact multivariate integer polynomials D(x1, ..., xK).
//
// Variables range over the NON-NEGATIVE integers: they stand for Fock
// occupation numbers, so n = 0 is a legal value. To ask the classical
// question over the positive integers, substitute xi -> xi + 1 before
// parsing, e.g. "(x1+1)^2 + (x2+1)^2 - 25".

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace h10 {

using BigInt = mpz_class;
using Exponents = std::vector<unsigned>;
/// A lattice point; one non-negative coordinate per variable.
using MultiIndex = std::vector<unsigned>;

struct Monomial {
    BigInt coefficient;
    Exponents exponents;

    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Canonical collected polynomial. Monomials are unique, nonzero, and kept
/// in graded-lexicographic order (highest total degree first, ties broken by
/// descending exponent tuples).
class Polynomial {
public:
    /// Collects like terms and drops zeros. Throws ArityError if an exponent
    /// tuple has the wrong length, DomainError if num_vars == 0.
    Polynomial(std::size_t num_vars, std::vector<Monomial> monomials);

    static Polynomial constant(std::size_t num_vars, const BigInt& value);
    /// x_{index+1} in a K-variable ring (index is 0-based).
    static Polynomial variable(std::size_t num_vars, std::size_t index);

    std::size_t num_vars() const noexcept { return num_vars_; }
    const std::vector<Monomial>& monomials() const noexcept { return monomials_; }
    bool is_zero() const noexcept { return monomials_.empty(); }
    unsigned total_degree() const noexcept;

    /// Same polynomial in a ring with more variables.
    Polynomial widened(std::size_t num_vars) const;

    Polynomial operator+(const Polynomial& rhs) const;
    Polynomial operator-(const Polynomial& rhs) const;
    Polynomial operator*(const Polynomial& rhs) const;
    Polynomial operator-() const;
    Polynomial pow(unsigned exponent) const;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    std::size_t num_vars_;
    std::vector<Monomial> monomials_;
};

/// Parses the grammar
///
///   expr   := term (('+'|'-') term)* ;
///   term   := factor ('*' factor)* ;
///   factor := base ('^' nat)? ;
///   base   := nat | var | '(' expr ')' | '-' factor ;
///   var    := 'x' nat  (no leading zero, index >= 1) ;
///
/// and returns the expanded canonical form. The variable count is the largest
/// index mentioned (at least 1).
Polynomial parse(std::string_view text);

/// Canonical text, e.g. "x1^2 + 2*x1*x2 + x2^2 - 3". parse(to_string(p)) == p.
std::string to_string(const Polynomial& p);

/// Exact value D(point).
BigInt evaluate(const Polynomial& p, std::span<const unsigned> point);

/// Inclusive box lower <= n <= upper, componentwise.
struct LatticeBox {
    MultiIndex lower;
    MultiIndex upper;

    /// Box [0, upper].
    static LatticeBox from_cutoffs(std::span<const unsigned> upper);

    std::size_t dims() const noexcept { return upper.size(); }
    /// Number of lattice points; saturates at UINT64_MAX.
    std::uint64_t volume() const noexcept;
    /// True if some coordinate sits on the upper face.
    bool on_upper_face(std::span<const unsigned> point) const;
};

struct MinSquareResult {
    BigInt min_value;
    /// Every minimizer, lexicographic order.
    std::vector<MultiIndex> witnesses;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 50'000'000;

/// Exhaustive minimum of D(n)^2 over the box.
MinSquareResult brute_force_min_square(const Polynomial& p, const LatticeBox& box,
                                       std::uint64_t cap = kDefaultEnumerationCap);

/// Exact conversion to double; PrecisionError if |value| > 2^53.
double to_exact_double(const BigInt& value);

}  // namespace h10
