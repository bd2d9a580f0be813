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

#include "h10/diophantine.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "h10/errors.hpp"

namespace h10 {

namespace {

constexpr std::size_t kMaxVariableIndex = 4096;
constexpr unsigned kMaxExponent = 4096;

unsigned degree_of(const Exponents& e) {
    return std::accumulate(e.begin(), e.end(), 0u);
}

// Graded lexicographic, descending.
bool grlex_before(const Exponents& a, const Exponents& b) {
    const unsigned da = degree_of(a);
    const unsigned db = degree_of(b);
    if (da != db) return da > db;
    return b < a;
}

struct GrlexLess {
    bool operator()(const Exponents& a, const Exponents& b) const { return grlex_before(a, b); }
};

using TermMap = std::map<Exponents, BigInt, GrlexLess>;

std::vector<Monomial> from_map(TermMap&& terms) {
    std::vector<Monomial> out;
    out.reserve(terms.size());
    for (auto& [exps, coeff] : terms) {
        if (coeff != 0) out.push_back({std::move(coeff), exps});
    }
    return out;
}

}  // namespace

Polynomial::Polynomial(std::size_t num_vars, std::vector<Monomial> monomials) : num_vars_(num_vars) {
    if (num_vars == 0) throw DomainError("polynomial needs at least one variable");
    TermMap terms;
    for (auto& m : monomials) {
        if (m.exponents.size() != num_vars) {
            throw ArityError("monomial has " + std::to_string(m.exponents.size()) +
                             " exponents, expected " + std::to_string(num_vars));
        }
        terms[m.exponents] += m.coefficient;
    }
    monomials_ = from_map(std::move(terms));
}

Polynomial Polynomial::constant(std::size_t num_vars, const BigInt& value) {
    return Polynomial(num_vars, {{value, Exponents(num_vars, 0)}});
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t index) {
    if (index >= num_vars) throw ArityError("variable index out of range");
    Exponents e(num_vars, 0);
    e[index] = 1;
    return Polynomial(num_vars, {{BigInt(1), std::move(e)}});
}

unsigned Polynomial::total_degree() const noexcept {
    unsigned d = 0;
    for (const auto& m : monomials_) d = std::max(d, degree_of(m.exponents));
    return d;
}

Polynomial Polynomial::widened(std::size_t num_vars) const {
    if (num_vars < num_vars_) throw ArityError("cannot narrow a polynomial");
    std::vector<Monomial> ms = monomials_;
    for (auto& m : ms) m.exponents.resize(num_vars, 0);
    return Polynomial(num_vars, std::move(ms));
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
    const std::size_t k = std::max(num_vars_, rhs.num_vars_);
    std::vector<Monomial> ms = widened(k).monomials_;
    const auto r = rhs.widened(k).monomials_;
    ms.insert(ms.end(), r.begin(), r.end());
    return Polynomial(k, std::move(ms));
}

Polynomial Polynomial::operator-() const {
    std::vector<Monomial> ms = monomials_;
    for (auto& m : ms) m.coefficient = -m.coefficient;
    return Polynomial(num_vars_, std::move(ms));
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const { return *this + (-rhs); }

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
    const std::size_t k = std::max(num_vars_, rhs.num_vars_);
    const Polynomial a = widened(k);
    const Polynomial b = rhs.widened(k);
    TermMap terms;
    for (const auto& x : a.monomials_) {
        for (const auto& y : b.monomials_) {
            Exponents e(k);
            for (std::size_t i = 0; i < k; ++i) e[i] = x.exponents[i] + y.exponents[i];
            terms[e] += x.coefficient * y.coefficient;
        }
    }
    Polynomial out(k, {});
    out.monomials_ = from_map(std::move(terms));
    return out;
}

Polynomial Polynomial::pow(unsigned exponent) const {
    Polynomial result = constant(num_vars_, 1);
    Polynomial base = *this;
    while (exponent > 0) {
        if (exponent & 1u) result = result * base;
        exponent >>= 1u;
        if (exponent > 0) base = base * base;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Polynomial run() {
        skip_ws();
        if (at_end()) fail("empty expression");
        Polynomial p = expr();
        skip_ws();
        if (!at_end()) fail(std::string("unexpected character '") + peek() + "'");
        return p.widened(std::max<std::size_t>(max_index_, p.num_vars()));
    }

private:
    Polynomial expr() {
        Polynomial acc = term();
        for (;;) {
            skip_ws();
            if (at_end()) break;
            const char c = peek();
            if (c != '+' && c != '-') break;
            ++pos_;
            Polynomial rhs = term();
            acc = (c == '+') ? acc + rhs : acc - rhs;
        }
        return acc;
    }

    Polynomial term() {
        Polynomial acc = factor();
        for (;;) {
            skip_ws();
            if (at_end() || peek() != '*') break;
            ++pos_;
            acc = acc * factor();
        }
        return acc;
    }

    Polynomial factor() {
        Polynomial b = base();
        skip_ws();
        if (!at_end() && peek() == '^') {
            ++pos_;
            skip_ws();
            if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) {
                fail("exponent must be a non-negative integer literal");
            }
            const std::size_t start = pos_;
            const BigInt e = nat();
            if (e > kMaxExponent) fail_at("exponent too large", start);
            b = b.pow(static_cast<unsigned>(e.get_ui()));
        }
        return b;
    }

    Polynomial base() {
        skip_ws();
        if (at_end()) fail("unexpected end of input");
        const char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) return Polynomial::constant(1, nat());
        if (c == 'x') return var();
        if (c == '(') {
            const std::size_t open = pos_;
            ++pos_;
            Polynomial inner = expr();
            skip_ws();
            if (at_end() || peek() != ')') fail_at("unbalanced parenthesis", open);
            ++pos_;
            return inner;
        }
        if (c == '-') {
            ++pos_;
            return -factor();
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    Polynomial var() {
        ++pos_;  // 'x'
        const std::size_t start = pos_;
        if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) {
            fail("variable name must be 'x' followed by an index");
        }
        std::size_t end = pos_;
        while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
        const std::string_view digits = text_.substr(start, end - start);
        if (digits == "0" || std::all_of(digits.begin(), digits.end(), [](char d) { return d == '0'; })) {
            fail_at("variable indices start at 1", start);
        }
        if (digits.front() == '0') fail_at("leading zero in variable index", start);
        if (digits.size() > 6) fail_at("variable index too large", start);
        const std::size_t index = std::stoul(std::string(digits));
        if (index > kMaxVariableIndex) fail_at("variable index too large", start);
        pos_ = end;
        max_index_ = std::max(max_index_, index);
        return Polynomial::variable(index, index - 1);
    }

    BigInt nat() {
        const std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        return BigInt(std::string(text_.substr(start, pos_ - start)), 10);
    }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
    [[noreturn]] void fail_at(const std::string& msg, std::size_t where) const {
        throw ParseError(msg, where);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t max_index_ = 1;
};

}  // namespace

Polynomial parse(std::string_view text) { return Parser(text).run(); }

std::string to_string(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& m : p.monomials()) {
        const bool negative = m.coefficient < 0;
        const BigInt magnitude = abs(m.coefficient);
        if (first) {
            if (negative) out << '-';
        } else {
            out << (negative ? " - " : " + ");
        }
        first = false;

        std::vector<std::string> factors;
        const bool constant_term = degree_of(m.exponents) == 0;
        if (magnitude != 1 || constant_term) factors.push_back(magnitude.get_str());
        for (std::size_t i = 0; i < m.exponents.size(); ++i) {
            const unsigned e = m.exponents[i];
            if (e == 0) continue;
            std::string f = "x" + std::to_string(i + 1);
            if (e > 1) f += "^" + std::to_string(e);
            factors.push_back(std::move(f));
        }
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) out << '*';
            out << factors[i];
        }
    }
    return out.str();
}

BigInt evaluate(const Polynomial& p, std::span<const unsigned> point) {
    if (point.size() != p.num_vars()) {
        throw ArityError("point has " + std::to_string(point.size()) + " coordinates, polynomial has " +
                         std::to_string(p.num_vars()) + " variables");
    }
    BigInt total = 0;
    BigInt power;
    for (const auto& m : p.monomials()) {
        BigInt term = m.coefficient;
        for (std::size_t i = 0; i < point.size(); ++i) {
            if (m.exponents[i] == 0) continue;
            mpz_ui_pow_ui(power.get_mpz_t(), point[i], m.exponents[i]);
            term *= power;
        }
        total += term;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Lattice enumeration

LatticeBox LatticeBox::from_cutoffs(std::span<const unsigned> upper) {
    return LatticeBox{MultiIndex(upper.size(), 0), MultiIndex(upper.begin(), upper.end())};
}

std::uint64_t LatticeBox::volume() const noexcept {
    std::uint64_t v = 1;
    for (std::size_t i = 0; i < upper.size(); ++i) {
        const std::uint64_t side = std::uint64_t(upper[i]) - lower[i] + 1;
        if (v > std::numeric_limits<std::uint64_t>::max() / side) return std::numeric_limits<std::uint64_t>::max();
        v *= side;
    }
    return v;
}

bool LatticeBox::on_upper_face(std::span<const unsigned> point) const {
    for (std::size_t i = 0; i < point.size() && i < upper.size(); ++i) {
        if (point[i] == upper[i]) return true;
    }
    return false;
}

MinSquareResult brute_force_min_square(const Polynomial& p, const LatticeBox& box, std::uint64_t cap) {
    if (box.lower.size() != p.num_vars() || box.upper.size() != p.num_vars()) {
        throw ArityError("box has " + std::to_string(box.upper.size()) + " dimensions, polynomial has " +
                         std::to_string(p.num_vars()) + " variables");
    }
    for (std::size_t i = 0; i < box.dims(); ++i) {
        if (box.lower[i] > box.upper[i]) throw DomainError("box lower bound exceeds upper bound");
    }
    const std::uint64_t volume = box.volume();
    if (volume > cap) {
        throw EnumerationCapError("box volume " + std::to_string(volume) + " exceeds enumeration cap " +
                                  std::to_string(cap));
    }

    MinSquareResult result;
    bool have_min = false;
    MultiIndex point = box.lower;
    BigInt value;
    // Odometer over the box, last coordinate fastest: lexicographic order.
    for (;;) {
        value = evaluate(p, point);
        value *= value;
        if (!have_min || value < result.min_value) {
            result.min_value = value;
            result.witnesses.clear();
            result.witnesses.push_back(point);
            have_min = true;
        } else if (value == result.min_value) {
            result.witnesses.push_back(point);
        }

        std::size_t i = point.size();
        while (i > 0) {
            --i;
            if (point[i] < box.upper[i]) {
                ++point[i];
                break;
            }
            point[i] = box.lower[i];
            if (i == 0) return result;
        }
    }
}

double to_exact_double(const BigInt& value) {
    static const BigInt limit = BigInt(1) << 53;
    if (abs(value) > limit) {
        throw PrecisionError("value " + value.get_str() + " exceeds 2^53 and cannot be represented exactly");
    }
    return value.get_d();
}

}  // namespace h10
