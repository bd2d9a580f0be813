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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace h10 {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Polynomial text did not match the grammar. `position()` is a 0-based
/// character offset into the input.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position)
        : Error(message + " at position " + std::to_string(position)),
          message_(message),
          position_(position) {}

    const std::string& message() const noexcept { return message_; }
    std::size_t position() const noexcept { return position_; }

private:
    std::string message_;
    std::size_t position_;
};

/// Point or box length differs from the polynomial's variable count.
class ArityError : public Error {
public:
    using Error::Error;
};

/// Exhaustive enumeration would visit more points than allowed.
class EnumerationCapError : public Error {
public:
    using Error::Error;
};

/// An exact integer cannot be represented exactly as a double (|v| > 2^53).
class PrecisionError : public Error {
public:
    using Error::Error;
};

/// Invalid argument to a numerical routine (bad s, non-positive lambda, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Dense eigensolver failed to converge.
class EigensolverError : public Error {
public:
    using Error::Error;
};

/// Time stepping produced NaN or infinite amplitudes.
class NonFiniteAmplitude : public Error {
public:
    using Error::Error;
};

}  // namespace h10
