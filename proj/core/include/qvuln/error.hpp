// Copyright 2026 The qvuln Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qvuln {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. `line()` is 1-based; 0 when the error is not tied to a line.
class ParseError : public Error {
 public:
    ParseError(std::string file, std::size_t line, const std::string& what);

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

 private:
    std::string file_;
    std::size_t line_;
};

/// A domain invariant is violated (duplicate link id, nonpositive capacity, ...).
class ValidationError : public Error {
 public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation, e.g. zero effective capacity.
class DomainError : public Error {
 public:
    using Error::Error;
};

/// An OD pair has no route under the given scenario.
class InfeasibleError : public Error {
 public:
    InfeasibleError(int origin, int destination, const std::string& what);

    int origin() const noexcept { return origin_; }
    int destination() const noexcept { return destination_; }

 private:
    int origin_;
    int destination_;
};

/// An enumeration would exceed its configured size guard.
class GuardError : public Error {
 public:
    GuardError(const std::string& count, const std::string& what);

    /// Exact size of the refused enumeration, in decimal.
    const std::string& count() const noexcept { return count_; }

 private:
    std::string count_;
};

}  // namespace qvuln
