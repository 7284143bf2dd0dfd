/**************************************************************************
 * errors.hpp
 *
 * Copyright 2026 The pbec authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 **************************************************************************/

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pbec {

/// Parameters or arguments outside a function's contract.
class ParamError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Stored data is inconsistent or cannot be recovered.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Too few surviving nodes to rebuild anything.
class UnrecoverableError : public DataError {
public:
    using DataError::DataError;
};

/// Storage backend failure (read/write/open).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A linear system had no unique solution. Carries the rank found.
class SingularSystem : public std::runtime_error {
public:
    SingularSystem(const std::string& what, std::size_t rank_found)
        : std::runtime_error(what + " (rank " + std::to_string(rank_found) + ")"),
          rank_(rank_found) {}

    std::size_t rank() const { return rank_; }

private:
    std::size_t rank_;
};

/// Violation of an internal invariant; indicates a construction bug, not bad input.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace pbec
