// Copyright 2026 The orbitlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace orbitlab {

/// Root of the library's exception hierarchy.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside an operation's domain (zero where nonzero is required,
/// singular curve, element not S-integral, ...).
class domain_error : public error {
public:
    using error::error;
};

/// A configured resource cap (degree, enumeration size) would be exceeded.
class size_error : public error {
public:
    using error::error;
};

/// Characteristic divides a degree that must be invertible.
class unsupported_error : public error {
public:
    using error::error;
};

/// Integer factorization stopped at a composite it could not split.
class incomplete_factorization : public error {
public:
    explicit incomplete_factorization(std::string survivor)
        : error("incomplete factorization: composite survivor " + survivor),
          survivor_(std::move(survivor)) {}
    const std::string& survivor() const noexcept { return survivor_; }

private:
    std::string survivor_;
};

/// A result depends on an orbit entry whose factorization failed.
class indeterminate_error : public error {
public:
    indeterminate_error(int blocking_index, const std::string& why)
        : error("indeterminate: factorization failed at n = " + std::to_string(blocking_index) +
                " (" + why + ")"),
          blocking_index_(blocking_index) {}
    int blocking_index() const noexcept { return blocking_index_; }

private:
    int blocking_index_;
};

}  // namespace orbitlab
