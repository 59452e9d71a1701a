// Copyright 2026 The ultrawalk Authors
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
#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ultrawalk {

/// Invalid parameters: bad ε ordering, undersampled quadrature grid, a decay
/// window that reaches the plateau, and so on.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation (site index out
/// of range, negative time for a semigroup, valuation of zero).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A dense oracle was asked for a matrix larger than the configured cap.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::size_t cap)
      : std::runtime_error(what), cap_(cap) {}

  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

/// Self-check failure: a closed form and its oracle disagree beyond tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using WarningHandler = std::function<void(std::string_view)>;

// Process-wide sink for non-fatal diagnostics. Install before spawning threads.
inline WarningHandler& warning_handler() {
  static WarningHandler handler = [](std::string_view msg) {
    std::cerr << "warning: " << msg << '\n';
  };
  return handler;
}

inline void warn(std::string_view msg) {
  if (auto& h = warning_handler()) h(msg);
}

}  // namespace ultrawalk
