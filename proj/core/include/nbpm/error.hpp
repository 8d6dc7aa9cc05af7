// Copyright 2026 The nbpm Authors.
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

#ifndef NBPM_ERROR_HPP_
#define NBPM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace nbpm {

// Invalid argument or parameter outside the documented domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An iterative method failed to converge. Carries the best estimate reached.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double best_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

// A request exceeded a hard memory or size bound.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An optional capability (for example a base-measure CDF) is missing.
class CapabilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Truncation retained fewer than two points, so no measure can be formed.
class DegenerateTruncationError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace nbpm

#endif  // NBPM_ERROR_HPP_
