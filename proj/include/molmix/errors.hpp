// Copyright 2026 The molmix Authors
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

#ifndef MOLMIX_ERRORS_HPP_
#define MOLMIX_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace molmix {

// Bad arguments, malformed files, or inputs that violate a type invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The simulated readout channel cannot be applied to this library
// (for example two sodiated masses fall inside one tolerance window).
class ChannelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace molmix

#endif  // MOLMIX_ERRORS_HPP_
