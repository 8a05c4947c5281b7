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

#ifndef MOLMIX_TOOLS_CLI_HPP_
#define MOLMIX_TOOLS_CLI_HPP_

#include <iosfwd>

namespace molmix::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;
inline constexpr int kValidation = 3;
inline constexpr int kChannel = 4;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace molmix::cli

#endif  // MOLMIX_TOOLS_CLI_HPP_
