// Copyright 2026 The wclt Authors.
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

#ifndef WCLT_TOOLS_CLI_HPP_
#define WCLT_TOOLS_CLI_HPP_

#include <iosfwd>

namespace wclt::cli {

// Entry point of the `wclt` tool. Returns 0 on success, 1 on invalid
// input (including usage errors), 2 on numerical failure.
int cli_main(int argc, char** argv);
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace wclt::cli

#endif  // WCLT_TOOLS_CLI_HPP_
