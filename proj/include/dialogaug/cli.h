//
// Copyright 2026 The DialogAug Authors
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
//

#ifndef DIALOGAUG_CLI_H_
#define DIALOGAUG_CLI_H_

#include <iosfwd>

namespace dialogaug {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

// Entry point of the `dialogaug` tool: ingest, augment, eval, stats.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dialogaug

#endif  // DIALOGAUG_CLI_H_
