// Copyright 2026 The qtri Authors
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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qtri::cli {

/// Process exit codes.
enum ExitCode : int {
    kSuccess = 0,
    kArgumentError = 2,
    kProtocolError = 3,
    kNumericalFailure = 4,
};

/// Runs one invocation. `args` excludes the program name. `env_seed` is the
/// value of QTRI_SEED, if set; an explicit --seed wins over it.
int dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err,
             const std::optional<std::string> &env_seed = std::nullopt);

/// "lat 90.0 lon 0.0" style number: %.10g with a ".0" suffix on integers.
std::string format_degrees(double v);

}  // namespace qtri::cli
