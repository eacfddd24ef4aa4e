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

#include <string>

#include <nlohmann/json.hpp>

namespace qtri {

/// `%.17g`; round-trips every finite double. Non-finite values throw Input.
std::string format_double(double v);

/// Compact JSON with sorted keys, no insignificant whitespace and doubles
/// printed by `format_double`. Equal values always produce equal bytes.
std::string canonical_dump(const nlohmann::json &value);

/// Write `contents` to `path` via a sibling temp file and rename. Throws Io
/// with the path in the message.
void write_file_atomically(const std::string &path, const std::string &contents);

}  // namespace qtri
