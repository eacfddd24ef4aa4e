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

#include "qtri/error.hpp"

namespace qtri {

const char *error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Input: return "input error";
        case ErrorKind::Configuration: return "configuration error";
        case ErrorKind::Shape: return "shape error";
        case ErrorKind::SizeLimit: return "size-limit error";
        case ErrorKind::NumericalFailure: return "numerical failure";
        case ErrorKind::PositivityViolation: return "positivity violation";
        case ErrorKind::Fit: return "fit error";
        case ErrorKind::Io: return "I/O error";
        case ErrorKind::Protocol: return "protocol error";
        case ErrorKind::Truncation: return "truncation error";
        case ErrorKind::Parse: return "parse error";
    }
    return "error";
}

}  // namespace qtri
