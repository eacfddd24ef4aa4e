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

#include <cstddef>
#include <cstdint>

#include "qtri/protocol.hpp"

namespace qtri {

struct OracleConfig {
    std::size_t grid_size = 2000;
    std::size_t n_outcomes = 4;
    std::size_t restarts = 32;
    std::uint64_t seed = 7;
    std::size_t max_sweeps = 400;
};

struct OracleResult {
    double best_objective = 0.0;
    std::size_t evaluations = 0;
};

/// Independent check on seesaw_optimize for patterns of at most two qubits.
///
/// Elements are parameterized as B_j B_j^dagger from complex factors and
/// whitened to completeness; guesses are free 3-vectors. Random restarts of
/// coordinate ascent over every real parameter (with a halving step size)
/// maximize the grid-averaged fidelity, which is evaluated node by node
/// rather than through prior moments.
OracleResult brute_force_oracle(const Pattern &pattern, const OracleConfig &config);

}  // namespace qtri
