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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qtri/povm.hpp"
#include "qtri/protocol.hpp"

namespace qtri {

struct SeesawConfig {
    std::size_t grid_size = 2000;
    std::size_t n_outcomes = 30;
    double tol = 1e-8;  // relative objective change between iterations
    std::size_t max_iter = 500;
    std::uint64_t seed = 1;  // picks the global rotation of the initial guesses

    /// Throws Configuration unless grid_size >= n_outcomes >= 2 and tol > 0.
    void validate() const;
};

/// 30 outcomes per qubit: 30, 60, 90, 120, ...
std::size_t default_outcome_count(std::size_t n_qubits);

struct SeesawIteration {
    double objective = 0.0;
    double completeness_residual = 0.0;
    double min_eigenvalue = 0.0;
    bool rolled_back = false;
};

struct SeesawResult {
    Pattern pattern;
    SeesawConfig config;
    Povm povm;
    double objective = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    /// Entry 0 is the initial POVM; one entry per iteration after that.
    std::vector<SeesawIteration> history;
};

/// Alternates povm_update and guess_update on the prior given by a
/// Fibonacci grid until the relative objective change drops below `tol`.
/// Starts from J Fibonacci directions m_j with raw elements
/// |pattern_state(m_j)><pattern_state(m_j)| whitened to completeness.
/// Hitting max_iter returns the best POVM seen with `converged == false`.
SeesawResult seesaw_optimize(const Pattern &pattern, const SeesawConfig &config);

/// Same, with a caller-supplied prior (e.g. a hemisphere-restricted grid).
SeesawResult seesaw_optimize(const Pattern &pattern, const SeesawConfig &config, const SphereGrid &grid);

/// {"F","config":{...},"converged","iterations","outcomes":[{"eigenvalues","guess"}],"pattern"}
nlohmann::json seesaw_result_json(const SeesawResult &result);
/// canonical_dump(seesaw_result_json(result)).
std::string seesaw_result_to_json(const SeesawResult &result);

}  // namespace qtri
