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

#include "qtri/seesaw.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "qtri/error.hpp"
#include "qtri/json_io.hpp"

namespace qtri {

void SeesawConfig::validate() const {
    if (n_outcomes < 2) throw Error(ErrorKind::Configuration, "see-saw needs at least two outcomes");
    if (grid_size < n_outcomes) throw Error(ErrorKind::Configuration, "grid size must be at least the outcome count");
    if (!(tol > 0.0)) throw Error(ErrorKind::Configuration, "tolerance must be positive");
    if (max_iter == 0) throw Error(ErrorKind::Configuration, "max_iter must be positive");
}

std::size_t default_outcome_count(std::size_t n_qubits) { return 30 * std::max<std::size_t>(n_qubits, 1); }

SeesawResult seesaw_optimize(const Pattern &pattern, const SeesawConfig &config) {
    config.validate();
    return seesaw_optimize(pattern, config, fibonacci_grid(config.grid_size));
}

SeesawResult seesaw_optimize(const Pattern &pattern, const SeesawConfig &config, const SphereGrid &grid) {
    config.validate();
    const PriorMoments moments = prior_moments(pattern, grid);

    Rng rng(config.seed);
    const Rotation spin = Rotation::random(rng);
    const SphereGrid seeds = fibonacci_grid(config.n_outcomes);
    std::vector<Direction> guesses;
    std::vector<HermitianOperator> raw;
    for (const auto &n : seeds.nodes) {
        guesses.push_back(spin.apply(n));
        raw.push_back(HermitianOperator::projector(pattern_state(pattern, guesses.back())));
    }
    Povm povm = whiten_to_povm(raw, guesses);
    double current = mean_fidelity(povm, moments);

    SeesawResult result{pattern, config, povm, current, false, 0, {}};
    result.history.push_back({current, povm.completeness_residual(), povm.min_eigenvalue(), false});

    for (std::size_t iter = 1; iter <= config.max_iter; ++iter) {
        const PovmUpdate step = povm_update(povm, score_operators(moments, povm.guesses()));
        povm = guess_update(step.povm, moments);
        const double next = mean_fidelity(povm, moments);
        result.history.push_back({next, povm.completeness_residual(), povm.min_eigenvalue(), step.rolled_back});
        result.iterations = iter;
        if (next >= result.objective) {
            result.objective = next;
            result.povm = povm;
        }
        const double change = std::abs(next - current) / std::max(std::abs(current), 1e-300);
        current = next;
        if (change < config.tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

nlohmann::json seesaw_result_json(const SeesawResult &result) {
    nlohmann::json outcomes = nlohmann::json::array();
    for (std::size_t j = 0; j < result.povm.size(); ++j) {
        const Direction &g = result.povm.guesses()[j];
        outcomes.push_back({{"guess", {{"x", g.x()}, {"y", g.y()}, {"z", g.z()}}},
                            {"eigenvalues", eigh(result.povm.elements()[j]).values}});
    }
    const nlohmann::json config = {{"grid", result.config.grid_size},
                                   {"outcomes", result.config.n_outcomes},
                                   {"tol", result.config.tol},
                                   {"max_iter", result.config.max_iter},
                                   {"seed", result.config.seed}};
    return {{"pattern", pattern_to_string(result.pattern)},
            {"config", config},
            {"F", result.objective},
            {"converged", result.converged},
            {"iterations", result.iterations},
            {"outcomes", outcomes}};
}

std::string seesaw_result_to_json(const SeesawResult &result) { return canonical_dump(seesaw_result_json(result)); }

}  // namespace qtri
