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

#include "qtri/strategies.hpp"

#include <algorithm>
#include <string>

#include "qtri/error.hpp"

namespace qtri {

ParticleBox::ParticleBox(GroundTruth truth, std::vector<OutcomeRecord> announced)
    : truth_(truth), announced_(std::move(announced)) {}

int ParticleBox::measure_local(std::size_t index, const Direction &axis, Rng &rng) const {
    if (index >= announced_.size()) throw Error(ErrorKind::Input, "qubit index out of range");
    return simulate_local_measurement(announced_[index].alice_outcome, truth_.a_z, axis, rng);
}

std::vector<LocalMeasurementRecord> ParticleBox::measure_round_robin(Rng &rng) const {
    std::vector<LocalMeasurementRecord> out;
    out.reserve(announced_.size());
    for (std::size_t i = 0; i < announced_.size(); ++i) {
        const Direction axis = round_robin_axis(i);
        out.push_back({i, axis, measure_local(i, axis, rng), announced_[i].alice_outcome});
    }
    return out;
}

std::size_t ParticleBox::measure_collective(const Povm &povm, Rng &rng) const {
    const PureState psi = pattern_state(pattern(), truth_.a_z);
    if (povm.dim() != psi.dim()) throw Error(ErrorKind::Shape, "POVM does not act on this many qubits");
    const double u = rng.uniform();
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t j = 0; j < povm.size(); ++j) {
        const double p = std::max(0.0, povm.elements()[j].expectation(psi));
        if (p > 0.0) last_positive = j;
        cumulative += p;
        if (u < cumulative) return j;
    }
    // Probabilities sum to 1 up to rounding.
    return last_positive;
}

Strategy parse_strategy(std::string_view name) {
    if (name == "frame") return Strategy::Frame;
    if (name == "mle") return Strategy::Mle;
    if (name == "collective") return Strategy::Collective;
    throw Error(ErrorKind::Input, "unknown strategy '" + std::string(name) + "' (expected frame|mle|collective)");
}

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Frame: return "frame";
        case Strategy::Mle: return "mle";
        case Strategy::Collective: return "collective";
    }
    return "unknown";
}

CollectiveMeasurementCache::CollectiveMeasurementCache(SphereGrid prior, SeesawConfig base)
    : prior_(std::move(prior)), base_(base) {}

std::shared_ptr<const SeesawResult> CollectiveMeasurementCache::get(const Pattern &pattern) {
    const std::string key = pattern_to_string(pattern);
    std::promise<std::shared_ptr<const SeesawResult>> promise;
    std::shared_future<std::shared_ptr<const SeesawResult>> future;
    bool owner = false;
    {
        std::lock_guard lock(mutex_);
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            future = promise.get_future().share();
            entries_.emplace(key, future);
            owner = true;
        } else {
            future = it->second;
        }
    }
    if (owner) {
        try {
            SeesawConfig config = base_;
            config.n_outcomes = default_outcome_count(pattern.size());
            promise.set_value(std::make_shared<const SeesawResult>(seesaw_optimize(pattern, config, prior_)));
        } catch (...) {
            promise.set_exception(std::current_exception());
        }
    }
    return future.get();
}

StrategyContext::StrategyContext(Strategy strategy, std::size_t grid_size, std::optional<Direction> hemisphere_hint)
    : strategy_(strategy), hint_(hemisphere_hint), grid_(fibonacci_grid(grid_size)) {
    if (hint_) grid_ = restrict_to_hemisphere(grid_, *hint_);
    if (strategy_ == Strategy::Collective) {
        SeesawConfig base;
        base.grid_size = grid_size;
        cache_ = std::make_shared<CollectiveMeasurementCache>(grid_, base);
    }
}

Estimate StrategyContext::estimate(const ParticleBox &box, Rng &rng) const {
    const std::string label = strategy_name(strategy_);
    if (strategy_ == Strategy::Collective && box.size() > kMaxCollectiveQubits) {
        throw Error(ErrorKind::SizeLimit, "collective strategy supports at most " +
                                              std::to_string(kMaxCollectiveQubits) + " qubits, got " +
                                              std::to_string(box.size()));
    }
    if (box.size() == 0) return {hint_.value_or(Direction::plus_z()), label};
    switch (strategy_) {
        case Strategy::Frame:
            return {estimate_frame_vector(box.measure_round_robin(rng)).direction, label};
        case Strategy::Mle:
            return {estimate_mle(box.measure_round_robin(rng), grid_, hint_), label};
        case Strategy::Collective: {
            const auto optimized = cache_->get(box.pattern());
            const std::size_t outcome = box.measure_collective(optimized->povm, rng);
            return {optimized->povm.guesses()[outcome], label};
        }
    }
    throw Error(ErrorKind::Input, "unknown strategy");
}

}  // namespace qtri
