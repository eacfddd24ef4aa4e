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
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtri/bloch.hpp"
#include "qtri/local_estimators.hpp"
#include "qtri/povm.hpp"
#include "qtri/protocol.hpp"
#include "qtri/seesaw.hpp"

namespace qtri {

/// Bob's qubits after Alice's announcements. The estimators only touch them
/// through measurements; the hidden direction is reachable only through
/// `referee_truth()`, which is reserved for scoring and test stubs.
class ParticleBox {
   public:
    ParticleBox(GroundTruth truth, std::vector<OutcomeRecord> announced);

    std::size_t size() const { return announced_.size(); }
    const std::vector<OutcomeRecord> &announced() const { return announced_; }
    Pattern pattern() const { return pattern_from_outcomes(announced_); }

    /// Measures qubit `index` along `axis`.
    int measure_local(std::size_t index, const Direction &axis, Rng &rng) const;
    /// Measures every qubit, axes round-robin x, y, z.
    std::vector<LocalMeasurementRecord> measure_round_robin(Rng &rng) const;
    /// Applies `povm` to the joint state of all qubits and returns the
    /// outcome index. Throws SizeLimit beyond kMaxCollectiveQubits.
    std::size_t measure_collective(const Povm &povm, Rng &rng) const;

    const GroundTruth &referee_truth() const { return truth_; }

   private:
    GroundTruth truth_;
    std::vector<OutcomeRecord> announced_;
};

enum class Strategy { Frame, Mle, Collective };

/// "frame" | "mle" | "collective"; throws Input otherwise.
Strategy parse_strategy(std::string_view name);
std::string strategy_name(Strategy s);

/// Optimized joint measurements keyed by pattern, computed once each and
/// shared across threads.
class CollectiveMeasurementCache {
   public:
    CollectiveMeasurementCache(SphereGrid prior, SeesawConfig base);

    /// Outcome count follows default_outcome_count(pattern size).
    std::shared_ptr<const SeesawResult> get(const Pattern &pattern);

   private:
    SphereGrid prior_;
    SeesawConfig base_;
    std::mutex mutex_;
    std::map<std::string, std::shared_future<std::shared_ptr<const SeesawResult>>> entries_;
};

/// Everything a strategy needs besides the qubits themselves.
class StrategyContext {
   public:
    StrategyContext(Strategy strategy, std::size_t grid_size, std::optional<Direction> hemisphere_hint);

    Strategy strategy() const { return strategy_; }
    const std::optional<Direction> &hemisphere_hint() const { return hint_; }
    /// Grid used by MLE and as the collective prior; restricted to the
    /// hint's hemisphere when one is set.
    const SphereGrid &grid() const { return grid_; }

    /// Bob's estimate. With no qubits he guesses blind: the hint if any,
    /// else +z. Throws SizeLimit for collective beyond
    /// kMaxCollectiveQubits.
    Estimate estimate(const ParticleBox &box, Rng &rng) const;

   private:
    Strategy strategy_;
    std::optional<Direction> hint_;
    SphereGrid grid_;
    std::shared_ptr<CollectiveMeasurementCache> cache_;
};

}  // namespace qtri
