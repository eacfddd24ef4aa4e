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

#include "qtri/local_estimators.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "qtri/error.hpp"

namespace qtri {

int simulate_local_measurement(int alice_outcome, const Direction &a_z, const Direction &axis, Rng &rng) {
    if (alice_outcome != 1 && alice_outcome != -1) throw Error(ErrorKind::Input, "outcome must be +1 or -1");
    const double b_dot_axis = -static_cast<double>(alice_outcome) * a_z.dot(axis);
    return rng.bernoulli((1.0 + b_dot_axis) / 2.0) ? 1 : -1;
}

Direction round_robin_axis(std::size_t index) {
    switch (index % 3) {
        case 0: return Direction::plus_x();
        case 1: return Direction::plus_y();
        default: return Direction::plus_z();
    }
}

FrameEstimate estimate_frame_vector(const std::vector<LocalMeasurementRecord> &records) {
    if (records.empty()) throw Error(ErrorKind::Input, "frame estimator needs at least one record");
    std::array<double, 3> sum{};
    std::array<std::size_t, 3> count{};
    for (const auto &r : records) {
        std::size_t k = 3;
        for (std::size_t axis = 0; axis < 3; ++axis) {
            if (std::abs(r.axis[axis]) == 1.0) k = axis;
        }
        if (k == 3) throw Error(ErrorKind::Input, "frame estimator expects records measured along lab axes");
        sum[k] += -static_cast<double>(r.alice_outcome * r.bob_outcome) * r.axis[k];
        ++count[k];
    }
    std::array<double, 3> mean{};
    for (std::size_t k = 0; k < 3; ++k) mean[k] = count[k] ? sum[k] / static_cast<double>(count[k]) : 0.0;
    const double norm = std::sqrt(mean[0] * mean[0] + mean[1] * mean[1] + mean[2] * mean[2]);
    if (norm < 1e-12) return {Direction::plus_z(), true};
    return {Direction::normalized(mean[0], mean[1], mean[2]), false};
}

Direction estimate_mle(const std::vector<LocalMeasurementRecord> &records, const SphereGrid &grid,
                       const std::optional<Direction> &hemisphere_hint) {
    if (records.empty()) throw Error(ErrorKind::Input, "MLE needs at least one record");
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_index = grid.size();
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const Direction &n = grid.nodes[g];
        if (hemisphere_hint && !(n.dot(*hemisphere_hint) > 0.0)) continue;
        double log_likelihood = 0.0;
        for (const auto &r : records) {
            const double c = -static_cast<double>(r.alice_outcome * r.bob_outcome);
            log_likelihood += std::log(std::max((1.0 + c * n.dot(r.axis)) / 2.0, 1e-300));
        }
        if (log_likelihood > best || best_index == grid.size()) {
            best = log_likelihood;
            best_index = g;
        }
    }
    if (best_index == grid.size()) throw Error(ErrorKind::Configuration, "no grid nodes satisfy the hemisphere hint");
    return grid.nodes[best_index];
}

}  // namespace qtri
