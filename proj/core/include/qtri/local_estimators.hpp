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
#include <optional>
#include <vector>

#include "qtri/bloch.hpp"
#include "qtri/rng.hpp"

namespace qtri {

/// One of Bob's single-qubit measurements, kept with Alice's announced
/// result for the same singlet.
struct LocalMeasurementRecord {
    std::size_t index = 0;
    Direction axis;
    int bob_outcome = 1;
    int alice_outcome = 1;
};

/// Bob measures his half along `axis`. His Bloch vector is
/// b = -alice_outcome * a_z, so the result is +1 with probability
/// (1 + b.axis)/2.
int simulate_local_measurement(int alice_outcome, const Direction &a_z, const Direction &axis, Rng &rng);

/// x, y, z, x, y, z, ... by record index.
Direction round_robin_axis(std::size_t index);

struct FrameEstimate {
    Direction direction;
    bool degenerate = false;  // component means vanished; direction is +z
};

/// Per lab axis k, averages c = -alice * bob over records measured along k
/// (E[c] = (a_z)_k) and normalizes the resulting vector. Axes must be lab
/// axes. Throws Input for empty records.
FrameEstimate estimate_frame_vector(const std::vector<LocalMeasurementRecord> &records);

/// Grid node maximizing sum_i log((1 + c_i n.axis_i)/2), logs clamped at
/// 1e-300; ties go to the lowest node index. With a hint, only nodes with
/// n.hint > 0 compete. Throws Input for empty records and Configuration if
/// the hint leaves no nodes.
Direction estimate_mle(const std::vector<LocalMeasurementRecord> &records, const SphereGrid &grid,
                       const std::optional<Direction> &hemisphere_hint = std::nullopt);

}  // namespace qtri
