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

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "qtri/error.hpp"
#include "qtri/protocol.hpp"
#include "qtri/strategies.hpp"

using namespace qtri;

namespace {

LocalMeasurementRecord record(std::size_t index, Direction axis, int c) {
    // alice = -1 makes c equal to bob's outcome.
    return LocalMeasurementRecord{index, axis, c, -1};
}

}  // namespace

TEST(simulate_local_measurement, eigenstate_axis) {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const Direction a = random_direction(rng);
        EXPECT_EQ(simulate_local_measurement(1, a, -a, rng), 1);
        EXPECT_EQ(simulate_local_measurement(-1, a, a, rng), 1);
    }
}

TEST(simulate_local_measurement, orthogonal_axis_is_a_coin) {
    Rng rng(2);
    const int samples = 10000;
    int plus = 0;
    for (int i = 0; i < samples; ++i) plus += simulate_local_measurement(1, Direction::plus_z(), Direction::plus_x(), rng) == 1;
    EXPECT_LT(std::abs(plus - samples / 2), 4.0 * std::sqrt(samples * 0.25));
}

TEST(simulate_local_measurement, replay) {
    Rng a(3), b(3);
    const Direction d = Direction::normalized(1, -1, 0.5), axis = Direction::plus_y();
    for (int i = 0; i < 200; ++i)
        EXPECT_EQ(simulate_local_measurement(1, d, axis, a), simulate_local_measurement(1, d, axis, b));
}

TEST(round_robin_axis, cycles) {
    EXPECT_EQ(round_robin_axis(0), Direction::plus_x());
    EXPECT_EQ(round_robin_axis(1), Direction::plus_y());
    EXPECT_EQ(round_robin_axis(2), Direction::plus_z());
    EXPECT_EQ(round_robin_axis(3), Direction::plus_x());
}

TEST(estimate_frame_vector, exact_component_readout) {
    const FrameEstimate e = estimate_frame_vector(
        {record(0, Direction::plus_x(), 1), record(1, Direction::plus_y(), 1), record(2, Direction::plus_z(), 1),
         record(3, Direction::plus_x(), 1), record(4, Direction::plus_y(), -1), record(5, Direction::plus_z(), -1)});
    EXPECT_FALSE(e.degenerate);
    EXPECT_NEAR(e.direction.x(), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(e.direction.y()) + std::abs(e.direction.z()), 0.0, 1e-15);
}

TEST(estimate_frame_vector, negative_axes_flip_sign) {
    const FrameEstimate e = estimate_frame_vector({record(0, -Direction::plus_y(), 1)});
    EXPECT_NEAR(e.direction.y(), -1.0, 1e-15);
}

TEST(estimate_frame_vector, degenerate_falls_back_to_plus_z) {
    const FrameEstimate e =
        estimate_frame_vector({record(0, Direction::plus_x(), 1), record(1, Direction::plus_x(), -1)});
    EXPECT_TRUE(e.degenerate);
    EXPECT_EQ(e.direction, Direction::plus_z());
}

TEST(estimate_frame_vector, errors) {
    EXPECT_THROW(estimate_frame_vector({}), Error);
    EXPECT_THROW(estimate_frame_vector({record(0, Direction::normalized(1, 1, 0), 1)}), Error);
}

TEST(estimate_frame_vector, large_sample_accuracy) {
    Rng rng(4);
    double total_deg = 0.0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const GroundTruth truth{random_direction(rng)};
        const ParticleBox box(truth, alice_measure(truth, ProtocolConfig{3000, 0, {}}, rng));
        const FrameEstimate e = estimate_frame_vector(box.measure_round_robin(rng));
        total_deg += angle_between(e.direction, truth.a_z) * 180.0 / std::numbers::pi;
    }
    // Per-axis standard error ~ sqrt(3/N) gives a typical error near 2.5 degrees.
    EXPECT_LT(total_deg / trials, 10.0);
}

TEST(estimate_mle, single_record_two_nodes) {
    SphereGrid grid{{Direction::plus_z(), -Direction::plus_z()}, {0.5, 0.5}};
    EXPECT_EQ(estimate_mle({record(0, Direction::plus_z(), 1)}, grid), Direction::plus_z());
    EXPECT_EQ(estimate_mle({record(0, Direction::plus_z(), -1)}, grid), -Direction::plus_z());
}

TEST(estimate_mle, ties_go_to_lowest_index) {
    SphereGrid grid{{Direction::plus_y(), -Direction::plus_y()}, {0.5, 0.5}};
    EXPECT_EQ(estimate_mle({record(0, Direction::plus_z(), 1)}, grid), Direction::plus_y());
}

TEST(estimate_mle, hemisphere_hint_restricts_support) {
    const SphereGrid grid = fibonacci_grid(500);
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        const GroundTruth truth{random_direction(rng)};
        const ParticleBox box(truth, alice_measure(truth, ProtocolConfig{12, 0, {}}, rng));
        EXPECT_GT(estimate_mle(box.measure_round_robin(rng), grid, Direction::plus_z()).z(), 0.0);
    }
}

TEST(estimate_mle, errors) {
    const SphereGrid south{{-Direction::plus_z()}, {1.0}};
    try {
        estimate_mle({record(0, Direction::plus_z(), 1)}, south, Direction::plus_z());
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::Configuration);
    }
    EXPECT_THROW(estimate_mle({}, fibonacci_grid(10)), Error);
}

TEST(estimate_mle, not_worse_than_frame_vector) {
    const SphereGrid grid = fibonacci_grid(2000);
    Rng rng(6);
    double frame = 0.0, mle = 0.0;
    const int trials = 500;
    for (int t = 0; t < trials; ++t) {
        const GroundTruth truth{random_direction(rng)};
        const ParticleBox box(truth, alice_measure(truth, ProtocolConfig{96, 0, {}}, rng));
        const auto records = box.measure_round_robin(rng);
        frame += direction_fidelity(estimate_frame_vector(records).direction, truth.a_z);
        mle += direction_fidelity(estimate_mle(records, grid), truth.a_z);
    }
    EXPECT_GE(mle / trials, frame / trials - 0.01);
}
