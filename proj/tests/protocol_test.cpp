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

#include "qtri/protocol.hpp"

#include <cmath>
#include <string>

#include <boost/math/distributions/binomial.hpp>

#include "gtest/gtest.h"
#include "qtri/error.hpp"
#include "qtri/json_io.hpp"
#include "qtri/local_estimators.hpp"

using namespace qtri;

namespace {

// Two-sided exact binomial p-value for `ups` successes out of `n` at p = 1/2.
double binomial_two_sided_p(std::size_t ups, std::size_t n) {
    const boost::math::binomial_distribution<double> dist(static_cast<double>(n), 0.5);
    const double k = static_cast<double>(std::min(ups, n - ups));
    return std::min(1.0, 2.0 * boost::math::cdf(dist, k));
}

}  // namespace

TEST(alice_measure, empty_for_zero_particles) {
    Rng rng(1);
    EXPECT_TRUE(alice_measure({Direction::plus_z()}, ProtocolConfig{0, 1, {}}, rng).empty());
}

TEST(alice_measure, replay_is_identical) {
    const ProtocolConfig config{500, 42, {}};
    Rng a(config.seed), b(config.seed);
    EXPECT_EQ(alice_measure({Direction::plus_x()}, config, a), alice_measure({Direction::plus_x()}, config, b));
}

TEST(alice_measure, balanced_outcomes) {
    Rng rng(7);
    const auto outcomes = alice_measure({Direction::normalized(1, 2, 3)}, ProtocolConfig{10000, 7, {}}, rng);
    double sum = 0.0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        EXPECT_EQ(outcomes[i].index, i);
        sum += outcomes[i].alice_outcome;
    }
    EXPECT_LT(std::abs(sum / 10000.0), 0.04);
}

TEST(alice_measure, binomial_test_for_several_truths) {
    Rng pick(8);
    for (int rep = 0; rep < 5; ++rep) {
        const GroundTruth truth{random_direction(pick)};
        Rng rng(100 + rep);
        std::size_t ups = 0;
        for (const auto &o : alice_measure(truth, ProtocolConfig{100000, 0, {}}, rng)) ups += o.alice_outcome == 1;
        EXPECT_GT(binomial_two_sided_p(ups, 100000), 1e-6) << "ups=" << ups;
    }
}

TEST(bob_collapsed_state, singlet_anticorrelation) {
    const PureState plus = bob_collapsed_state(1, Direction::plus_z());
    EXPECT_EQ(std::abs(plus[0]), 0.0);
    EXPECT_EQ(plus[1], Complex(1, 0));
    const PureState minus = bob_collapsed_state(-1, Direction::plus_z());
    EXPECT_EQ(minus[0], Complex(1, 0));
    EXPECT_EQ(std::abs(minus[1]), 0.0);
}

TEST(bob_collapsed_state, eigenstate_along_a_z) {
    Rng rng(9);
    for (int i = 0; i < 500; ++i) {
        const Direction a = random_direction(rng);
        for (int outcome : {1, -1}) {
            const PureState bob = bob_collapsed_state(outcome, a);
            // Probability Bob reads +1 along a_z.
            const double p_up = std::norm(spin_state(a, Spin::Up).inner(bob));
            EXPECT_NEAR(p_up, outcome == 1 ? 0.0 : 1.0, 1e-12);
        }
    }
}

TEST(bob_collapsed_state, agrees_with_joint_singlet_state) {
    // (|01> - |10>)/sqrt2, Alice's qubit first.
    DenseVector singlet = DenseVector::Zero(4);
    singlet(1) = 1.0 / std::sqrt(2.0);
    singlet(2) = -1.0 / std::sqrt(2.0);
    Rng rng(10);
    for (int i = 0; i < 500; ++i) {
        const Direction a = random_direction(rng);
        for (int outcome : {1, -1}) {
            const PureState alice = spin_state(a, outcome == 1 ? Spin::Up : Spin::Down);
            // Bob's unnormalized conditional state: (<alice| x I)|singlet>.
            DenseVector bob(2);
            bob(0) = std::conj(alice[0]) * singlet(0) + std::conj(alice[1]) * singlet(2);
            bob(1) = std::conj(alice[0]) * singlet(1) + std::conj(alice[1]) * singlet(3);
            EXPECT_NEAR(bob.squaredNorm(), 0.5, 1e-12);  // Alice's marginal is a fair coin
            const PureState conditional(DenseVector(bob / bob.norm()));
            EXPECT_NEAR(std::norm(conditional.inner(bob_collapsed_state(outcome, a))), 1.0, 1e-12);
        }
    }
}

TEST(protocol, anticorrelation_over_many_rounds) {
    Rng rng(11);
    for (int round = 0; round < 10000; ++round) {
        const Direction a = random_direction(rng);
        const int alice = rng.fair_sign();
        ASSERT_EQ(simulate_local_measurement(alice, a, a, rng), -alice);
    }
}

TEST(pattern_state, examples) {
    const PureState one = pattern_state({Spin::Up}, Direction::plus_z());
    EXPECT_EQ(one.dim(), 2u);
    EXPECT_EQ(one[0], Complex(1, 0));
    const PureState two = pattern_state({Spin::Up, Spin::Down}, Direction::plus_z());
    ASSERT_EQ(two.dim(), 4u);
    EXPECT_NEAR(std::abs(two[1]), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(two[0]) + std::abs(two[2]) + std::abs(two[3]), 0.0, 1e-15);
    const double overlap =
        std::norm(pattern_state({Spin::Up, Spin::Up}, Direction::plus_z())
                      .inner(pattern_state({Spin::Up, Spin::Up}, Direction::plus_x())));
    EXPECT_NEAR(overlap, 0.25, 1e-15);
}

TEST(pattern_state, overlap_is_product_of_qubit_overlaps) {
    Rng rng(12);
    for (int i = 0; i < 200; ++i) {
        const Direction a = random_direction(rng), b = random_direction(rng);
        const Pattern p = parse_pattern("udu");
        const double overlap = std::norm(pattern_state(p, a).inner(pattern_state(p, b)));
        EXPECT_NEAR(overlap, std::pow(direction_fidelity(a, b), 3), 1e-12);
    }
}

TEST(pattern_state, all_up_equals_tensor_power) {
    Rng rng(13);
    for (std::size_t n = 1; n <= 4; ++n) {
        const Direction d = random_direction(rng);
        const Pattern p(n, Spin::Up);
        DenseVector expected = spin_state(d, Spin::Up).amplitudes();
        for (std::size_t k = 1; k < n; ++k) {
            DenseVector next(expected.size() * 2);
            for (Eigen::Index i = 0; i < expected.size(); ++i) {
                next(2 * i) = expected(i) * spin_state(d, Spin::Up)[0];
                next(2 * i + 1) = expected(i) * spin_state(d, Spin::Up)[1];
            }
            expected = next;
        }
        const PureState got = pattern_state(p, d);
        for (Eigen::Index i = 0; i < expected.size(); ++i) EXPECT_LE(std::abs(got[i] - expected(i)), 1e-14);
    }
}

TEST(pattern_state, size_limit) {
    try {
        pattern_state(Pattern(9, Spin::Up), Direction::plus_z());
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::SizeLimit);
    }
    EXPECT_EQ(pattern_state(Pattern(8, Spin::Down), Direction::plus_x()).dim(), 256u);
}

TEST(pattern, parse_and_outcome_mapping) {
    EXPECT_EQ(pattern_to_string(parse_pattern("uUdD")), "uudd");
    EXPECT_THROW(parse_pattern("ux"), Error);
    EXPECT_THROW(parse_pattern(""), Error);
    const std::vector<OutcomeRecord> outcomes{{0, 1}, {1, -1}, {2, 1}};
    EXPECT_EQ(pattern_to_string(pattern_from_outcomes(outcomes)), "dud");
}

TEST(transcript, equal_seeds_serialize_identically) {
    auto make = [](std::uint64_t seed) {
        Transcript t;
        t.config = ProtocolConfig{20, seed, Direction::plus_z()};
        Rng rng(seed);
        const GroundTruth truth{Direction::normalized(0.1, 0.2, 0.9)};
        t.outcomes = alice_measure(truth, t.config, rng);
        t.estimate = Estimate{Direction::normalized(0.3, 0.1, 0.8), "mle"};
        t.truth = truth;
        return transcript_to_json(t);
    };
    EXPECT_EQ(make(5), make(5));
    EXPECT_NE(make(5), make(6));
}

TEST(transcript, round_trip_and_truth_excluded) {
    Transcript t;
    t.config = ProtocolConfig{3, 77, std::nullopt};
    t.outcomes = {{0, 1}, {1, -1}, {2, -1}};
    t.estimate = Estimate{Direction::normalized(1, 1, 1), "frame"};
    t.truth = GroundTruth{Direction::normalized(0.123456789, -0.5, 0.3)};
    const std::string text = transcript_to_json(t);
    EXPECT_EQ(text.find(format_double(t.truth->a_z.x())), std::string::npos);
    EXPECT_EQ(text.find("truth"), std::string::npos);
    const Transcript back = transcript_from_json(text);
    EXPECT_EQ(back.outcomes, t.outcomes);
    EXPECT_EQ(back.estimate, t.estimate);
    EXPECT_EQ(back.config.seed, 77u);
    EXPECT_FALSE(back.truth.has_value());
    EXPECT_EQ(transcript_to_json(back), text.substr(0, text.size()));
}

TEST(transcript, rejects_malformed) {
    EXPECT_THROW(transcript_from_json("{"), Error);
    EXPECT_THROW(transcript_from_json(R"({"config":{"n":2,"seed":1,"hemisphere":null},"outcomes":[1],"estimate":null})"),
                 Error);
}
