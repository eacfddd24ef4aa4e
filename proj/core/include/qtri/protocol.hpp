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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtri/bloch.hpp"
#include "qtri/linalg.hpp"
#include "qtri/rng.hpp"

namespace qtri {

/// Largest qubit count for which full tensor states are built.
inline constexpr std::size_t kMaxCollectiveQubits = 8;

struct ProtocolConfig {
    std::size_t n_particles = 0;
    std::uint64_t seed = 0;
    std::optional<Direction> hemisphere_hint;
};

/// Alice's vertical. Known to the referee only; never serialized onto the
/// channel.
struct GroundTruth {
    Direction a_z;
};

struct OutcomeRecord {
    std::size_t index = 0;
    int alice_outcome = 1;  // +1 = up, -1 = down

    bool operator==(const OutcomeRecord &) const = default;
};

struct Estimate {
    Direction direction;
    std::string strategy;

    bool operator==(const Estimate &) const = default;
};

struct Transcript {
    ProtocolConfig config;
    std::vector<OutcomeRecord> outcomes;
    std::optional<Estimate> estimate;
    std::optional<GroundTruth> truth;  // referee-only
};

/// Canonical JSON: {"config":{"hemisphere":null|{x,y,z},"n":..,"seed":..},
/// "estimate":null|{"strategy":..,"x":..,"y":..,"z":..},"outcomes":[+-1,...]}.
/// The truth field is never written.
std::string transcript_to_json(const Transcript &t);
/// Inverse of transcript_to_json. Throws Parse on malformed input.
Transcript transcript_from_json(std::string_view text);

/// Alice measures every singlet half along her vertical. Her marginal is
/// maximally mixed, so each result is a fair coin whatever `truth` is.
std::vector<OutcomeRecord> alice_measure(const GroundTruth &truth, const ProtocolConfig &config, Rng &rng);

/// Bob's half after Alice reads `outcome` along `a_z`: anti-aligned with her
/// result.
PureState bob_collapsed_state(int outcome, const Direction &a_z);

/// Aligned/anti-aligned labels for each of Bob's qubits.
using Pattern = std::vector<Spin>;

/// "ud" -> {Up, Down}. Throws Input on other characters or an empty string.
Pattern parse_pattern(std::string_view text);
std::string pattern_to_string(const Pattern &pattern);

/// Bob's pattern relative to a_z: Alice's +1 leaves Bob's qubit Down.
Pattern pattern_from_outcomes(const std::vector<OutcomeRecord> &outcomes);

/// Tensor product of spin_state(n, pattern[i]). Throws SizeLimit beyond
/// kMaxCollectiveQubits, Input for an empty pattern.
PureState pattern_state(const Pattern &pattern, const Direction &n);

}  // namespace qtri
