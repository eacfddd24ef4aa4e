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

#include <nlohmann/json.hpp>

#include "qtri/error.hpp"
#include "qtri/json_io.hpp"

namespace qtri {
namespace {

nlohmann::json direction_json(const Direction &d) { return {{"x", d.x()}, {"y", d.y()}, {"z", d.z()}}; }

Direction direction_from_json(const nlohmann::json &j) {
    return Direction::unit(j.at("x").get<double>(), j.at("y").get<double>(), j.at("z").get<double>());
}

}  // namespace

std::string transcript_to_json(const Transcript &t) {
    nlohmann::json config;
    config["n"] = t.config.n_particles;
    config["seed"] = t.config.seed;
    config["hemisphere"] = t.config.hemisphere_hint ? direction_json(*t.config.hemisphere_hint) : nlohmann::json();
    nlohmann::json outcomes = nlohmann::json::array();
    for (const auto &o : t.outcomes) outcomes.push_back(o.alice_outcome);
    nlohmann::json estimate;
    if (t.estimate) {
        estimate = direction_json(t.estimate->direction);
        estimate["strategy"] = t.estimate->strategy;
    }
    return canonical_dump({{"config", config}, {"outcomes", outcomes}, {"estimate", estimate}});
}

Transcript transcript_from_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        Transcript t;
        const auto &config = j.at("config");
        t.config.n_particles = config.at("n").get<std::size_t>();
        t.config.seed = config.at("seed").get<std::uint64_t>();
        if (!config.at("hemisphere").is_null()) t.config.hemisphere_hint = direction_from_json(config["hemisphere"]);
        std::size_t index = 0;
        for (const auto &o : j.at("outcomes")) {
            const int v = o.get<int>();
            if (v != 1 && v != -1) throw Error(ErrorKind::Parse, "transcript outcome must be +1 or -1");
            t.outcomes.push_back({index++, v});
        }
        if (t.outcomes.size() != t.config.n_particles) {
            throw Error(ErrorKind::Parse, "transcript outcome count does not match n");
        }
        const auto &estimate = j.at("estimate");
        if (!estimate.is_null()) {
            t.estimate = Estimate{direction_from_json(estimate), estimate.at("strategy").get<std::string>()};
        }
        return t;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Parse, std::string("malformed transcript: ") + e.what());
    }
}

std::vector<OutcomeRecord> alice_measure(const GroundTruth & /*truth*/, const ProtocolConfig &config, Rng &rng) {
    std::vector<OutcomeRecord> out;
    out.reserve(config.n_particles);
    for (std::size_t i = 0; i < config.n_particles; ++i) out.push_back({i, rng.fair_sign()});
    return out;
}

PureState bob_collapsed_state(int outcome, const Direction &a_z) {
    if (outcome != 1 && outcome != -1) throw Error(ErrorKind::Input, "outcome must be +1 or -1");
    return spin_state(a_z, outcome == 1 ? Spin::Down : Spin::Up);
}

Pattern parse_pattern(std::string_view text) {
    if (text.empty()) throw Error(ErrorKind::Input, "pattern must not be empty");
    Pattern out;
    for (char c : text) {
        if (c == 'u' || c == 'U') {
            out.push_back(Spin::Up);
        } else if (c == 'd' || c == 'D') {
            out.push_back(Spin::Down);
        } else {
            throw Error(ErrorKind::Input, std::string("pattern characters must be 'u' or 'd', got '") + c + "'");
        }
    }
    return out;
}

std::string pattern_to_string(const Pattern &pattern) {
    std::string out;
    for (Spin s : pattern) out += s == Spin::Up ? 'u' : 'd';
    return out;
}

Pattern pattern_from_outcomes(const std::vector<OutcomeRecord> &outcomes) {
    Pattern out;
    out.reserve(outcomes.size());
    for (const auto &o : outcomes) out.push_back(o.alice_outcome == 1 ? Spin::Down : Spin::Up);
    return out;
}

PureState pattern_state(const Pattern &pattern, const Direction &n) {
    if (pattern.empty()) throw Error(ErrorKind::Input, "pattern must not be empty");
    if (pattern.size() > kMaxCollectiveQubits) {
        throw Error(ErrorKind::SizeLimit, "pattern of " + std::to_string(pattern.size()) + " qubits exceeds the " +
                                              std::to_string(kMaxCollectiveQubits) + "-qubit cap");
    }
    PureState up = spin_state(n, Spin::Up);
    PureState down = spin_state(n, Spin::Down);
    PureState out = pattern[0] == Spin::Up ? up : down;
    for (std::size_t i = 1; i < pattern.size(); ++i) out = kron(out, pattern[i] == Spin::Up ? up : down);
    return out;
}

}  // namespace qtri
