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

#include "cli.hpp"

#include <chrono>
#include <future>
#include <sstream>
#include <thread>

#include "gtest/gtest.h"
#include "nlohmann/json.hpp"
#include "qtri/channel.hpp"

using qtri::cli::dispatch;

namespace {

struct Invocation {
    int code = -1;
    std::string out;
    std::string err;
};

Invocation run(const std::vector<std::string> &args, const std::optional<std::string> &env_seed = std::nullopt) {
    std::ostringstream out, err;
    Invocation r;
    r.code = dispatch(args, out, err, env_seed);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string first_line(const std::string &s) { return s.substr(0, s.find('\n')); }

std::uint16_t free_port() {
    qtri::TcpListener probe("127.0.0.1", 0);
    return probe.port();
}

}  // namespace

TEST(cli, latlon_north_pole) {
    const Invocation r = run({"latlon", "--x", "0", "--y", "0", "--z", "1"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "lat 90.0 lon 0.0\n");
}

TEST(cli, latlon_rejects_zero_vector) {
    EXPECT_EQ(run({"latlon", "--x", "0", "--y", "0", "--z", "0"}).code, 2);
}

TEST(cli, format_degrees) {
    EXPECT_EQ(qtri::cli::format_degrees(90.0), "90.0");
    EXPECT_EQ(qtri::cli::format_degrees(-12.5), "-12.5");
}

TEST(cli, optimize_single_spin) {
    const Invocation r = run({"optimize", "--pattern", "u", "--grid", "2000", "--outcomes", "30", "--seed", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_GE(doc.at("F").get<double>(), 0.664);
    EXPECT_LE(doc.at("F").get<double>(), 0.670);
    EXPECT_EQ(doc.at("config").at("outcomes"), 30);
}

TEST(cli, optimize_side_by_side) {
    const Invocation r = run({"optimize", "--pattern", "ud,uu", "--grid", "500", "--outcomes", "8"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc.at("results").size(), 2u);
    EXPECT_NEAR(doc.at("difference").at("value").get<double>(),
                doc.at("F").at("ud").get<double>() - doc.at("F").at("uu").get<double>(), 1e-15);
}

TEST(cli, optimize_non_convergence_exit) {
    EXPECT_EQ(run({"optimize", "--pattern", "uu", "--grid", "300", "--outcomes", "6", "--max-iter", "1", "--tol", "1e-15"})
                  .code,
              4);
}

TEST(cli, bench_collective_size_limit) {
    const Invocation r = run({"bench", "--strategy", "collective", "--n", "16", "--trials", "2"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("size-limit"), std::string::npos) << r.err;
}

TEST(cli, bench_prints_summaries_and_exponent) {
    const Invocation r = run({"bench", "--strategy", "frame", "--n", "8,32,128", "--trials", "200", "--seed", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(first_line(r.out), "n,strategy,trials,mean_fidelity,std_err,mean_angle_deg");
    EXPECT_NE(r.out.find("\nexponent "), std::string::npos);
}

TEST(cli, help_and_bad_flags) {
    EXPECT_EQ(run({"--help"}).code, 0);
    EXPECT_EQ(run({"simulate", "--bogus"}).code, 2);
    EXPECT_EQ(run({"simulate", "--strategy", "psychic"}).code, 2);
    EXPECT_EQ(run({"optimize"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
}

TEST(cli, seed_from_environment) {
    const std::vector<std::string> args{"simulate", "--n", "12", "--grid", "200"};
    const Invocation env = run(args, "17");
    std::vector<std::string> explicit_args = args;
    explicit_args.insert(explicit_args.end(), {"--seed", "17"});
    EXPECT_EQ(env.out, run(explicit_args).out);
    std::vector<std::string> override_args = args;
    override_args.insert(override_args.end(), {"--seed", "18"});
    EXPECT_NE(run(override_args, "17").out, env.out);
    EXPECT_EQ(run(args, "not-a-number").code, 2);
}

TEST(cli, networked_session_matches_simulate) {
    const std::string port = std::to_string(free_port());
    auto bob = std::async(std::launch::async, [&] {
        return run({"bob", "--listen", "127.0.0.1:" + port, "--seed", "11", "--nature-seed", "9", "--strategy", "mle",
                    "--grid", "500"});
    });
    Invocation alice;
    for (int attempt = 0; attempt < 100; ++attempt) {
        alice = run({"alice", "--connect", "127.0.0.1:" + port, "--n", "30", "--seed", "5", "--nature-seed", "9"});
        if (alice.code == 0) break;
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    ASSERT_EQ(alice.code, 0) << alice.err;
    ASSERT_EQ(bob.get().code, 0);
    const Invocation local = run({"simulate", "--n", "30", "--seed", "5", "--nature-seed", "9", "--bob-seed", "11", "--strategy",
                           "mle", "--grid", "500"});
    ASSERT_EQ(local.code, 0) << local.err;
    EXPECT_EQ(first_line(alice.out), first_line(local.out));
}
