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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/binomial.hpp>

#include "cli.hpp"
#include "nlohmann/json.hpp"
#include "qtri/channel.hpp"
#include "qtri/error.hpp"
#include "qtri/experiments.hpp"
#include "qtri/json_io.hpp"
#include "qtri/local_estimators.hpp"
#include "qtri/oracle.hpp"
#include "qtri/seesaw.hpp"
#include "test_util.hpp"

using namespace qtri;
using namespace qtri::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(const std::string &id, bool pass, const std::string &detail) {
    std::printf("%s criterion %s: %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

/// Runs `body`, turning an escaped exception into a FAIL line.
void criterion(const std::string &id, const std::function<void()> &body) {
    try {
        body();
    } catch (const std::exception &e) {
        report(id, false, std::string("exception: ") + e.what());
    }
}

std::string fmt(const char *format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

SeesawConfig seesaw_config(std::size_t outcomes) {
    SeesawConfig c;
    c.grid_size = 2000;
    c.n_outcomes = outcomes;
    return c;
}

// Every see-saw run from criteria 1-4, checked again by criterion 8.
std::vector<SeesawResult> all_runs;

SeesawResult timed_seesaw(const char *pattern, std::size_t outcomes, double *elapsed) {
    const auto start = Clock::now();
    SeesawResult r = seesaw_optimize(parse_pattern(pattern), seesaw_config(outcomes));
    *elapsed = seconds_since(start);
    all_runs.push_back(r);
    return r;
}

const double kTwoThirds = 2.0 / 3.0;
const double kAntiParallel = (1.0 + 1.0 / std::sqrt(3.0)) / 2.0;

void criterion_1() {
    double t = 0.0;
    const SeesawResult r = timed_seesaw("u", 30, &t);
    const auto oracle_start = Clock::now();
    const double oracle = brute_force_oracle(parse_pattern("u"), OracleConfig{}).best_objective;
    const double oracle_t = seconds_since(oracle_start);
    const bool pass = r.converged && std::abs(r.objective - kTwoThirds) <= 2e-3 && std::abs(r.objective - oracle) <= 5e-3 &&
                      t <= 5.0;
    report("1", pass,
           fmt("F(u)=%.6f target 2/3+-2e-3, oracle=%.6f |diff|=%.2e <= 5e-3, seesaw %.3fs <= 5s (oracle %.1fs)",
               r.objective, oracle, std::abs(r.objective - oracle), t, oracle_t));
}

void criterion_2() {
    double t_uu = 0.0, t_ud = 0.0;
    const SeesawResult uu = timed_seesaw("uu", 60, &t_uu);
    const SeesawResult ud = timed_seesaw("ud", 60, &t_ud);
    const OracleConfig oc;
    const double oracle_uu = brute_force_oracle(parse_pattern("uu"), oc).best_objective;
    const double oracle_ud = brute_force_oracle(parse_pattern("ud"), oc).best_objective;
    const double gap = ud.objective - uu.objective;
    const bool pass = uu.converged && ud.converged && std::abs(uu.objective - 0.75) <= 3e-3 &&
                      std::abs(ud.objective - 0.789) <= 3e-3 && gap >= 0.03 && t_uu + t_ud <= 60.0 &&
                      std::abs(uu.objective - oracle_uu) <= 5e-3 && std::abs(ud.objective - oracle_ud) <= 5e-3;
    report("2", pass,
           fmt("F(uu)=%.6f (0.750+-3e-3), F(ud)=%.6f (0.789+-3e-3, exact %.6f), gap=%.4f >= 0.03, "
               "oracle uu=%.6f ud=%.6f, seesaw %.3fs <= 60s",
               uu.objective, ud.objective, kAntiParallel, gap, oracle_uu, oracle_ud, t_uu + t_ud));
}

void criterion_3() {
    double t = 0.0;
    const SeesawResult uuu = timed_seesaw("uuu", 90, &t);
    report("3", uuu.converged && std::abs(uuu.objective - 0.8) <= 5e-3 && t <= 180.0,
           fmt("F(uuu)=%.6f target 0.800+-5e-3, %.3fs <= 180s", uuu.objective, t));
    double t4 = 0.0;
    const SeesawResult uuuu = timed_seesaw("uuuu", 120, &t4);
    report("3-stretch", uuuu.converged && std::abs(uuuu.objective - 5.0 / 6.0) <= 7e-3 && t4 <= 600.0,
           fmt("F(uuuu)=%.6f target 0.833+-7e-3, %.3fs <= 600s", uuuu.objective, t4));
}

void criterion_4() {
    std::ostringstream out, err;
    const int code = cli::dispatch({"optimize", "--pattern", "uudd,uuuu", "--grid", "2000", "--seed", "1"}, out, err);
    if (code != 0) {
        report("4", false, fmt("optimize exited %d: %s", code, err.str().c_str()));
        return;
    }
    const auto doc = nlohmann::json::parse(out.str());
    const double uudd = doc.at("F").at("uudd").get<double>();
    const double uuuu = doc.at("F").at("uuuu").get<double>();
    // The CLI runs are deterministic; repeat them here so criterion 8 sees their histories.
    all_runs.push_back(seesaw_optimize(parse_pattern("uudd"), seesaw_config(120)));
    all_runs.push_back(seesaw_optimize(parse_pattern("uuuu"), seesaw_config(120)));
    const bool same = all_runs[all_runs.size() - 2].objective == uudd && all_runs.back().objective == uuuu;
    report("4", same && uudd >= uuuu - 1e-3,
           fmt("optimize reports F(uudd)=%.6f F(uuuu)=%.6f; gap %+.6f (data); assert uudd >= uuuu - 1e-3", uudd, uuuu,
               uudd - uuuu));
}

void criterion_5() {
    Rng rng(505);
    std::size_t agree = 0;
    const std::size_t rounds = 10000;
    for (std::size_t i = 0; i < rounds; ++i) {
        const GroundTruth truth{random_direction(rng)};
        const auto announced = alice_measure(truth, ProtocolConfig{1, 0, std::nullopt}, rng);
        const ParticleBox box(truth, announced);
        agree += box.measure_local(0, truth.a_z, rng) == -announced[0].alice_outcome;
    }
    report("5", agree == rounds, fmt("%zu/%zu rounds anticorrelated along a_z", agree, rounds));
}

void criterion_6() {
    Rng pick(606);
    double worst = 1.0;
    for (int rep = 0; rep < 5; ++rep) {
        const GroundTruth truth{random_direction(pick)};
        Rng rng(mix_seed(606, rep));
        std::size_t ups = 0;
        const std::size_t n = 100000;
        for (const auto &o : alice_measure(truth, ProtocolConfig{n, 0, std::nullopt}, rng)) ups += o.alice_outcome == 1;
        const boost::math::binomial_distribution<double> dist(double(n), 0.5);
        const double p = std::min(1.0, 2.0 * boost::math::cdf(dist, double(std::min(ups, n - ups))));
        worst = std::min(worst, p);
    }
    report("6", worst > 1e-6, fmt("5 truths x 1e5 outcomes, smallest two-sided p=%.3g > 1e-6", worst));
}

void criterion_7() {
    BenchmarkConfig config;
    config.strategy = Strategy::Frame;
    config.n_values = {8, 16, 32, 64, 128, 256, 512};
    config.trials = 2000;
    config.master_seed = 707;
    const auto start = Clock::now();
    const double exponent = fit_power_law(summarize(run_trials(config)));
    const double t = seconds_since(start);
    report("7", exponent >= -0.65 && exponent <= -0.35 && t <= 120.0,
           fmt("frame exponent %.4f in [-0.65,-0.35], %.2fs <= 120s", exponent, t));
}

void criterion_8() {
    std::size_t iterations = 0;
    double worst_residual = 0.0, worst_eigen = 0.0, worst_drop = 0.0;
    bool converged = true;
    for (const auto &r : all_runs) {
        converged = converged && r.converged;
        for (std::size_t i = 0; i < r.history.size(); ++i) {
            const auto &h = r.history[i];
            worst_residual = std::max(worst_residual, h.completeness_residual);
            worst_eigen = std::min(worst_eigen, h.min_eigenvalue);
            if (i > 0) worst_drop = std::max(worst_drop, r.history[i - 1].objective - h.objective);
            ++iterations;
        }
    }
    report("8",
           !all_runs.empty() && converged && worst_residual <= 1e-8 && worst_eigen >= -1e-10 && worst_drop <= 0.0,
           fmt("%zu runs, %zu iterates: max residual %.2e <= 1e-8, min eigenvalue %.2e >= -1e-10, "
               "largest objective drop %.2e",
               all_runs.size(), iterations, worst_residual, worst_eigen, worst_drop));
}

void criterion_9() {
    Rng rng(909);
    const SphereGrid grid = fibonacci_grid(2000);
    double worst = 0.0;
    for (const char *text : {"u", "ud"}) {
        const Pattern p = parse_pattern(text);
        const Povm povm = random_povm(p.size(), 6, rng);
        const double base = mean_fidelity(povm, p, grid);
        for (int k = 0; k < 20; ++k) {
            const Rotation r = Rotation::random(rng);
            worst = std::max(worst,
                             std::abs(mean_fidelity(rotate_povm(povm, r, p.size()), p, rotate_grid(grid, r)) - base));
        }
    }
    report("9", worst <= 1e-9, fmt("patterns u, ud x 20 rotations: max |dF| = %.2e <= 1e-9", worst));
}

struct Captured {
    std::string alice_transcript, bob_transcript, sent, received;
};

Captured session(Transport &alice_side, Transport &bob_side, const GroundTruth &truth, const ProtocolConfig &config,
                 const StrategyContext &ctx, std::uint64_t bob_seed) {
    RecordingTransport recorder(alice_side);
    auto bob = std::async(std::launch::async,
                          [&] { return bob_endpoint(ctx, truth, BobOptions{bob_seed, std::nullopt}, bob_side); });
    const Transcript alice = alice_endpoint(truth, config, recorder);
    return {transcript_to_json(alice), transcript_to_json(bob.get()), recorder.sent(), recorder.received()};
}

void criterion_10() {
    const GroundTruth truth{Direction::normalized(0.2718281828, -0.3141592653, 0.9)};
    const ProtocolConfig config{96, 1010, std::nullopt};
    const StrategyContext ctx(Strategy::Mle, 2000, std::nullopt);

    auto [pa, pb] = make_pipe();
    const Captured pipe = session(*pa, *pb, truth, config, ctx, 1011);

    TcpListener listener("127.0.0.1", 0);
    auto accepted = std::async(std::launch::async, [&] { return listener.accept(); });
    auto ta = tcp_connect("127.0.0.1", listener.port());
    auto tb = accepted.get();
    const Captured tcp = session(*ta, *tb, truth, config, ctx, 1011);

    const bool identical = pipe.alice_transcript == tcp.alice_transcript && pipe.bob_transcript == tcp.bob_transcript &&
                           pipe.sent == tcp.sent && pipe.received == tcp.received;
    bool leaked = false;
    for (double c : truth.a_z.components()) {
        const std::string text = format_double(c);
        leaked = leaked || tcp.sent.find(text) != std::string::npos || tcp.received.find(text) != std::string::npos;
    }
    report("10", identical && !leaked,
           fmt("TCP vs in-process transcripts %s (%zu bytes), frames %s; truth %s captured frames",
               identical ? "byte-identical" : "DIFFER", tcp.alice_transcript.size(),
               identical ? "identical" : "differ", leaked ? "FOUND in" : "absent from"));
}

void criterion_11() {
    const Povm identity({HermitianOperator::identity(2)}, {Direction::plus_z()});
    const double f = mean_fidelity(identity, parse_pattern("u"), fibonacci_grid(2000));
    report("11", std::abs(f - 0.5) <= 0.01, fmt("identity POVM F=%.6f target 0.5+-0.01", f));
}

}  // namespace

int main() {
    criterion("1", criterion_1);
    criterion("2", criterion_2);
    criterion("3", criterion_3);
    criterion("4", criterion_4);
    criterion("5", criterion_5);
    criterion("6", criterion_6);
    criterion("7", criterion_7);
    criterion("8", criterion_8);
    criterion("9", criterion_9);
    criterion("10", criterion_10);
    criterion("11", criterion_11);
    std::printf("%s: %d criterion line(s) failed\n", failures == 0 ? "ALL PASS" : "SOME FAIL", failures);
    return failures == 0 ? 0 : 1;
}
