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

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qtri/channel.hpp"
#include "qtri/error.hpp"
#include "qtri/experiments.hpp"
#include "qtri/json_io.hpp"
#include "qtri/protocol.hpp"
#include "qtri/rng.hpp"
#include "qtri/seesaw.hpp"
#include "qtri/strategies.hpp"

namespace qtri::cli {
namespace {

struct Endpoint {
    std::string host;
    std::uint16_t port = kDefaultPort;
};

std::vector<std::string> split_list(const std::string &text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::uint64_t parse_u64(const std::string &text, const char *what) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(text, &used, 0);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || used != text.size() || text.front() == '-') {
        throw Error(ErrorKind::Input, std::string(what) + " must be a non-negative integer, got '" + text + "'");
    }
    return v;
}

Direction parse_direction(const std::string &text, const char *what) {
    const auto parts = split_list(text);
    if (parts.size() != 3) throw Error(ErrorKind::Input, std::string(what) + " expects x,y,z");
    try {
        return Direction::normalized(std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2]));
    } catch (const std::invalid_argument &) {
        throw Error(ErrorKind::Input, std::string(what) + " has a non-numeric component");
    }
}

std::optional<Direction> optional_direction(const std::string &text, const char *what) {
    if (text.empty()) return std::nullopt;
    return parse_direction(text, what);
}

Endpoint parse_endpoint(const std::string &text, const std::string &default_host) {
    Endpoint ep{default_host, kDefaultPort};
    const auto colon = text.rfind(':');
    std::string port_text = text;
    if (colon != std::string::npos) {
        ep.host = text.substr(0, colon);
        port_text = text.substr(colon + 1);
    } else if (!text.empty() && !std::all_of(text.begin(), text.end(), ::isdigit)) {
        ep.host = text;
        port_text.clear();
    }
    if (ep.host.empty()) ep.host = default_host;
    if (!port_text.empty()) {
        const std::uint64_t port = parse_u64(port_text, "port");
        if (port > 65535) throw Error(ErrorKind::Input, "port out of range");
        ep.port = static_cast<std::uint16_t>(port);
    }
    return ep;
}

GroundTruth nature(const std::string &truth_flag, std::uint64_t nature_seed, const std::optional<Direction> &hint) {
    if (!truth_flag.empty()) return GroundTruth{parse_direction(truth_flag, "--truth")};
    Rng rng(nature_seed);
    return GroundTruth{hint ? random_direction_in_hemisphere(rng, *hint) : random_direction(rng)};
}

std::string latlon_line(const Direction &d) {
    const LatLon ll = direction_to_latlon(d);
    return "lat " + format_degrees(ll.latitude_deg) + " lon " + format_degrees(ll.longitude_deg);
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Protocol:
        case ErrorKind::Truncation:
            return kProtocolError;
        case ErrorKind::NumericalFailure:
        case ErrorKind::PositivityViolation:
        case ErrorKind::Fit:
            return kNumericalFailure;
        default:
            return kArgumentError;
    }
}

// Runs one networked session, listening or connecting as requested.
template <class Session>
void with_connection(const std::string &listen, const std::string &connect, Session &&session) {
    if (listen.empty() == connect.empty()) {
        throw Error(ErrorKind::Input, "exactly one of --listen or --connect is required");
    }
    try {
        if (!listen.empty()) {
            const Endpoint ep = parse_endpoint(listen, "0.0.0.0");
            TcpListener listener(ep.host, ep.port);
            auto transport = listener.accept();
            session(*transport);
        } else {
            const Endpoint ep = parse_endpoint(connect, "127.0.0.1");
            auto transport = tcp_connect(ep.host, ep.port);
            session(*transport);
        }
    } catch (const Error &e) {
        if (e.kind() == ErrorKind::Io) throw Error(ErrorKind::Protocol, e.what());
        throw;
    }
}

}  // namespace

std::string format_degrees(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v + 0.0);
    std::string s = buf;
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

int dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err,
             const std::optional<std::string> &env_seed) {
    CLI::App app{"qtri: locate Alice from shared singlets"};
    app.name("qtri");
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    std::string seed_text;
    auto add_seed = [&](CLI::App *sub) {
        sub->add_option("--seed", seed_text, "Seed (default: $QTRI_SEED, else 0)");
    };
    auto resolve_seed = [&]() -> std::uint64_t {
        if (!seed_text.empty()) return parse_u64(seed_text, "--seed");
        if (env_seed && !env_seed->empty()) return parse_u64(*env_seed, "QTRI_SEED");
        return 0;
    };

    // simulate
    auto *simulate = app.add_subcommand("simulate", "Run one protocol round and print the transcript");
    std::size_t sim_n = 96;
    std::string sim_strategy = "mle";
    std::size_t sim_grid = 2000;
    std::string sim_truth, sim_hint, sim_nature_seed, sim_bob_seed;
    simulate->add_option("--n", sim_n, "Number of shared singlets");
    simulate->add_option("--strategy", sim_strategy, "Bob's strategy: frame|mle|collective");
    simulate->add_option("--grid", sim_grid, "Sphere grid size for mle/collective");
    simulate->add_option("--truth", sim_truth, "Alice's vertical as x,y,z (default: drawn from --nature-seed)");
    simulate->add_option("--hemisphere", sim_hint, "Hemisphere hint as x,y,z");
    simulate->add_option("--nature-seed", sim_nature_seed, "Seed for the hidden truth (default: derived from --seed)");
    simulate->add_option("--bob-seed", sim_bob_seed, "Seed for Bob's measurements (default: derived from --seed)");
    add_seed(simulate);

    // optimize
    auto *optimize = app.add_subcommand("optimize", "Optimize Bob's joint measurement for spin patterns");
    std::string opt_patterns;
    std::size_t opt_grid = 2000;
    std::size_t opt_outcomes = 0;
    double opt_tol = 1e-8;
    std::size_t opt_max_iter = 500;
    optimize->add_option("--pattern", opt_patterns, "Comma-separated u/d patterns, e.g. ud or uudd,uuuu")->required();
    optimize->add_option("--grid", opt_grid, "Fibonacci grid size for the prior");
    optimize->add_option("--outcomes", opt_outcomes, "Outcome count (0: 30 per qubit)");
    optimize->add_option("--tol", opt_tol, "Relative objective change that stops the iteration");
    optimize->add_option("--max-iter", opt_max_iter, "Iteration cap");
    add_seed(optimize);

    // bench
    auto *bench = app.add_subcommand("bench", "Monte Carlo benchmark across n");
    std::string bench_strategy = "frame";
    std::string bench_n = "8,16,32,64,128,256,512";
    std::size_t bench_trials = 2000;
    std::size_t bench_grid = 2000;
    std::size_t bench_threads = std::max(1u, std::thread::hardware_concurrency());
    std::string bench_hint, bench_out, bench_format;
    bench->add_option("--strategy", bench_strategy, "frame|mle|collective");
    bench->add_option("--n", bench_n, "Comma-separated particle counts");
    bench->add_option("--trials", bench_trials, "Trials per n");
    bench->add_option("--grid", bench_grid, "Sphere grid size for mle/collective");
    bench->add_option("--threads", bench_threads, "Worker threads");
    bench->add_option("--hemisphere", bench_hint, "Hemisphere hint as x,y,z");
    bench->add_option("--out", bench_out, "Output path (CSV also writes <stem>.summary.csv)");
    bench->add_option("--format", bench_format, "csv|json (default: from --out extension)");
    add_seed(bench);

    // alice
    auto *alice = app.add_subcommand("alice", "Alice's networked endpoint");
    std::string alice_listen, alice_connect, alice_truth, alice_hint;
    std::size_t alice_n = 96;
    std::uint64_t alice_nature_seed = 0;
    alice->add_option("--listen", alice_listen, "Listen on [host:]port");
    alice->add_option("--connect", alice_connect, "Connect to host[:port]");
    alice->add_option("--n", alice_n, "Number of shared singlets");
    alice->add_option("--truth", alice_truth, "Alice's vertical as x,y,z (default: drawn from --nature-seed)");
    alice->add_option("--nature-seed", alice_nature_seed, "Seed for the hidden truth; must match Bob's");
    alice->add_option("--hemisphere", alice_hint, "Hemisphere hint as x,y,z");
    add_seed(alice);

    // bob
    auto *bob = app.add_subcommand("bob", "Bob's networked endpoint");
    std::string bob_listen, bob_connect, bob_truth, bob_hint;
    std::string bob_strategy = "mle";
    std::size_t bob_grid = 2000;
    std::uint64_t bob_nature_seed = 0;
    bob->add_option("--listen", bob_listen, "Listen on [host:]port");
    bob->add_option("--connect", bob_connect, "Connect to host[:port]");
    bob->add_option("--strategy", bob_strategy, "frame|mle|collective");
    bob->add_option("--grid", bob_grid, "Sphere grid size for mle/collective");
    bob->add_option("--truth", bob_truth, "Physical axis of the shared singlets as x,y,z");
    bob->add_option("--nature-seed", bob_nature_seed, "Seed for the hidden truth; must match Alice's");
    bob->add_option("--hemisphere", bob_hint, "Hemisphere hint as x,y,z");
    add_seed(bob);

    // latlon
    auto *latlon = app.add_subcommand("latlon", "Convert a direction to latitude/longitude");
    double ll_x = 0.0, ll_y = 0.0, ll_z = 1.0;
    latlon->add_option("--x", ll_x, "x component")->required();
    latlon->add_option("--y", ll_y, "y component")->required();
    latlon->add_option("--z", ll_z, "z component")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kArgumentError;
    }

    try {
        if (simulate->parsed()) {
            const std::uint64_t seed = resolve_seed();
            const auto hint = optional_direction(sim_hint, "--hemisphere");
            const std::uint64_t nature_seed =
                sim_nature_seed.empty() ? mix_seed(seed, 1) : parse_u64(sim_nature_seed, "--nature-seed");
            const std::uint64_t bob_seed =
                sim_bob_seed.empty() ? mix_seed(seed, 2) : parse_u64(sim_bob_seed, "--bob-seed");
            const GroundTruth truth = nature(sim_truth, nature_seed, hint);
            const StrategyContext context(parse_strategy(sim_strategy), sim_grid, hint);
            const Transcript t = simulate_session(truth, ProtocolConfig{sim_n, seed, hint}, context, bob_seed);
            out << transcript_to_json(t) << '\n';
            out << "estimate " << latlon_line(t.estimate->direction) << '\n';
            out << "truth " << latlon_line(truth.a_z) << '\n';
            out << "error_deg " << format_degrees(angle_between(truth.a_z, t.estimate->direction) * 180.0 / std::numbers::pi)
                << '\n';
            return kSuccess;
        }

        if (optimize->parsed()) {
            const auto names = split_list(opt_patterns);
            if (names.empty()) throw Error(ErrorKind::Input, "--pattern is empty");
            nlohmann::json results = nlohmann::json::array();
            nlohmann::json comparison = nlohmann::json::object();
            bool all_converged = true;
            for (const auto &name : names) {
                const Pattern pattern = parse_pattern(name);
                SeesawConfig config;
                config.grid_size = opt_grid;
                config.n_outcomes = opt_outcomes ? opt_outcomes : default_outcome_count(pattern.size());
                config.tol = opt_tol;
                config.max_iter = opt_max_iter;
                config.seed = resolve_seed();
                const SeesawResult r = seesaw_optimize(pattern, config);
                all_converged = all_converged && r.converged;
                results.push_back(seesaw_result_json(r));
                comparison[pattern_to_string(pattern)] = r.objective;
            }
            if (names.size() == 1) {
                out << canonical_dump(results[0]) << '\n';
            } else {
                nlohmann::json doc{{"results", results}, {"F", comparison}};
                if (names.size() == 2) {
                    doc["difference"] = {{"minuend", pattern_to_string(parse_pattern(names[0]))},
                                         {"subtrahend", pattern_to_string(parse_pattern(names[1]))},
                                         {"value", results[0]["F"].get<double>() - results[1]["F"].get<double>()}};
                }
                out << canonical_dump(doc) << '\n';
            }
            if (!all_converged) {
                err << "qtri: optimizer hit --max-iter before converging\n";
                return kNumericalFailure;
            }
            return kSuccess;
        }

        if (bench->parsed()) {
            BenchmarkConfig config;
            config.strategy = parse_strategy(bench_strategy);
            for (const auto &item : split_list(bench_n)) config.n_values.push_back(parse_u64(item, "--n"));
            config.trials = bench_trials;
            config.master_seed = resolve_seed();
            config.grid_size = bench_grid;
            config.hemisphere_hint = optional_direction(bench_hint, "--hemisphere");
            config.threads = bench_threads;
            const auto results = run_trials(config);
            const auto summaries = summarize(results);
            if (!bench_out.empty()) {
                ExportFormat format = ExportFormat::Csv;
                if (!bench_format.empty()) {
                    format = parse_export_format(bench_format);
                } else if (bench_out.size() >= 5 && bench_out.substr(bench_out.size() - 5) == ".json") {
                    format = ExportFormat::Json;
                }
                export_results(results, summaries, format, bench_out);
            }
            out << summaries_to_csv(summaries);
            std::set<std::size_t> distinct(config.n_values.begin(), config.n_values.end());
            if (distinct.size() >= 3) {
                try {
                    out << "exponent " << format_double(fit_power_law(summaries)) << '\n';
                } catch (const Error &e) {
                    err << "qtri: " << e.what() << '\n';
                }
            }
            return kSuccess;
        }

        if (alice->parsed()) {
            const std::uint64_t seed = resolve_seed();
            const auto hint = optional_direction(alice_hint, "--hemisphere");
            const GroundTruth truth = nature(alice_truth, alice_nature_seed, hint);
            Transcript t;
            with_connection(alice_listen, alice_connect, [&](Transport &transport) {
                t = alice_endpoint(truth, ProtocolConfig{alice_n, seed, hint}, transport);
            });
            out << transcript_to_json(t) << '\n';
            out << "estimate " << latlon_line(t.estimate->direction) << '\n';
            return kSuccess;
        }

        if (bob->parsed()) {
            const auto hint = optional_direction(bob_hint, "--hemisphere");
            const GroundTruth particles = nature(bob_truth, bob_nature_seed, hint);
            const StrategyContext context(parse_strategy(bob_strategy), bob_grid, hint);
            const BobOptions options{resolve_seed(), hint};
            Transcript t;
            with_connection(bob_listen, bob_connect, [&](Transport &transport) {
                t = bob_endpoint(context, particles, options, transport);
            });
            out << transcript_to_json(t) << '\n';
            out << "estimate " << latlon_line(t.estimate->direction) << '\n';
            return kSuccess;
        }

        if (latlon->parsed()) {
            out << latlon_line(Direction::normalized(ll_x, ll_y, ll_z)) << '\n';
            return kSuccess;
        }
    } catch (const Error &e) {
        err << "qtri: " << error_kind_name(e.kind()) << ": " << e.what() << '\n';
        return exit_code_for(e.kind());
    }
    return kArgumentError;
}

}  // namespace qtri::cli
