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

#include "qtri/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "qtri/error.hpp"
#include "qtri/json_io.hpp"

namespace qtri {
namespace {

constexpr std::string_view kResultsHeader = "n,strategy,trial,seed,fidelity,angle_deg";
constexpr std::string_view kSummaryHeader = "n,strategy,trials,mean_fidelity,std_err,mean_angle_deg";

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

std::vector<std::vector<std::string>> csv_rows(std::string_view text, std::string_view header) {
    std::vector<std::vector<std::string>> rows;
    std::size_t start = 0;
    bool seen_header = false;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view line = text.substr(start, end - start);
        start = end + 1;
        if (line.empty()) continue;
        if (!seen_header) {
            if (line != header) throw Error(ErrorKind::Parse, "unexpected CSV header: " + std::string(line));
            seen_header = true;
            continue;
        }
        rows.push_back(split(line, ','));
        if (rows.back().size() != 6) throw Error(ErrorKind::Parse, "CSV row needs 6 fields: " + std::string(line));
    }
    if (!seen_header) throw Error(ErrorKind::Parse, "CSV is missing its header");
    return rows;
}

double to_double(const std::string &s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw Error(ErrorKind::Parse, "bad number '" + s + "'");
    return v;
}

std::uint64_t to_u64(const std::string &s) {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw Error(ErrorKind::Parse, "bad integer '" + s + "'");
    return v;
}

nlohmann::json result_json(const TrialResult &r) {
    return {{"n", r.n},         {"strategy", r.strategy}, {"trial", r.trial},
            {"seed", r.seed},   {"fidelity", r.fidelity}, {"angle_deg", r.angle_deg}};
}

nlohmann::json summary_json(const Summary &s) {
    return {{"n", s.n},
            {"strategy", s.strategy},
            {"trials", s.trials},
            {"mean_fidelity", s.mean_fidelity},
            {"std_err", s.std_err},
            {"mean_angle_deg", s.mean_angle_deg}};
}

}  // namespace

TrialResult run_trial(std::size_t n, std::size_t trial, std::uint64_t seed, const std::optional<Direction> &hint,
                      const EstimatorFn &estimator, const std::string &label) {
    Rng rng(seed);
    const GroundTruth truth{hint ? random_direction_in_hemisphere(rng, *hint) : random_direction(rng)};
    const ProtocolConfig config{n, seed, hint};
    const ParticleBox box(truth, alice_measure(truth, config, rng));
    const Estimate estimate = estimator(box, rng);
    return TrialResult{n,
                       label,
                       trial,
                       seed,
                       direction_fidelity(truth.a_z, estimate.direction),
                       angle_between(truth.a_z, estimate.direction) * 180.0 / std::numbers::pi};
}

std::vector<TrialResult> run_trials(const BenchmarkConfig &config, const EstimatorFn &estimator,
                                    const std::string &label) {
    if (config.trials == 0) throw Error(ErrorKind::Configuration, "trials must be at least 1");
    if (config.n_values.empty()) throw Error(ErrorKind::Configuration, "n_values must not be empty");

    std::vector<std::pair<std::size_t, std::size_t>> jobs;
    for (std::size_t n : config.n_values) {
        for (std::size_t t = 0; t < config.trials; ++t) jobs.emplace_back(n, t);
    }
    std::vector<TrialResult> results(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                const auto [n, t] = jobs[i];
                results[i] = run_trial(n, t, mix_seed(config.master_seed, t), config.hemisphere_hint, estimator, label);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(jobs.size());
            }
        }
    };
    std::size_t threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, jobs.size());
    {
        std::vector<std::jthread> pool;
        for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
        worker();
    }
    if (failure) std::rethrow_exception(failure);

    std::sort(results.begin(), results.end(), [](const TrialResult &a, const TrialResult &b) {
        return std::tie(a.n, a.strategy, a.trial) < std::tie(b.n, b.strategy, b.trial);
    });
    return results;
}

std::vector<TrialResult> run_trials(const BenchmarkConfig &config) {
    if (config.strategy == Strategy::Collective) {
        for (std::size_t n : config.n_values) {
            if (n > kMaxCollectiveQubits) {
                throw Error(ErrorKind::SizeLimit, "collective strategy supports n <= " +
                                                      std::to_string(kMaxCollectiveQubits) + ", got " +
                                                      std::to_string(n));
            }
        }
    }
    const auto context = std::make_shared<StrategyContext>(config.strategy, config.grid_size, config.hemisphere_hint);
    return run_trials(
        config, [context](const ParticleBox &box, Rng &rng) { return context->estimate(box, rng); },
        strategy_name(config.strategy));
}

std::vector<Summary> summarize(const std::vector<TrialResult> &results) {
    if (results.empty()) throw Error(ErrorKind::Input, "cannot summarize an empty result set");
    std::map<std::pair<std::size_t, std::string>, std::vector<const TrialResult *>> groups;
    for (const auto &r : results) groups[{r.n, r.strategy}].push_back(&r);
    std::vector<Summary> out;
    for (auto &[key, members] : groups) {
        // Sum in trial order so the result does not depend on input order.
        std::sort(members.begin(), members.end(), [](const TrialResult *a, const TrialResult *b) {
            return std::tie(a->trial, a->seed, a->fidelity) < std::tie(b->trial, b->seed, b->fidelity);
        });
        const double count = static_cast<double>(members.size());
        double fid = 0.0;
        double angle = 0.0;
        for (const auto *r : members) {
            fid += r->fidelity;
            angle += r->angle_deg;
        }
        const double mean = fid / count;
        double var = 0.0;
        for (const auto *r : members) var += (r->fidelity - mean) * (r->fidelity - mean);
        const double std_err = members.size() > 1 ? std::sqrt(var / (count - 1.0)) / std::sqrt(count) : 0.0;
        out.push_back({key.first, key.second, mean, std_err, angle / count, members.size()});
    }
    return out;
}

double fit_power_law(const std::vector<Summary> &summaries) {
    std::set<std::string> strategies;
    std::set<std::size_t> distinct;
    for (const auto &s : summaries) {
        strategies.insert(s.strategy);
        distinct.insert(s.n);
        if (!(s.mean_angle_deg > 0.0) || s.n == 0) {
            throw Error(ErrorKind::Fit, "power-law fit needs positive n and mean angles");
        }
    }
    if (strategies.size() > 1) throw Error(ErrorKind::Fit, "power-law fit takes summaries of one strategy");
    if (distinct.size() < 3) throw Error(ErrorKind::Fit, "power-law fit needs at least three distinct n");
    double sx = 0.0, sy = 0.0;
    for (const auto &s : summaries) {
        sx += std::log(static_cast<double>(s.n));
        sy += std::log(s.mean_angle_deg);
    }
    const double k = static_cast<double>(summaries.size());
    const double mx = sx / k, my = sy / k;
    double sxx = 0.0, sxy = 0.0;
    for (const auto &s : summaries) {
        const double dx = std::log(static_cast<double>(s.n)) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(s.mean_angle_deg) - my);
    }
    return sxy / sxx;
}

ExportFormat parse_export_format(std::string_view name) {
    if (name == "csv") return ExportFormat::Csv;
    if (name == "json") return ExportFormat::Json;
    throw Error(ErrorKind::Input, "unknown export format '" + std::string(name) + "' (expected csv|json)");
}

std::string results_to_csv(const std::vector<TrialResult> &results) {
    std::string out(kResultsHeader);
    out += '\n';
    for (const auto &r : results) {
        out += std::to_string(r.n) + ',' + r.strategy + ',' + std::to_string(r.trial) + ',' + std::to_string(r.seed) +
               ',' + format_double(r.fidelity) + ',' + format_double(r.angle_deg) + '\n';
    }
    return out;
}

std::string summaries_to_csv(const std::vector<Summary> &summaries) {
    std::string out(kSummaryHeader);
    out += '\n';
    for (const auto &s : summaries) {
        out += std::to_string(s.n) + ',' + s.strategy + ',' + std::to_string(s.trials) + ',' +
               format_double(s.mean_fidelity) + ',' + format_double(s.std_err) + ',' +
               format_double(s.mean_angle_deg) + '\n';
    }
    return out;
}

std::vector<TrialResult> results_from_csv(std::string_view text) {
    std::vector<TrialResult> out;
    for (const auto &f : csv_rows(text, kResultsHeader)) {
        out.push_back({to_u64(f[0]), f[1], to_u64(f[2]), to_u64(f[3]), to_double(f[4]), to_double(f[5])});
    }
    return out;
}

std::vector<Summary> summaries_from_csv(std::string_view text) {
    std::vector<Summary> out;
    for (const auto &f : csv_rows(text, kSummaryHeader)) {
        out.push_back({to_u64(f[0]), f[1], to_double(f[3]), to_double(f[4]), to_double(f[5]), to_u64(f[2])});
    }
    return out;
}

std::string export_to_json(const std::vector<TrialResult> &results, const std::vector<Summary> &summaries) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto &x : results) r.push_back(result_json(x));
    nlohmann::json s = nlohmann::json::array();
    for (const auto &x : summaries) s.push_back(summary_json(x));
    return canonical_dump({{"results", r}, {"summaries", s}});
}

std::string summary_path(const std::string &path) {
    std::filesystem::path p(path);
    const std::string ext = p.extension().string();
    p.replace_extension();
    return p.string() + ".summary" + (ext.empty() ? std::string(".csv") : ext);
}

void export_results(const std::vector<TrialResult> &results, const std::vector<Summary> &summaries,
                    ExportFormat format, const std::string &path) {
    if (format == ExportFormat::Json) {
        write_file_atomically(path, export_to_json(results, summaries) + "\n");
        return;
    }
    write_file_atomically(path, results_to_csv(results));
    write_file_atomically(summary_path(path), summaries_to_csv(summaries));
}

}  // namespace qtri
