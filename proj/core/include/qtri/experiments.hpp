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
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtri/bloch.hpp"
#include "qtri/protocol.hpp"
#include "qtri/strategies.hpp"

namespace qtri {

struct BenchmarkConfig {
    Strategy strategy = Strategy::Frame;
    std::vector<std::size_t> n_values;
    std::size_t trials = 1;
    std::uint64_t master_seed = 0;
    std::size_t grid_size = 2000;
    std::optional<Direction> hemisphere_hint;
    std::size_t threads = 0;  // 0: hardware concurrency
};

struct TrialResult {
    std::size_t n = 0;
    std::string strategy;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    double fidelity = 0.0;
    double angle_deg = 0.0;

    bool operator==(const TrialResult &) const = default;
};

struct Summary {
    std::size_t n = 0;
    std::string strategy;
    double mean_fidelity = 0.0;
    double std_err = 0.0;  // sample standard deviation of fidelity / sqrt(trials)
    double mean_angle_deg = 0.0;
    std::size_t trials = 0;

    bool operator==(const Summary &) const = default;
};

/// Bob's side of one trial.
using EstimatorFn = std::function<Estimate(const ParticleBox &, Rng &)>;

/// One protocol run: truth drawn uniformly (within the hint's hemisphere if
/// set), Alice's announcements, Bob's estimate, and the score. Everything
/// is drawn from a single Rng seeded with `seed`.
TrialResult run_trial(std::size_t n, std::size_t trial, std::uint64_t seed, const std::optional<Direction> &hint,
                      const EstimatorFn &estimator, const std::string &label);

/// Every (n, trial) pair with seed mix_seed(master_seed, trial), sorted by
/// (n, strategy, trial). Output does not depend on the thread count.
/// Throws SizeLimit for the collective strategy with n > 8.
std::vector<TrialResult> run_trials(const BenchmarkConfig &config);
/// Same harness with a caller-supplied estimator.
std::vector<TrialResult> run_trials(const BenchmarkConfig &config, const EstimatorFn &estimator,
                                    const std::string &label);

/// Grouped by (n, strategy) in ascending order. Throws Input when empty.
std::vector<Summary> summarize(const std::vector<TrialResult> &results);

/// Least-squares slope of log(mean angle) against log(n). Needs one
/// strategy, at least three distinct n and positive angles; throws Fit
/// otherwise.
double fit_power_law(const std::vector<Summary> &summaries);

enum class ExportFormat { Csv, Json };

ExportFormat parse_export_format(std::string_view name);

std::string results_to_csv(const std::vector<TrialResult> &results);
std::string summaries_to_csv(const std::vector<Summary> &summaries);
std::vector<TrialResult> results_from_csv(std::string_view text);
std::vector<Summary> summaries_from_csv(std::string_view text);

/// {"results":[...],"summaries":[...]} with the CSV column names as keys.
std::string export_to_json(const std::vector<TrialResult> &results, const std::vector<Summary> &summaries);

/// CSV: results go to `path`, summaries to summary_path(path). JSON: one
/// document at `path`. Writes are atomic; failures throw Io naming the path.
void export_results(const std::vector<TrialResult> &results, const std::vector<Summary> &summaries,
                    ExportFormat format, const std::string &path);

/// "out.csv" -> "out.summary.csv".
std::string summary_path(const std::string &path);

}  // namespace qtri
