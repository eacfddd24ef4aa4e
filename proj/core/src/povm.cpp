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

#include "qtri/povm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtri/error.hpp"

namespace qtri {
namespace {

constexpr double kRollbackSlack = 1e-10;
constexpr double kReprojectThreshold = 1e-10;
constexpr double kRelativeNullThreshold = 1e-12;
constexpr double kGuessFloor = 1e-12;

double max_eigenvalue(const HermitianOperator &h) { return eigh(h).values.back(); }

double null_threshold_for(const HermitianOperator &h) {
    return kRelativeNullThreshold * std::max(max_eigenvalue(h), 1e-300);
}

DenseMatrix sum_of(const std::vector<HermitianOperator> &ops, std::size_t dim) {
    DenseMatrix s = DenseMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto &op : ops) s += op.dense();
    return s;
}

// S^{-1/2} A_j S^{-1/2} + (I - P_S)/J.
std::vector<HermitianOperator> complete(const std::vector<HermitianOperator> &raw) {
    const std::size_t dim = raw.front().dim();
    const HermitianOperator s(sum_of(raw, dim));
    const OperatorRoots roots = psd_sqrt_and_invsqrt(s, null_threshold_for(s));
    const DenseMatrix complement =
        (DenseMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)) -
         roots.support.dense()) /
        static_cast<double>(raw.size());
    std::vector<HermitianOperator> out;
    out.reserve(raw.size());
    for (const auto &a : raw) {
        out.emplace_back(DenseMatrix(roots.inv_sqrt.dense() * a.dense() * roots.inv_sqrt.dense() + complement));
    }
    return out;
}

void check_pattern_dim(const Povm &povm, std::size_t dim) {
    if (povm.dim() != dim) {
        throw Error(ErrorKind::Shape, "POVM dimension " + std::to_string(povm.dim()) +
                                          " does not match the prior dimension " + std::to_string(dim));
    }
}

}  // namespace

Povm::Povm(std::vector<HermitianOperator> elements, std::vector<Direction> guesses)
    : elements_(std::move(elements)), guesses_(std::move(guesses)) {
    if (elements_.empty()) throw Error(ErrorKind::Input, "POVM needs at least one element");
    if (elements_.size() != guesses_.size()) throw Error(ErrorKind::Input, "POVM elements and guesses differ in count");
    const std::size_t d = elements_.front().dim();
    for (const auto &e : elements_) {
        if (e.dim() != d) throw Error(ErrorKind::Shape, "POVM elements differ in dimension");
    }
    min_eigenvalue_ = qtri::min_eigenvalue(elements_.front());
    for (std::size_t j = 1; j < elements_.size(); ++j) {
        min_eigenvalue_ = std::min(min_eigenvalue_, qtri::min_eigenvalue(elements_[j]));
    }
    DenseMatrix s = sum_of(elements_, d);
    s -= DenseMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    completeness_residual_ = s.norm();
    if (min_eigenvalue_ < kPositivityFloor) {
        throw Error(ErrorKind::Input, "POVM element has eigenvalue " + std::to_string(min_eigenvalue_));
    }
    if (completeness_residual_ > kCompletenessTolerance) {
        throw Error(ErrorKind::Input, "POVM completeness residual " + std::to_string(completeness_residual_));
    }
}

Povm Povm::with_guesses(std::vector<Direction> guesses) const {
    if (guesses.size() != guesses_.size()) throw Error(ErrorKind::Input, "guess count mismatch");
    Povm out = *this;
    out.guesses_ = std::move(guesses);
    return out;
}

PriorMoments prior_moments(const Pattern &pattern, const SphereGrid &grid) {
    if (grid.size() == 0) throw Error(ErrorKind::Input, "empty grid");
    const std::size_t dim = pattern_state(pattern, Direction::plus_z()).dim();
    const auto d = static_cast<Eigen::Index>(dim);
    DenseMatrix mean = DenseMatrix::Zero(d, d);
    std::array<DenseMatrix, 3> first{DenseMatrix::Zero(d, d), DenseMatrix::Zero(d, d), DenseMatrix::Zero(d, d)};
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const PureState state = pattern_state(pattern, grid.nodes[g]);
        const DenseVector &psi = state.amplitudes();
        const DenseMatrix rho = psi * psi.adjoint();
        mean += grid.weights[g] * rho;
        for (std::size_t k = 0; k < 3; ++k) first[k] += (grid.weights[g] * grid.nodes[g][k]) * rho;
    }
    return PriorMoments{HermitianOperator(mean),
                        {HermitianOperator(first[0]), HermitianOperator(first[1]), HermitianOperator(first[2])}};
}

std::vector<HermitianOperator> score_operators(const PriorMoments &moments, const std::vector<Direction> &guesses) {
    std::vector<HermitianOperator> out;
    out.reserve(guesses.size());
    for (const auto &m : guesses) {
        out.emplace_back(DenseMatrix(0.5 * (moments.mean.dense() + m.x() * moments.first[0].dense() +
                                            m.y() * moments.first[1].dense() + m.z() * moments.first[2].dense())));
    }
    return out;
}

std::vector<HermitianOperator> score_operators(const Pattern &pattern, const std::vector<Direction> &guesses,
                                               const SphereGrid &grid) {
    return score_operators(prior_moments(pattern, grid), guesses);
}

double objective(const Povm &povm, const std::vector<HermitianOperator> &scores) {
    if (scores.size() != povm.size()) throw Error(ErrorKind::Shape, "score count does not match POVM size");
    double total = 0.0;
    for (std::size_t j = 0; j < povm.size(); ++j) total += trace_product(povm.elements()[j], scores[j]);
    return total;
}

double mean_fidelity(const Povm &povm, const PriorMoments &moments) {
    check_pattern_dim(povm, moments.dim());
    return std::clamp(objective(povm, score_operators(moments, povm.guesses())), 0.0, 1.0);
}

double mean_fidelity(const Povm &povm, const Pattern &pattern, const SphereGrid &grid) {
    check_pattern_dim(povm, std::size_t{1} << pattern.size());
    return mean_fidelity(povm, prior_moments(pattern, grid));
}

PovmUpdate povm_update(const Povm &povm, const std::vector<HermitianOperator> &scores) {
    const double before = objective(povm, scores);
    const std::size_t dim = povm.dim();
    const auto d = static_cast<Eigen::Index>(dim);

    std::vector<DenseMatrix> sandwiched;
    sandwiched.reserve(povm.size());
    DenseMatrix lambda = DenseMatrix::Zero(d, d);
    for (std::size_t j = 0; j < povm.size(); ++j) {
        const DenseMatrix &w = scores[j].dense();
        sandwiched.push_back(w * povm.elements()[j].dense() * w);
        lambda += sandwiched.back();
    }
    const HermitianOperator lambda_op(lambda);
    const OperatorRoots roots = psd_sqrt_and_invsqrt(lambda_op, null_threshold_for(lambda_op));

    // Every direction the scores can see must survive in supp(L).
    const HermitianOperator score_sum(sum_of(scores, dim));
    const OperatorRoots score_roots = psd_sqrt_and_invsqrt(score_sum, null_threshold_for(score_sum));
    const double lost = (score_roots.support.dense() * (DenseMatrix::Identity(d, d) - roots.support.dense()))
                            .trace()
                            .real();
    if (lost > 1e-6) {
        throw Error(ErrorKind::NumericalFailure,
                    "povm_update: fixed-point operator is singular on the support of the scores");
    }

    const DenseMatrix complement =
        (DenseMatrix::Identity(d, d) - roots.support.dense()) / static_cast<double>(povm.size());
    std::vector<HermitianOperator> next;
    next.reserve(povm.size());
    for (const auto &x : sandwiched) {
        next.emplace_back(DenseMatrix(roots.inv_sqrt.dense() * x * roots.inv_sqrt.dense() + complement));
    }
    DenseMatrix residual = sum_of(next, dim) - DenseMatrix::Identity(d, d);
    if (residual.norm() > kReprojectThreshold) next = complete(next);

    Povm updated(std::move(next), povm.guesses());
    const double after = objective(updated, scores);
    if (after < before - kRollbackSlack) return PovmUpdate{povm, before, before, true};
    return PovmUpdate{std::move(updated), before, after, false};
}

Povm guess_update(const Povm &povm, const PriorMoments &moments) {
    check_pattern_dim(povm, moments.dim());
    std::vector<Direction> guesses = povm.guesses();
    for (std::size_t j = 0; j < povm.size(); ++j) {
        const HermitianOperator &m = povm.elements()[j];
        const double vx = trace_product(m, moments.first[0]);
        const double vy = trace_product(m, moments.first[1]);
        const double vz = trace_product(m, moments.first[2]);
        if (std::sqrt(vx * vx + vy * vy + vz * vz) >= kGuessFloor) guesses[j] = Direction::normalized(vx, vy, vz);
    }
    return povm.with_guesses(std::move(guesses));
}

Povm guess_update(const Povm &povm, const Pattern &pattern, const SphereGrid &grid) {
    return guess_update(povm, prior_moments(pattern, grid));
}

Povm whiten_to_povm(const std::vector<HermitianOperator> &raw, std::vector<Direction> guesses) {
    if (raw.empty()) throw Error(ErrorKind::Input, "whiten_to_povm needs at least one operator");
    return Povm(complete(raw), std::move(guesses));
}

}  // namespace qtri
