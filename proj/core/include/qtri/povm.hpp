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

#include <array>
#include <cstddef>
#include <vector>

#include "qtri/bloch.hpp"
#include "qtri/linalg.hpp"
#include "qtri/protocol.hpp"

namespace qtri {

/// Tolerances every Povm satisfies.
inline constexpr double kCompletenessTolerance = 1e-8;
inline constexpr double kPositivityFloor = -1e-10;

/// Joint measurement: PSD elements summing to the identity, each outcome
/// paired with the direction Bob guesses when he sees it.
class Povm {
   public:
    /// Throws Input when lengths/dims disagree, an element has an eigenvalue
    /// below kPositivityFloor, or ||sum M_j - I||_F > kCompletenessTolerance.
    Povm(std::vector<HermitianOperator> elements, std::vector<Direction> guesses);

    std::size_t size() const { return elements_.size(); }
    std::size_t dim() const { return elements_.front().dim(); }
    const std::vector<HermitianOperator> &elements() const { return elements_; }
    const std::vector<Direction> &guesses() const { return guesses_; }

    /// ||sum M_j - I||_F, computed at construction.
    double completeness_residual() const { return completeness_residual_; }
    /// Smallest eigenvalue over all elements, computed at construction.
    double min_eigenvalue() const { return min_eigenvalue_; }

    Povm with_guesses(std::vector<Direction> guesses) const;

   private:
    std::vector<HermitianOperator> elements_;
    std::vector<Direction> guesses_;
    double completeness_residual_ = 0.0;
    double min_eigenvalue_ = 0.0;
};

/// Prior averages of the pattern state over a grid:
///   mean     = sum_g w_g rho(n_g)
///   first[k] = sum_g w_g (n_g)_k rho(n_g)
/// Because f(n, m) = (1 + n.m)/2 is affine in n, every score operator and
/// guess vector is a linear combination of these four operators.
struct PriorMoments {
    HermitianOperator mean;
    std::array<HermitianOperator, 3> first;

    std::size_t dim() const { return mean.dim(); }
};

PriorMoments prior_moments(const Pattern &pattern, const SphereGrid &grid);

/// W_j = sum_g w_g f(n_g, m_j) rho(n_g), one per guess.
std::vector<HermitianOperator> score_operators(const Pattern &pattern, const std::vector<Direction> &guesses,
                                               const SphereGrid &grid);
std::vector<HermitianOperator> score_operators(const PriorMoments &moments, const std::vector<Direction> &guesses);

/// sum_j tr(M_j W_j) for precomputed score operators.
double objective(const Povm &povm, const std::vector<HermitianOperator> &scores);

/// F = sum_g w_g sum_j tr(M_j rho(n_g)) f(n_g, m_j). Throws Shape when the
/// POVM dimension is not 2^len(pattern).
double mean_fidelity(const Povm &povm, const Pattern &pattern, const SphereGrid &grid);
double mean_fidelity(const Povm &povm, const PriorMoments &moments);

struct PovmUpdate {
    Povm povm;
    double objective_before = 0.0;
    double objective_after = 0.0;
    bool rolled_back = false;
};

/// One fixed-point step M_j <- L^{-1/2} W_j M_j W_j L^{-1/2} with
/// L = sum_j W_j M_j W_j. The part of the space that no W_j reaches is
/// split evenly across outcomes so completeness holds on the full space.
/// If the objective drops by more than 1e-10 the input POVM is returned with
/// `rolled_back` set. Throws NumericalFailure if L loses rank on the support
/// of the scores.
PovmUpdate povm_update(const Povm &povm, const std::vector<HermitianOperator> &scores);

/// m_j <- v_j / |v_j| with v_j = sum_g w_g tr(M_j rho(n_g)) n_g; keeps the
/// old guess when |v_j| < 1e-12.
Povm guess_update(const Povm &povm, const Pattern &pattern, const SphereGrid &grid);
Povm guess_update(const Povm &povm, const PriorMoments &moments);

/// Whitens raw PSD operators into a POVM: S^{-1/2} A_j S^{-1/2} with
/// S = sum_j A_j, plus an even share of the complement of supp(S).
Povm whiten_to_povm(const std::vector<HermitianOperator> &raw, std::vector<Direction> guesses);

}  // namespace qtri
