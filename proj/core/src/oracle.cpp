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

#include "qtri/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qtri/bloch.hpp"
#include "qtri/error.hpp"
#include "qtri/linalg.hpp"
#include "qtri/rng.hpp"

namespace qtri {
namespace {

class OracleProblem {
   public:
    OracleProblem(const Pattern &pattern, const OracleConfig &config)
        : grid_(fibonacci_grid(config.grid_size)), outcomes_(config.n_outcomes) {
        for (const auto &n : grid_.nodes) {
            const PureState state = pattern_state(pattern, n);
            const DenseVector &psi = state.amplitudes();
            states_.push_back(psi * psi.adjoint());
        }
        dim_ = static_cast<Eigen::Index>(states_.front().rows());
    }

    Eigen::Index dim() const { return dim_; }
    std::size_t outcomes() const { return outcomes_; }

    // sum_g w_g f(n_g, m) rho_g, summed node by node.
    DenseMatrix score(const std::array<double, 3> &guess) const {
        const double norm = std::sqrt(guess[0] * guess[0] + guess[1] * guess[1] + guess[2] * guess[2]);
        DenseMatrix w = DenseMatrix::Zero(dim_, dim_);
        for (std::size_t g = 0; g < grid_.size(); ++g) {
            const Direction &n = grid_.nodes[g];
            const double cosine = norm > 0.0 ? (n.x() * guess[0] + n.y() * guess[1] + n.z() * guess[2]) / norm : 0.0;
            w += (grid_.weights[g] * (1.0 + cosine) / 2.0) * states_[g];
        }
        return w;
    }

    double evaluate(const std::vector<DenseMatrix> &factors, const std::vector<DenseMatrix> &scores) const {
        DenseMatrix s = DenseMatrix::Zero(dim_, dim_);
        std::vector<DenseMatrix> raw;
        raw.reserve(factors.size());
        for (const auto &b : factors) {
            raw.push_back(b * b.adjoint());
            s += raw.back();
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver{Eigen::MatrixXcd(s)};
        if (solver.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "oracle: eigensolver failed");
        const double floor = 1e-12 * solver.eigenvalues().maxCoeff();
        Eigen::VectorXd inv(dim_);
        for (Eigen::Index i = 0; i < dim_; ++i) {
            const double l = solver.eigenvalues()(i);
            inv(i) = l > floor ? 1.0 / std::sqrt(l) : 0.0;
        }
        const Eigen::MatrixXcd &v = solver.eigenvectors();
        const Eigen::MatrixXcd whiten = v * inv.cast<Complex>().asDiagonal() * v.adjoint();
        double total = 0.0;
        for (std::size_t j = 0; j < raw.size(); ++j) {
            const Eigen::MatrixXcd m = whiten * raw[j] * whiten;
            total += m.cwiseProduct(scores[j].transpose()).sum().real();
        }
        return total;
    }

   private:
    SphereGrid grid_;
    std::vector<DenseMatrix> states_;
    std::size_t outcomes_;
    Eigen::Index dim_ = 0;
};

}  // namespace

OracleResult brute_force_oracle(const Pattern &pattern, const OracleConfig &config) {
    if (pattern.empty() || pattern.size() > 2) {
        throw Error(ErrorKind::SizeLimit, "brute_force_oracle handles patterns of one or two qubits");
    }
    if (config.n_outcomes < 2 || config.restarts == 0) {
        throw Error(ErrorKind::Configuration, "oracle needs >= 2 outcomes and >= 1 restart");
    }
    const OracleProblem problem(pattern, config);
    const Eigen::Index d = problem.dim();
    const std::size_t outcomes = problem.outcomes();
    Rng rng(config.seed);
    OracleResult result;

    for (std::size_t restart = 0; restart < config.restarts; ++restart) {
        std::vector<DenseMatrix> factors(outcomes, DenseMatrix(d, d));
        std::vector<std::array<double, 3>> guesses(outcomes);
        std::vector<DenseMatrix> scores;
        for (std::size_t j = 0; j < outcomes; ++j) {
            for (Eigen::Index r = 0; r < d; ++r) {
                for (Eigen::Index c = 0; c < d; ++c) factors[j](r, c) = Complex(rng.normal(), rng.normal());
            }
            guesses[j] = {rng.normal(), rng.normal(), rng.normal()};
            scores.push_back(problem.score(guesses[j]));
        }
        double best = problem.evaluate(factors, scores);
        ++result.evaluations;

        double step = 0.5;
        for (std::size_t sweep = 0; sweep < config.max_sweeps && step > 1e-5; ++sweep) {
            bool improved = false;
            for (std::size_t j = 0; j < outcomes; ++j) {
                for (Eigen::Index r = 0; r < d; ++r) {
                    for (Eigen::Index c = 0; c < d; ++c) {
                        for (int part = 0; part < 2; ++part) {
                            for (double delta : {step, -step}) {
                                const Complex saved = factors[j](r, c);
                                factors[j](r, c) += part == 0 ? Complex(delta, 0.0) : Complex(0.0, delta);
                                const double value = problem.evaluate(factors, scores);
                                ++result.evaluations;
                                if (value > best) {
                                    best = value;
                                    improved = true;
                                    break;
                                }
                                factors[j](r, c) = saved;
                            }
                        }
                    }
                }
                for (std::size_t k = 0; k < 3; ++k) {
                    for (double delta : {step, -step}) {
                        const std::array<double, 3> saved = guesses[j];
                        guesses[j][k] += delta;
                        const DenseMatrix saved_score = scores[j];
                        scores[j] = problem.score(guesses[j]);
                        const double value = problem.evaluate(factors, scores);
                        ++result.evaluations;
                        if (value > best) {
                            best = value;
                            improved = true;
                            break;
                        }
                        guesses[j] = saved;
                        scores[j] = saved_score;
                    }
                }
            }
            if (!improved) step /= 2.0;
        }
        result.best_objective = std::max(result.best_objective, best);
    }
    return result;
}

}  // namespace qtri
