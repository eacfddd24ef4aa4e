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

#include "qtri/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtri/error.hpp"

namespace qtri {
namespace {

constexpr double kClipFloor = -1e-8;

void check_size(std::size_t rows, std::size_t cols) {
    if (rows > kMaxDim || cols > kMaxDim) {
        throw Error(ErrorKind::SizeLimit, "matrix " + std::to_string(rows) + "x" + std::to_string(cols) +
                                              " exceeds the " + std::to_string(kMaxDim) + " dimension cap");
    }
}

void check_same_shape(const DenseMatrix &a, const DenseMatrix &b, const char *what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorKind::Shape, std::string(what) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                                          std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                                          std::to_string(b.cols()));
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols) {
    check_size(rows, cols);
    m_ = DenseMatrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

ComplexMatrix::ComplexMatrix(DenseMatrix dense) : m_(std::move(dense)) {
    check_size(rows(), cols());
    if (!m_.allFinite()) throw Error(ErrorKind::NumericalFailure, "matrix has non-finite entries");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    check_size(n, n);
    return ComplexMatrix(DenseMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix out(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out.m_(i, i) = values[i];
    return out;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    DenseMatrix m(r, c);
    std::size_t i = 0;
    for (const auto &row : rows) {
        if (row.size() != c) throw Error(ErrorKind::Shape, "ragged rows in matrix literal");
        std::size_t j = 0;
        for (const Complex &v : row) m(i, j++) = v;
        ++i;
    }
    return ComplexMatrix(std::move(m));
}

ComplexMatrix ComplexMatrix::adjoint() const { return ComplexMatrix(DenseMatrix(m_.adjoint())); }

double ComplexMatrix::max_abs_diff(const ComplexMatrix &other) const {
    check_same_shape(m_, other.m_, "max_abs_diff");
    if (m_.size() == 0) return 0.0;
    return (m_ - other.m_).cwiseAbs().maxCoeff();
}

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols() != b.rows()) throw Error(ErrorKind::Shape, "matrix product: inner dimensions differ");
    return ComplexMatrix(DenseMatrix(a.m_ * b.m_));
}

ComplexMatrix operator+(const ComplexMatrix &a, const ComplexMatrix &b) {
    check_same_shape(a.m_, b.m_, "matrix sum");
    return ComplexMatrix(DenseMatrix(a.m_ + b.m_));
}

ComplexMatrix operator-(const ComplexMatrix &a, const ComplexMatrix &b) {
    check_same_shape(a.m_, b.m_, "matrix difference");
    return ComplexMatrix(DenseMatrix(a.m_ - b.m_));
}

ComplexMatrix operator*(Complex s, const ComplexMatrix &a) { return ComplexMatrix(DenseMatrix(s * a.m_)); }

PureState::PureState(DenseVector amplitudes) : v_(std::move(amplitudes)) {
    if (v_.size() == 0) throw Error(ErrorKind::Shape, "empty state vector");
    if (static_cast<std::size_t>(v_.size()) > kMaxDim) throw Error(ErrorKind::SizeLimit, "state exceeds dimension cap");
    if (!v_.allFinite()) throw Error(ErrorKind::NumericalFailure, "state has non-finite amplitudes");
    if (std::abs(v_.norm() - 1.0) > 1e-10) {
        throw Error(ErrorKind::Input, "state norm deviates from 1 by " + std::to_string(v_.norm() - 1.0));
    }
}

PureState::PureState(std::initializer_list<Complex> amplitudes)
    : PureState([&] {
          DenseVector v(static_cast<Eigen::Index>(amplitudes.size()));
          Eigen::Index i = 0;
          for (const Complex &a : amplitudes) v(i++) = a;
          return v;
      }()) {}

Complex PureState::inner(const PureState &other) const {
    if (dim() != other.dim()) throw Error(ErrorKind::Shape, "inner product: dimension mismatch");
    return v_.dot(other.v_);  // Eigen's dot conjugates the left operand
}

HermitianOperator::HermitianOperator(const DenseMatrix &m) {
    if (m.rows() != m.cols()) throw Error(ErrorKind::Shape, "Hermitian operator must be square");
    const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
    const double asym = m.size() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-6 * std::max(1.0, scale)) {
        throw Error(ErrorKind::Input, "matrix is not Hermitian (residual " + std::to_string(asym) + ")");
    }
    matrix_ = ComplexMatrix(DenseMatrix(0.5 * (m + m.adjoint())));
}

HermitianOperator::HermitianOperator(const ComplexMatrix &m) : HermitianOperator(m.dense()) {}

HermitianOperator HermitianOperator::identity(std::size_t n) { return HermitianOperator(ComplexMatrix::identity(n)); }

HermitianOperator HermitianOperator::zero(std::size_t n) { return HermitianOperator(ComplexMatrix(n, n)); }

HermitianOperator HermitianOperator::projector(const PureState &psi) {
    return HermitianOperator(DenseMatrix(psi.amplitudes() * psi.amplitudes().adjoint()));
}

double HermitianOperator::expectation(const PureState &psi) const {
    if (psi.dim() != dim()) throw Error(ErrorKind::Shape, "expectation: dimension mismatch");
    return psi.amplitudes().dot(dense() * psi.amplitudes()).real();
}

double HermitianOperator::trace() const { return dense().trace().real(); }

double HermitianOperator::hermiticity_residual() const {
    if (dim() == 0) return 0.0;
    return (dense() - dense().adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.empty() || b.empty()) throw Error(ErrorKind::Shape, "kron of an empty matrix");
    check_size(a.rows() * b.rows(), a.cols() * b.cols());
    const auto rb = static_cast<Eigen::Index>(b.rows());
    const auto cb = static_cast<Eigen::Index>(b.cols());
    DenseMatrix out(a.dense().rows() * rb, a.dense().cols() * cb);
    for (Eigen::Index i = 0; i < a.dense().rows(); ++i) {
        for (Eigen::Index j = 0; j < a.dense().cols(); ++j) {
            out.block(i * rb, j * cb, rb, cb) = a.dense()(i, j) * b.dense();
        }
    }
    return ComplexMatrix(std::move(out));
}

PureState kron(const PureState &a, const PureState &b) {
    check_size(a.dim() * b.dim(), 1);
    const auto db = static_cast<Eigen::Index>(b.dim());
    DenseVector out(a.amplitudes().size() * db);
    for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i) out.segment(i * db, db) = a[i] * b.amplitudes();
    // Renormalize away the O(eps) drift accumulated over several factors.
    out /= out.norm();
    return PureState(std::move(out));
}

Eigensystem eigh(const HermitianOperator &h) {
    if (h.dim() == 0) throw Error(ErrorKind::Shape, "eigh of an empty operator");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(Eigen::MatrixXcd(h.dense()));
    if (solver.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "eigh: solver did not converge");
    Eigensystem out;
    out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + h.dim());
    out.vectors = ComplexMatrix(DenseMatrix(solver.eigenvectors()));
    return out;
}

double min_eigenvalue(const HermitianOperator &h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(Eigen::MatrixXcd(h.dense()), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "eigh: solver did not converge");
    return solver.eigenvalues()(0);
}

OperatorRoots psd_sqrt_and_invsqrt(const HermitianOperator &h, double null_threshold) {
    const Eigensystem es = eigh(h);
    const std::size_t n = h.dim();
    Eigen::VectorXd root(n);
    Eigen::VectorXd inv_root(n);
    Eigen::VectorXd support(n);
    std::size_t rank = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double lambda = es.values[i];
        if (lambda < kClipFloor) {
            throw Error(ErrorKind::PositivityViolation,
                        "operator has eigenvalue " + std::to_string(lambda) + " below the clipping floor");
        }
        lambda = std::max(lambda, 0.0);
        root(i) = std::sqrt(lambda);
        if (lambda >= null_threshold && lambda > 0.0) {
            inv_root(i) = 1.0 / root(i);
            support(i) = 1.0;
            ++rank;
        } else {
            inv_root(i) = 0.0;
            support(i) = 0.0;
        }
    }
    const DenseMatrix &v = es.vectors.dense();
    auto sandwich = [&](const Eigen::VectorXd &d) {
        return HermitianOperator(DenseMatrix(v * d.cast<Complex>().asDiagonal() * v.adjoint()));
    };
    return OperatorRoots{sandwich(root), sandwich(inv_root), sandwich(support), rank};
}

double trace_product(const HermitianOperator &a, const HermitianOperator &b) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorKind::Shape, "trace_product: dimension mismatch " + std::to_string(a.dim()) + " vs " +
                                          std::to_string(b.dim()));
    }
    // tr(AB) = sum_ij A_ij B_ji
    const Complex t = a.dense().cwiseProduct(b.dense().transpose()).sum();
    const double scale = std::max(1.0, std::abs(t));
    if (std::abs(t.imag()) > 1e-10 * scale) {
        throw Error(ErrorKind::NumericalFailure, "trace_product: imaginary residual " + std::to_string(t.imag()));
    }
    return t.real();
}

HermitianOperator pauli_x() { return HermitianOperator(ComplexMatrix::from_rows({{0, 1}, {1, 0}})); }

HermitianOperator pauli_y() {
    return HermitianOperator(ComplexMatrix::from_rows({{0, Complex(0, -1)}, {Complex(0, 1), 0}}));
}

HermitianOperator pauli_z() { return HermitianOperator(ComplexMatrix::from_rows({{1, 0}, {0, -1}})); }

}  // namespace qtri
