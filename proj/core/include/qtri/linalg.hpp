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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qtri {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using DenseVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

/// Largest supported matrix dimension (eight qubits).
inline constexpr std::size_t kMaxDim = 256;

/// Dense row-major complex matrix with finite entries.
class ComplexMatrix {
   public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    explicit ComplexMatrix(DenseMatrix dense);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const double> values);
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

    std::size_t rows() const { return static_cast<std::size_t>(m_.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(m_.cols()); }
    bool empty() const { return m_.size() == 0; }

    Complex operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    std::span<const Complex> entries() const { return {m_.data(), static_cast<std::size_t>(m_.size())}; }
    const DenseMatrix &dense() const { return m_; }

    ComplexMatrix adjoint() const;
    /// max_{ij} |a_ij - b_ij|; shapes must agree.
    double max_abs_diff(const ComplexMatrix &other) const;
    double frobenius_norm() const { return m_.norm(); }

    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);
    friend ComplexMatrix operator+(const ComplexMatrix &a, const ComplexMatrix &b);
    friend ComplexMatrix operator-(const ComplexMatrix &a, const ComplexMatrix &b);
    friend ComplexMatrix operator*(Complex s, const ComplexMatrix &a);

   private:
    DenseMatrix m_;
};

/// Normalized state vector.
class PureState {
   public:
    explicit PureState(DenseVector amplitudes);
    PureState(std::initializer_list<Complex> amplitudes);

    std::size_t dim() const { return static_cast<std::size_t>(v_.size()); }
    Complex operator[](std::size_t i) const { return v_(i); }
    const DenseVector &amplitudes() const { return v_; }

    /// <this|other>
    Complex inner(const PureState &other) const;

   private:
    DenseVector v_;
};

/// Square matrix symmetrized to (H + H^dagger)/2 on construction.
class HermitianOperator {
   public:
    HermitianOperator() = default;
    explicit HermitianOperator(const ComplexMatrix &m);
    explicit HermitianOperator(const DenseMatrix &m);

    static HermitianOperator identity(std::size_t n);
    static HermitianOperator zero(std::size_t n);
    static HermitianOperator projector(const PureState &psi);

    std::size_t dim() const { return matrix_.rows(); }
    const ComplexMatrix &matrix() const { return matrix_; }
    const DenseMatrix &dense() const { return matrix_.dense(); }

    /// Re <psi|H|psi>.
    double expectation(const PureState &psi) const;
    double trace() const;
    /// max |H - H^dagger| of the stored matrix.
    double hermiticity_residual() const;

   private:
    ComplexMatrix matrix_;
};

/// Kronecker product; throws SizeLimit if either result dimension exceeds kMaxDim.
ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);
PureState kron(const PureState &a, const PureState &b);

struct Eigensystem {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // orthonormal columns, matching `values`
};

/// Hermitian eigendecomposition. Throws NumericalFailure if the solver does
/// not converge.
Eigensystem eigh(const HermitianOperator &h);

double min_eigenvalue(const HermitianOperator &h);

struct OperatorRoots {
    HermitianOperator sqrt;
    HermitianOperator inv_sqrt;  // pseudo-inverse on the near-null space
    HermitianOperator support;   // projector onto eigenvalues >= null_threshold
    std::size_t rank = 0;
};

/// Eigenvalues in [-1e-8, 0) are clipped to zero; anything more negative
/// raises PositivityViolation. Eigenvalues below `null_threshold` map to zero
/// in the inverse root.
OperatorRoots psd_sqrt_and_invsqrt(const HermitianOperator &h, double null_threshold);

/// Re tr(AB). Throws Shape on dimension mismatch.
double trace_product(const HermitianOperator &a, const HermitianOperator &b);

/// Standard Pauli matrices.
HermitianOperator pauli_x();
HermitianOperator pauli_y();
HermitianOperator pauli_z();

}  // namespace qtri
