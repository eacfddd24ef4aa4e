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

#include "qtri/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qtri/error.hpp"

namespace qtri {

Direction Direction::normalized(double x, double y, double z) {
    const double norm = std::sqrt(x * x + y * y + z * z);
    if (!std::isfinite(norm) || norm == 0.0) {
        throw Error(ErrorKind::Input, "cannot normalize a zero or non-finite vector");
    }
    return Direction(x / norm, y / norm, z / norm);
}

Direction Direction::unit(double x, double y, double z, double tol) {
    const double norm = std::sqrt(x * x + y * y + z * z);
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > tol) {
        throw Error(ErrorKind::Input, "direction is not unit-norm (|v| = " + std::to_string(norm) + ")");
    }
    // Already-normalized input passes through bit-for-bit.
    if (std::abs(x * x + y * y + z * z - 1.0) <= 1e-12) return Direction(x, y, z);
    return Direction(x / norm, y / norm, z / norm);
}

PureState spin_state(const Direction &n, Spin sign) {
    const double c = std::sqrt(std::max(0.0, (1.0 + n.z()) / 2.0));
    const double s = std::sqrt(std::max(0.0, (1.0 - n.z()) / 2.0));
    const double rho = std::hypot(n.x(), n.y());
    const Complex phase = rho > 0.0 ? Complex(n.x() / rho, n.y() / rho) : Complex(1.0, 0.0);
    DenseVector v(2);
    if (sign == Spin::Up) {
        v << c, phase * s;
    } else {
        v << -std::conj(phase) * s, c;
    }
    v /= v.norm();
    return PureState(std::move(v));
}

double direction_fidelity(const Direction &a, const Direction &b) {
    return std::clamp((1.0 + a.dot(b)) / 2.0, 0.0, 1.0);
}

Direction random_direction(Rng &rng) {
    const double z = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return Direction::normalized(r * std::cos(phi), r * std::sin(phi), z);
}

Direction random_direction_in_hemisphere(Rng &rng, const Direction &hint) {
    for (;;) {
        const Direction n = random_direction(rng);
        const double d = n.dot(hint);
        if (d > 0.0) return n;
        if (d < 0.0) return -n;
    }
}

double angle_between(const Direction &a, const Direction &b) { return std::acos(std::clamp(a.dot(b), -1.0, 1.0)); }

LatLon direction_to_latlon(const Direction &n) {
    constexpr double kDeg = 180.0 / std::numbers::pi;
    const double lat = std::asin(std::clamp(n.z(), -1.0, 1.0)) * kDeg;
    // Poles have no meridian; report 0.
    double lon = (n.x() == 0.0 && n.y() == 0.0) ? 0.0 : std::atan2(n.y(), n.x()) * kDeg;
    if (lon <= -180.0) lon = 180.0;
    return {lat + 0.0, lon + 0.0};  // + 0.0 folds -0 into +0
}

SphereGrid fibonacci_grid(std::size_t count) {
    if (count == 0) throw Error(ErrorKind::Input, "fibonacci_grid needs at least one node");
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    const double g = static_cast<double>(count);
    SphereGrid grid;
    grid.nodes.reserve(count);
    grid.weights.assign(count, 1.0 / g);
    for (std::size_t i = 0; i < count; ++i) {
        const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / g;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden_angle * static_cast<double>(i);
        grid.nodes.push_back(Direction::normalized(r * std::cos(phi), r * std::sin(phi), z));
    }
    return grid;
}

SphereGrid restrict_to_hemisphere(const SphereGrid &grid, const Direction &hint) {
    SphereGrid out;
    double total = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid.nodes[i].dot(hint) > 0.0) {
            out.nodes.push_back(grid.nodes[i]);
            out.weights.push_back(grid.weights[i]);
            total += grid.weights[i];
        }
    }
    if (out.nodes.empty() || total <= 0.0) {
        throw Error(ErrorKind::Configuration, "hemisphere restriction leaves no grid nodes");
    }
    for (double &w : out.weights) w /= total;
    return out;
}

std::array<double, 3> bloch_vector(const HermitianOperator &rho) {
    if (rho.dim() != 2) throw Error(ErrorKind::Shape, "bloch_vector expects a single-qubit operator");
    return {trace_product(rho, pauli_x()), trace_product(rho, pauli_y()), trace_product(rho, pauli_z())};
}

Rotation Rotation::about(const Direction &axis, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double t = 1.0 - c;
    const double x = axis.x(), y = axis.y(), z = axis.z();
    Rotation out;
    out.r_ = {t * x * x + c,     t * x * y - s * z, t * x * z + s * y,  //
              t * x * y + s * z, t * y * y + c,     t * y * z - s * x,  //
              t * x * z - s * y, t * y * z + s * x, t * z * z + c};
    // exp(-i angle/2 n.sigma)
    const double ch = std::cos(angle / 2.0);
    const double sh = std::sin(angle / 2.0);
    const Complex i(0.0, 1.0);
    out.su2_ = ComplexMatrix::from_rows({{ch - i * sh * z, -i * sh * x - sh * y},  //
                                         {-i * sh * x + sh * y, ch + i * sh * z}});
    return out;
}

Rotation Rotation::random(Rng &rng) {
    const Direction axis = random_direction(rng);
    return about(axis, rng.uniform(0.0, 2.0 * std::numbers::pi));
}

Direction Rotation::apply(const Direction &n) const {
    return Direction::normalized(r_[0] * n.x() + r_[1] * n.y() + r_[2] * n.z(),
                                 r_[3] * n.x() + r_[4] * n.y() + r_[5] * n.z(),
                                 r_[6] * n.x() + r_[7] * n.y() + r_[8] * n.z());
}

ComplexMatrix Rotation::su2_power(std::size_t qubits) const {
    if (qubits == 0) return ComplexMatrix::identity(1);
    ComplexMatrix out = su2_;
    for (std::size_t q = 1; q < qubits; ++q) out = kron(out, su2_);
    return out;
}

}  // namespace qtri
