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

#include "qtri/linalg.hpp"
#include "qtri/rng.hpp"

namespace qtri {

/// Unit vector on the Bloch sphere (equivalently, a point on Earth).
class Direction {
   public:
    /// Defaults to +z.
    Direction() = default;

    /// Rescales (x, y, z) to unit length. Throws Input for a zero or
    /// non-finite vector.
    static Direction normalized(double x, double y, double z);
    /// Accepts (x, y, z) only if unit-norm within `tol`. Residuals above
    /// 1e-12 in |v|^2 are renormalized away; smaller ones are kept as given.
    static Direction unit(double x, double y, double z, double tol = 1e-9);

    static Direction plus_x() { return Direction(1, 0, 0); }
    static Direction plus_y() { return Direction(0, 1, 0); }
    static Direction plus_z() { return Direction(0, 0, 1); }

    double x() const { return v_[0]; }
    double y() const { return v_[1]; }
    double z() const { return v_[2]; }
    double operator[](std::size_t k) const { return v_[k]; }
    const std::array<double, 3> &components() const { return v_; }

    double dot(const Direction &o) const { return v_[0] * o.v_[0] + v_[1] * o.v_[1] + v_[2] * o.v_[2]; }
    Direction operator-() const { return Direction(-v_[0], -v_[1], -v_[2]); }
    bool operator==(const Direction &) const = default;

   private:
    Direction(double x, double y, double z) : v_{x, y, z} {}

    std::array<double, 3> v_{0.0, 0.0, 1.0};
};

enum class Spin { Up, Down };

inline Spin flipped(Spin s) { return s == Spin::Up ? Spin::Down : Spin::Up; }

/// Spin eigenstate along `n`: (cos t/2, e^{i phi} sin t/2) for Up and the
/// orthogonal state (-e^{-i phi} sin t/2, cos t/2) for Down.
PureState spin_state(const Direction &n, Spin sign);

/// f = (1 + a.b) / 2.
double direction_fidelity(const Direction &a, const Direction &b);

/// Uniform on the sphere: z uniform in [-1, 1], azimuth uniform.
Direction random_direction(Rng &rng);

/// Uniform on the open hemisphere {n : n.hint > 0}.
Direction random_direction_in_hemisphere(Rng &rng, const Direction &hint);

/// Radians in [0, pi].
double angle_between(const Direction &a, const Direction &b);

struct LatLon {
    double latitude_deg;
    double longitude_deg;
};

/// +z is the North pole, +x the prime meridian on the equator. Longitude in
/// (-180, 180].
LatLon direction_to_latlon(const Direction &n);

/// Quadrature nodes with non-negative weights summing to one.
struct SphereGrid {
    std::vector<Direction> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// Golden-angle spiral with `count` equal-weight nodes.
SphereGrid fibonacci_grid(std::size_t count);

/// Keeps nodes with n.hint > 0 and renormalizes the weights. Throws
/// Configuration if nothing survives.
SphereGrid restrict_to_hemisphere(const SphereGrid &grid, const Direction &hint);

/// Bloch vector (tr(rho sigma_x), tr(rho sigma_y), tr(rho sigma_z)) of a
/// single-qubit operator.
std::array<double, 3> bloch_vector(const HermitianOperator &rho);

/// Proper rotation of R^3 with its SU(2) representative.
class Rotation {
   public:
    /// Right-handed rotation by `angle` radians about `axis`.
    static Rotation about(const Direction &axis, double angle);
    static Rotation random(Rng &rng);

    Direction apply(const Direction &n) const;
    /// U with U rho(n) U^dagger = rho(R n) for every spin state along n.
    const ComplexMatrix &su2() const { return su2_; }
    /// U tensored `qubits` times.
    ComplexMatrix su2_power(std::size_t qubits) const;

   private:
    std::array<double, 9> r_{};
    ComplexMatrix su2_;
};

}  // namespace qtri
