// Copyright 2026 The tomolab Authors
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

#ifndef TOMOLAB_BLOCH_H
#define TOMOLAB_BLOCH_H

#include <array>
#include <cmath>
#include <complex>
#include <iosfwd>

#include "tomolab/errors.h"

namespace tomolab {

/// Slack for identities that only involve exact 2x2 / 3-vector algebra.
inline constexpr double kExactTolerance = 1e-12;
/// Slack for identities whose evaluation goes through trig or exponentials.
inline constexpr double kTrigTolerance = 1e-10;

using Complex = std::complex<double>;

/// A real 3-vector. Used for Bloch vectors, measurement outcomes on the
/// sphere and rotation generators alike.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr double operator[](int k) const {
        return k == 0 ? x : (k == 1 ? y : z);
    }
    constexpr double &operator[](int k) {
        return k == 0 ? x : (k == 1 ? y : z);
    }

    constexpr Vec3 &operator+=(const Vec3 &o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr Vec3 &operator-=(const Vec3 &o) {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    constexpr Vec3 &operator*=(double s) {
        x *= s;
        y *= s;
        z *= s;
        return *this;
    }

    friend constexpr Vec3 operator+(Vec3 a, const Vec3 &b) {
        return a += b;
    }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3 &b) {
        return a -= b;
    }
    friend constexpr Vec3 operator-(const Vec3 &a) {
        return {-a.x, -a.y, -a.z};
    }
    friend constexpr Vec3 operator*(double s, Vec3 a) {
        return a *= s;
    }
    friend constexpr Vec3 operator*(Vec3 a, double s) {
        return a *= s;
    }
    friend constexpr Vec3 operator/(Vec3 a, double s) {
        return a *= (1.0 / s);
    }
    friend constexpr bool operator==(const Vec3 &, const Vec3 &) = default;
};

std::ostream &operator<<(std::ostream &out, const Vec3 &v);

constexpr double dot(const Vec3 &a, const Vec3 &b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}
constexpr Vec3 cross(const Vec3 &a, const Vec3 &b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3 &a) {
    return std::sqrt(dot(a, a));
}
inline double max_abs_diff(const Vec3 &a, const Vec3 &b) {
    return std::fmax(std::fabs(a.x - b.x), std::fmax(std::fabs(a.y - b.y), std::fabs(a.z - b.z)));
}

/// Coordinates of a point of (or, for unrestricted estimates, outside) the
/// Bloch ball. The density matrix is a derived view.
using BlochVector = Vec3;

inline bool is_state(const BlochVector &r) {
    return norm(r) <= 1.0 + kExactTolerance;
}
inline bool is_pure(const BlochVector &r) {
    return std::fabs(norm(r) - 1.0) <= kExactTolerance;
}

/// Throws InvalidStateError unless |r| <= 1 (within slack).
void require_state(const BlochVector &r, const char *what);
/// Throws PreconditionError unless |s| = 1 (within slack).
void require_unit(const Vec3 &s, const char *what);

/// 2x2 complex matrix, row-major.
class Matrix2 {
   public:
    constexpr Matrix2() = default;
    constexpr Matrix2(Complex a00, Complex a01, Complex a10, Complex a11) : m_{a00, a01, a10, a11} {
    }

    static constexpr Matrix2 identity() {
        return {1.0, 0.0, 0.0, 1.0};
    }
    static constexpr Matrix2 zero() {
        return {};
    }

    constexpr Complex operator()(int row, int col) const {
        return m_[2 * row + col];
    }
    constexpr Complex &operator()(int row, int col) {
        return m_[2 * row + col];
    }

    Matrix2 adjoint() const;
    Complex trace() const {
        return m_[0] + m_[3];
    }

    Matrix2 &operator+=(const Matrix2 &o);
    Matrix2 &operator-=(const Matrix2 &o);
    Matrix2 &operator*=(Complex s);

    friend Matrix2 operator+(Matrix2 a, const Matrix2 &b) {
        return a += b;
    }
    friend Matrix2 operator-(Matrix2 a, const Matrix2 &b) {
        return a -= b;
    }
    friend Matrix2 operator*(Complex s, Matrix2 a) {
        return a *= s;
    }
    friend Matrix2 operator*(const Matrix2 &a, const Matrix2 &b);
    friend bool operator==(const Matrix2 &, const Matrix2 &) = default;

   private:
    std::array<Complex, 4> m_{};
};

std::ostream &operator<<(std::ostream &out, const Matrix2 &m);

/// Largest entrywise modulus of a - b.
double max_abs_diff(const Matrix2 &a, const Matrix2 &b);

/// A 2x2 density matrix. Produced from Bloch vectors; positivity is only
/// guaranteed when the generating vector lies in the ball.
using DensityMatrix = Matrix2;

bool is_hermitian(const Matrix2 &m, double tol = kExactTolerance);
/// Hermitian, unit trace and positive semidefinite, each within tol.
bool is_density_matrix(const Matrix2 &m, double tol = kExactTolerance);

namespace pauli {
inline constexpr Matrix2 x{0.0, 1.0, 1.0, 0.0};
inline constexpr Matrix2 y{0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0};
inline constexpr Matrix2 z{1.0, 0.0, 0.0, -1.0};
inline constexpr std::array<Matrix2, 3> all{x, y, z};
}  // namespace pauli

/// v.sigma = v_x sigma_x + v_y sigma_y + v_z sigma_z.
Matrix2 sigma_dot(const Vec3 &v);

/// rho(r) = (I + r.sigma) / 2. Accepts |r| > 1.
DensityMatrix density_from_bloch(const BlochVector &r);

/// Inverse of density_from_bloch. Throws InvalidStateError when rho is not
/// Hermitian or not of unit trace.
BlochVector bloch_from_density(const DensityMatrix &rho);

/// Tr (rho2 - rho1)^2.
double hs_distance_sq(const DensityMatrix &rho1, const DensityMatrix &rho2);

/// Rotation of the Bloch ball by `angle` radians about the unit vector `axis`.
class AxisAngle {
   public:
    /// Throws PreconditionError if |axis| differs from 1 by more than 1e-12.
    /// The angle is reduced to [0, 2 pi).
    AxisAngle(const Vec3 &axis, double angle);

    static AxisAngle identity() {
        return AxisAngle({0.0, 0.0, 1.0}, 0.0);
    }
    /// The rotation O_m: axis m/|m|, angle |m|. m = 0 gives the identity.
    static AxisAngle from_rotation_vector(const Vec3 &m);

    const Vec3 &axis() const {
        return axis_;
    }
    double angle() const {
        return angle_;
    }
    AxisAngle inverse() const;

    /// Orthogonal 3x3 matrix of the rotation, row-major.
    std::array<std::array<double, 3>, 3> matrix() const;

    /// Generator n of the SU(2) element U_n = exp(i n.sigma) whose conjugation
    /// U_n rho(s) U_n* = rho(O s) implements this rotation, i.e. n = -(angle/2) axis.
    Vec3 su2_generator() const;

   private:
    Vec3 axis_;
    double angle_;
};

/// Rodrigues rotation of r.
BlochVector rotate(const BlochVector &r, const AxisAngle &g);

/// exp(i n.sigma) = cos|n| I + i sin|n| (n/|n|).sigma.
Matrix2 su2_exp(const Vec3 &n);

/// Bloch vector of U_n rho(s) U_n* via explicit matrix conjugation.
BlochVector conjugate_pure_matrix(const BlochVector &s, const Vec3 &n);
/// Bloch vector of U_n rho(s) U_n* via the rotation O_{-2n}.
BlochVector conjugate_pure_rotation(const BlochVector &s, const Vec3 &n);

/// Bloch vector of U_n rho(s) U_n* for a pure state s. Both computation
/// routes are evaluated; a disagreement above 1e-10 is a logic_error.
/// Throws PreconditionError if |s| != 1.
BlochVector conjugate_pure(const BlochVector &s, const Vec3 &n);

}  // namespace tomolab

#endif
