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

#include "tomolab/bloch.h"

#include <numbers>
#include <ostream>
#include <sstream>

namespace tomolab {

std::ostream &operator<<(std::ostream &out, const Vec3 &v) {
    return out << "(" << v.x << ", " << v.y << ", " << v.z << ")";
}

void require_state(const BlochVector &r, const char *what) {
    if (!is_state(r)) {
        std::ostringstream msg;
        msg << what << ": Bloch vector " << r << " lies outside the unit ball (|r| = " << norm(r) << ")";
        throw InvalidStateError(msg.str());
    }
}

void require_unit(const Vec3 &s, const char *what) {
    if (!is_pure(s)) {
        std::ostringstream msg;
        msg << what << ": expected a unit vector, got " << s << " (|s| = " << norm(s) << ")";
        throw PreconditionError(msg.str());
    }
}

Matrix2 Matrix2::adjoint() const {
    return {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])};
}

Matrix2 &Matrix2::operator+=(const Matrix2 &o) {
    for (size_t k = 0; k < 4; k++) {
        m_[k] += o.m_[k];
    }
    return *this;
}

Matrix2 &Matrix2::operator-=(const Matrix2 &o) {
    for (size_t k = 0; k < 4; k++) {
        m_[k] -= o.m_[k];
    }
    return *this;
}

Matrix2 &Matrix2::operator*=(Complex s) {
    for (auto &e : m_) {
        e *= s;
    }
    return *this;
}

Matrix2 operator*(const Matrix2 &a, const Matrix2 &b) {
    Matrix2 out;
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            out(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
        }
    }
    return out;
}

std::ostream &operator<<(std::ostream &out, const Matrix2 &m) {
    return out << "[[" << m(0, 0) << ", " << m(0, 1) << "], [" << m(1, 0) << ", " << m(1, 1) << "]]";
}

double max_abs_diff(const Matrix2 &a, const Matrix2 &b) {
    double worst = 0.0;
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            worst = std::fmax(worst, std::abs(a(i, j) - b(i, j)));
        }
    }
    return worst;
}

bool is_hermitian(const Matrix2 &m, double tol) {
    return max_abs_diff(m, m.adjoint()) <= tol;
}

bool is_density_matrix(const Matrix2 &m, double tol) {
    if (!is_hermitian(m, tol) || std::abs(m.trace() - 1.0) > tol) {
        return false;
    }
    double a = m(0, 0).real();
    double d = m(1, 1).real();
    double b2 = std::norm(0.5 * (m(0, 1) + std::conj(m(1, 0))));
    double lowest = 0.5 * ((a + d) - std::sqrt((a - d) * (a - d) + 4.0 * b2));
    return lowest >= -tol;
}

Matrix2 sigma_dot(const Vec3 &v) {
    return {v.z, Complex(v.x, -v.y), Complex(v.x, v.y), -v.z};
}

DensityMatrix density_from_bloch(const BlochVector &r) {
    return {0.5 * (1.0 + r.z), Complex(0.5 * r.x, -0.5 * r.y), Complex(0.5 * r.x, 0.5 * r.y), 0.5 * (1.0 - r.z)};
}

BlochVector bloch_from_density(const DensityMatrix &rho) {
    if (!is_hermitian(rho)) {
        std::ostringstream msg;
        msg << "bloch_from_density: matrix is not Hermitian: " << rho;
        throw InvalidStateError(msg.str());
    }
    if (std::abs(rho.trace() - 1.0) > kExactTolerance) {
        std::ostringstream msg;
        msg << "bloch_from_density: trace is " << rho.trace() << ", expected 1";
        throw InvalidStateError(msg.str());
    }
    return {
        (rho(0, 1) + rho(1, 0)).real(),
        (rho(1, 0) - rho(0, 1)).imag(),
        (rho(0, 0) - rho(1, 1)).real(),
    };
}

double hs_distance_sq(const DensityMatrix &rho1, const DensityMatrix &rho2) {
    Matrix2 delta = rho2 - rho1;
    return (delta * delta).trace().real();
}

AxisAngle::AxisAngle(const Vec3 &axis, double angle) : axis_(axis) {
    if (std::fabs(norm(axis) - 1.0) > kExactTolerance) {
        std::ostringstream msg;
        msg << "AxisAngle: rotation axis must be a unit vector, got " << axis;
        throw PreconditionError(msg.str());
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    angle_ = std::fmod(angle, two_pi);
    if (angle_ < 0.0) {
        angle_ += two_pi;
    }
    if (angle_ >= two_pi) {
        angle_ = 0.0;
    }
}

AxisAngle AxisAngle::from_rotation_vector(const Vec3 &m) {
    double length = norm(m);
    if (length == 0.0) {
        return identity();
    }
    return AxisAngle(m / length, length);
}

AxisAngle AxisAngle::inverse() const {
    return AxisAngle(axis_, -angle_);
}

std::array<std::array<double, 3>, 3> AxisAngle::matrix() const {
    double c = std::cos(angle_);
    double s = std::sin(angle_);
    double t = 1.0 - c;
    const Vec3 &k = axis_;
    return {{
        {c + t * k.x * k.x, t * k.x * k.y - s * k.z, t * k.x * k.z + s * k.y},
        {t * k.y * k.x + s * k.z, c + t * k.y * k.y, t * k.y * k.z - s * k.x},
        {t * k.z * k.x - s * k.y, t * k.z * k.y + s * k.x, c + t * k.z * k.z},
    }};
}

Vec3 AxisAngle::su2_generator() const {
    return -0.5 * angle_ * axis_;
}

BlochVector rotate(const BlochVector &r, const AxisAngle &g) {
    const Vec3 &k = g.axis();
    double c = std::cos(g.angle());
    double s = std::sin(g.angle());
    return c * r + s * cross(k, r) + ((1.0 - c) * dot(k, r)) * k;
}

Matrix2 su2_exp(const Vec3 &n) {
    double length = norm(n);
    if (length == 0.0) {
        return Matrix2::identity();
    }
    Matrix2 out = Matrix2::identity();
    out *= std::cos(length);
    out += Complex(0.0, std::sin(length)) * sigma_dot(n / length);
    return out;
}

BlochVector conjugate_pure_matrix(const BlochVector &s, const Vec3 &n) {
    Matrix2 u = su2_exp(n);
    return bloch_from_density(u * density_from_bloch(s) * u.adjoint());
}

BlochVector conjugate_pure_rotation(const BlochVector &s, const Vec3 &n) {
    return rotate(s, AxisAngle::from_rotation_vector(-2.0 * n));
}

BlochVector conjugate_pure(const BlochVector &s, const Vec3 &n) {
    require_unit(s, "conjugate_pure");
    BlochVector via_matrix = conjugate_pure_matrix(s, n);
    BlochVector via_rotation = conjugate_pure_rotation(s, n);
    if (max_abs_diff(via_matrix, via_rotation) > kTrigTolerance) {
        std::ostringstream msg;
        msg << "conjugate_pure: matrix route " << via_matrix << " and rotation route " << via_rotation
            << " disagree";
        throw std::logic_error(msg.str());
    }
    return via_matrix;
}

}  // namespace tomolab
