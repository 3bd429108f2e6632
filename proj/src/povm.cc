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

#include "tomolab/povm.h"

#include <algorithm>
#include <numbers>
#include <sstream>

namespace tomolab {

double CompletenessResidual::worst() const {
    return std::max({weight_sum_error, first_moment_error, element_error, operator_error});
}

CompletenessResidual completeness_residual(const DiscretePovm &povm) {
    double weight_sum = 0.0;
    Vec3 moment;
    double element_error = 0.0;
    Matrix2 total;
    for (const auto &e : povm.elements) {
        weight_sum += e.weight;
        moment += e.weight * e.direction;
        if (!(e.weight > 0.0)) {
            element_error = std::max(element_error, std::fabs(e.weight) + 1.0);
        }
        element_error = std::max(element_error, std::fabs(norm(e.direction) - 1.0));
        total += e.matrix();
    }
    return {
        std::fabs(weight_sum - 2.0),
        std::max({std::fabs(moment.x), std::fabs(moment.y), std::fabs(moment.z)}),
        element_error,
        max_abs_diff(total, Matrix2::identity()),
    };
}

bool is_complete(const DiscretePovm &povm, double tol) {
    return !povm.elements.empty() && completeness_residual(povm).worst() <= tol;
}

DiscretePovm six_outcome_povm() {
    constexpr double third = 1.0 / 3.0;
    return {
        "six-outcome",
        {
            {third, {1.0, 0.0, 0.0}},
            {third, {-1.0, 0.0, 0.0}},
            {third, {0.0, 1.0, 0.0}},
            {third, {0.0, -1.0, 0.0}},
            {third, {0.0, 0.0, 1.0}},
            {third, {0.0, 0.0, -1.0}},
        },
    };
}

DiscretePovm tetrahedron_povm() {
    const double u = 1.0 / std::numbers::sqrt3;
    return {
        "tetrahedron",
        {
            {0.5, {u, u, u}},
            {0.5, {u, -u, -u}},
            {0.5, {-u, u, -u}},
            {0.5, {-u, -u, u}},
        },
    };
}

DiscretePovm rotated(const DiscretePovm &povm, const AxisAngle &g) {
    DiscretePovm out = povm;
    for (auto &e : out.elements) {
        e.direction = rotate(e.direction, g);
    }
    return out;
}

std::vector<double> outcome_probabilities(const DiscretePovm &povm, const BlochVector &r0) {
    require_state(r0, "outcome_probabilities");
    std::vector<double> p;
    p.reserve(povm.size());
    for (const auto &e : povm.elements) {
        p.push_back(std::clamp(0.5 * e.weight * (1.0 + dot(r0, e.direction)), 0.0, 1.0));
    }
    return p;
}

AxisAllocation AxisAllocation::equal(uint64_t total_shots) {
    if (total_shots % 3 != 0) {
        std::ostringstream msg;
        msg << "equal axis allocation needs a shot count divisible by 3, got " << total_shots
            << "; pass an explicit per-axis allocation";
        throw PreconditionError(msg.str());
    }
    uint64_t per_axis = total_shots / 3;
    return {{per_axis, per_axis, per_axis}};
}

std::array<std::array<double, 2>, 3> ProjectiveTriplet::axis_probabilities(const BlochVector &r0) const {
    require_state(r0, "axis_probabilities");
    std::array<std::array<double, 2>, 3> p{};
    for (int k = 0; k < 3; k++) {
        double c = std::clamp(r0[k], -1.0, 1.0);
        p[k] = {0.5 * (1.0 + c), 0.5 * (1.0 - c)};
    }
    return p;
}

ProjectiveTriplet projective_triplet(AxisAllocation allocation) {
    ProjectiveTriplet t;
    for (int k = 0; k < 3; k++) {
        Vec3 axis;
        axis[k] = 1.0;
        t.projectors[k] = {density_from_bloch(axis), density_from_bloch(-axis)};
    }
    t.allocation = allocation;
    return t;
}

double continuous_density(const BlochVector &r0, const Vec3 &s) {
    require_state(r0, "continuous_density");
    require_unit(s, "continuous_density");
    return std::max(0.0, 1.0 + dot(r0, s));
}

double alpha_density(double alpha, const BlochVector &r0, const Vec3 &s) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        std::ostringstream msg;
        msg << "alpha_density: alpha must lie in [0, 1], got " << alpha;
        throw PreconditionError(msg.str());
    }
    return continuous_density(alpha * r0, s);
}

SphericalCap::SphericalCap(const Vec3 &center, double half_angle) : center(center), half_angle(half_angle) {
    require_unit(center, "SphericalCap");
    if (!(half_angle >= 0.0 && half_angle <= std::numbers::pi + kExactTolerance)) {
        std::ostringstream msg;
        msg << "SphericalCap: half-angle must lie in [0, pi], got " << half_angle;
        throw PreconditionError(msg.str());
    }
}

double SphericalCap::area() const {
    return 0.5 * (1.0 - std::cos(half_angle));
}

Vec3 SphericalCap::first_moment() const {
    double s = std::sin(half_angle);
    return (0.25 * s * s) * center;
}

Matrix2 cap_operator(const SphericalCap &cap) {
    Matrix2 q = Matrix2::identity();
    q *= cap.area();
    q += sigma_dot(cap.first_moment());
    return q;
}

Matrix2 cap_operator(const SphericalCap &cap, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        std::ostringstream msg;
        msg << "cap_operator: alpha must lie in [0, 1], got " << alpha;
        throw PreconditionError(msg.str());
    }
    Matrix2 q = cap_operator(cap);
    q *= alpha;
    Matrix2 flat = Matrix2::identity();
    flat *= (1.0 - alpha) * cap.area();
    return q + flat;
}

double equivariance_residual(const SphericalCap &cap, const AxisAngle &g, double alpha) {
    Matrix2 u = su2_exp(g.su2_generator());
    Matrix2 lhs = u * cap_operator(cap, alpha) * u.adjoint();
    SphericalCap moved(rotate(cap.center, g), cap.half_angle);
    return max_abs_diff(lhs, cap_operator(moved, alpha));
}

}  // namespace tomolab
