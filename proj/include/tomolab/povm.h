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

#ifndef TOMOLAB_POVM_H
#define TOMOLAB_POVM_H

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tomolab/bloch.h"

namespace tomolab {

/// The POVM element Q = weight * rho(direction), with weight > 0 and a unit
/// direction.
struct WeightedProjectorElement {
    double weight;
    Vec3 direction;

    Matrix2 matrix() const {
        Matrix2 m = density_from_bloch(direction);
        m *= weight;
        return m;
    }
    bool operator==(const WeightedProjectorElement &) const = default;
};

/// A finite POVM made of weighted rank-one elements.
///
/// For rank-one qubit elements the completeness relation sum Q_k = I is
/// equivalent to the pair sum c_k = 2 and sum c_k a_k = 0.
struct DiscretePovm {
    std::string label;
    std::vector<WeightedProjectorElement> elements;

    size_t size() const {
        return elements.size();
    }
    bool operator==(const DiscretePovm &) const = default;
};

struct CompletenessResidual {
    double weight_sum_error;    // |sum c_k - 2|
    double first_moment_error;  // max_i |(sum c_k a_k)_i|
    double element_error;       // worst violation of c_k > 0 and |a_k| = 1
    double operator_error;      // max entry of |sum Q_k - I|

    double worst() const;
};

CompletenessResidual completeness_residual(const DiscretePovm &povm);
bool is_complete(const DiscretePovm &povm, double tol = kExactTolerance);

/// Q_k^+- = P_k^+- / 3 for k = x, y, z, in the order +x, -x, +y, -y, +z, -z.
DiscretePovm six_outcome_povm();

/// Q_k = rho(a_k) / 2 for the four tetrahedron vertices a_1 .. a_4.
DiscretePovm tetrahedron_povm();

/// Copy of `povm` with every direction rotated by g.
DiscretePovm rotated(const DiscretePovm &povm, const AxisAngle &g);

/// p_k = c_k (1 + r0.a_k) / 2. Throws InvalidStateError if |r0| > 1.
std::vector<double> outcome_probabilities(const DiscretePovm &povm, const BlochVector &r0);

/// Shots per spin axis for the projective protocol.
struct AxisAllocation {
    std::array<uint64_t, 3> shots{};

    uint64_t total() const {
        return shots[0] + shots[1] + shots[2];
    }
    /// N/3 per axis. Throws PreconditionError when 3 does not divide N.
    static AxisAllocation equal(uint64_t total_shots);
    bool operator==(const AxisAllocation &) const = default;
};

/// Three two-outcome von Neumann measurements along x, y and z with their
/// shot allocation. projectors[k][0] = P_k^+, projectors[k][1] = P_k^-.
struct ProjectiveTriplet {
    std::array<std::array<Matrix2, 2>, 3> projectors;
    AxisAllocation allocation;

    /// {p_k^+, p_k^-} = (1 +- r0_k) / 2 per axis. Throws if |r0| > 1.
    std::array<std::array<double, 2>, 3> axis_probabilities(const BlochVector &r0) const;
};

ProjectiveTriplet projective_triplet(AxisAllocation allocation = {});

/// Density 1 + r0.s of the continuous POVM outcome distribution with respect
/// to the normalized area measure on the sphere.
double continuous_density(const BlochVector &r0, const Vec3 &s);

/// Density 1 + alpha r0.s of the diluted POVM
/// Q_alpha(E) = alpha Q(E) + (1 - alpha) omega(E) I.
double alpha_density(double alpha, const BlochVector &r0, const Vec3 &s);

/// Points of the sphere within `half_angle` of `center`.
struct SphericalCap {
    Vec3 center;
    double half_angle;

    SphericalCap(const Vec3 &center, double half_angle);

    static SphericalCap full_sphere() {
        return {{0.0, 0.0, 1.0}, 3.14159265358979323846};
    }
    static SphericalCap hemisphere(const Vec3 &center) {
        return {center, 0.5 * 3.14159265358979323846};
    }

    /// Normalized area (1 - cos b) / 2.
    double area() const;
    /// First moment int_E s d omega(s) = center sin^2(b) / 4.
    Vec3 first_moment() const;
};

/// Q(E) = 2 int_E rho(s) d omega(s) = omega(E) I + (sin^2 b / 4) center.sigma.
Matrix2 cap_operator(const SphericalCap &cap);

/// Q_alpha(E) = alpha Q(E) + (1 - alpha) omega(E) I. Throws PreconditionError
/// unless 0 <= alpha <= 1.
Matrix2 cap_operator(const SphericalCap &cap, double alpha);

/// max |U Q(E) U* - Q(g E)| where U is the SU(2) element implementing g.
/// Rotating the cap by g equals pulling it back by the inverse group action.
double equivariance_residual(const SphericalCap &cap, const AxisAngle &g, double alpha = 1.0);

}  // namespace tomolab

#endif
