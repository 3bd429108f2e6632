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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tomolab/oracles.h"

using namespace tomolab;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST(povm, six_outcome_layout) {
    DiscretePovm six = six_outcome_povm();
    ASSERT_EQ(six.size(), 6u);
    const Vec3 dirs[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    double weight_sum = 0.0;
    Vec3 first_moment;
    for (size_t k = 0; k < 6; k++) {
        EXPECT_EQ(six.elements[k].weight, 1.0 / 3.0);
        EXPECT_EQ(six.elements[k].direction, dirs[k]);
        weight_sum += six.elements[k].weight;
        first_moment += six.elements[k].weight * six.elements[k].direction;
    }
    EXPECT_NEAR(weight_sum, 2.0, 1e-15);
    EXPECT_EQ(first_moment, Vec3(0, 0, 0));
    EXPECT_TRUE(is_complete(six));
}

TEST(povm, six_outcome_refines_projective) {
    DiscretePovm six = six_outcome_povm();
    ProjectiveTriplet triplet = projective_triplet();
    for (int k = 0; k < 3; k++) {
        for (int sign = 0; sign < 2; sign++) {
            Matrix2 scaled = triplet.projectors[k][sign];
            scaled *= 1.0 / 3.0;
            EXPECT_LE(max_abs_diff(six.elements[2 * k + sign].matrix(), scaled), 1e-16);
        }
    }
}

TEST(povm, tetrahedron_geometry) {
    DiscretePovm tetra = tetrahedron_povm();
    ASSERT_EQ(tetra.size(), 4u);
    double s = 1.0 / std::sqrt(3.0);
    EXPECT_LE(max_abs_diff(tetra.elements[0].direction, {s, s, s}), 1e-16);
    std::array<std::array<double, 3>, 3> outer{};
    for (size_t k = 0; k < 4; k++) {
        EXPECT_EQ(tetra.elements[k].weight, 0.5);
        EXPECT_NEAR(norm(tetra.elements[k].direction), 1.0, 1e-15);
        for (size_t l = 0; l < 4; l++) {
            if (l != k) {
                EXPECT_NEAR(dot(tetra.elements[k].direction, tetra.elements[l].direction), -1.0 / 3.0, 1e-15);
            }
        }
        for (int i = 0; i < 3; i++) {
            for (int j = 0; j < 3; j++) {
                outer[i][j] += tetra.elements[k].direction[i] * tetra.elements[k].direction[j];
            }
        }
    }
    for (int i = 0; i < 3; i++) {
        for (int j = 0; j < 3; j++) {
            EXPECT_NEAR(outer[i][j], i == j ? 4.0 / 3.0 : 0.0, 1e-15);
        }
    }
    EXPECT_TRUE(is_complete(tetra));
}

TEST(povm, quarter_weights_are_incomplete) {
    DiscretePovm tetra = tetrahedron_povm();
    for (auto &e : tetra.elements) {
        e.weight = 0.25;
    }
    EXPECT_FALSE(is_complete(tetra));
    EXPECT_NEAR(completeness_residual(tetra).weight_sum_error, 1.0, 1e-15);
}

TEST(povm, projective_triplet_structure) {
    ProjectiveTriplet t = projective_triplet();
    EXPECT_EQ(t.projectors[2][0], Matrix2(1, 0, 0, 0));
    for (int k = 0; k < 3; k++) {
        EXPECT_EQ(t.projectors[k][0] + t.projectors[k][1], Matrix2::identity());
        EXPECT_EQ(t.projectors[k][0] * t.projectors[k][1], Matrix2::zero());
        EXPECT_EQ(t.projectors[k][0] * t.projectors[k][0], t.projectors[k][0]);
    }
    auto p = t.axis_probabilities({0.2, -0.4, 0.8});
    EXPECT_DOUBLE_EQ(p[0][0], 0.6);
    EXPECT_DOUBLE_EQ(p[1][1], 0.7);
    EXPECT_NEAR(p[2][1], 0.1, 1e-16);
    EXPECT_EQ(t.axis_probabilities({0, 0, 1})[2][1], 0.0);
}

TEST(povm, allocation_equal) {
    EXPECT_EQ(AxisAllocation::equal(30).shots, (std::array<uint64_t, 3>{10, 10, 10}));
    EXPECT_THROW(AxisAllocation::equal(31), PreconditionError);
}

TEST(povm, outcome_probability_examples) {
    for (double p : outcome_probabilities(tetrahedron_povm(), {0, 0, 0})) {
        EXPECT_DOUBLE_EQ(p, 0.25);
    }
    auto p = outcome_probabilities(tetrahedron_povm(), tetrahedron_povm().elements[0].direction);
    EXPECT_NEAR(p[0], 0.5, 1e-15);
    for (int k = 1; k < 4; k++) {
        EXPECT_NEAR(p[k], 1.0 / 6.0, 1e-15);
    }
    double z0 = 0.6;
    auto q = outcome_probabilities(six_outcome_povm(), {0, 0, z0});
    for (int k = 0; k < 4; k++) {
        EXPECT_NEAR(q[k], 1.0 / 6.0, 1e-16);
    }
    EXPECT_NEAR(q[4], (1 + z0) / 6, 1e-16);
    EXPECT_NEAR(q[5], (1 - z0) / 6, 1e-16);
    EXPECT_THROW(outcome_probabilities(six_outcome_povm(), {0, 0, 1.1}), InvalidStateError);
}

TEST(povm, probabilities_normalized_and_in_range) {
    Rng rng({21, 0});
    for (int i = 0; i < 1000; i++) {
        Vec3 r0 = i % 10 == 0 ? oracle::random_on_sphere(rng) : oracle::random_in_ball(rng);
        for (const auto &povm : {six_outcome_povm(), tetrahedron_povm()}) {
            double total = 0.0;
            for (double p : outcome_probabilities(povm, r0)) {
                EXPECT_GE(p, 0.0);
                EXPECT_LE(p, 1.0);
                total += p;
            }
            EXPECT_NEAR(total, 1.0, 1e-12);
        }
    }
}

TEST(povm, probabilities_match_trace_rule) {
    Rng rng({22, 0});
    for (int i = 0; i < 100; i++) {
        Vec3 r0 = oracle::random_in_ball(rng);
        auto povm = tetrahedron_povm();
        auto p = outcome_probabilities(povm, r0);
        for (size_t k = 0; k < povm.size(); k++) {
            EXPECT_NEAR((density_from_bloch(r0) * povm.elements[k].matrix()).trace().real(), p[k], 1e-15);
        }
    }
}

TEST(povm, rotated_povm_stays_complete) {
    Rng rng({23, 0});
    for (int i = 0; i < 50; i++) {
        EXPECT_TRUE(is_complete(rotated(tetrahedron_povm(), oracle::random_rotation(rng))));
        EXPECT_TRUE(is_complete(rotated(six_outcome_povm(), oracle::random_rotation(rng))));
    }
}

TEST(povm, continuous_density_examples) {
    Rng rng({24, 0});
    Vec3 s = oracle::random_on_sphere(rng);
    EXPECT_EQ(continuous_density({0, 0, 0}, s), 1.0);
    Vec3 r0 = oracle::random_on_sphere(rng);
    EXPECT_NEAR(continuous_density(r0, r0), 2.0, 1e-15);
    EXPECT_NEAR(continuous_density(r0, -r0), 0.0, 1e-15);
}

TEST(povm, alpha_density_examples) {
    Rng rng({25, 0});
    Vec3 r0 = 0.7 * oracle::random_on_sphere(rng);
    Vec3 s = oracle::random_on_sphere(rng);
    EXPECT_EQ(alpha_density(1.0, r0, s), continuous_density(r0, s));
    EXPECT_EQ(alpha_density(0.0, r0, s), 1.0);
    Vec3 pure{0, 0, 1};
    EXPECT_DOUBLE_EQ(alpha_density(0.5, pure, pure), 1.5);
    EXPECT_THROW(alpha_density(1.5, r0, s), PreconditionError);
}

TEST(povm, cap_operator_examples) {
    EXPECT_LE(max_abs_diff(cap_operator(SphericalCap::full_sphere()), Matrix2::identity()), 1e-15);
    Vec3 r{0, 0.6, 0.8};
    Matrix2 expected = Complex(0.5) * Matrix2::identity() + Complex(0.25) * sigma_dot(r);
    EXPECT_LE(max_abs_diff(cap_operator(SphericalCap::hemisphere(r)), expected), 1e-15);
    EXPECT_EQ(cap_operator(SphericalCap(r, 0.0)), Matrix2::zero());
}

TEST(povm, cap_closed_forms_match_quadrature) {
    Rng rng({26, 0});
    for (int i = 0; i < 20; i++) {
        SphericalCap cap(oracle::random_on_sphere(rng), kPi * rng.uniform());
        EXPECT_LE(max_abs_diff(cap_operator(cap), oracle::cap_operator_quadrature(cap)), 1e-12);
        EXPECT_NEAR(cap.area(), 0.5 * cap_operator(cap).trace().real(), 1e-15);
    }
}

TEST(povm, cap_validation) {
    EXPECT_THROW(SphericalCap({0, 0, 2}, 0.5), PreconditionError);
    EXPECT_THROW(SphericalCap({0, 0, 1}, 4.0), PreconditionError);
    EXPECT_THROW(cap_operator(SphericalCap::full_sphere(), -0.1), PreconditionError);
}

TEST(povm, alpha_cap_operator) {
    SphericalCap cap({1, 0, 0}, 1.0);
    Matrix2 expected = Complex(0.3) * cap_operator(cap) + Complex(0.7 * cap.area()) * Matrix2::identity();
    EXPECT_LE(max_abs_diff(cap_operator(cap, 0.3), expected), 1e-16);
    EXPECT_LE(max_abs_diff(cap_operator(SphericalCap::full_sphere(), 0.3), Matrix2::identity()), 1e-15);
}

TEST(povm, equivariance_trivial_cases) {
    Rng rng({27, 0});
    SphericalCap cap(oracle::random_on_sphere(rng), 1.1);
    EXPECT_LE(equivariance_residual(cap, AxisAngle::identity()), 1e-15);
    EXPECT_LE(equivariance_residual(SphericalCap::full_sphere(), oracle::random_rotation(rng)), 1e-15);
}

TEST(povm, equivariance_random) {
    Rng rng({28, 0});
    for (int i = 0; i < 500; i++) {
        SphericalCap cap(oracle::random_on_sphere(rng), kPi * rng.uniform());
        AxisAngle g = oracle::random_rotation(rng);
        EXPECT_LE(equivariance_residual(cap, g), 1e-10);
        EXPECT_LE(equivariance_residual(cap, g, rng.uniform()), 1e-10);
    }
}
