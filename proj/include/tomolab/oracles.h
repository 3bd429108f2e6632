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

#ifndef TOMOLAB_ORACLES_H
#define TOMOLAB_ORACLES_H

// Brute-force reference computations. None of these call the closed-form
// moment formulas, the inverse-CDF sampler, or the ML solver they are used
// to check.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tomolab/bloch.h"
#include "tomolab/povm.h"
#include "tomolab/sampling.h"

namespace tomolab::oracle {

struct ExactMoments {
    Vec3 mean;
    /// <Tr(rho(r') - rho(<r'>))^2>, evaluated on density matrices.
    double hs_variance = 0.0;
    /// Number of outcome tuples visited.
    uint64_t tuples = 0;
};

using DiscreteEstimator = std::function<BlochVector(const MeasurementRecord &)>;

/// Exact moments of `estimator` over all |povm|^N ordered outcome tuples,
/// each weighted by prod_i Tr(rho0 Q_{k_i}).
ExactMoments enumerate_discrete(const DiscretePovm &povm, MeasurementScheme scheme, const BlochVector &r0,
                                uint64_t shots, const DiscreteEstimator &estimator);

/// Exact moments of the projective estimator over all 2^(Nx+Ny+Nz) shot
/// sequences, each weighted by prod Tr(rho0 P_k^+-).
ExactMoments enumerate_projective(const BlochVector &r0, const AxisAllocation &allocation,
                                  const DiscreteEstimator &estimator);

/// Uniform point in the unit ball / on the unit sphere.
Vec3 random_in_ball(Rng &rng);
Vec3 random_on_sphere(Rng &rng);
AxisAngle random_rotation(Rng &rng);

/// Draws from density 1 + r0.s by rejection against the uniform sphere
/// proposal (envelope 2).
std::vector<Vec3> rejection_sample_continuous(const BlochVector &r0, uint64_t shots, const SeedSpec &seed);

/// Kolmogorov-Smirnov statistic sup |F_emp - F| of `samples` against `cdf`.
double ks_statistic(std::vector<double> samples, const std::function<double(double)> &cdf);
/// Asymptotic p-value of the one-sample KS statistic d at sample size n.
double ks_p_value(double d, uint64_t n);

/// Pearson chi-square goodness of fit; cells with zero expectation must be
/// empty and are dropped. Returns the upper-tail p-value.
double chi_square_p_value(std::span<const uint64_t> observed, std::span<const double> probabilities,
                          uint64_t extra_constraints = 0);

/// sum log(1 + r.n_k), -infinity outside the domain. Independent of the
/// estimators module.
double log_likelihood(std::span<const Vec3> outcomes, const Vec3 &r);

/// Brute-force maximizer of the continuous likelihood over the closed unit
/// ball: full grid at `coarse_step`, then repeated local grids shrinking by 5x
/// until below `final_step`. Among equal values the point of smaller norm wins.
/// The unit sphere is searched the same way in tangent-plane coordinates down
/// to final_step^2, and the better of the two winners is returned.
Vec3 grid_search_ml(std::span<const Vec3> outcomes, double coarse_step = 0.05, double final_step = 1e-3);

/// Q(E) = 2 int_E rho(s) d omega(s) by tensor Gauss-Legendre quadrature in the
/// cap's polar frame.
Matrix2 cap_operator_quadrature(const SphericalCap &cap);

/// Central differences of f at x with step h.
Vec3 finite_difference_gradient(const std::function<double(const Vec3 &)> &f, const Vec3 &x, double h);
std::array<std::array<double, 3>, 3> finite_difference_jacobian(const std::function<Vec3(const Vec3 &)> &g,
                                                                const Vec3 &x, double h);

}  // namespace tomolab::oracle

#endif
