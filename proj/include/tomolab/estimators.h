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

#ifndef TOMOLAB_ESTIMATORS_H
#define TOMOLAB_ESTIMATORS_H

#include <array>
#include <span>
#include <string_view>

#include "tomolab/bloch.h"
#include "tomolab/povm.h"
#include "tomolab/sampling.h"

namespace tomolab {

/// How estimates outside the Bloch ball are reported.
enum class BallPolicy { kUnrestricted, kRadialClamp };

std::string_view policy_name(BallPolicy policy);
BallPolicy policy_from_name(std::string_view name);

/// Unrestricted: identity. RadialClamp: r / max(1, |r|).
BlochVector apply_policy(const BlochVector &r, BallPolicy policy);

/// r'_k = (N_k^+ - N_k^-) / N_k per axis. Throws PreconditionError if an
/// axis received no shots.
BlochVector estimate_projective(const MeasurementRecord &record);

/// Same per-axis ratio for the six-outcome POVM, with 0 for empty axes.
/// `povm` supplies the axis directions (the + element of each pair), so a
/// rotated POVM yields the correspondingly rotated estimate.
BlochVector estimate_six(const MeasurementRecord &record, const DiscretePovm &povm = six_outcome_povm());

/// r' = 3 sum_k (N_k / N) a_k. Throws PreconditionError if N = 0.
BlochVector estimate_tetrahedron(const MeasurementRecord &record, const DiscretePovm &povm = tetrahedron_povm());

/// r' = (3 / N) sum_k n_k. Throws PreconditionError if N = 0.
BlochVector estimate_moment(const MeasurementRecord &record);

struct MlConfig {
    /// Termination threshold on the infinity norm of sum n_k / (1 + r.n_k)
    /// at an interior maximizer.
    double tolerance = 1e-12;
    /// Termination threshold on the tangential gradient at a boundary maximizer.
    double boundary_tolerance = 1e-10;
    int max_iterations = 100;
    /// Backtracking factor for the line search, in (0, 1).
    double shrink = 0.5;
};

struct MlResult {
    BlochVector r;
    bool converged = false;
    bool on_boundary = false;
    int iterations = 0;
    /// Projected-gradient infinity norm at `r`.
    double residual = 0.0;
    /// Dimension of the span of the outcomes; below 3 the maximizer is not
    /// unique and the minimum-norm one is returned.
    int rank = 0;
};

/// Maximizes sum log(1 + r.n_k) over the closed unit ball. Never throws on
/// non-convergence; inspect `converged`. Throws PreconditionError if N = 0.
MlResult estimate_ml_continuous(const MeasurementRecord &record, const MlConfig &config = {});

/// Log-likelihood sum log(1 + r.n_k); -infinity outside its domain.
double log_likelihood(std::span<const Vec3> outcomes, const BlochVector &r);
/// sum n_k / (1 + r.n_k).
Vec3 log_likelihood_gradient(std::span<const Vec3> outcomes, const BlochVector &r);
/// -sum n_k n_k^T / (1 + r.n_k)^2, row-major.
std::array<std::array<double, 3>, 3> log_likelihood_hessian(std::span<const Vec3> outcomes, const BlochVector &r);

/// sum_k N_k a_k / (1 + r.a_k): left side of the tetrahedron likelihood equation.
Vec3 tetrahedron_stationarity(const MeasurementRecord &record, const BlochVector &r,
                              const DiscretePovm &povm = tetrahedron_povm());

}  // namespace tomolab

#endif
