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

#ifndef TOMOLAB_ANALYSIS_H
#define TOMOLAB_ANALYSIS_H

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "tomolab/estimators.h"
#include "tomolab/povm.h"
#include "tomolab/sampling.h"

namespace tomolab {

/// A measurement scheme paired with the estimator applied to its records.
enum class ProtocolTag { kProjectiveTriplet, kSixOutcome, kTetrahedron, kContinuousMoment, kContinuousMl };

inline constexpr std::array<ProtocolTag, 5> kAllProtocols = {
    ProtocolTag::kProjectiveTriplet, ProtocolTag::kSixOutcome, ProtocolTag::kTetrahedron,
    ProtocolTag::kContinuousMoment, ProtocolTag::kContinuousMl,
};

std::string_view protocol_name(ProtocolTag tag);
ProtocolTag protocol_from_name(std::string_view name);
MeasurementScheme scheme_of(ProtocolTag tag);
bool has_closed_form(ProtocolTag tag);

/// <r'> for the unrestricted estimator: r0, except r0 (1 - (2/3)^N) for the
/// six-outcome POVM whose empty axes are estimated as 0.
/// Throws UnsupportedAnalyticError for kContinuousMl.
Vec3 analytic_mean(ProtocolTag tag, const BlochVector &r0, uint64_t shots);

/// F_N = N (2/3)^N sum_{n=1}^N C(N,n) (1/2)^n / n, summed over binomial
/// weights with a long double running-term recurrence. Throws for N = 0.
double f_n(uint64_t n);
/// F_N from the recursion S_{N+1} = S_N + (2/(3N) - 1/3) S_N + 1, S_1 = 1,
/// minus N (2/3)^N H_N.
double f_n_recursion(uint64_t n);

/// Hilbert-Schmidt variance <Tr(rho' - <rho'>)^2> of the unrestricted estimator.
///
/// Projective triplet at equal allocation: (9 - 3 r0^2) / (2N).
/// Six-outcome: F_N (3 - r0^2) / (2N) + r0^2 (6^N - 4^N) / (2 9^N).
/// Tetrahedron and continuous moment estimator: (9 - r0^2) / (2N).
double analytic_variance(ProtocolTag tag, const BlochVector &r0, uint64_t shots);

/// Leading large-N behaviour: (9 - 3 r0^2) / (2N) for the projective triplet
/// and the six-outcome POVM, (9 - r0^2) / (2N) for the tetrahedron and the
/// continuous moment estimator. Exact except for the six-outcome POVM.
double asymptotic_variance(ProtocolTag tag, const BlochVector &r0, uint64_t shots);

/// sum_k (1 - r0_k^2) / (2 N_k) for an arbitrary per-axis allocation.
double analytic_variance_projective(const BlochVector &r0, const AxisAllocation &allocation);

/// The six-outcome variance with r0^2 (6^N - 4^N) / 9^N as second term, i.e.
/// without the factor 1/2 that the per-axis error sum carries. Kept only to
/// quantify how far that form is from the exact one.
double six_outcome_variance_as_printed(const BlochVector &r0, uint64_t shots);

/// Monte Carlo summary of M sample-then-estimate cycles.
struct TrialStats {
    uint64_t trials = 0;
    Vec3 mean;
    Vec3 bias;     // mean - r0
    Vec3 mean_se;  // per component
    /// (1/M) sum 1/2 |r'_i - mean|^2 = 1/2 (<|r'|^2> - |<r'>|^2).
    double hs_variance = 0.0;
    double hs_variance_se = 0.0;
    /// <|r'|^2>.
    double second_moment = 0.0;
    double second_moment_se = 0.0;
    /// Continuous ML only: fraction of trials whose solver converged.
    std::optional<double> ml_converged_fraction;
    std::optional<double> ml_boundary_fraction;
};

struct TrialOptions {
    BallPolicy policy = BallPolicy::kUnrestricted;
    /// Per-axis split for the projective triplet; equal thirds when absent.
    std::optional<AxisAllocation> allocation;
    /// Worker threads; 0 means default_worker_count().
    unsigned threads = 0;
    MlConfig ml;
};

/// Worker count from TOMOLAB_THREADS, else the hardware concurrency.
unsigned default_worker_count();

/// One sample-then-estimate cycle with the given stream.
BlochVector run_single_trial(ProtocolTag tag, const BlochVector &r0, uint64_t shots, const SeedSpec &seed,
                             const TrialOptions &options, MlResult *ml_out = nullptr);

/// Trial i uses stream seed.stream + i. Results are reduced in trial order,
/// so they do not depend on the number of workers.
TrialStats run_trials(ProtocolTag tag, const BlochVector &r0, uint64_t shots, uint64_t trials, const SeedSpec &seed,
                      const TrialOptions &options = {});

/// Summary statistics of a list of estimates (what run_trials reduces).
TrialStats summarize(const std::vector<Vec3> &estimates, const BlochVector &r0);

struct TableRow {
    ProtocolTag protocol;
    std::optional<Vec3> analytic_mean;
    std::optional<double> analytic_variance;
    std::optional<double> asymptotic_variance;
    TrialStats stats;
    /// |empirical - analytic| <= 4 standard errors; absent without a closed form.
    std::optional<bool> mean_pass;
    std::optional<bool> variance_pass;
};

inline constexpr double kAcceptanceSigmas = 4.0;

/// Passes if |observed - expected| <= sigmas * se, or if both coincide to
/// 1e-12 when a degenerate distribution gives se = 0.
bool within_standard_errors(double observed, double expected, double se, double sigmas = kAcceptanceSigmas);

/// Attaches closed-form columns and 4-sigma verdicts to Monte Carlo stats.
TableRow make_table_row(ProtocolTag tag, const BlochVector &r0, uint64_t shots, const TrialStats &stats,
                        const std::optional<AxisAllocation> &allocation = std::nullopt);

/// One row per protocol in kAllProtocols order.
std::vector<TableRow> summary_table(const BlochVector &r0, uint64_t shots, uint64_t trials, const SeedSpec &seed,
                                    const TrialOptions &options = {});

}  // namespace tomolab

#endif
