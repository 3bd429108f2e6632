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

#include "tomolab/analysis.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>

namespace tomolab {

std::string_view protocol_name(ProtocolTag tag) {
    switch (tag) {
        case ProtocolTag::kProjectiveTriplet:
            return "projective";
        case ProtocolTag::kSixOutcome:
            return "six-outcome";
        case ProtocolTag::kTetrahedron:
            return "tetrahedron";
        case ProtocolTag::kContinuousMoment:
            return "continuous-moment";
        case ProtocolTag::kContinuousMl:
            return "continuous-ml";
    }
    return "?";
}

ProtocolTag protocol_from_name(std::string_view name) {
    for (auto tag : kAllProtocols) {
        if (protocol_name(tag) == name) {
            return tag;
        }
    }
    throw PreconditionError("unknown protocol '" + std::string(name) + "'");
}

MeasurementScheme scheme_of(ProtocolTag tag) {
    switch (tag) {
        case ProtocolTag::kProjectiveTriplet:
            return MeasurementScheme::kProjectiveTriplet;
        case ProtocolTag::kSixOutcome:
            return MeasurementScheme::kSixOutcome;
        case ProtocolTag::kTetrahedron:
            return MeasurementScheme::kTetrahedron;
        default:
            return MeasurementScheme::kContinuous;
    }
}

bool has_closed_form(ProtocolTag tag) {
    return tag != ProtocolTag::kContinuousMl;
}

namespace {

void require_closed_form(ProtocolTag tag, uint64_t shots, const char *what) {
    if (!has_closed_form(tag)) {
        std::ostringstream msg;
        msg << what << ": " << protocol_name(tag) << " has no closed-form moments";
        throw UnsupportedAnalyticError(msg.str());
    }
    if (shots == 0) {
        std::ostringstream msg;
        msg << what << ": need at least one shot";
        throw PreconditionError(msg.str());
    }
}

double pow_two_thirds(uint64_t n) {
    return std::pow(2.0 / 3.0, static_cast<double>(n));
}

}  // namespace

Vec3 analytic_mean(ProtocolTag tag, const BlochVector &r0, uint64_t shots) {
    require_closed_form(tag, shots, "analytic_mean");
    if (tag == ProtocolTag::kSixOutcome) {
        return (1.0 - pow_two_thirds(shots)) * r0;
    }
    return r0;
}

double f_n(uint64_t n) {
    if (n == 0) {
        throw PreconditionError("f_n: N must be at least 1");
    }
    const long double big_n = static_cast<long double>(n);
    long double sum = 0;
    if (n <= 16000) {
        // term = C(N, k) (1/3)^k (2/3)^(N-k), the Binomial(N, 1/3) weights.
        long double term = std::pow(2.0L / 3.0L, big_n);
        for (uint64_t k = 0; k < n; k++) {
            term *= static_cast<long double>(n - k) / static_cast<long double>(k + 1) * 0.5L;
            sum += term / static_cast<long double>(k + 1);
        }
    } else {
        const long double log_third = std::log(1.0L / 3.0L);
        const long double log_two_thirds = std::log(2.0L / 3.0L);
        const long double log_n_fact = std::lgamma(big_n + 1.0L);
        for (uint64_t k = 1; k <= n; k++) {
            long double kk = static_cast<long double>(k);
            long double log_term = log_n_fact - std::lgamma(kk + 1.0L) - std::lgamma(big_n - kk + 1.0L) +
                                   kk * log_third + (big_n - kk) * log_two_thirds;
            sum += std::exp(log_term) / kk;
        }
    }
    return static_cast<double>(big_n * sum);
}

double f_n_recursion(uint64_t n) {
    if (n == 0) {
        throw PreconditionError("f_n_recursion: N must be at least 1");
    }
    long double s = 1.0L;
    long double harmonic = 1.0L;
    for (uint64_t m = 1; m < n; m++) {
        long double mm = static_cast<long double>(m);
        s += (2.0L / (3.0L * mm) - 1.0L / 3.0L) * s + 1.0L;
        harmonic += 1.0L / (mm + 1.0L);
    }
    long double big_n = static_cast<long double>(n);
    return static_cast<double>(s - big_n * std::pow(2.0L / 3.0L, big_n) * harmonic);
}

double analytic_variance_projective(const BlochVector &r0, const AxisAllocation &allocation) {
    double total = 0.0;
    for (int k = 0; k < 3; k++) {
        if (allocation.shots[k] == 0) {
            throw PreconditionError("analytic_variance_projective: every axis needs at least one shot");
        }
        total += (1.0 - r0[k] * r0[k]) / (2.0 * static_cast<double>(allocation.shots[k]));
    }
    return total;
}

namespace {

/// (2/3)^N (1 - (2/3)^N) = (6^N - 4^N) / 9^N.
double six_outcome_axis_spread(uint64_t shots) {
    double q = pow_two_thirds(shots);
    return q * (1.0 - q);
}

}  // namespace

double analytic_variance(ProtocolTag tag, const BlochVector &r0, uint64_t shots) {
    require_closed_form(tag, shots, "analytic_variance");
    double r2 = dot(r0, r0);
    double n = static_cast<double>(shots);
    switch (tag) {
        case ProtocolTag::kProjectiveTriplet:
            return analytic_variance_projective(r0, AxisAllocation::equal(shots));
        case ProtocolTag::kSixOutcome:
            return f_n(shots) * (3.0 - r2) / (2.0 * n) + 0.5 * r2 * six_outcome_axis_spread(shots);
        default:
            return (9.0 - r2) / (2.0 * n);
    }
}

double asymptotic_variance(ProtocolTag tag, const BlochVector &r0, uint64_t shots) {
    require_closed_form(tag, shots, "asymptotic_variance");
    double r2 = dot(r0, r0);
    double n = static_cast<double>(shots);
    switch (tag) {
        case ProtocolTag::kProjectiveTriplet:
        case ProtocolTag::kSixOutcome:
            return (9.0 - 3.0 * r2) / (2.0 * n);
        default:
            return (9.0 - r2) / (2.0 * n);
    }
}

double six_outcome_variance_as_printed(const BlochVector &r0, uint64_t shots) {
    require_closed_form(ProtocolTag::kSixOutcome, shots, "six_outcome_variance_as_printed");
    double r2 = dot(r0, r0);
    return f_n(shots) * (3.0 - r2) / (2.0 * static_cast<double>(shots)) + r2 * six_outcome_axis_spread(shots);
}

unsigned default_worker_count() {
    if (const char *env = std::getenv("TOMOLAB_THREADS"); env != nullptr && *env != '\0') {
        char *end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

BlochVector run_single_trial(ProtocolTag tag, const BlochVector &r0, uint64_t shots, const SeedSpec &seed,
                             const TrialOptions &options, MlResult *ml_out) {
    BlochVector estimate;
    switch (tag) {
        case ProtocolTag::kProjectiveTriplet:
            estimate = estimate_projective(sample_projective(r0, shots, seed, options.allocation));
            break;
        case ProtocolTag::kSixOutcome:
            estimate = estimate_six(sample_discrete(six_outcome_povm(), r0, shots, seed));
            break;
        case ProtocolTag::kTetrahedron:
            estimate = estimate_tetrahedron(sample_discrete(tetrahedron_povm(), r0, shots, seed));
            break;
        case ProtocolTag::kContinuousMoment:
            estimate = estimate_moment(sample_continuous(r0, shots, seed));
            break;
        case ProtocolTag::kContinuousMl: {
            MlResult ml = estimate_ml_continuous(sample_continuous(r0, shots, seed), options.ml);
            estimate = ml.r;
            if (ml_out != nullptr) {
                *ml_out = ml;
            }
            break;
        }
    }
    return apply_policy(estimate, options.policy);
}

TrialStats summarize(const std::vector<Vec3> &estimates, const BlochVector &r0) {
    TrialStats stats;
    stats.trials = estimates.size();
    if (estimates.empty()) {
        return stats;
    }
    const long double m = static_cast<long double>(estimates.size());
    long double sum[3] = {};
    for (const auto &r : estimates) {
        for (int k = 0; k < 3; k++) {
            sum[k] += r[k];
        }
    }
    for (int k = 0; k < 3; k++) {
        stats.mean[k] = static_cast<double>(sum[k] / m);
    }
    stats.bias = stats.mean - r0;

    long double comp_sq[3] = {};
    long double d_sum = 0, d_sq = 0, s_sum = 0, s_sq = 0;
    for (const auto &r : estimates) {
        Vec3 delta = r - stats.mean;
        for (int k = 0; k < 3; k++) {
            comp_sq[k] += static_cast<long double>(delta[k]) * delta[k];
        }
        long double d = 0.5L * static_cast<long double>(dot(delta, delta));
        long double s = static_cast<long double>(dot(r, r));
        d_sum += d;
        d_sq += d * d;
        s_sum += s;
        s_sq += s * s;
    }
    auto standard_error = [&](long double centered_sq) {
        if (estimates.size() < 2) {
            return 0.0;
        }
        return static_cast<double>(std::sqrt(centered_sq / (m - 1.0L) / m));
    };
    for (int k = 0; k < 3; k++) {
        stats.mean_se[k] = standard_error(comp_sq[k]);
    }
    long double d_mean = d_sum / m;
    long double s_mean = s_sum / m;
    stats.hs_variance = static_cast<double>(d_mean);
    stats.hs_variance_se = standard_error(std::max(0.0L, d_sq - m * d_mean * d_mean));
    stats.second_moment = static_cast<double>(s_mean);
    stats.second_moment_se = standard_error(std::max(0.0L, s_sq - m * s_mean * s_mean));
    return stats;
}

TrialStats run_trials(ProtocolTag tag, const BlochVector &r0, uint64_t shots, uint64_t trials, const SeedSpec &seed,
                      const TrialOptions &options) {
    if (trials == 0) {
        throw PreconditionError("run_trials: need at least one trial");
    }
    require_state(r0, "run_trials");
    // Surface configuration errors (allocation, shot count) on the calling thread.
    if (tag == ProtocolTag::kProjectiveTriplet && !options.allocation) {
        AxisAllocation::equal(shots);
    }

    std::vector<Vec3> estimates(trials);
    std::vector<MlResult> ml(tag == ProtocolTag::kContinuousMl ? trials : 0);
    unsigned workers = options.threads != 0 ? options.threads : default_worker_count();
    workers = static_cast<unsigned>(std::min<uint64_t>(workers, trials));

    std::atomic<uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&]() {
        while (!failed.load()) {
            uint64_t i = next.fetch_add(1);
            if (i >= trials) {
                return;
            }
            try {
                estimates[i] = run_single_trial(tag, r0, shots, seed.with_stream(seed.stream + i), options,
                                                ml.empty() ? nullptr : &ml[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                failed = true;
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; w++) {
            pool.emplace_back(work);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    TrialStats stats = summarize(estimates, r0);
    if (!ml.empty()) {
        uint64_t converged = 0, boundary = 0;
        for (const auto &res : ml) {
            converged += res.converged ? 1 : 0;
            boundary += res.on_boundary ? 1 : 0;
        }
        stats.ml_converged_fraction = static_cast<double>(converged) / static_cast<double>(trials);
        stats.ml_boundary_fraction = static_cast<double>(boundary) / static_cast<double>(trials);
    }
    return stats;
}

bool within_standard_errors(double observed, double expected, double se, double sigmas) {
    double gap = std::fabs(observed - expected);
    return gap <= sigmas * se || gap <= kExactTolerance;
}

TableRow make_table_row(ProtocolTag tag, const BlochVector &r0, uint64_t shots, const TrialStats &stats,
                        const std::optional<AxisAllocation> &allocation) {
    TableRow row;
    row.protocol = tag;
    row.stats = stats;
    if (!has_closed_form(tag)) {
        return row;
    }
    row.analytic_mean = analytic_mean(tag, r0, shots);
    row.analytic_variance = tag == ProtocolTag::kProjectiveTriplet && allocation
                                ? analytic_variance_projective(r0, *allocation)
                                : analytic_variance(tag, r0, shots);
    row.asymptotic_variance = tag == ProtocolTag::kProjectiveTriplet && allocation
                                  ? *row.analytic_variance
                                  : asymptotic_variance(tag, r0, shots);
    bool mean_ok = true;
    for (int k = 0; k < 3; k++) {
        mean_ok = mean_ok && within_standard_errors(stats.mean[k], (*row.analytic_mean)[k], stats.mean_se[k]);
    }
    row.mean_pass = mean_ok;
    row.variance_pass = within_standard_errors(stats.hs_variance, *row.analytic_variance, stats.hs_variance_se);
    return row;
}

std::vector<TableRow> summary_table(const BlochVector &r0, uint64_t shots, uint64_t trials, const SeedSpec &seed,
                                    const TrialOptions &options) {
    std::vector<TableRow> rows;
    for (auto tag : kAllProtocols) {
        rows.push_back(
            make_table_row(tag, r0, shots, run_trials(tag, r0, shots, trials, seed, options), options.allocation));
    }
    return rows;
}

}  // namespace tomolab
