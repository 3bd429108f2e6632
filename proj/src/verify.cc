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

#include "tomolab/verify.h"

#include <boost/math/quadrature/gauss.hpp>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "tomolab/analysis.h"
#include "tomolab/estimators.h"
#include "tomolab/oracles.h"
#include "tomolab/povm.h"
#include "tomolab/sampling.h"

namespace tomolab {

namespace {

constexpr double kSignificance = 1e-3;

/// Records the first failure; later checks are still counted.
class Checker {
   public:
    explicit Checker(std::string name) : name_(std::move(name)), start_(std::chrono::steady_clock::now()) {
    }

    bool expect(bool condition, const std::function<std::string()> &describe) {
        checks_++;
        if (!condition && failure_.empty()) {
            failure_ = describe();
        }
        return condition;
    }

    SuiteResult finish() const {
        SuiteResult r;
        r.name = name_;
        r.passed = failure_.empty();
        if (r.passed) {
            r.detail = std::to_string(checks_) + " checks";
        } else {
            r.detail = failure_;
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        return r;
    }

   private:
    std::string name_;
    std::chrono::steady_clock::time_point start_;
    std::string failure_;
    uint64_t checks_ = 0;
};

template <typename... Args>
std::string describe(Args &&...args) {
    std::ostringstream out;
    (out << ... << args);
    return out.str();
}

double relative_error(const std::array<std::array<double, 3>, 3> &a, const std::array<std::array<double, 3>, 3> &b) {
    double diff = 0.0, scale = 0.0;
    for (int i = 0; i < 3; i++) {
        for (int j = 0; j < 3; j++) {
            diff = std::fmax(diff, std::fabs(a[i][j] - b[i][j]));
            scale = std::fmax(scale, std::fabs(b[i][j]));
        }
    }
    return diff / std::fmax(scale, 1e-300);
}

double relative_error(const Vec3 &a, const Vec3 &b) {
    double scale = std::fmax(std::fabs(b.x), std::fmax(std::fabs(b.y), std::fabs(b.z)));
    return max_abs_diff(a, b) / std::fmax(scale, 1e-300);
}

}  // namespace

SuiteResult verify_completeness(const VerifyOptions &options) {
    Checker check("completeness");
    DiscretePovm tetra = tetrahedron_povm();
    if (options.tamper_tetrahedron_weights) {
        for (auto &e : tetra.elements) {
            e.weight *= 0.5;
        }
    }
    for (const auto &povm : {six_outcome_povm(), tetra}) {
        auto res = completeness_residual(povm);
        check.expect(res.worst() <= kExactTolerance, [&] {
            return describe(povm.label, " POVM is not complete: |sum c - 2| = ", res.weight_sum_error,
                            ", |sum c a| = ", res.first_moment_error, ", |sum Q - I| = ", res.operator_error);
        });
    }

    ProjectiveTriplet triplet = projective_triplet();
    for (int k = 0; k < 3; k++) {
        const auto &[plus, minus] = triplet.projectors[k];
        check.expect(plus + minus == Matrix2::identity(),
                     [&] { return describe("projective axis ", k, ": P+ + P- != I"); });
        check.expect(max_abs_diff(plus * minus, Matrix2::zero()) == 0.0,
                     [&] { return describe("projective axis ", k, ": P+ P- != 0"); });
    }

    Rng rng({options.seed, 1});
    for (int trial = 0; trial < 1000; trial++) {
        Vec3 r0 = oracle::random_in_ball(rng);
        for (const auto &povm : {six_outcome_povm(), tetra}) {
            double total = 0.0;
            for (double p : outcome_probabilities(povm, r0)) {
                total += p;
            }
            check.expect(std::fabs(total - 1.0) <= kExactTolerance, [&] {
                return describe(povm.label, " probabilities sum to ", total, " at r0 = ", r0);
            });
        }
    }

    using boost::math::quadrature::gauss;
    for (int trial = 0; trial < 10; trial++) {
        Vec3 r0 = oracle::random_in_ball(rng);
        auto over_theta = [&](double theta) {
            auto over_phi = [&](double phi) {
                Vec3 s{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
                return continuous_density(r0, s / norm(s));
            };
            return gauss<double, 20>::integrate(over_phi, 0.0, 2.0 * std::numbers::pi) * std::sin(theta);
        };
        double total = gauss<double, 20>::integrate(over_theta, 0.0, std::numbers::pi) / (4.0 * std::numbers::pi);
        check.expect(std::fabs(total - 1.0) <= 1e-3,
                     [&] { return describe("continuous density integrates to ", total, " at r0 = ", r0); });
    }
    return check.finish();
}

SuiteResult verify_equivariance(const VerifyOptions &options) {
    Checker check("equivariance");
    Rng rng({options.seed, 2});
    for (int trial = 0; trial < 500; trial++) {
        SphericalCap cap(oracle::random_on_sphere(rng), std::numbers::pi * rng.uniform());
        AxisAngle g = oracle::random_rotation(rng);
        double alpha = rng.uniform();
        double residual = equivariance_residual(cap, g);
        double residual_alpha = equivariance_residual(cap, g, alpha);
        check.expect(residual <= kTrigTolerance && residual_alpha <= kTrigTolerance, [&] {
            return describe("equivariance residual ", residual, " (alpha ", alpha, ": ", residual_alpha,
                            ") for cap centre ", cap.center, " half-angle ", cap.half_angle);
        });
    }
    for (int trial = 0; trial < 1000; trial++) {
        Vec3 s = oracle::random_on_sphere(rng);
        Vec3 n = (2.0 * std::numbers::pi * rng.uniform()) * oracle::random_on_sphere(rng);
        double gap = max_abs_diff(conjugate_pure_matrix(s, n), conjugate_pure_rotation(s, n));
        check.expect(gap <= kTrigTolerance,
                     [&] { return describe("conjugation routes differ by ", gap, " at s = ", s, ", n = ", n); });
    }
    return check.finish();
}

SuiteResult verify_gradient(const VerifyOptions &options) {
    Checker check("gradient-check");
    Rng rng({options.seed, 3});
    constexpr double kStep = 1e-5;
    constexpr double kRelative = 1e-5;
    for (int trial = 0; trial < 100; trial++) {
        Vec3 r0 = oracle::random_in_ball(rng);
        MeasurementRecord record = sample_continuous(r0, 20, {options.seed, 1000 + static_cast<uint64_t>(trial)});
        std::span<const Vec3> outcomes(record.outcomes);
        Vec3 point = (0.9 * std::cbrt(rng.uniform())) * oracle::random_on_sphere(rng);

        auto f = [&](const Vec3 &r) { return log_likelihood(outcomes, r); };
        auto g = [&](const Vec3 &r) { return log_likelihood_gradient(outcomes, r); };
        double grad_err = relative_error(g(point), oracle::finite_difference_gradient(f, point, kStep));
        double hess_err = relative_error(log_likelihood_hessian(outcomes, point),
                                         oracle::finite_difference_jacobian(g, point, kStep));
        check.expect(grad_err <= kRelative && hess_err <= kRelative, [&] {
            return describe("finite differences disagree at ", point, ": gradient rel ", grad_err, ", Hessian rel ",
                            hess_err);
        });
    }
    return check.finish();
}

SuiteResult verify_enumeration(const VerifyOptions &options) {
    Checker check("enumeration-oracle");
    Rng rng({options.seed, 4});
    const int states = options.full ? 20 : 5;
    const uint64_t max_shots = options.full ? 6 : 4;
    constexpr double kTol = 1e-12;

    auto compare = [&](const char *what, ProtocolTag tag, const Vec3 &r0, uint64_t shots,
                       const oracle::ExactMoments &exact, double expected_variance) {
        Vec3 expected_mean = analytic_mean(tag, r0, shots);
        double mean_gap = max_abs_diff(exact.mean, expected_mean);
        double var_gap = std::fabs(exact.hs_variance - expected_variance);
        check.expect(mean_gap <= kTol && var_gap <= kTol, [&] {
            return describe(what, " N=", shots, " r0=", r0, ": mean gap ", mean_gap, ", variance gap ", var_gap);
        });
    };

    for (int s = 0; s < states; s++) {
        Vec3 r0 = oracle::random_in_ball(rng);
        for (uint64_t n = 1; n <= max_shots; n++) {
            auto tetra = oracle::enumerate_discrete(tetrahedron_povm(), MeasurementScheme::kTetrahedron, r0, n,
                                                    [](const MeasurementRecord &rec) { return estimate_tetrahedron(rec); });
            compare("tetrahedron", ProtocolTag::kTetrahedron, r0, n, tetra,
                    analytic_variance(ProtocolTag::kTetrahedron, r0, n));
            auto six = oracle::enumerate_discrete(six_outcome_povm(), MeasurementScheme::kSixOutcome, r0, n,
                                                  [](const MeasurementRecord &rec) { return estimate_six(rec); });
            compare("six-outcome", ProtocolTag::kSixOutcome, r0, n, six,
                    analytic_variance(ProtocolTag::kSixOutcome, r0, n));
        }
        for (uint64_t nx = 1; nx <= 2; nx++) {
            for (uint64_t ny = 1; ny <= 2; ny++) {
                for (uint64_t nz = 1; nz <= 2; nz++) {
                    AxisAllocation alloc{{nx, ny, nz}};
                    auto exact = oracle::enumerate_projective(
                        r0, alloc, [](const MeasurementRecord &rec) { return estimate_projective(rec); });
                    compare("projective", ProtocolTag::kProjectiveTriplet, r0, alloc.total(), exact,
                            analytic_variance_projective(r0, alloc));
                }
            }
        }
    }
    return check.finish();
}

SuiteResult verify_sampler(const VerifyOptions &options) {
    Checker check("sampler-distribution");
    const uint64_t draws = options.full ? 100002 : 12000;
    Rng rng({options.seed, 5});

    for (int s = 0; s < 10; s++) {
        Vec3 r0 = oracle::random_in_ball(rng);
        SeedSpec seed{options.seed, 5000 + static_cast<uint64_t>(s)};
        for (const auto &povm : {six_outcome_povm(), tetrahedron_povm()}) {
            MeasurementRecord rec = sample_discrete(povm, r0, draws, seed);
            double p = oracle::chi_square_p_value(rec.counts, outcome_probabilities(povm, r0));
            check.expect(p > kSignificance,
                         [&] { return describe(povm.label, " chi-square p = ", p, " at r0 = ", r0); });
        }
        MeasurementRecord rec = sample_projective(r0, draws, seed);
        auto probs = projective_triplet().axis_probabilities(r0);
        std::vector<double> flat;
        for (const auto &axis : probs) {
            flat.push_back(axis[0] / 3.0);
            flat.push_back(axis[1] / 3.0);
        }
        // Per-axis totals are fixed by the allocation: two more constraints.
        double p = oracle::chi_square_p_value(rec.counts, flat, 2);
        check.expect(p > kSignificance, [&] { return describe("projective chi-square p = ", p, " at r0 = ", r0); });
    }

    for (double r : {0.0, 0.3, 0.9, 1.0}) {
        Vec3 dir = oracle::random_on_sphere(rng);
        Vec3 r0 = r * dir;
        MeasurementRecord rec = sample_continuous(r0, draws, {options.seed, 7000 + static_cast<uint64_t>(r * 10)});
        auto [e1, e2] = orthonormal_complement(dir);
        std::vector<double> cos_theta, azimuth;
        for (const auto &n : rec.outcomes) {
            cos_theta.push_back(dot(n, dir));
            azimuth.push_back(std::atan2(dot(n, e2), dot(n, e1)));
        }
        double d = oracle::ks_statistic(cos_theta, [r](double t) { return (t + 1.0) / 2.0 + r * (t * t - 1.0) / 4.0; });
        double p = oracle::ks_p_value(d, draws);
        check.expect(p > kSignificance, [&] { return describe("cos(theta) KS p = ", p, " at r = ", r); });
        double da = oracle::ks_statistic(azimuth, [](double a) { return (a + std::numbers::pi) / (2.0 * std::numbers::pi); });
        double pa = oracle::ks_p_value(da, draws);
        check.expect(pa > kSignificance, [&] { return describe("azimuth KS p = ", pa, " at r = ", r); });

        auto reference = oracle::rejection_sample_continuous(r0, draws, {options.seed, 8000 + static_cast<uint64_t>(r * 10)});
        for (int moment = 1; moment <= 2; moment++) {
            for (int k = 0; k < 3; k++) {
                auto stats_of = [&](const std::vector<Vec3> &xs) {
                    long double sum = 0, sq = 0;
                    for (const auto &x : xs) {
                        long double v = moment == 1 ? x[k] : x[k] * x[k];
                        sum += v;
                        sq += v * v;
                    }
                    long double m = static_cast<long double>(xs.size());
                    long double mean = sum / m;
                    return std::pair<double, double>(static_cast<double>(mean),
                                                     static_cast<double>(std::sqrt((sq / m - mean * mean) / m)));
                };
                auto [a, sa] = stats_of(rec.outcomes);
                auto [b, sb] = stats_of(reference);
                double z = std::fabs(a - b) / std::sqrt(sa * sa + sb * sb);
                check.expect(z <= 5.0, [&] {
                    return describe("inverse-CDF vs rejection moment ", moment, " component ", k, " differ by ", z,
                                    " standard errors at r = ", r);
                });
            }
        }
    }
    return check.finish();
}

std::vector<SuiteResult> run_verification(const VerifyOptions &options) {
    return {
        verify_completeness(options), verify_equivariance(options), verify_gradient(options),
        verify_enumeration(options),  verify_sampler(options),
    };
}

}  // namespace tomolab
