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

#include "tomolab/oracles.h"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <numbers>

namespace tomolab::oracle {

namespace {

struct WeightedEstimate {
    double probability;
    BlochVector estimate;
};

ExactMoments moments_of(const std::vector<WeightedEstimate> &table) {
    ExactMoments out;
    out.tuples = table.size();
    long double m[3] = {};
    for (const auto &w : table) {
        for (int k = 0; k < 3; k++) {
            m[k] += static_cast<long double>(w.probability) * w.estimate[k];
        }
    }
    out.mean = {static_cast<double>(m[0]), static_cast<double>(m[1]), static_cast<double>(m[2])};
    DensityMatrix mean_rho = density_from_bloch(out.mean);
    long double v = 0;
    for (const auto &w : table) {
        v += static_cast<long double>(w.probability) * hs_distance_sq(density_from_bloch(w.estimate), mean_rho);
    }
    out.hs_variance = static_cast<double>(v);
    return out;
}

double born_probability(const DensityMatrix &rho, const Matrix2 &effect) {
    return (rho * effect).trace().real();
}

}  // namespace

ExactMoments enumerate_discrete(const DiscretePovm &povm, MeasurementScheme scheme, const BlochVector &r0,
                                uint64_t shots, const DiscreteEstimator &estimator) {
    const size_t k_count = povm.size();
    DensityMatrix rho = density_from_bloch(r0);
    std::vector<double> p;
    for (const auto &e : povm.elements) {
        p.push_back(born_probability(rho, e.matrix()));
    }

    std::vector<WeightedEstimate> table;
    std::vector<size_t> tuple(shots, 0);
    MeasurementRecord record;
    record.scheme = scheme;
    while (true) {
        record.counts.assign(k_count, 0);
        double prob = 1.0;
        for (size_t i : tuple) {
            record.counts[i]++;
            prob *= p[i];
        }
        table.push_back({prob, estimator(record)});
        // Odometer increment.
        size_t pos = 0;
        while (pos < shots && ++tuple[pos] == k_count) {
            tuple[pos] = 0;
            pos++;
        }
        if (pos == shots) {
            break;
        }
    }
    return moments_of(table);
}

ExactMoments enumerate_projective(const BlochVector &r0, const AxisAllocation &allocation,
                                  const DiscreteEstimator &estimator) {
    DensityMatrix rho = density_from_bloch(r0);
    std::vector<int> axis_of_shot;
    for (int k = 0; k < 3; k++) {
        for (uint64_t i = 0; i < allocation.shots[k]; i++) {
            axis_of_shot.push_back(k);
        }
    }
    std::array<std::array<double, 2>, 3> p{};
    for (int k = 0; k < 3; k++) {
        Matrix2 plus = 0.5 * (Matrix2::identity() + pauli::all[k]);
        Matrix2 minus = 0.5 * (Matrix2::identity() - pauli::all[k]);
        p[k] = {born_probability(rho, plus), born_probability(rho, minus)};
    }

    const size_t n = axis_of_shot.size();
    std::vector<WeightedEstimate> table;
    MeasurementRecord record;
    record.scheme = MeasurementScheme::kProjectiveTriplet;
    for (uint64_t mask = 0; mask < (uint64_t{1} << n); mask++) {
        record.counts.assign(6, 0);
        double prob = 1.0;
        for (size_t i = 0; i < n; i++) {
            int k = axis_of_shot[i];
            int minus = static_cast<int>((mask >> i) & 1);
            record.counts[2 * k + minus]++;
            prob *= p[k][minus];
        }
        table.push_back({prob, estimator(record)});
    }
    return moments_of(table);
}

Vec3 random_on_sphere(Rng &rng) {
    while (true) {
        Vec3 v{2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
        double len = norm(v);
        if (len > 1e-3 && len <= 1.0) {
            return v / len;
        }
    }
}

Vec3 random_in_ball(Rng &rng) {
    while (true) {
        Vec3 v{2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
        if (dot(v, v) <= 1.0) {
            return v;
        }
    }
}

AxisAngle random_rotation(Rng &rng) {
    Vec3 axis = random_on_sphere(rng);
    return AxisAngle(axis, 2.0 * std::numbers::pi * rng.uniform());
}

std::vector<Vec3> rejection_sample_continuous(const BlochVector &r0, uint64_t shots, const SeedSpec &seed) {
    Rng rng(seed);
    std::vector<Vec3> out;
    out.reserve(shots);
    while (out.size() < shots) {
        Vec3 s = random_on_sphere(rng);
        if (2.0 * rng.uniform() < 1.0 + dot(r0, s)) {
            out.push_back(s);
        }
    }
    return out;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)> &cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < samples.size(); i++) {
        double f = cdf(samples[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_p_value(double d, uint64_t n) {
    double sqrt_n = std::sqrt(static_cast<double>(n));
    double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
    if (lambda < 0.2) {
        return 1.0;
    }
    double sum = 0.0;
    for (int k = 1; k <= 100; k++) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
        if (term < 1e-16) {
            break;
        }
    }
    return std::clamp(sum, 0.0, 1.0);
}

double chi_square_p_value(std::span<const uint64_t> observed, std::span<const double> probabilities,
                          uint64_t extra_constraints) {
    uint64_t total = 0;
    for (auto o : observed) {
        total += o;
    }
    double stat = 0.0;
    int cells = 0;
    for (size_t k = 0; k < observed.size(); k++) {
        double expected = probabilities[k] * static_cast<double>(total);
        if (expected <= 0.0) {
            if (observed[k] != 0) {
                return 0.0;
            }
            continue;
        }
        double diff = static_cast<double>(observed[k]) - expected;
        stat += diff * diff / expected;
        cells++;
    }
    double dof = static_cast<double>(cells - 1) - static_cast<double>(extra_constraints);
    if (dof < 1.0) {
        return 1.0;
    }
    boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, stat));
}

double log_likelihood(std::span<const Vec3> outcomes, const Vec3 &r) {
    double total = 0.0;
    for (const auto &n : outcomes) {
        double w = 1.0 + r.x * n.x + r.y * n.y + r.z * n.z;
        if (w <= 0.0) {
            return -std::numeric_limits<double>::infinity();
        }
        total += std::log(w);
    }
    return total;
}

namespace {

struct GridBest {
    Vec3 point;
    double value = -std::numeric_limits<double>::infinity();

    void offer(std::span<const Vec3> outcomes, const Vec3 &p) {
        if (dot(p, p) > 1.0 + 4.0 * std::numeric_limits<double>::epsilon()) {
            return;
        }
        double v = log_likelihood(outcomes, p);
        if (v > value || (v == value && dot(p, p) < dot(point, point))) {
            value = v;
            point = p;
        }
    }
};

GridBest sphere_search(std::span<const Vec3> outcomes, double coarse_step, double final_step) {
    GridBest best;
    int rings = static_cast<int>(std::ceil(std::numbers::pi / coarse_step));
    for (int i = 0; i <= rings; i++) {
        double theta = std::numbers::pi * i / rings;
        int spokes = std::max(1, static_cast<int>(std::ceil(2.0 * std::numbers::pi * std::sin(theta) / coarse_step)));
        for (int j = 0; j < spokes; j++) {
            double phi = 2.0 * std::numbers::pi * j / spokes;
            Vec3 p{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
            best.offer(outcomes, p / norm(p));
        }
    }
    constexpr int kReach = 10;
    double step = coarse_step;
    while (step > final_step) {
        double fine = step / 5.0;
        for (int pass = 0; pass < 50; pass++) {
            Vec3 center = best.point;
            auto [e1, e2] = orthonormal_complement(center);
            GridBest local = best;
            bool on_edge = false;
            for (int i = -kReach; i <= kReach; i++) {
                for (int j = -kReach; j <= kReach; j++) {
                    Vec3 p = center + (i * fine) * e1 + (j * fine) * e2;
                    double before = local.value;
                    local.offer(outcomes, p / norm(p));
                    if (local.value != before) {
                        on_edge = std::abs(i) == kReach || std::abs(j) == kReach;
                    }
                }
            }
            best = local;
            if (!on_edge) {
                break;
            }
        }
        step = fine;
    }
    return best;
}

}  // namespace

Vec3 grid_search_ml(std::span<const Vec3> outcomes, double coarse_step, double final_step) {
    GridBest best;
    int half = static_cast<int>(std::ceil(1.0 / coarse_step));
    for (int i = -half; i <= half; i++) {
        for (int j = -half; j <= half; j++) {
            for (int k = -half; k <= half; k++) {
                best.offer(outcomes, {i * coarse_step, j * coarse_step, k * coarse_step});
            }
        }
    }
    constexpr int kWindow = 2;
    double step = coarse_step;
    while (step > final_step) {
        double fine = step / 5.0;
        int reach = kWindow * 5;
        // Re-centre while the winner sits on the window edge.
        for (int pass = 0; pass < 50; pass++) {
            Vec3 center = best.point;
            GridBest local = best;
            int edge_i = 0, edge_j = 0, edge_k = 0;
            for (int i = -reach; i <= reach; i++) {
                for (int j = -reach; j <= reach; j++) {
                    for (int k = -reach; k <= reach; k++) {
                        Vec3 p = center + Vec3{i * fine, j * fine, k * fine};
                        double before = local.value;
                        local.offer(outcomes, p);
                        if (local.value != before) {
                            edge_i = i;
                            edge_j = j;
                            edge_k = k;
                        }
                    }
                }
            }
            best = local;
            bool on_edge = std::abs(edge_i) == reach || std::abs(edge_j) == reach || std::abs(edge_k) == reach;
            if (!on_edge) {
                break;
            }
        }
        step = fine;
    }
    // The ball lattice only resolves a boundary maximum to ~sqrt(step)
    // tangentially; the sphere is searched separately in its own coordinates.
    GridBest sphere = sphere_search(outcomes, coarse_step, final_step * final_step);
    if (sphere.value > best.value) {
        return sphere.point;
    }
    return best.point;
}

Matrix2 cap_operator_quadrature(const SphericalCap &cap) {
    auto [e1, e2] = orthonormal_complement(cap.center);
    using boost::math::quadrature::gauss;
    Matrix2 total;
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            for (int part = 0; part < 2; part++) {
                auto integrand = [&](double theta) {
                    auto inner = [&](double phi) {
                        Vec3 s = (std::sin(theta) * std::cos(phi)) * e1 + (std::sin(theta) * std::sin(phi)) * e2 +
                                 std::cos(theta) * cap.center;
                        Complex entry = density_from_bloch(s)(i, j);
                        return part == 0 ? entry.real() : entry.imag();
                    };
                    return gauss<double, 30>::integrate(inner, 0.0, 2.0 * std::numbers::pi) * std::sin(theta);
                };
                double value = cap.half_angle > 0.0 ? gauss<double, 30>::integrate(integrand, 0.0, cap.half_angle)
                                                    : 0.0;
                value *= 2.0 / (4.0 * std::numbers::pi);
                total(i, j) += part == 0 ? Complex(value, 0.0) : Complex(0.0, value);
            }
        }
    }
    return total;
}

Vec3 finite_difference_gradient(const std::function<double(const Vec3 &)> &f, const Vec3 &x, double h) {
    Vec3 g;
    for (int k = 0; k < 3; k++) {
        Vec3 up = x, down = x;
        up[k] += h;
        down[k] -= h;
        g[k] = (f(up) - f(down)) / (2.0 * h);
    }
    return g;
}

std::array<std::array<double, 3>, 3> finite_difference_jacobian(const std::function<Vec3(const Vec3 &)> &g,
                                                                const Vec3 &x, double h) {
    std::array<std::array<double, 3>, 3> out{};
    for (int k = 0; k < 3; k++) {
        Vec3 up = x, down = x;
        up[k] += h;
        down[k] -= h;
        Vec3 diff = (g(up) - g(down)) / (2.0 * h);
        for (int i = 0; i < 3; i++) {
            out[i][k] = diff[i];
        }
    }
    return out;
}

}  // namespace tomolab::oracle
