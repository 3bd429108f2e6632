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

#include "tomolab/sampling.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace tomolab {

Rng::Rng(const SeedSpec &seed) {
    std::seed_seq seq{
        static_cast<uint32_t>(seed.master),
        static_cast<uint32_t>(seed.master >> 32),
        static_cast<uint32_t>(seed.stream),
        static_cast<uint32_t>(seed.stream >> 32),
    };
    engine_.seed(seq);
}

std::string_view scheme_name(MeasurementScheme scheme) {
    switch (scheme) {
        case MeasurementScheme::kProjectiveTriplet:
            return "projective";
        case MeasurementScheme::kSixOutcome:
            return "six-outcome";
        case MeasurementScheme::kTetrahedron:
            return "tetrahedron";
        case MeasurementScheme::kContinuous:
            return "continuous";
    }
    return "?";
}

MeasurementScheme scheme_from_name(std::string_view name) {
    for (auto s : {MeasurementScheme::kProjectiveTriplet, MeasurementScheme::kSixOutcome,
                   MeasurementScheme::kTetrahedron, MeasurementScheme::kContinuous}) {
        if (scheme_name(s) == name) {
            return s;
        }
    }
    throw PreconditionError("unknown measurement scheme '" + std::string(name) + "'");
}

uint64_t MeasurementRecord::shots() const {
    if (scheme == MeasurementScheme::kContinuous) {
        return outcomes.size();
    }
    return std::accumulate(counts.begin(), counts.end(), uint64_t{0});
}

std::array<uint64_t, 3> MeasurementRecord::axis_totals() const {
    if (counts.size() != 6) {
        throw PreconditionError("axis_totals: record does not carry six per-axis counts");
    }
    return {counts[0] + counts[1], counts[2] + counts[3], counts[4] + counts[5]};
}

namespace {

size_t draw_categorical(const std::vector<double> &cumulative, double u) {
    for (size_t k = 0; k < cumulative.size(); k++) {
        if (u < cumulative[k]) {
            return k;
        }
    }
    // Rounding left the cumulative sum a hair below 1; fall back to the last
    // outcome that has positive probability.
    for (size_t k = cumulative.size(); k-- > 0;) {
        if (k == 0 || cumulative[k] > cumulative[k - 1]) {
            return k;
        }
    }
    return 0;
}

}  // namespace

MeasurementRecord sample_discrete(const DiscretePovm &povm, const BlochVector &r0, uint64_t shots,
                                  const SeedSpec &seed) {
    MeasurementRecord record;
    record.scheme = scheme_from_name(povm.label);
    std::vector<double> p = outcome_probabilities(povm, r0);
    std::vector<double> cumulative(p.size());
    std::partial_sum(p.begin(), p.end(), cumulative.begin());
    record.counts.assign(p.size(), 0);
    Rng rng(seed);
    for (uint64_t i = 0; i < shots; i++) {
        record.counts[draw_categorical(cumulative, rng.uniform())]++;
    }
    return record;
}

MeasurementRecord sample_projective(const BlochVector &r0, uint64_t shots, const SeedSpec &seed,
                                    std::optional<AxisAllocation> allocation) {
    AxisAllocation alloc = allocation ? *allocation : AxisAllocation::equal(shots);
    if (alloc.total() != shots) {
        std::ostringstream msg;
        msg << "sample_projective: allocation sums to " << alloc.total() << " but " << shots << " shots requested";
        throw PreconditionError(msg.str());
    }
    auto probabilities = projective_triplet(alloc).axis_probabilities(r0);
    MeasurementRecord record;
    record.scheme = MeasurementScheme::kProjectiveTriplet;
    record.counts.assign(6, 0);
    Rng rng(seed);
    for (int k = 0; k < 3; k++) {
        for (uint64_t i = 0; i < alloc.shots[k]; i++) {
            record.counts[2 * k + (rng.uniform() < probabilities[k][0] ? 0 : 1)]++;
        }
    }
    return record;
}

double continuous_cos_theta(double u, double r) {
    if (r < 1e-9) {
        return 2.0 * u - 1.0;
    }
    // (-1 + sqrt((1-r)^2 + 4ru)) / r, rationalized so it stays accurate for small r.
    double root = std::sqrt((1.0 - r) * (1.0 - r) + 4.0 * r * u);
    return std::clamp((4.0 * u - 2.0 + r) / (1.0 + root), -1.0, 1.0);
}

std::pair<Vec3, Vec3> orthonormal_complement(const Vec3 &axis) {
    Vec3 helper = std::fabs(axis.x) < 0.6 ? Vec3{1.0, 0.0, 0.0}
                                          : (std::fabs(axis.y) < 0.6 ? Vec3{0.0, 1.0, 0.0} : Vec3{0.0, 0.0, 1.0});
    Vec3 e1 = helper - dot(helper, axis) * axis;
    e1 = e1 / norm(e1);
    return {e1, cross(axis, e1)};
}

MeasurementRecord sample_continuous(const BlochVector &r0, uint64_t shots, const SeedSpec &seed) {
    require_state(r0, "sample_continuous");
    double r = std::min(norm(r0), 1.0);
    Vec3 pole = r > 0.0 ? r0 / norm(r0) : Vec3{0.0, 0.0, 1.0};
    auto [e1, e2] = orthonormal_complement(pole);

    MeasurementRecord record;
    record.scheme = MeasurementScheme::kContinuous;
    record.outcomes.reserve(shots);
    Rng rng(seed);
    for (uint64_t i = 0; i < shots; i++) {
        double t = continuous_cos_theta(rng.uniform(), r);
        double phi = 2.0 * std::numbers::pi * rng.uniform();
        double sin_theta = std::sqrt(std::max(0.0, 1.0 - t * t));
        Vec3 s = (sin_theta * std::cos(phi)) * e1 + (sin_theta * std::sin(phi)) * e2 + t * pole;
        record.outcomes.push_back(s / norm(s));
    }
    return record;
}

MeasurementRecord sample_continuous_alpha(double alpha, const BlochVector &r0, uint64_t shots,
                                          const SeedSpec &seed) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        std::ostringstream msg;
        msg << "sample_continuous_alpha: alpha must lie in [0, 1], got " << alpha;
        throw PreconditionError(msg.str());
    }
    require_state(r0, "sample_continuous_alpha");
    return sample_continuous(alpha * r0, shots, seed);
}

}  // namespace tomolab
