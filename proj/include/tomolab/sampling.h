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

#ifndef TOMOLAB_SAMPLING_H
#define TOMOLAB_SAMPLING_H

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "tomolab/bloch.h"
#include "tomolab/povm.h"

namespace tomolab {

/// (master seed, stream id). Equal specs produce bit-identical samples no
/// matter which thread draws them.
struct SeedSpec {
    uint64_t master = 0;
    uint64_t stream = 0;

    SeedSpec with_stream(uint64_t s) const {
        return {master, s};
    }
    bool operator==(const SeedSpec &) const = default;
};

/// Per-stream random source. Wraps a 64-bit Mersenne Twister seeded through
/// std::seed_seq from the four 32-bit halves of (master, stream); both are
/// fully specified by the standard, and no std:: distribution is used, so
/// the sequence is identical across standard libraries.
class Rng {
   public:
    explicit Rng(const SeedSpec &seed);

    uint64_t next_u64() {
        return engine_();
    }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

   private:
    std::mt19937_64 engine_;
};

enum class MeasurementScheme { kProjectiveTriplet, kSixOutcome, kTetrahedron, kContinuous };

std::string_view scheme_name(MeasurementScheme scheme);
MeasurementScheme scheme_from_name(std::string_view name);

/// Outcome data of one experiment.
///
/// Discrete schemes fill `counts`, one entry per outcome in POVM order. For
/// the projective triplet the six entries are N_x^+, N_x^-, N_y^+, N_y^-,
/// N_z^+, N_z^-. The continuous scheme fills `outcomes` with unit vectors.
struct MeasurementRecord {
    MeasurementScheme scheme = MeasurementScheme::kContinuous;
    std::vector<uint64_t> counts;
    std::vector<Vec3> outcomes;

    uint64_t shots() const;
    /// N_k = N_k^+ + N_k^- for k = x, y, z (projective and six-outcome records).
    std::array<uint64_t, 3> axis_totals() const;

    bool operator==(const MeasurementRecord &) const = default;
};

/// Multinomial draw of N outcomes with probabilities outcome_probabilities(povm, r0).
/// The povm label selects the record's scheme ("six-outcome" or "tetrahedron").
MeasurementRecord sample_discrete(const DiscretePovm &povm, const BlochVector &r0, uint64_t shots,
                                  const SeedSpec &seed);

/// Per-axis binomial draws for the projective triplet. Without an explicit
/// allocation the shots are split equally, which requires 3 | shots.
MeasurementRecord sample_projective(const BlochVector &r0, uint64_t shots, const SeedSpec &seed,
                                    std::optional<AxisAllocation> allocation = std::nullopt);

/// cos(theta) of a draw with density (1 + r t) / 2 on [-1, 1], from a uniform u.
double continuous_cos_theta(double u, double r);

/// N i.i.d. unit vectors with density 1 + r0.s with respect to the normalized
/// area measure. Throws InvalidStateError if |r0| > 1.
MeasurementRecord sample_continuous(const BlochVector &r0, uint64_t shots, const SeedSpec &seed);

/// Same for the diluted POVM Q_alpha (density 1 + alpha r0.s).
MeasurementRecord sample_continuous_alpha(double alpha, const BlochVector &r0, uint64_t shots,
                                          const SeedSpec &seed);

/// Orthonormal e1, e2 completing `axis` (unit) to a right-handed frame.
std::pair<Vec3, Vec3> orthonormal_complement(const Vec3 &axis);

}  // namespace tomolab

#endif
