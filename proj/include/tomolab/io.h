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

#ifndef TOMOLAB_IO_H
#define TOMOLAB_IO_H

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tomolab/analysis.h"
#include "tomolab/estimators.h"
#include "tomolab/povm.h"
#include "tomolab/sampling.h"

namespace tomolab {

using Json = nlohmann::ordered_json;

Json vec_to_json(const Vec3 &v);
Vec3 vec_from_json(const Json &j);

/// {"label": ..., "elements": [{"weight": c, "direction": [x, y, z]}, ...]}
Json povm_to_json(const DiscretePovm &povm);
DiscretePovm povm_from_json(const Json &j);

/// {"scheme": ..., "shots": N, "counts": [...]} for discrete schemes,
/// {"scheme": "continuous", "shots": N, "outcomes": [[x, y, z], ...]} otherwise.
Json record_to_json(const MeasurementRecord &record);
MeasurementRecord record_from_json(const Json &j);

/// {"protocol", "r_prime", "policy", "converged", "iterations", "residual"}.
/// The solver fields are null for the closed-form estimators.
Json estimate_to_json(ProtocolTag protocol, const BlochVector &r_prime, BallPolicy policy,
                      const std::optional<MlResult> &ml = std::nullopt);

Json stats_to_json(const TrialStats &stats);
Json table_to_json(const std::vector<TableRow> &rows);

/// Column order of table_csv and stats_csv. Empty cells mark quantities
/// without a closed form.
inline constexpr std::string_view kTableCsvHeader =
    "protocol,analytic_mean_x,analytic_mean_y,analytic_mean_z,analytic_variance,asymptotic_variance,"
    "mean_x,mean_y,mean_z,mean_se_x,mean_se_y,mean_se_z,hs_variance,hs_variance_se,"
    "second_moment,second_moment_se,trials,mean_pass,variance_pass";

std::string table_csv(const std::vector<TableRow> &rows);
/// Header plus one row, analytic columns filled when the protocol has them.
std::string stats_csv(ProtocolTag protocol, const BlochVector &r0, uint64_t shots, const TrialStats &stats,
                      const std::optional<AxisAllocation> &allocation = std::nullopt);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

}  // namespace tomolab

#endif
