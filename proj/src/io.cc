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

#include "tomolab/io.h"

#include <charconv>
#include <sstream>

namespace tomolab {

Json vec_to_json(const Vec3 &v) {
    return Json::array({v.x, v.y, v.z});
}

Vec3 vec_from_json(const Json &j) {
    if (!j.is_array() || j.size() != 3) {
        throw PreconditionError("expected a JSON array of three numbers, got " + j.dump());
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Json povm_to_json(const DiscretePovm &povm) {
    Json elements = Json::array();
    for (const auto &e : povm.elements) {
        elements.push_back({{"weight", e.weight}, {"direction", vec_to_json(e.direction)}});
    }
    return {{"label", povm.label}, {"elements", elements}};
}

DiscretePovm povm_from_json(const Json &j) {
    DiscretePovm povm;
    povm.label = j.at("label").get<std::string>();
    for (const auto &e : j.at("elements")) {
        povm.elements.push_back({e.at("weight").get<double>(), vec_from_json(e.at("direction"))});
    }
    return povm;
}

Json record_to_json(const MeasurementRecord &record) {
    Json j = {{"scheme", scheme_name(record.scheme)}, {"shots", record.shots()}};
    if (record.scheme == MeasurementScheme::kContinuous) {
        Json outcomes = Json::array();
        for (const auto &n : record.outcomes) {
            outcomes.push_back(vec_to_json(n));
        }
        j["outcomes"] = std::move(outcomes);
    } else {
        j["counts"] = record.counts;
    }
    return j;
}

MeasurementRecord record_from_json(const Json &j) {
    MeasurementRecord record;
    record.scheme = scheme_from_name(j.at("scheme").get<std::string>());
    if (record.scheme == MeasurementScheme::kContinuous) {
        for (const auto &n : j.at("outcomes")) {
            record.outcomes.push_back(vec_from_json(n));
        }
    } else {
        record.counts = j.at("counts").get<std::vector<uint64_t>>();
    }
    if (j.contains("shots") && j["shots"].get<uint64_t>() != record.shots()) {
        throw PreconditionError("record: 'shots' does not match the outcome data");
    }
    return record;
}

Json estimate_to_json(ProtocolTag protocol, const BlochVector &r_prime, BallPolicy policy,
                      const std::optional<MlResult> &ml) {
    Json j = {
        {"protocol", protocol_name(protocol)},
        {"r_prime", vec_to_json(r_prime)},
        {"policy", policy_name(policy)},
        {"converged", nullptr},
        {"iterations", nullptr},
        {"residual", nullptr},
    };
    if (ml) {
        j["converged"] = ml->converged;
        j["iterations"] = ml->iterations;
        j["residual"] = ml->residual;
        j["on_boundary"] = ml->on_boundary;
        j["rank"] = ml->rank;
    }
    return j;
}

Json stats_to_json(const TrialStats &stats) {
    Json j = {
        {"trials", stats.trials},
        {"mean", vec_to_json(stats.mean)},
        {"bias", vec_to_json(stats.bias)},
        {"mean_se", vec_to_json(stats.mean_se)},
        {"hs_variance", stats.hs_variance},
        {"hs_variance_se", stats.hs_variance_se},
        {"second_moment", stats.second_moment},
        {"second_moment_se", stats.second_moment_se},
    };
    if (stats.ml_converged_fraction) {
        j["ml_converged_fraction"] = *stats.ml_converged_fraction;
    }
    if (stats.ml_boundary_fraction) {
        j["ml_boundary_fraction"] = *stats.ml_boundary_fraction;
    }
    return j;
}

Json table_to_json(const std::vector<TableRow> &rows) {
    Json out = Json::array();
    for (const auto &row : rows) {
        Json j = {{"protocol", protocol_name(row.protocol)}};
        j["analytic_mean"] = row.analytic_mean ? vec_to_json(*row.analytic_mean) : Json(nullptr);
        j["analytic_variance"] = row.analytic_variance ? Json(*row.analytic_variance) : Json(nullptr);
        j["asymptotic_variance"] = row.asymptotic_variance ? Json(*row.asymptotic_variance) : Json(nullptr);
        j["stats"] = stats_to_json(row.stats);
        j["mean_pass"] = row.mean_pass ? Json(*row.mean_pass) : Json(nullptr);
        j["variance_pass"] = row.variance_pass ? Json(*row.variance_pass) : Json(nullptr);
        out.push_back(std::move(j));
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

void append_row(std::ostringstream &out, const TableRow &row) {
    auto cell = [&](const std::optional<double> &v) {
        out << ',';
        if (v) {
            out << format_double(*v);
        }
    };
    auto flag = [&](const std::optional<bool> &v) {
        out << ',';
        if (v) {
            out << (*v ? "pass" : "fail");
        } else {
            out << "n/a";
        }
    };
    out << protocol_name(row.protocol);
    for (int k = 0; k < 3; k++) {
        cell(row.analytic_mean ? std::optional<double>((*row.analytic_mean)[k]) : std::nullopt);
    }
    cell(row.analytic_variance);
    cell(row.asymptotic_variance);
    for (int k = 0; k < 3; k++) {
        cell(row.stats.mean[k]);
    }
    for (int k = 0; k < 3; k++) {
        cell(row.stats.mean_se[k]);
    }
    cell(row.stats.hs_variance);
    cell(row.stats.hs_variance_se);
    cell(row.stats.second_moment);
    cell(row.stats.second_moment_se);
    out << ',' << row.stats.trials;
    flag(row.mean_pass);
    flag(row.variance_pass);
    out << '\n';
}

}  // namespace

std::string table_csv(const std::vector<TableRow> &rows) {
    std::ostringstream out;
    out << kTableCsvHeader << '\n';
    for (const auto &row : rows) {
        append_row(out, row);
    }
    return out.str();
}

std::string stats_csv(ProtocolTag protocol, const BlochVector &r0, uint64_t shots, const TrialStats &stats,
                      const std::optional<AxisAllocation> &allocation) {
    TableRow row = make_table_row(protocol, r0, shots, stats, allocation);
    std::ostringstream out;
    out << kTableCsvHeader << '\n';
    append_row(out, row);
    return out.str();
}

}  // namespace tomolab
