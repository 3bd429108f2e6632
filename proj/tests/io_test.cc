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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace tomolab;

TEST(io, povm_round_trip_is_exact) {
    for (const auto &povm : {six_outcome_povm(), tetrahedron_povm()}) {
        Json j = Json::parse(povm_to_json(povm).dump());
        EXPECT_EQ(povm_from_json(j), povm);
    }
}

TEST(io, povm_document_shape) {
    Json j = povm_to_json(tetrahedron_povm());
    EXPECT_EQ(j.at("label"), "tetrahedron");
    ASSERT_EQ(j.at("elements").size(), 4u);
    EXPECT_EQ(j["elements"][0].at("weight"), 0.5);
    EXPECT_EQ(j["elements"][0].at("direction").size(), 3u);
}

TEST(io, record_round_trip) {
    MeasurementRecord cont = sample_continuous({0.1, 0.2, 0.3}, 40, {1, 2});
    EXPECT_EQ(record_from_json(Json::parse(record_to_json(cont).dump())), cont);
    MeasurementRecord disc = sample_discrete(six_outcome_povm(), {0.1, 0.2, 0.3}, 40, {1, 2});
    Json j = record_to_json(disc);
    EXPECT_TRUE(j.contains("counts"));
    EXPECT_FALSE(j.contains("outcomes"));
    EXPECT_EQ(record_from_json(Json::parse(j.dump())), disc);
}

TEST(io, record_shots_mismatch_rejected) {
    Json j = record_to_json(sample_discrete(tetrahedron_povm(), {0, 0, 0}, 10, {1, 2}));
    j["shots"] = 11;
    EXPECT_THROW(record_from_json(j), PreconditionError);
    j["scheme"] = "dodecahedron";
    EXPECT_THROW(record_from_json(j), PreconditionError);
}

TEST(io, vec_json_validation) {
    EXPECT_EQ(vec_from_json(Json::parse("[1, 2.5, -3]")), Vec3(1, 2.5, -3));
    EXPECT_ANY_THROW(vec_from_json(Json::parse("[1, 2]")));
}

TEST(io, estimate_json_solver_fields) {
    Json closed = estimate_to_json(ProtocolTag::kTetrahedron, {0, 0, 1}, BallPolicy::kUnrestricted);
    EXPECT_TRUE(closed.at("converged").is_null());
    MlResult ml;
    ml.converged = true;
    ml.iterations = 4;
    Json solved = estimate_to_json(ProtocolTag::kContinuousMl, {0, 0, 1}, BallPolicy::kRadialClamp, ml);
    EXPECT_EQ(solved.at("converged"), true);
    EXPECT_EQ(solved.at("iterations"), 4);
    EXPECT_EQ(solved.at("policy"), "clamp");
}

TEST(io, stats_json_fields) {
    TrialStats s = summarize({{1, 0, 0}, {0, 1, 0}}, {0, 0, 0});
    Json j = stats_to_json(s);
    for (const char *key : {"trials", "mean", "bias", "mean_se", "hs_variance", "hs_variance_se", "second_moment",
                            "second_moment_se"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_FALSE(j.contains("ml_converged_fraction"));
}

TEST(io, csv_header_is_fixed) {
    EXPECT_EQ(kTableCsvHeader,
              "protocol,analytic_mean_x,analytic_mean_y,analytic_mean_z,analytic_variance,asymptotic_variance,"
              "mean_x,mean_y,mean_z,mean_se_x,mean_se_y,mean_se_z,hs_variance,hs_variance_se,"
              "second_moment,second_moment_se,trials,mean_pass,variance_pass");
}

TEST(io, table_csv_layout) {
    auto rows = summary_table({0, 0, 0.6}, 30, 200, {3, 0});
    std::string csv = table_csv(rows);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, kTableCsvHeader);
    size_t columns = std::count(line.begin(), line.end(), ',') + 1;
    int count = 0;
    while (std::getline(in, line)) {
        EXPECT_EQ(static_cast<size_t>(std::count(line.begin(), line.end(), ',') + 1), columns);
        count++;
    }
    EXPECT_EQ(count, 5);
    EXPECT_NE(csv.find("\ncontinuous-ml,,,,,,"), std::string::npos);
    EXPECT_NE(csv.find(",n/a,n/a\n"), std::string::npos);
}

TEST(io, format_double_round_trips) {
    for (double v : {0.1, 1.0 / 3.0, 0.1470, 1e-300, -2.5e17, 0.0}) {
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
    EXPECT_EQ(format_double(0.5), "0.5");
}
