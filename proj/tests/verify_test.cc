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

#include <gtest/gtest.h>

using namespace tomolab;

TEST(verify, quick_suites_pass) {
    auto results = run_verification({});
    ASSERT_EQ(results.size(), 5u);
    const char *names[] = {"completeness", "equivariance", "gradient-check", "enumeration-oracle",
                           "sampler-distribution"};
    for (size_t i = 0; i < results.size(); i++) {
        EXPECT_EQ(results[i].name, names[i]);
        EXPECT_TRUE(results[i].passed) << results[i].name << ": " << results[i].detail;
    }
}

TEST(verify, tampered_weights_fail_completeness) {
    VerifyOptions options;
    options.tamper_tetrahedron_weights = true;
    SuiteResult r = verify_completeness(options);
    EXPECT_FALSE(r.passed);
    EXPECT_NE(r.detail.find("tetrahedron"), std::string::npos);
}
