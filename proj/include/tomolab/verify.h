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

#ifndef TOMOLAB_VERIFY_H
#define TOMOLAB_VERIFY_H

#include <cstdint>
#include <string>
#include <vector>

namespace tomolab {

struct VerifyOptions {
    /// Full runs use 10^5-draw distribution tests and N up to 6 in the
    /// enumeration suite; quick runs are sized for a few seconds.
    bool full = false;
    /// Negative control: halves the tetrahedron weights before the
    /// completeness suite sees them.
    bool tamper_tetrahedron_weights = false;
    uint64_t seed = 0x5eed;
};

struct SuiteResult {
    std::string name;
    bool passed = false;
    /// First failing invariant, or a one-line summary on success.
    std::string detail;
    double seconds = 0.0;
};

SuiteResult verify_completeness(const VerifyOptions &options);
SuiteResult verify_equivariance(const VerifyOptions &options);
SuiteResult verify_gradient(const VerifyOptions &options);
SuiteResult verify_enumeration(const VerifyOptions &options);
SuiteResult verify_sampler(const VerifyOptions &options);

/// All suites in the order above.
std::vector<SuiteResult> run_verification(const VerifyOptions &options);

}  // namespace tomolab

#endif
