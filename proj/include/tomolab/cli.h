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

#ifndef TOMOLAB_CLI_H
#define TOMOLAB_CLI_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "tomolab/analysis.h"
#include "tomolab/io.h"

namespace tomolab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalidConfig = 2;

enum class OutputFormat { kJson, kCsv };

/// Fully resolved settings of one invocation. r0 is always stored in
/// Cartesian form, whichever way it was given.
struct ExperimentConfig {
    std::string command;
    ProtocolTag protocol = ProtocolTag::kTetrahedron;
    BlochVector r0;
    uint64_t shots = 0;
    uint64_t trials = 1;
    uint64_t seed = 1;
    BallPolicy policy = BallPolicy::kUnrestricted;
    std::optional<AxisAllocation> allocation;
    std::optional<double> alpha;
    std::string out;
    OutputFormat format = OutputFormat::kJson;
};

/// The "config" object written into every output file.
Json config_to_json(const ExperimentConfig &config);

/// Throws InvalidConfigError when the config violates a precondition of
/// the operation it feeds.
void validate_config(const ExperimentConfig &config);

struct InvalidConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Renders the output file contents of each subcommand.
std::string render_run(const ExperimentConfig &config);
std::string render_table(const ExperimentConfig &config);
std::string render_sample(const ExperimentConfig &config);

/// Entry point shared by the executable and the tests. Returns the exit code.
int main_with_args(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace tomolab

#endif
