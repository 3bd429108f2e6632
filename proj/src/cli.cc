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

#include "tomolab/cli.h"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tomolab/verify.h"

namespace tomolab {

namespace {

std::vector<double> parse_floats(const std::string &text, size_t expected, const char *flag) {
    std::vector<double> values;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        size_t used = 0;
        double v;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != item.size() || !std::isfinite(v)) {
            throw InvalidConfigError(std::string(flag) + ": cannot parse '" + item + "' as a number");
        }
        values.push_back(v);
    }
    if (values.size() != expected) {
        throw InvalidConfigError(std::string(flag) + " expects " + std::to_string(expected) +
                                 " comma-separated values, got '" + text + "'");
    }
    return values;
}

AxisAllocation parse_allocation(const std::string &text) {
    AxisAllocation alloc;
    std::stringstream in(text);
    std::string item;
    size_t k = 0;
    while (std::getline(in, item, ',')) {
        if (k >= 3 || item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
            throw InvalidConfigError("--alloc expects three non-negative integers, got '" + text + "'");
        }
        alloc.shots[k++] = std::stoull(item);
    }
    if (k != 3) {
        throw InvalidConfigError("--alloc expects three non-negative integers, got '" + text + "'");
    }
    return alloc;
}

Vec3 from_spherical(const std::vector<double> &v) {
    double radius = v[0], polar = v[1], azimuth = v[2];
    return {radius * std::sin(polar) * std::cos(azimuth), radius * std::sin(polar) * std::sin(azimuth),
            radius * std::cos(polar)};
}

void write_output(const ExperimentConfig &config, const std::string &contents, std::ostream &out) {
    if (config.out.empty() || config.out == "-") {
        out << contents;
        return;
    }
    std::ofstream file(config.out, std::ios::binary);
    file << contents;
    file.close();
    if (!file) {
        throw std::runtime_error("failed to write " + config.out);
    }
}

std::string csv_preamble(const ExperimentConfig &config) {
    std::ostringstream out;
    Json j = config_to_json(config);
    for (const auto &[key, value] : j.items()) {
        out << "# " << key << '=' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    }
    return out.str();
}

TrialOptions trial_options(const ExperimentConfig &config) {
    TrialOptions options;
    options.policy = config.policy;
    options.allocation = config.allocation;
    return options;
}

}  // namespace

Json config_to_json(const ExperimentConfig &config) {
    Json j;
    j["command"] = config.command;
    if (config.command != "table") {
        j["protocol"] = protocol_name(config.protocol);
    }
    j["r0"] = vec_to_json(config.r0);
    j["shots"] = config.shots;
    j["trials"] = config.trials;
    j["seed"] = config.seed;
    j["policy"] = policy_name(config.policy);
    if (config.allocation) {
        j["allocation"] = config.allocation->shots;
    } else {
        j["allocation"] = nullptr;
    }
    j["alpha"] = config.alpha ? Json(*config.alpha) : Json(nullptr);
    return j;
}

void validate_config(const ExperimentConfig &config) {
    if (!is_state(config.r0)) {
        throw InvalidConfigError("--r0 lies outside the Bloch ball (|r0| = " + format_double(norm(config.r0)) + ")");
    }
    bool needs_trials = config.command == "run" || config.command == "table";
    if (config.shots == 0) {
        throw InvalidConfigError("--shots must be positive");
    }
    if (needs_trials && config.trials < 2) {
        throw InvalidConfigError("--trials must be at least 2");
    }
    if (config.command == "sample" && config.trials == 0) {
        throw InvalidConfigError("--trials must be positive");
    }
    bool projective = config.command == "table" || config.protocol == ProtocolTag::kProjectiveTriplet;
    if (config.allocation) {
        if (!projective) {
            throw InvalidConfigError("--alloc only applies to the projective protocol");
        }
        if (config.allocation->total() != config.shots) {
            throw InvalidConfigError("--alloc must sum to --shots");
        }
        for (uint64_t n : config.allocation->shots) {
            if (n == 0) {
                throw InvalidConfigError("--alloc needs at least one shot per axis");
            }
        }
    } else if (projective && config.shots % 3 != 0) {
        throw InvalidConfigError("the projective protocol needs --shots divisible by 3 or an explicit --alloc");
    }
    if (config.alpha) {
        if (config.command != "sample" || scheme_of(config.protocol) != MeasurementScheme::kContinuous) {
            throw InvalidConfigError("--alpha only applies to sampling a continuous protocol");
        }
        if (!(*config.alpha >= 0.0 && *config.alpha <= 1.0)) {
            throw InvalidConfigError("--alpha must lie in [0, 1]");
        }
    }
}

std::string render_run(const ExperimentConfig &config) {
    TrialStats stats = run_trials(config.protocol, config.r0, config.shots, config.trials, {config.seed, 0},
                                  trial_options(config));
    if (config.format == OutputFormat::kCsv) {
        std::string out = csv_preamble(config);
        if (stats.ml_converged_fraction) {
            out += "# ml_converged_fraction=" + format_double(*stats.ml_converged_fraction) + "\n";
            out += "# ml_boundary_fraction=" + format_double(*stats.ml_boundary_fraction) + "\n";
        }
        return out + stats_csv(config.protocol, config.r0, config.shots, stats, config.allocation);
    }
    Json j;
    j["config"] = config_to_json(config);
    j["stats"] = stats_to_json(stats);
    TableRow row = make_table_row(config.protocol, config.r0, config.shots, stats, config.allocation);
    j["analytic_mean"] = row.analytic_mean ? vec_to_json(*row.analytic_mean) : Json(nullptr);
    j["analytic_variance"] = row.analytic_variance ? Json(*row.analytic_variance) : Json(nullptr);
    j["asymptotic_variance"] = row.asymptotic_variance ? Json(*row.asymptotic_variance) : Json(nullptr);
    return j.dump(2) + "\n";
}

std::string render_table(const ExperimentConfig &config) {
    auto rows = summary_table(config.r0, config.shots, config.trials, {config.seed, 0}, trial_options(config));
    if (config.format == OutputFormat::kCsv) {
        return csv_preamble(config) + table_csv(rows);
    }
    Json j;
    j["config"] = config_to_json(config);
    j["rows"] = table_to_json(rows);
    return j.dump(2) + "\n";
}

std::string render_sample(const ExperimentConfig &config) {
    if (config.format == OutputFormat::kCsv) {
        throw InvalidConfigError("sample only writes JSON");
    }
    Json records = Json::array();
    for (uint64_t i = 0; i < config.trials; i++) {
        SeedSpec seed{config.seed, i};
        MeasurementRecord record;
        if (config.alpha) {
            record = sample_continuous_alpha(*config.alpha, config.r0, config.shots, seed);
        } else {
            switch (scheme_of(config.protocol)) {
                case MeasurementScheme::kProjectiveTriplet:
                    record = sample_projective(config.r0, config.shots, seed, config.allocation);
                    break;
                case MeasurementScheme::kSixOutcome:
                    record = sample_discrete(six_outcome_povm(), config.r0, config.shots, seed);
                    break;
                case MeasurementScheme::kTetrahedron:
                    record = sample_discrete(tetrahedron_povm(), config.r0, config.shots, seed);
                    break;
                case MeasurementScheme::kContinuous:
                    record = sample_continuous(config.r0, config.shots, seed);
                    break;
            }
        }
        records.push_back(record_to_json(record));
    }
    Json j;
    j["config"] = config_to_json(config);
    j["records"] = std::move(records);
    return j.dump(2) + "\n";
}

int main_with_args(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Qubit tomography simulation and verification"};
    app.require_subcommand(1);

    ExperimentConfig config;
    std::string protocol = "tetrahedron";
    std::string r0_text, r0_spherical, policy = "unrestricted", format = "json", alloc_text;
    double alpha = 0.0;
    bool tamper = false;
    std::string level = "quick";
    uint64_t run_trials_n = 0, table_trials = 20000, sample_records = 1;

    auto add_experiment_flags = [&](CLI::App *sub, bool with_protocol) {
        if (with_protocol) {
            sub->add_option("--protocol", protocol,
                            "projective | six-outcome | tetrahedron | continuous-moment | continuous-ml")
                ->capture_default_str();
        }
        auto *cart = sub->add_option("--r0", r0_text, "Bloch vector x,y,z");
        auto *sph = sub->add_option("--r0-spherical", r0_spherical, "Bloch vector as radius,polar,azimuth");
        cart->excludes(sph);
        sub->add_option("--shots", config.shots, "Measurements per record (N)")->required();
        sub->add_option("--seed", config.seed, "Master seed")->capture_default_str();
        sub->add_option("--policy", policy, "unrestricted | clamp")->capture_default_str();
        sub->add_option("--out", config.out, "Output file (stdout when omitted)");
        sub->add_option("--alloc", alloc_text, "Projective shots per axis nx,ny,nz");
    };

    auto *run = app.add_subcommand("run", "Monte Carlo statistics of one protocol");
    add_experiment_flags(run, true);
    run->add_option("--trials", run_trials_n, "Number of trials (M)")->required();
    run->add_option("--format", format, "json | csv")->capture_default_str();

    auto *table = app.add_subcommand("table", "Comparison table over all protocols");
    add_experiment_flags(table, false);
    table->add_option("--trials", table_trials, "Trials per protocol (M)")->capture_default_str();
    table->add_option("--format", format, "json | csv")->capture_default_str();

    auto *sample = app.add_subcommand("sample", "Dump raw measurement records");
    add_experiment_flags(sample, true);
    sample->add_option("--trials", sample_records, "Number of records; record i uses stream i")
        ->capture_default_str();
    auto *alpha_opt = sample->add_option("--alpha", alpha, "Sample the Q_alpha density (continuous only)");

    auto *verify = app.add_subcommand("verify", "Run the invariant suites");
    verify->add_option("level", level, "quick | full")->check(CLI::IsMember({"quick", "full"}))->capture_default_str();
    verify->add_flag("--tamper-tetrahedron-weights", tamper, "Negative control: corrupt the tetrahedron weights");
    uint64_t verify_seed = VerifyOptions{}.seed;
    verify->add_option("--seed", verify_seed, "Seed of the randomized suites")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidConfig;
    }

    if (verify->parsed()) {
        VerifyOptions options;
        options.full = level == "full";
        options.tamper_tetrahedron_weights = tamper;
        options.seed = verify_seed;
        bool all_passed = true;
        for (const auto &r : run_verification(options)) {
            char seconds[32];
            std::snprintf(seconds, sizeof(seconds), "%.2f", r.seconds);
            out << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << seconds << " s): " << r.detail << '\n';
            all_passed = all_passed && r.passed;
        }
        return all_passed ? kExitOk : kExitFailure;
    }

    std::function<std::string(const ExperimentConfig &)> render;
    try {
        if (run->parsed()) {
            config.command = "run";
            config.trials = run_trials_n;
            render = render_run;
        } else if (table->parsed()) {
            config.command = "table";
            config.trials = table_trials;
            render = render_table;
        } else {
            config.command = "sample";
            config.trials = sample_records;
            render = render_sample;
        }
        if (config.command != "table") {
            config.protocol = protocol_from_name(protocol);
        }
        if (!r0_spherical.empty()) {
            config.r0 = from_spherical(parse_floats(r0_spherical, 3, "--r0-spherical"));
        } else if (!r0_text.empty()) {
            auto v = parse_floats(r0_text, 3, "--r0");
            config.r0 = {v[0], v[1], v[2]};
        } else {
            throw InvalidConfigError("one of --r0 or --r0-spherical is required");
        }
        config.policy = policy_from_name(policy);
        if (format == "json") {
            config.format = OutputFormat::kJson;
        } else if (format == "csv") {
            config.format = OutputFormat::kCsv;
        } else {
            throw InvalidConfigError("--format must be json or csv");
        }
        if (!alloc_text.empty()) {
            config.allocation = parse_allocation(alloc_text);
        }
        if (alpha_opt->count() > 0) {
            config.alpha = alpha;
        }
        validate_config(config);
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidConfig;
    }

    try {
        write_output(config, render(config), out);
    } catch (const InvalidConfigError &e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidConfig;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace tomolab
