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

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tomolab/analysis.h"
#include "tomolab/estimators.h"
#include "tomolab/io.h"
#include "tomolab/povm.h"
#include "tomolab/sampling.h"
#include "tomolab/verify.h"

namespace py = pybind11;
using namespace tomolab;

namespace {

using Triple = std::array<double, 3>;
using Matrix = std::array<std::array<Complex, 2>, 2>;

Vec3 vec(const Triple &t) {
    return {t[0], t[1], t[2]};
}
Triple triple(const Vec3 &v) {
    return {v.x, v.y, v.z};
}
Matrix to_nested(const Matrix2 &m) {
    return {{{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}};
}
Matrix2 from_nested(const Matrix &m) {
    return {m[0][0], m[0][1], m[1][0], m[1][1]};
}

std::optional<AxisAllocation> allocation(const std::optional<std::array<uint64_t, 3>> &alloc) {
    if (!alloc) {
        return std::nullopt;
    }
    return AxisAllocation{*alloc};
}

MeasurementRecord sample(const std::string &protocol, const Triple &r0, uint64_t shots, uint64_t seed,
                         uint64_t stream, const std::optional<std::array<uint64_t, 3>> &alloc) {
    SeedSpec spec{seed, stream};
    switch (scheme_of(protocol_from_name(protocol))) {
        case MeasurementScheme::kProjectiveTriplet:
            return sample_projective(vec(r0), shots, spec, allocation(alloc));
        case MeasurementScheme::kSixOutcome:
            return sample_discrete(six_outcome_povm(), vec(r0), shots, spec);
        case MeasurementScheme::kTetrahedron:
            return sample_discrete(tetrahedron_povm(), vec(r0), shots, spec);
        case MeasurementScheme::kContinuous:
            return sample_continuous(vec(r0), shots, spec);
    }
    throw std::logic_error("unreachable");
}

Triple estimate(const std::string &protocol, const MeasurementRecord &record, const std::string &policy) {
    BlochVector r;
    switch (protocol_from_name(protocol)) {
        case ProtocolTag::kProjectiveTriplet:
            r = estimate_projective(record);
            break;
        case ProtocolTag::kSixOutcome:
            r = estimate_six(record);
            break;
        case ProtocolTag::kTetrahedron:
            r = estimate_tetrahedron(record);
            break;
        case ProtocolTag::kContinuousMoment:
            r = estimate_moment(record);
            break;
        case ProtocolTag::kContinuousMl:
            r = estimate_ml_continuous(record).r;
            break;
    }
    return triple(apply_policy(r, policy_from_name(policy)));
}

}  // namespace

PYBIND11_MODULE(tomolab, m) {
    m.doc() = "Qubit tomography simulation: POVMs, samplers, estimators and their exact moments.";

    m.def(
        "density_from_bloch", [](const Triple &r) { return to_nested(density_from_bloch(vec(r))); }, py::arg("r"));
    m.def(
        "bloch_from_density", [](const Matrix &rho) { return triple(bloch_from_density(from_nested(rho))); },
        py::arg("rho"));
    m.def(
        "hs_distance_sq",
        [](const Matrix &a, const Matrix &b) { return hs_distance_sq(from_nested(a), from_nested(b)); },
        py::arg("rho1"), py::arg("rho2"));
    m.def(
        "rotate", [](const Triple &r, const Triple &axis, double angle) {
            return triple(rotate(vec(r), AxisAngle(vec(axis), angle)));
        },
        py::arg("r"), py::arg("axis"), py::arg("angle"));
    m.def(
        "conjugate_pure", [](const Triple &s, const Triple &n) { return triple(conjugate_pure(vec(s), vec(n))); },
        py::arg("s"), py::arg("n"));

    py::class_<DiscretePovm>(m, "DiscretePovm")
        .def_readonly("label", &DiscretePovm::label)
        .def_property_readonly("elements",
                               [](const DiscretePovm &p) {
                                   std::vector<std::pair<double, Triple>> out;
                                   for (const auto &e : p.elements) {
                                       out.emplace_back(e.weight, triple(e.direction));
                                   }
                                   return out;
                               })
        .def("is_complete", [](const DiscretePovm &p) { return is_complete(p); })
        .def("to_json", [](const DiscretePovm &p) { return povm_to_json(p).dump(); })
        .def("__len__", &DiscretePovm::size);
    m.def("six_outcome_povm", &six_outcome_povm);
    m.def("tetrahedron_povm", &tetrahedron_povm);
    m.def(
        "outcome_probabilities",
        [](const DiscretePovm &p, const Triple &r0) { return outcome_probabilities(p, vec(r0)); }, py::arg("povm"),
        py::arg("r0"));
    m.def(
        "continuous_density", [](const Triple &r0, const Triple &s) { return continuous_density(vec(r0), vec(s)); },
        py::arg("r0"), py::arg("s"));
    m.def(
        "alpha_density",
        [](double alpha, const Triple &r0, const Triple &s) { return alpha_density(alpha, vec(r0), vec(s)); },
        py::arg("alpha"), py::arg("r0"), py::arg("s"));
    m.def(
        "cap_operator",
        [](const Triple &center, double half_angle, double alpha) {
            return to_nested(cap_operator(SphericalCap(vec(center), half_angle), alpha));
        },
        py::arg("center"), py::arg("half_angle"), py::arg("alpha") = 1.0);
    m.def(
        "equivariance_residual",
        [](const Triple &center, double half_angle, const Triple &axis, double angle, double alpha) {
            return equivariance_residual(SphericalCap(vec(center), half_angle), AxisAngle(vec(axis), angle), alpha);
        },
        py::arg("center"), py::arg("half_angle"), py::arg("axis"), py::arg("angle"), py::arg("alpha") = 1.0);

    py::class_<MeasurementRecord>(m, "MeasurementRecord")
        .def_property_readonly("scheme", [](const MeasurementRecord &r) { return std::string(scheme_name(r.scheme)); })
        .def_readonly("counts", &MeasurementRecord::counts)
        .def_property_readonly("outcomes",
                               [](const MeasurementRecord &r) {
                                   std::vector<Triple> out;
                                   for (const auto &n : r.outcomes) {
                                       out.push_back(triple(n));
                                   }
                                   return out;
                               })
        .def_property_readonly("shots", &MeasurementRecord::shots)
        .def("to_json", [](const MeasurementRecord &r) { return record_to_json(r).dump(); })
        .def_static("from_json", [](const std::string &s) { return record_from_json(Json::parse(s)); });
    m.def("sample", &sample, py::arg("protocol"), py::arg("r0"), py::arg("shots"), py::arg("seed"),
          py::arg("stream") = 0, py::arg("alloc") = std::nullopt,
          "Draws one record for the protocol's measurement scheme.");
    m.def("estimate", &estimate, py::arg("protocol"), py::arg("record"), py::arg("policy") = "unrestricted");

    py::class_<MlResult>(m, "MlResult")
        .def_property_readonly("r", [](const MlResult &r) { return triple(r.r); })
        .def_readonly("converged", &MlResult::converged)
        .def_readonly("on_boundary", &MlResult::on_boundary)
        .def_readonly("iterations", &MlResult::iterations)
        .def_readonly("residual", &MlResult::residual)
        .def_readonly("rank", &MlResult::rank);
    m.def(
        "estimate_ml",
        [](const MeasurementRecord &record, double tolerance, double boundary_tolerance, int max_iterations) {
            MlConfig config;
            config.tolerance = tolerance;
            config.boundary_tolerance = boundary_tolerance;
            config.max_iterations = max_iterations;
            return estimate_ml_continuous(record, config);
        },
        py::arg("record"), py::arg("tolerance") = MlConfig{}.tolerance,
        py::arg("boundary_tolerance") = MlConfig{}.boundary_tolerance,
        py::arg("max_iterations") = MlConfig{}.max_iterations);

    m.def(
        "analytic_mean",
        [](const std::string &p, const Triple &r0, uint64_t n) {
            return triple(analytic_mean(protocol_from_name(p), vec(r0), n));
        },
        py::arg("protocol"), py::arg("r0"), py::arg("shots"));
    m.def(
        "analytic_variance",
        [](const std::string &p, const Triple &r0, uint64_t n) {
            return analytic_variance(protocol_from_name(p), vec(r0), n);
        },
        py::arg("protocol"), py::arg("r0"), py::arg("shots"));
    m.def(
        "asymptotic_variance",
        [](const std::string &p, const Triple &r0, uint64_t n) {
            return asymptotic_variance(protocol_from_name(p), vec(r0), n);
        },
        py::arg("protocol"), py::arg("r0"), py::arg("shots"));
    m.def("f_n", &f_n, py::arg("n"));
    m.def("f_n_recursion", &f_n_recursion, py::arg("n"));

    py::class_<TrialStats>(m, "TrialStats")
        .def_readonly("trials", &TrialStats::trials)
        .def_property_readonly("mean", [](const TrialStats &s) { return triple(s.mean); })
        .def_property_readonly("bias", [](const TrialStats &s) { return triple(s.bias); })
        .def_property_readonly("mean_se", [](const TrialStats &s) { return triple(s.mean_se); })
        .def_readonly("hs_variance", &TrialStats::hs_variance)
        .def_readonly("hs_variance_se", &TrialStats::hs_variance_se)
        .def_readonly("second_moment", &TrialStats::second_moment)
        .def_readonly("second_moment_se", &TrialStats::second_moment_se)
        .def_readonly("ml_converged_fraction", &TrialStats::ml_converged_fraction)
        .def_readonly("ml_boundary_fraction", &TrialStats::ml_boundary_fraction)
        .def("to_json", [](const TrialStats &s) { return stats_to_json(s).dump(); });
    m.def(
        "run_trials",
        [](const std::string &p, const Triple &r0, uint64_t shots, uint64_t trials, uint64_t seed, uint64_t stream,
           const std::string &policy, unsigned threads, const std::optional<std::array<uint64_t, 3>> &alloc) {
            TrialOptions options;
            options.policy = policy_from_name(policy);
            options.threads = threads;
            options.allocation = allocation(alloc);
            py::gil_scoped_release release;
            return run_trials(protocol_from_name(p), vec(r0), shots, trials, {seed, stream}, options);
        },
        py::arg("protocol"), py::arg("r0"), py::arg("shots"), py::arg("trials"), py::arg("seed"),
        py::arg("stream") = 0, py::arg("policy") = "unrestricted", py::arg("threads") = 0,
        py::arg("alloc") = std::nullopt);
    m.def(
        "summary_table_csv",
        [](const Triple &r0, uint64_t shots, uint64_t trials, uint64_t seed) {
            py::gil_scoped_release release;
            return table_csv(summary_table(vec(r0), shots, trials, {seed, 0}));
        },
        py::arg("r0"), py::arg("shots"), py::arg("trials"), py::arg("seed"));
    m.def(
        "summary_table_json",
        [](const Triple &r0, uint64_t shots, uint64_t trials, uint64_t seed) {
            py::gil_scoped_release release;
            return table_to_json(summary_table(vec(r0), shots, trials, {seed, 0})).dump();
        },
        py::arg("r0"), py::arg("shots"), py::arg("trials"), py::arg("seed"));

    m.def(
        "verify",
        [](bool full) {
            VerifyOptions options;
            options.full = full;
            std::vector<std::tuple<std::string, bool, std::string>> out;
            for (const auto &r : run_verification(options)) {
                out.emplace_back(r.name, r.passed, r.detail);
            }
            return out;
        },
        py::arg("full") = false, "Runs the invariant suites; returns (name, passed, detail) per suite.");
}
