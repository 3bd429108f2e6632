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

#include "tomolab/estimators.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace tomolab {

std::string_view policy_name(BallPolicy policy) {
    return policy == BallPolicy::kRadialClamp ? "clamp" : "unrestricted";
}

BallPolicy policy_from_name(std::string_view name) {
    if (name == "clamp") {
        return BallPolicy::kRadialClamp;
    }
    if (name == "unrestricted") {
        return BallPolicy::kUnrestricted;
    }
    throw PreconditionError("unknown ball policy '" + std::string(name) + "'");
}

BlochVector apply_policy(const BlochVector &r, BallPolicy policy) {
    if (policy == BallPolicy::kUnrestricted) {
        return r;
    }
    return r / std::max(1.0, norm(r));
}

namespace {

void require_scheme(const MeasurementRecord &record, MeasurementScheme scheme, size_t counts, const char *what) {
    if (record.scheme != scheme) {
        std::ostringstream msg;
        msg << what << ": expected a " << scheme_name(scheme) << " record, got " << scheme_name(record.scheme);
        throw PreconditionError(msg.str());
    }
    if (scheme != MeasurementScheme::kContinuous && record.counts.size() != counts) {
        std::ostringstream msg;
        msg << what << ": expected " << counts << " outcome counts, got " << record.counts.size();
        throw PreconditionError(msg.str());
    }
}

double axis_ratio(uint64_t plus, uint64_t minus) {
    return (static_cast<double>(plus) - static_cast<double>(minus)) / static_cast<double>(plus + minus);
}

}  // namespace

BlochVector estimate_projective(const MeasurementRecord &record) {
    require_scheme(record, MeasurementScheme::kProjectiveTriplet, 6, "estimate_projective");
    BlochVector r;
    for (int k = 0; k < 3; k++) {
        uint64_t plus = record.counts[2 * k];
        uint64_t minus = record.counts[2 * k + 1];
        if (plus + minus == 0) {
            throw PreconditionError("estimate_projective: every axis needs at least one shot");
        }
        r[k] = axis_ratio(plus, minus);
    }
    return r;
}

BlochVector estimate_six(const MeasurementRecord &record, const DiscretePovm &povm) {
    require_scheme(record, MeasurementScheme::kSixOutcome, 6, "estimate_six");
    if (povm.size() != 6) {
        throw PreconditionError("estimate_six: POVM must have six elements");
    }
    BlochVector r;
    for (size_t k = 0; k < 3; k++) {
        uint64_t plus = record.counts[2 * k];
        uint64_t minus = record.counts[2 * k + 1];
        if (plus + minus > 0) {
            r += axis_ratio(plus, minus) * povm.elements[2 * k].direction;
        }
    }
    return r;
}

BlochVector estimate_tetrahedron(const MeasurementRecord &record, const DiscretePovm &povm) {
    require_scheme(record, MeasurementScheme::kTetrahedron, 4, "estimate_tetrahedron");
    if (povm.size() != 4) {
        throw PreconditionError("estimate_tetrahedron: POVM must have four elements");
    }
    uint64_t total = record.shots();
    if (total == 0) {
        throw PreconditionError("estimate_tetrahedron: record has no shots");
    }
    BlochVector r;
    for (size_t k = 0; k < 4; k++) {
        r += static_cast<double>(record.counts[k]) * povm.elements[k].direction;
    }
    return (3.0 / static_cast<double>(total)) * r;
}

Vec3 tetrahedron_stationarity(const MeasurementRecord &record, const BlochVector &r, const DiscretePovm &povm) {
    require_scheme(record, MeasurementScheme::kTetrahedron, 4, "tetrahedron_stationarity");
    Vec3 sum;
    for (size_t k = 0; k < 4; k++) {
        const Vec3 &a = povm.elements[k].direction;
        sum += (static_cast<double>(record.counts[k]) / (1.0 + dot(r, a))) * a;
    }
    return sum;
}

BlochVector estimate_moment(const MeasurementRecord &record) {
    require_scheme(record, MeasurementScheme::kContinuous, 0, "estimate_moment");
    if (record.outcomes.empty()) {
        throw PreconditionError("estimate_moment: record has no outcomes");
    }
    long double sx = 0, sy = 0, sz = 0;
    for (const auto &n : record.outcomes) {
        sx += n.x;
        sy += n.y;
        sz += n.z;
    }
    long double f = 3.0L / static_cast<long double>(record.outcomes.size());
    return {static_cast<double>(f * sx), static_cast<double>(f * sy), static_cast<double>(f * sz)};
}

double log_likelihood(std::span<const Vec3> outcomes, const BlochVector &r) {
    long double total = 0;
    for (const auto &n : outcomes) {
        double w = 1.0 + dot(r, n);
        if (!(w > 0.0)) {
            return -std::numeric_limits<double>::infinity();
        }
        total += std::log(static_cast<long double>(w));
    }
    return static_cast<double>(total);
}

Vec3 log_likelihood_gradient(std::span<const Vec3> outcomes, const BlochVector &r) {
    long double g[3] = {0, 0, 0};
    for (const auto &n : outcomes) {
        long double inv = 1.0L / (1.0L + static_cast<long double>(dot(r, n)));
        for (int i = 0; i < 3; i++) {
            g[i] += n[i] * inv;
        }
    }
    return {static_cast<double>(g[0]), static_cast<double>(g[1]), static_cast<double>(g[2])};
}

std::array<std::array<double, 3>, 3> log_likelihood_hessian(std::span<const Vec3> outcomes, const BlochVector &r) {
    long double h[3][3] = {};
    for (const auto &n : outcomes) {
        long double inv = 1.0L / (1.0L + static_cast<long double>(dot(r, n)));
        inv *= inv;
        for (int i = 0; i < 3; i++) {
            for (int j = 0; j < 3; j++) {
                h[i][j] -= n[i] * n[j] * inv;
            }
        }
    }
    std::array<std::array<double, 3>, 3> out{};
    for (int i = 0; i < 3; i++) {
        for (int j = 0; j < 3; j++) {
            out[i][j] = static_cast<double>(h[i][j]);
        }
    }
    return out;
}

namespace {

using VecR = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using MatR = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

constexpr double kArmijo = 1e-4;
constexpr double kBoundaryGap = 1e-9;
constexpr double kStartRadius = 0.9;

/// The likelihood restricted to the span of the outcomes, in an orthonormal
/// basis of that span. Restricted to the span it is strictly concave.
class ReducedLikelihood {
   public:
    ReducedLikelihood(std::span<const Vec3> outcomes, const Eigen::Matrix<double, 3, Eigen::Dynamic> &basis)
        : basis_(basis), dim_(static_cast<int>(basis.cols())) {
        points_.reserve(outcomes.size());
        for (const auto &n : outcomes) {
            points_.push_back(basis_.transpose() * Eigen::Vector3d(n.x, n.y, n.z));
        }
    }

    int dim() const {
        return dim_;
    }

    double value(const VecR &x) const {
        long double total = 0;
        for (const auto &m : points_) {
            double w = 1.0 + x.dot(m);
            if (!(w > 0.0)) {
                return -std::numeric_limits<double>::infinity();
            }
            total += std::log(static_cast<long double>(w));
        }
        return static_cast<double>(total);
    }

    void derivatives(const VecR &x, VecR &gradient, MatR &hessian) const {
        long double g[3] = {};
        long double h[3][3] = {};
        for (const auto &m : points_) {
            long double inv = 1.0L / (1.0L + static_cast<long double>(x.dot(m)));
            long double inv2 = inv * inv;
            for (int i = 0; i < dim_; i++) {
                g[i] += m[i] * inv;
                for (int j = 0; j < dim_; j++) {
                    h[i][j] -= m[i] * m[j] * inv2;
                }
            }
        }
        gradient.resize(dim_);
        hessian.resize(dim_, dim_);
        for (int i = 0; i < dim_; i++) {
            gradient[i] = static_cast<double>(g[i]);
            for (int j = 0; j < dim_; j++) {
                hessian(i, j) = static_cast<double>(h[i][j]);
            }
        }
    }

    Vec3 lift(const VecR &x) const {
        Eigen::Vector3d v = basis_ * x;
        return {v[0], v[1], v[2]};
    }
    double lab_inf_norm(const VecR &x) const {
        return (basis_ * x).cwiseAbs().maxCoeff();
    }

   private:
    Eigen::Matrix<double, 3, Eigen::Dynamic> basis_;
    int dim_;
    std::vector<VecR> points_;
};

/// Accepts a trial point whose value beats the Armijo line, up to the
/// floating-point resolution of the objective.
bool sufficient_increase(double trial, double current, double predicted) {
    if (!std::isfinite(trial)) {
        return false;
    }
    double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::fabs(current);
    return trial >= current + kArmijo * predicted - slack;
}

bool below_resolution(double predicted, double current) {
    return predicted <= 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::fabs(current));
}

enum class Phase { kConverged, kHitBoundary, kInteriorIndicated, kStalled, kOutOfIterations };

class BallSolver {
   public:
    BallSolver(const ReducedLikelihood &f, const MlConfig &config) : f_(f), config_(config) {
    }

    int iterations = 0;
    double residual = std::numeric_limits<double>::infinity();

    Phase interior(VecR &x, bool allow_boundary_switch) {
        VecR g;
        MatR h;
        while (true) {
            f_.derivatives(x, g, h);
            residual = f_.lab_inf_norm(g);
            if (residual <= config_.tolerance) {
                return Phase::kConverged;
            }
            if (allow_boundary_switch && 1.0 - x.norm() < kBoundaryGap) {
                return Phase::kHitBoundary;
            }
            if (iterations >= config_.max_iterations) {
                return Phase::kOutOfIterations;
            }
            iterations++;

            Eigen::LDLT<MatR> ldlt(-h);
            VecR dir = ldlt.solve(g);
            if (ldlt.info() != Eigen::Success || !dir.allFinite() || dir.dot(g) <= 0.0) {
                dir = g;
            }
            double step = 1.0;
            double reach = boundary_reach(x, dir);
            if (reach <= 1.0) {
                // Stop just short of the sphere so the iterate stays interior.
                step = 0.995 * reach;
            }
            double current = f_.value(x);
            double slope = g.dot(dir);
            // Once the predicted gain is below the resolution of the
            // objective, progress is judged by the gradient instead.
            bool rounding_regime = below_resolution(slope, current);
            bool accepted = false;
            for (int k = 0; k < 80; k++) {
                VecR trial = x + step * dir;
                bool better = rounding_regime ? interior_residual(trial) < residual
                                              : sufficient_increase(f_.value(trial), current, step * slope);
                if (better) {
                    x = trial;
                    accepted = true;
                    break;
                }
                step *= config_.shrink;
            }
            if (!accepted) {
                return Phase::kStalled;
            }
        }
    }

    Phase boundary(VecR &y) {
        y /= y.norm();
        VecR g;
        MatR h;
        if (f_.dim() == 1) {
            f_.derivatives(y, g, h);
            residual = 0.0;
            return g.dot(y) >= 0.0 ? Phase::kConverged : Phase::kInteriorIndicated;
        }
        while (true) {
            f_.derivatives(y, g, h);
            if (!g.allFinite()) {
                return Phase::kStalled;
            }
            double lambda = g.dot(y);
            VecR tangential = g - lambda * y;
            residual = f_.lab_inf_norm(tangential);
            if (residual <= config_.boundary_tolerance) {
                return lambda >= 0.0 ? Phase::kConverged : Phase::kInteriorIndicated;
            }
            if (iterations >= config_.max_iterations) {
                return Phase::kOutOfIterations;
            }
            iterations++;

            MatR frame = tangent_frame(y);
            VecR gt = frame.transpose() * g;
            MatR ht = frame.transpose() * h * frame;
            ht -= lambda * MatR::Identity(ht.rows(), ht.cols());
            Eigen::LLT<MatR> llt(-ht);
            VecR u = llt.solve(gt);
            if (llt.info() != Eigen::Success || !u.allFinite() || u.dot(gt) <= 0.0) {
                u = gt;
            }
            VecR v = frame * u;
            double length = v.norm();
            if (length > 0.5) {
                v *= 0.5 / length;
                length = 0.5;
            }
            double current = f_.value(y);
            double slope = gt.dot(frame.transpose() * v);
            bool rounding_regime = below_resolution(slope, current);
            double step = 1.0;
            bool accepted = false;
            for (int k = 0; k < 80; k++) {
                double angle = step * length;
                VecR trial = std::cos(angle) * y + std::sin(angle) * (v / length);
                trial /= trial.norm();
                bool better = rounding_regime ? boundary_residual(trial) < residual
                                              : sufficient_increase(f_.value(trial), current, step * slope);
                if (better) {
                    y = trial;
                    accepted = true;
                    break;
                }
                step *= config_.shrink;
            }
            if (!accepted) {
                return Phase::kStalled;
            }
        }
    }

   private:
    double interior_residual(const VecR &x) const {
        VecR g;
        MatR h;
        f_.derivatives(x, g, h);
        return g.allFinite() ? f_.lab_inf_norm(g) : std::numeric_limits<double>::infinity();
    }

    double boundary_residual(const VecR &y) const {
        VecR g;
        MatR h;
        f_.derivatives(y, g, h);
        return g.allFinite() ? f_.lab_inf_norm(g - g.dot(y) * y) : std::numeric_limits<double>::infinity();
    }

    static double boundary_reach(const VecR &x, const VecR &dir) {
        double a = dir.squaredNorm();
        double b = 2.0 * x.dot(dir);
        double c = x.squaredNorm() - 1.0;
        return (-b + std::sqrt(std::max(0.0, b * b - 4.0 * a * c))) / (2.0 * a);
    }

    static MatR tangent_frame(const VecR &y) {
        MatR frame(y.size(), y.size() - 1);
        if (y.size() == 2) {
            frame << -y[1], y[0];
            return frame;
        }
        auto [e1, e2] = orthonormal_complement({y[0], y[1], y[2]});
        frame << e1.x, e2.x, e1.y, e2.y, e1.z, e2.z;
        return frame;
    }

    const ReducedLikelihood &f_;
    const MlConfig &config_;
};

}  // namespace

MlResult estimate_ml_continuous(const MeasurementRecord &record, const MlConfig &config) {
    require_scheme(record, MeasurementScheme::kContinuous, 0, "estimate_ml_continuous");
    if (record.outcomes.empty()) {
        throw PreconditionError("estimate_ml_continuous: record has no outcomes");
    }
    if (!(config.tolerance > 0.0) || !(config.boundary_tolerance > 0.0) || !(config.shrink > 0.0 && config.shrink < 1.0)) {
        throw PreconditionError("estimate_ml_continuous: invalid solver configuration");
    }

    // The likelihood only sees the component of r inside the span of the
    // outcomes; solving there yields the minimum-norm maximizer.
    Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
    for (const auto &n : record.outcomes) {
        Eigen::Vector3d v(n.x, n.y, n.z);
        scatter += v * v.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(scatter);
    double top = eig.eigenvalues().maxCoeff();
    std::vector<int> kept;
    for (int i = 2; i >= 0; i--) {
        if (eig.eigenvalues()[i] > 1e-12 * top) {
            kept.push_back(i);
        }
    }
    Eigen::Matrix<double, 3, Eigen::Dynamic> basis(3, static_cast<Eigen::Index>(kept.size()));
    for (size_t c = 0; c < kept.size(); c++) {
        basis.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors().col(kept[c]);
    }
    ReducedLikelihood f(record.outcomes, basis);

    BlochVector start = estimate_moment(record);
    start = start * (std::min(1.0, kStartRadius / std::max(norm(start), 1e-300)));
    VecR x = basis.transpose() * Eigen::Vector3d(start.x, start.y, start.z);

    BallSolver solver(f, config);
    MlResult result;
    result.rank = f.dim();

    bool allow_switch = true;
    for (int attempt = 0; attempt < 3; attempt++) {
        Phase phase = solver.interior(x, allow_switch);
        if (phase == Phase::kConverged) {
            result.converged = true;
            break;
        }
        if (phase != Phase::kHitBoundary) {
            break;
        }
        VecR y = x;
        phase = solver.boundary(y);
        if (phase == Phase::kConverged) {
            x = y;
            result.converged = true;
            result.on_boundary = true;
            break;
        }
        if (phase != Phase::kInteriorIndicated) {
            x = y;
            result.on_boundary = true;
            break;
        }
        // The gradient points inward at the boundary stationary point, so the
        // maximizer is interior after all.
        allow_switch = false;
        x = (1.0 - 1e-6) * y;
    }

    result.r = f.lift(x);
    result.iterations = solver.iterations;
    result.residual = solver.residual;
    return result;
}

}  // namespace tomolab
