#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fibscope/milnor/milnor.hpp"
#include "fibscope/numeric/rng.hpp"
#include "fibscope/numeric/sample_cloud.hpp"

namespace fibscope {

/// Radii R_1 < ... < R_m at which the Milnor set is sampled.
struct RadiusSchedule {
    std::vector<double> radii{1e2, 1e3, 1e4, 1e5};
    std::size_t samples_per_radius = 256;
    double newton_tol = 1e-10;
    int max_iterations = 50;

    /// Throws std::invalid_argument unless m >= 3, radii strictly increasing
    /// and positive, and the budget is at least 1.
    void validate() const;
};

struct NewtonOptions {
    double tol = 1e-10;
    int max_iterations = 50;
    /// Random restarts allowed per requested point.
    std::size_t attempts_per_point = 8;
};

/// Random start on the sphere of radius R in R^2n; half of the draws use
/// log-uniform coordinate magnitudes to reach thin regions near infinity.
std::vector<double> random_sphere_point(Stream& rng, std::size_t n, double radius);

/// Solver for points of M_G on a sphere |x| = R. Stateless apart from the
/// immutable evaluator; every method takes its randomness explicitly.
class MilnorSphereSolver {
public:
    MilnorSphereSolver(const MilnorEvaluator& ev, double radius, NewtonOptions opts);

    double radius() const { return radius_; }

    /// Damped Newton on (Re h, Im h, |x|^2 - R^2) in a random 3-dimensional
    /// affine slice through a random point of the sphere.
    std::optional<std::vector<double>> newton(Stream& rng) const;

    /// Minimum-norm Newton projection of a nearby point back onto the
    /// constraint set.
    std::optional<std::vector<double>> project(std::vector<double> x) const;

    /// Projected Levenberg-Marquardt descent of |G(x) - target|^2 along
    /// M_G intersected with the sphere, starting from a point on it.
    std::vector<double> descend(std::vector<double> x, const std::vector<double>& target, int iterations = 60) const;

    /// Both constraint residuals within tolerance.
    bool on_constraints(const std::vector<double>& x) const;

private:
    Eigen::Vector3d slice_residual(const std::vector<double>& x, double h_scale) const;

    const MilnorEvaluator& ev_;
    double radius_;
    NewtonOptions opts_;
};

/// Up to `count` points of M_G on the sphere of the given radius. Throws
/// DomainError("sampling starved at radius R") on zero successes.
SampleCloud newton_on_milnor(const MilnorPresentation& pres, double radius, std::size_t count, std::uint64_t seed,
                             NewtonOptions opts = {}, std::size_t band_index = 0);

}  // namespace fibscope
