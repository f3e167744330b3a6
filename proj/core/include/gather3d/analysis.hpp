#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gather3d/geometry.hpp"
#include "gather3d/swarm.hpp"
#include "gather3d/trace.hpp"

namespace gather3d::analysis {

// Outcome of a property check. `worst_margin` is the largest observed excess over
// the property's allowance (tolerance already folded in), so
// passed == (worst_margin <= 0). Vacuous checks report -infinity.
struct CheckReport {
    std::string property;
    bool passed = true;
    std::optional<double> first_violation_time;
    double worst_margin = -std::numeric_limits<double>::infinity();
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::size_t skipped = 0;
    std::vector<std::string> details;

    // Folds one measurement into the report.
    void observe(double margin, double time, const std::string& what = {});
    void merge(const CheckReport& other);
};

struct Quadrature {
    std::vector<Vec3> directions;
    std::vector<double> weights;

    static Quadrature hemisphere(std::size_t count);
};

double global_ses_radius(const Configuration& config);

// Perimeter of the live points projected onto the plane with the given normal.
double projected_length(const Configuration& config, const Vec3& direction);

// Weighted hemisphere sum of projected lengths. Weights must sum to 2*pi (1e-6).
double big_L(const Configuration& config, const Quadrature& quad);

// Every global hull vertex must move at speed 1 (+-tol) into the closed hull, probed
// at p + 1e-6 * diameter * v with 1e-9 slack. A vertex within twice the probe
// length of a facet it does not touch is tested against its incident facets only.
// Vacuous when the hull is a point.
CheckReport contracting_check(const Configuration& config, std::span<const Vec3> velocities, double tol);

// Each robot that is a corner of its local hull and moves must keep an angle below
// pi/2 - 1e-9 to every adjacent local hull edge.
CheckReport tangential_normal_check(const Configuration& config, std::span<const Vec3> velocities,
                                    const VisibilityGraph& graph);

// Forward-difference estimate of d(ell)/dt against -8 * eps / n + 10 * dt * n.
CheckReport ell_derivative_check(const Trace& trace, const Vec3& direction, int n);

// ell never grows by more than 10 * dt between consecutive entries.
CheckReport ell_monotonicity_check(const Trace& trace, std::span<const Vec3> directions);

// Every edge at entry k is still within 1 + tol at entry k + 1.
CheckReport connectivity_check(const Trace& trace, double tol);

CheckReport contracting_check(const Trace& trace, double tol);
CheckReport tangential_normal_check(const Trace& trace);

// R_{k+1} <= R_k + tol between consecutive entries.
CheckReport radius_monotonicity_check(const Trace& trace, double tol);

// sqrt(2 n alpha - alpha^2) / n. Throws for alpha outside [0, 1] or n < 1.
double epsilon_for_alpha(int n, double alpha);

// Fraction of directions blocked by some nonzero velocity: the plane normal lies
// within asin(eps) of +-v.
double blocked_fraction(std::span<const Vec3> velocities, double eps, std::span<const Vec3> directions);

struct ScalingFit {
    double exponent = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Least-squares slope of log(measurement) against log(size). Needs >= 3 points,
// all positive.
ScalingFit scaling_fit(std::span<const double> sizes, std::span<const double> measurements);

}  // namespace gather3d::analysis
