#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gather3d/geometry.hpp"
#include "gather3d/strategies.hpp"

namespace gather3d::strategies {

Vec3 local_ses_center(RobotId i, const Configuration& config, const VisibilityGraph& graph) {
    const auto pts = neighborhood_points(i, config, graph);
    return enclosing_sphere(pts).center;
}

Vec3 gtc3d_target(RobotId i, const Configuration& config, const VisibilityGraph& graph) {
    const Vec3& p = config.positions[i];
    const Vec3 c = local_ses_center(i, config, graph);
    const double reach = distance(c, p);
    if (reach <= kStayThreshold) return p;
    const Vec3 dir = (c - p) / reach;
    // The limit ball for the robot itself is centered on its own position.
    double limit = 0.5;
    for (auto j : graph.neighbors(i)) {
        const Sphere ball{0.5 * (p + config.positions[j]), 0.5};
        limit = std::min(limit, ray_ball_exit(p, dir, ball));
    }
    if (reach <= limit) return c;
    return p + limit * dir;
}

Vec3 gtc3d_cont_velocity(RobotId i, const Configuration& config, const VisibilityGraph& graph) {
    const Vec3& p = config.positions[i];
    return normalized(local_ses_center(i, config, graph) - p, kStayThreshold);
}

std::vector<Vec3> local_hull_edges(RobotId i, const Configuration& config, const VisibilityGraph& graph) {
    const Vec3& p = config.positions[i];
    const auto pts = neighborhood_points(i, config, graph);
    const auto self = static_cast<std::size_t>(std::find(pts.begin(), pts.end(), p) - pts.begin());
    const ConvexHull hull = convex_hull(pts);
    if (hull.dimensionality == 0) return {};
    const auto v = hull.vertex_of_input(self);
    if (!v) return {};
    std::vector<Vec3> edges;
    for (auto u : hull.adjacency[*v]) edges.push_back(hull.vertices[u] - p);
    return edges;
}

namespace {
double max_angle(const Vec3& x, std::span<const Vec3> units) {
    double worst = 0.0;
    for (const auto& u : units) worst = std::max(worst, angle_between(x, u));
    return worst;
}
}  // namespace

Vec3 angle_minimizer(std::span<const Vec3> vectors) {
    if (vectors.empty()) throw std::invalid_argument("angle_minimizer: no vectors");
    std::vector<Vec3> tips;
    tips.reserve(vectors.size());
    for (const auto& v : vectors) {
        if (norm(v) == 0.0) throw std::invalid_argument("angle_minimizer: zero vector");
        tips.push_back(normalized(v));
    }
    const Vec3 c = enclosing_sphere(tips).center;
    if (norm(c) <= 1e-9) throw std::invalid_argument("angle_minimizer: vectors not confined to a halfspace");
    constexpr double kLimit = std::numbers::pi / 2 - 1e-9;
    const Vec3 candidate = normalized(c);
    if (max_angle(candidate, tips) < kLimit) return candidate;
    Vec3 sum;
    for (const auto& t : tips) sum += t;
    const Vec3 fallback = normalized(sum, 1e-12);
    if (norm2(fallback) > 0.0 && max_angle(fallback, tips) < kLimit) return fallback;
    throw std::invalid_argument("angle_minimizer: vectors not confined to a halfspace");
}

Vec3 moam_velocity(RobotId i, const Configuration& config, const VisibilityGraph& graph) {
    const auto edges = local_hull_edges(i, config, graph);
    if (edges.empty()) return {};
    try {
        return angle_minimizer(edges);
    } catch (const std::invalid_argument&) {
        // Numerically flat corner: no admissible direction, the robot waits.
        return {};
    }
}

DiscreteStrategy gtc3d() { return {"gtc3d", gtc3d_target}; }

ContinuousStrategy gtc3d_cont() {
    return {"gtc3d-cont", [](RobotId i, const Configuration& config, const VisibilityGraph& graph) {
                const Vec3& p = config.positions[i];
                const Vec3 c = local_ses_center(i, config, graph);
                const Vec3 v = normalized(c - p, kStayThreshold);
                if (norm2(v) == 0.0) return ContinuousMove{};
                return ContinuousMove{v, c};
            }};
}

ContinuousStrategy moam() {
    return {"moam", [](RobotId i, const Configuration& config, const VisibilityGraph& graph) {
                return ContinuousMove{moam_velocity(i, config, graph), std::nullopt};
            }};
}

}  // namespace gather3d::strategies
