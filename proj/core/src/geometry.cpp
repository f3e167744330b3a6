#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "gather3d/geometry.hpp"

namespace gather3d {

PlaneBasis PlaneBasis::from_normal(const Vec3& normal) {
    const double len = norm(normal);
    if (!(len > 0.0) || !std::isfinite(len)) throw std::invalid_argument("PlaneBasis: zero normal");
    const Vec3 n = normal / len;
    // Seed with the coordinate axis least aligned with n; ties prefer x, then y.
    const double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
    Vec3 seed{1, 0, 0};
    if (ay < ax && ay <= az) seed = {0, 1, 0};
    else if (az < ax && az < ay) seed = {0, 0, 1};
    const Vec3 u = normalized(seed - dot(seed, n) * n);
    const Vec3 v = cross(n, u);
    return {n, u, v};
}

bool PlaneBasis::is_valid(double tol) const {
    return std::abs(norm(normal) - 1.0) <= tol && std::abs(norm(u) - 1.0) <= tol &&
           std::abs(norm(v) - 1.0) <= tol && std::abs(dot(normal, u)) <= tol &&
           std::abs(dot(normal, v)) <= tol && std::abs(dot(u, v)) <= tol;
}

Point2 project(const Vec3& point, const PlaneBasis& basis) { return {dot(point, basis.u), dot(point, basis.v)}; }

Vec3 embed(const Point2& point, const PlaneBasis& basis, const Vec3& offset) {
    return offset + point.a * basis.u + point.b * basis.v;
}

namespace {
double cross2(const Point2& o, const Point2& p, const Point2& q) {
    return (p.a - o.a) * (q.b - o.b) - (p.b - o.b) * (q.a - o.a);
}
double dist2(const Point2& p, const Point2& q) { return std::hypot(p.a - q.a, p.b - q.b); }
}  // namespace

std::vector<std::size_t> planar_hull_indices(std::span<const Point2> points, double eps) {
    if (points.empty()) return {};
    std::vector<std::size_t> idx(points.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return points[i] < points[j]; });
    idx.erase(std::unique(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return points[i] == points[j]; }),
              idx.end());
    if (idx.size() == 1) return idx;

    // Andrew's monotone chain; turns with cross <= eps are dropped.
    std::vector<std::size_t> hull(2 * idx.size());
    std::size_t k = 0;
    for (auto i : idx) {
        while (k >= 2 && cross2(points[hull[k - 2]], points[hull[k - 1]], points[i]) <= eps) --k;
        hull[k++] = i;
    }
    const std::size_t lower = k + 1;
    for (auto it = idx.rbegin() + 1; it != idx.rend(); ++it) {
        while (k >= lower && cross2(points[hull[k - 2]], points[hull[k - 1]], points[*it]) <= eps) --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

double planar_hull_length(std::span<const Point2> points) {
    if (points.empty()) throw std::invalid_argument("planar_hull_length: empty point set");
    const auto hull = planar_hull_indices(points);
    if (hull.size() < 2) return 0.0;
    double len = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        len += dist2(points[hull[i]], points[hull[(i + 1) % hull.size()]]);
    }
    return len;
}

double ray_ball_exit(const Vec3& origin, const Vec3& direction, const Sphere& ball) {
    const Vec3 w = origin - ball.center;
    const double w2 = norm2(w);
    if (std::sqrt(w2) > ball.radius + 1e-9) throw std::invalid_argument("ray_ball_exit: origin outside ball");
    const double b = dot(direction, w);
    const double c = w2 - ball.radius * ball.radius;
    const double t = -b + std::sqrt(std::max(b * b - c, 0.0));
    return std::max(t, 0.0);
}

std::vector<Vec3> hemisphere_directions(std::size_t count) {
    if (count == 0) throw std::invalid_argument("hemisphere_directions: count must be positive");
    if (count == 1) return {Vec3{0, 0, 1}};
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<Vec3> dirs;
    dirs.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        // Equal-area bands in z on (0, 1).
        const double z = 1.0 - (static_cast<double>(k) + 0.5) / static_cast<double>(count);
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * static_cast<double>(k);
        dirs.push_back(normalized({rho * std::cos(phi), rho * std::sin(phi), z}));
    }
    return dirs;
}

double angle_between(const Vec3& u, const Vec3& v) {
    if (norm2(u) == 0.0 || norm2(v) == 0.0) throw std::invalid_argument("angle_between: zero vector");
    return std::atan2(norm(cross(u, v)), dot(u, v));
}

double point_set_diameter(std::span<const Vec3> points) {
    double d = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) d = std::max(d, distance(points[i], points[j]));
    return d;
}

}  // namespace gather3d
