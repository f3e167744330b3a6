#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gather3d/vec3.hpp"

namespace gather3d {

struct Sphere {
    Vec3 center;
    double radius = 0.0;

    bool contains(const Vec3& p, double slack = 0.0) const {
        return distance(p, center) <= radius + slack;
    }
};

struct SesResult {
    Sphere sphere;
    // At most four input points on the surface whose convex hull contains the center.
    std::vector<Vec3> support;
};

// Smallest enclosing sphere (move-to-front Welzl). Throws std::invalid_argument on
// empty or non-finite input. The reported radius is the exact maximum distance from
// the computed center, so every input point is contained without slack.
SesResult smallest_enclosing_sphere(std::span<const Vec3> points);

// Same sphere as smallest_enclosing_sphere without extracting a support witness.
Sphere enclosing_sphere(std::span<const Vec3> points);

// Barycentric weights of `target` with respect to the affine hull of `basis`
// (least squares; weights sum to 1). Empty result if the basis is degenerate.
std::vector<double> affine_weights(std::span<const Vec3> basis, const Vec3& target);

// Orthonormal frame of the plane through the origin with the given normal.
struct PlaneBasis {
    Vec3 normal;
    Vec3 u;
    Vec3 v;

    // Deterministic completion of a nonzero normal; throws on a zero vector.
    static PlaneBasis from_normal(const Vec3& normal);
    bool is_valid(double tol = 1e-12) const;
};

struct Point2 {
    double a = 0.0;
    double b = 0.0;
    friend constexpr bool operator==(const Point2&, const Point2&) = default;
    friend constexpr auto operator<=>(const Point2&, const Point2&) = default;
};

Point2 project(const Vec3& point, const PlaneBasis& basis);
Vec3 embed(const Point2& point, const PlaneBasis& basis, const Vec3& offset = {});

// Indices of the 2D convex hull in counter-clockwise order, collinear points
// dropped. A single index for coincident input, two for collinear input.
std::vector<std::size_t> planar_hull_indices(std::span<const Point2> points, double eps = 0.0);

// Perimeter of the 2D convex hull; a collinear set counts its segment twice.
double planar_hull_length(std::span<const Point2> points);

// Largest t >= 0 with origin + t*direction in the closed ball. The origin must lie in
// the ball up to 1e-9; throws std::invalid_argument otherwise.
double ray_ball_exit(const Vec3& origin, const Vec3& direction, const Sphere& ball);

// Fibonacci-spiral directions on the upper unit hemisphere; each carries weight 2*pi/count.
std::vector<Vec3> hemisphere_directions(std::size_t count);

// Angle in [0, pi], via atan2(|u x v|, u.v). Throws on zero vectors.
double angle_between(const Vec3& u, const Vec3& v);

// Convex hull with explicit dimensionality for point, segment, polygon and polyhedron.
struct ConvexHull {
    int dimensionality = 0;
    std::vector<Vec3> vertices;
    // Position of each vertex in the input sequence.
    std::vector<std::size_t> input_index;
    std::vector<std::array<std::size_t, 2>> edges;
    // Outward-oriented triangles, dimensionality 3 only.
    std::vector<std::array<std::size_t, 3>> faces;
    std::vector<std::vector<std::size_t>> adjacency;

    // Supporting geometry for membership tests.
    std::vector<Vec3> face_normals;
    std::vector<double> face_offsets;
    Vec3 origin;
    PlaneBasis frame;  // dimensionality 2: plane frame; dimensionality 1: normal is the axis

    std::optional<std::size_t> vertex_of_input(std::size_t input) const;
    bool contains(const Vec3& p, double slack = 1e-9) const;
    // Largest signed distance of p outside the hull (<= 0 means inside).
    double outside_distance(const Vec3& p) const;
};

// Rank tolerance: singular values of the centered point matrix below
// 1e-9 * diameter are treated as zero.
ConvexHull convex_hull(std::span<const Vec3> points);

double point_set_diameter(std::span<const Vec3> points);

}  // namespace gather3d
