#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gather3d/geometry.hpp"
#include "gather3d/swarm.hpp"

namespace gather3d::generators {

enum class Kind { circle, line, random_ball, grid, coplanar };

struct GeneratorSpec {
    Kind kind = Kind::circle;
    int n = 8;
    std::uint64_t seed = 1;
    double spacing = 1.0;      // line, grid
    double ball_radius = 2.0;  // random_ball
    // coplanar: a seeded planar swarm embedded in the plane with this normal.
    Vec3 normal{0, 0, 1};
    Vec3 offset{};
};

// All generators throw std::invalid_argument on bad parameters and
// std::runtime_error if the result is not connected.

// n robots on a circle in z = 0 with consecutive chord length exactly 1.
Configuration circle_config(int n);

Configuration line_config(int n, double spacing);

// Seeded points in a ball, each attached within 0.9 of an earlier point.
Configuration random_connected(int n, std::uint64_t seed, double ball_radius);

// First n points of a cubic lattice, filled x-fastest.
Configuration grid_config(int n, double spacing);

Configuration coplanar_embed(std::span<const Point2> points, const PlaneBasis& plane, const Vec3& offset);

// Seeded connected planar point set (same attach rule as random_connected).
std::vector<Point2> random_connected_2d(int n, std::uint64_t seed, double disk_radius);

Configuration generate(const GeneratorSpec& spec);

std::string to_string(Kind kind);
Kind parse_kind(const std::string& name);

}  // namespace gather3d::generators
