#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gather3d/vec3.hpp"

namespace gather3d {

inline constexpr double kMergeTolerance = 1e-9;
inline constexpr double kVisibilitySlack = 1e-12;

using RobotId = std::size_t;

// Positions of all live robots at one time instant. Each live point stands for
// `multiplicities[i]` original robots.
struct Configuration {
    std::vector<Vec3> positions;
    std::vector<int> multiplicities;
    double time = 0.0;

    Configuration() = default;
    explicit Configuration(std::vector<Vec3> pos, double t = 0.0);
    Configuration(std::vector<Vec3> pos, std::vector<int> mult, double t);

    std::size_t live() const { return positions.size(); }
    int robot_count() const;

    friend bool operator==(const Configuration&, const Configuration&) = default;
};

// Unit ball graph: edge {i, j} iff distance <= 1 (+1e-12).
struct VisibilityGraph {
    std::vector<std::vector<RobotId>> adjacency;

    std::size_t size() const { return adjacency.size(); }
    const std::vector<RobotId>& neighbors(RobotId i) const { return adjacency[i]; }
    bool has_edge(RobotId i, RobotId j) const;
};

VisibilityGraph visibility_graph(const Configuration& config);
bool is_connected(const VisibilityGraph& graph);

struct MergeResult {
    Configuration config;
    std::size_t merges = 0;
    // old live index -> new live index
    std::vector<std::size_t> index_map;
};

// Coalesces robots within kMergeTolerance (transitively) into the lowest-index member.
MergeResult merge_coincident(const Configuration& config);

double diameter(const Configuration& config);
bool gathered(const Configuration& config, double tol);

// Own position followed by neighbor positions, sorted lexicographically.
std::vector<Vec3> neighborhood_points(RobotId i, const Configuration& config, const VisibilityGraph& graph);

}  // namespace gather3d
