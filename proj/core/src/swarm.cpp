#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "gather3d/geometry.hpp"
#include "gather3d/swarm.hpp"

namespace gather3d {

Configuration::Configuration(std::vector<Vec3> pos, double t)
    : positions(std::move(pos)), multiplicities(positions.size(), 1), time(t) {}

Configuration::Configuration(std::vector<Vec3> pos, std::vector<int> mult, double t)
    : positions(std::move(pos)), multiplicities(std::move(mult)), time(t) {
    if (positions.size() != multiplicities.size())
        throw std::invalid_argument("Configuration: positions and multiplicities differ in length");
    for (auto m : multiplicities)
        if (m < 1) throw std::invalid_argument("Configuration: multiplicity must be positive");
    for (const auto& p : positions)
        if (!is_finite(p)) throw std::invalid_argument("Configuration: non-finite position");
}

int Configuration::robot_count() const { return std::accumulate(multiplicities.begin(), multiplicities.end(), 0); }

bool VisibilityGraph::has_edge(RobotId i, RobotId j) const {
    const auto& adj = adjacency[i];
    return std::binary_search(adj.begin(), adj.end(), j);
}

VisibilityGraph visibility_graph(const Configuration& config) {
    const std::size_t n = config.live();
    VisibilityGraph g;
    g.adjacency.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (distance(config.positions[i], config.positions[j]) <= 1.0 + kVisibilitySlack) {
                g.adjacency[i].push_back(j);
                g.adjacency[j].push_back(i);
            }
    return g;
}

bool is_connected(const VisibilityGraph& graph) {
    const std::size_t n = graph.size();
    if (n <= 1) return true;
    std::vector<char> seen(n, 0);
    std::queue<RobotId> q;
    q.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!q.empty()) {
        const RobotId i = q.front();
        q.pop();
        for (auto j : graph.neighbors(i))
            if (!seen[j]) {
                seen[j] = 1;
                ++reached;
                q.push(j);
            }
    }
    return reached == n;
}

MergeResult merge_coincident(const Configuration& config) {
    const std::size_t n = config.live();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (distance(config.positions[i], config.positions[j]) <= kMergeTolerance) {
                const auto a = find(i), b = find(j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }

    MergeResult out;
    out.config.time = config.time;
    out.index_map.assign(n, 0);
    std::vector<std::size_t> slot(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto root = find(i);
        if (slot[root] == n) {
            slot[root] = out.config.positions.size();
            out.config.positions.push_back(config.positions[root]);
            out.config.multiplicities.push_back(0);
        }
        out.index_map[i] = slot[root];
        out.config.multiplicities[slot[root]] += config.multiplicities[i];
    }
    out.merges = n - out.config.live();
    return out;
}

double diameter(const Configuration& config) { return point_set_diameter(config.positions); }

bool gathered(const Configuration& config, double tol) { return config.live() <= 1 || diameter(config) <= tol; }

std::vector<Vec3> neighborhood_points(RobotId i, const Configuration& config, const VisibilityGraph& graph) {
    std::vector<Vec3> pts;
    pts.reserve(graph.neighbors(i).size() + 1);
    pts.push_back(config.positions[i]);
    for (auto j : graph.neighbors(i)) pts.push_back(config.positions[j]);
    std::sort(pts.begin(), pts.end());
    return pts;
}

}  // namespace gather3d
