#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "gather3d/generators.hpp"

namespace gather3d::generators {
namespace {

constexpr double kAttachRadius = 0.9;
constexpr int kAttempts = 2000;

Configuration checked(Configuration c, const char* who) {
    if (!is_connected(visibility_graph(c))) throw std::runtime_error(std::string(who) + ": generated swarm is disconnected");
    return c;
}

bool attachable(const Vec3& p, const std::vector<Vec3>& pts) {
    bool near = false;
    for (const auto& q : pts) {
        const double d = distance(p, q);
        if (d <= kMergeTolerance) return false;
        near = near || d <= kAttachRadius;
    }
    return near;
}

template <typename Sample, typename Fallback>
std::vector<Vec3> grow(int n, Sample&& sample, Fallback&& fallback) {
    std::vector<Vec3> pts{Vec3{}};
    while (static_cast<int>(pts.size()) < n) {
        bool placed = false;
        for (int a = 0; a < kAttempts && !placed; ++a) {
            const Vec3 p = sample();
            if (attachable(p, pts)) {
                pts.push_back(p);
                placed = true;
            }
        }
        while (!placed) {
            const Vec3 p = fallback(pts);
            if (attachable(p, pts)) {
                pts.push_back(p);
                placed = true;
            }
        }
    }
    return pts;
}

}  // namespace

Configuration circle_config(int n) {
    if (n < 3) throw std::invalid_argument("circle_config: n must be >= 3");
    const double step = 2.0 * std::numbers::pi / n;
    const double r = 1.0 / (2.0 * std::sin(std::numbers::pi / n));
    std::vector<Vec3> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) pts.push_back({r * std::cos(k * step), r * std::sin(k * step), 0.0});
    return checked(Configuration(std::move(pts)), "circle_config");
}

Configuration line_config(int n, double spacing) {
    if (n < 1) throw std::invalid_argument("line_config: n must be >= 1");
    if (!(spacing > 0.0 && spacing <= 1.0)) throw std::invalid_argument("line_config: spacing must lie in (0, 1]");
    std::vector<Vec3> pts;
    for (int k = 0; k < n; ++k) pts.push_back({k * spacing, 0.0, 0.0});
    return checked(Configuration(std::move(pts)), "line_config");
}

Configuration random_connected(int n, std::uint64_t seed, double ball_radius) {
    if (n < 1) throw std::invalid_argument("random_connected: n must be >= 1");
    if (!(ball_radius > 0.0)) throw std::invalid_argument("random_connected: ball radius must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto in_ball = [&]() {
        for (;;) {
            const Vec3 p{unit(rng), unit(rng), unit(rng)};
            if (norm2(p) <= 1.0) return p;
        }
    };
    auto pts = grow(
        n, [&] { return ball_radius * in_ball(); },
        [&](const std::vector<Vec3>& have) {
            std::uniform_int_distribution<std::size_t> pick(0, have.size() - 1);
            return have[pick(rng)] + kAttachRadius * in_ball();
        });
    return checked(Configuration(std::move(pts)), "random_connected");
}

std::vector<Point2> random_connected_2d(int n, std::uint64_t seed, double disk_radius) {
    if (n < 1) throw std::invalid_argument("random_connected_2d: n must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto in_disk = [&]() {
        for (;;) {
            const Vec3 p{unit(rng), unit(rng), 0.0};
            if (norm2(p) <= 1.0) return p;
        }
    };
    const auto pts = grow(
        n, [&] { return disk_radius * in_disk(); },
        [&](const std::vector<Vec3>& have) {
            std::uniform_int_distribution<std::size_t> pick(0, have.size() - 1);
            return have[pick(rng)] + kAttachRadius * in_disk();
        });
    std::vector<Point2> out;
    for (const auto& p : pts) out.push_back({p.x, p.y});
    return out;
}

Configuration grid_config(int n, double spacing) {
    if (n < 1) throw std::invalid_argument("grid_config: n must be >= 1");
    if (!(spacing > 0.0 && spacing <= 1.0)) throw std::invalid_argument("grid_config: spacing must lie in (0, 1]");
    int side = 1;
    while (side * side * side < n) ++side;
    std::vector<Vec3> pts;
    for (int k = 0; k < n; ++k) {
        const int x = k % side, y = (k / side) % side, z = k / (side * side);
        pts.push_back({x * spacing, y * spacing, z * spacing});
    }
    return checked(Configuration(std::move(pts)), "grid_config");
}

Configuration coplanar_embed(std::span<const Point2> points, const PlaneBasis& plane, const Vec3& offset) {
    if (points.empty()) throw std::invalid_argument("coplanar_embed: empty point set");
    std::vector<Vec3> pts;
    for (const auto& q : points) pts.push_back(embed(q, plane, offset));
    return Configuration(std::move(pts));
}

Configuration generate(const GeneratorSpec& spec) {
    switch (spec.kind) {
        case Kind::circle:
            return circle_config(spec.n);
        case Kind::line:
            return line_config(spec.n, spec.spacing);
        case Kind::random_ball:
            return random_connected(spec.n, spec.seed, spec.ball_radius);
        case Kind::grid:
            return grid_config(spec.n, spec.spacing);
        case Kind::coplanar: {
            const auto flat = random_connected_2d(spec.n, spec.seed, spec.ball_radius);
            return checked(coplanar_embed(flat, PlaneBasis::from_normal(spec.normal), spec.offset), "coplanar_embed");
        }
    }
    throw std::invalid_argument("generate: unknown kind");
}

std::string to_string(Kind kind) {
    switch (kind) {
        case Kind::circle: return "circle";
        case Kind::line: return "line";
        case Kind::random_ball: return "random-ball";
        case Kind::grid: return "grid";
        case Kind::coplanar: return "coplanar-embed";
    }
    return "unknown";
}

Kind parse_kind(const std::string& name) {
    if (name == "circle") return Kind::circle;
    if (name == "line") return Kind::line;
    if (name == "random-ball" || name == "random") return Kind::random_ball;
    if (name == "grid") return Kind::grid;
    if (name == "coplanar-embed" || name == "coplanar") return Kind::coplanar;
    throw std::invalid_argument("unknown generator kind '" + name + "'");
}

}  // namespace gather3d::generators
