#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "gather3d/geometry.hpp"

namespace gather3d {
namespace {

constexpr double kDistinct = 1e-12;
constexpr double kRankTol = 1e-9;

struct Face {
    std::array<std::size_t, 3> v;
    Vec3 n;
    double off = 0.0;
    bool alive = true;

    double height(const Vec3& p) const { return dot(n, p) - off; }
};

Face make_face(std::span<const Vec3> pts, std::size_t a, std::size_t b, std::size_t c) {
    Face f{{a, b, c}, normalized(cross(pts[b] - pts[a], pts[c] - pts[a])), 0.0, true};
    f.off = dot(f.n, pts[a]);
    return f;
}

using EdgeKey = std::pair<std::size_t, std::size_t>;

// Directed edge -> owning face. Dense table for small inputs, hashed otherwise.
class EdgeMap {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    explicit EdgeMap(std::size_t n) : n_(n) {
        if (n_ <= kDenseLimit) dense_.assign(n_ * n_, npos);
    }
    void set(std::size_t a, std::size_t b, std::size_t face) {
        if (dense_.empty()) sparse_[key(a, b)] = face;
        else dense_[a * n_ + b] = face;
    }
    std::size_t find(std::size_t a, std::size_t b) const {
        if (!dense_.empty()) return dense_[a * n_ + b];
        const auto it = sparse_.find(key(a, b));
        return it == sparse_.end() ? npos : it->second;
    }
    void erase(std::size_t a, std::size_t b) {
        if (dense_.empty()) sparse_.erase(key(a, b));
        else dense_[a * n_ + b] = npos;
    }

private:
    static constexpr std::size_t kDenseLimit = 256;
    static std::uint64_t key(std::size_t a, std::size_t b) { return (std::uint64_t(a) << 32) | std::uint64_t(b); }

    std::size_t n_;
    std::vector<std::size_t> dense_;
    std::unordered_map<std::uint64_t, std::size_t> sparse_;
};

// Incremental 3D hull over already-distinct, full-rank points. Returns alive faces.
std::vector<Face> build_polyhedron(std::span<const Vec3> pts, double eps) {
    const std::size_t n = pts.size();
    std::size_t i0 = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (pts[i] < pts[i0]) i0 = i;
    std::size_t i1 = i0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i)
        if (double d = distance(pts[i], pts[i0]); d > best) best = d, i1 = i;
    const Vec3 axis = normalized(pts[i1] - pts[i0]);
    std::size_t i2 = i0;
    best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 w = pts[i] - pts[i0];
        if (double d = norm(w - dot(w, axis) * axis); d > best) best = d, i2 = i;
    }
    const Vec3 pn = normalized(cross(pts[i1] - pts[i0], pts[i2] - pts[i0]));
    std::size_t i3 = i0;
    best = -1.0;
    for (std::size_t i = 0; i < n; ++i)
        if (double d = std::abs(dot(pn, pts[i] - pts[i0])); d > best) best = d, i3 = i;
    if (best <= eps) return {};

    std::vector<Face> faces;
    faces.reserve(4 * n);
    EdgeMap owner(n);
    const Vec3 inner = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) / 4.0;
    auto add = [&](std::size_t a, std::size_t b, std::size_t c) {
        Face f = make_face(pts, a, b, c);
        if (f.height(inner) > 0.0) {
            std::swap(a, b);
            f = make_face(pts, a, b, c);
        }
        const std::size_t id = faces.size();
        owner.set(f.v[0], f.v[1], id);
        owner.set(f.v[1], f.v[2], id);
        owner.set(f.v[2], f.v[0], id);
        faces.push_back(f);
    };
    add(i0, i1, i2);
    add(i0, i1, i3);
    add(i0, i2, i3);
    add(i1, i2, i3);

    std::vector<char> visible;
    std::vector<std::size_t> region;
    std::vector<EdgeKey> horizon;
    for (std::size_t p = 0; p < n; ++p) {
        if (p == i0 || p == i1 || p == i2 || p == i3) continue;
        std::size_t seed = faces.size();
        double top = eps;
        for (std::size_t f = 0; f < faces.size(); ++f) {
            if (!faces[f].alive) continue;
            if (double h = faces[f].height(pts[p]); h > top) top = h, seed = f;
        }
        if (seed == faces.size()) continue;

        // Connected visible region grown from the most visible face.
        visible.assign(faces.size(), 0);
        region.clear();
        region.push_back(seed);
        visible[seed] = 1;
        for (std::size_t head = 0; head < region.size(); ++head) {
            const std::size_t f = region[head];
            for (int e = 0; e < 3; ++e) {
                const std::size_t a = faces[f].v[e], b = faces[f].v[(e + 1) % 3];
                const std::size_t g = owner.find(b, a);
                if (g == EdgeMap::npos) continue;
                if (!visible[g] && faces[g].alive && faces[g].height(pts[p]) > eps) {
                    visible[g] = 1;
                    region.push_back(g);
                }
            }
        }
        horizon.clear();
        for (auto f : region) {
            for (int e = 0; e < 3; ++e) {
                const std::size_t a = faces[f].v[e], b = faces[f].v[(e + 1) % 3];
                const std::size_t g = owner.find(b, a);
                if (g == EdgeMap::npos || !visible[g]) horizon.emplace_back(a, b);
            }
        }
        for (auto f : region) {
            faces[f].alive = false;
            for (int e = 0; e < 3; ++e) owner.erase(faces[f].v[e], faces[f].v[(e + 1) % 3]);
        }
        for (const auto& [a, b] : horizon) {
            const std::size_t id = faces.size();
            faces.push_back(make_face(pts, a, b, p));
            owner.set(a, b, id);
            owner.set(b, p, id);
            owner.set(p, a, id);
        }
    }
    std::erase_if(faces, [](const Face& f) { return !f.alive; });
    return faces;
}

double max_height(const std::vector<Face>& faces, const Vec3& p) {
    double h = -std::numeric_limits<double>::infinity();
    for (const auto& f : faces) h = std::max(h, f.height(p));
    return h;
}

// A vertex is extreme iff the normals of its incident faces span R^3. Near-flat
// vertices are confirmed against the hull of the remaining vertices.
std::vector<std::size_t> extreme_vertices(std::span<const Vec3> pts, const std::vector<Face>& faces, double eps) {
    std::vector<std::vector<Vec3>> normals(pts.size());
    std::vector<char> used(pts.size(), 0);
    for (const auto& f : faces)
        for (auto v : f.v) {
            used[v] = 1;
            normals[v].push_back(f.n);
        }
    std::vector<std::size_t> keep;
    for (std::size_t v = 0; v < pts.size(); ++v) {
        if (!used[v]) continue;
        const auto& ns = normals[v];
        bool corner = false;
        for (std::size_t a = 0; a < ns.size() && !corner; ++a)
            for (std::size_t b = a + 1; b < ns.size() && !corner; ++b)
                for (std::size_t c = b + 1; c < ns.size() && !corner; ++c)
                    corner = std::abs(dot(ns[a], cross(ns[b], ns[c]))) > 1e-6;
        if (!corner) {
            std::vector<Vec3> others;
            for (std::size_t w = 0; w < pts.size(); ++w)
                if (used[w] && w != v) others.push_back(pts[w]);
            const auto rest = build_polyhedron(others, eps);
            corner = rest.empty() || max_height(rest, pts[v]) > eps;
        }
        if (corner) keep.push_back(v);
    }
    return keep;
}

void link(ConvexHull& hull, std::size_t a, std::size_t b) {
    hull.edges.push_back({std::min(a, b), std::max(a, b)});
    hull.adjacency[a].push_back(b);
    hull.adjacency[b].push_back(a);
}

void finish_adjacency(ConvexHull& hull) {
    std::sort(hull.edges.begin(), hull.edges.end());
    hull.edges.erase(std::unique(hull.edges.begin(), hull.edges.end()), hull.edges.end());
    for (auto& adj : hull.adjacency) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
}

ConvexHull point_hull(std::span<const Vec3> points, std::size_t rep) {
    ConvexHull h;
    h.dimensionality = 0;
    h.vertices = {points[rep]};
    h.input_index = {rep};
    h.adjacency.resize(1);
    h.origin = points[rep];
    return h;
}

ConvexHull segment_hull(std::span<const Vec3> points, const std::vector<std::size_t>& reps, const Vec3& origin,
                        const Vec3& axis) {
    std::size_t lo = reps.front(), hi = reps.front();
    double tmin = dot(axis, points[lo] - origin), tmax = tmin;
    for (auto r : reps) {
        const double t = dot(axis, points[r] - origin);
        if (t < tmin) tmin = t, lo = r;
        if (t > tmax) tmax = t, hi = r;
    }
    ConvexHull h;
    h.dimensionality = 1;
    if (lo > hi) std::swap(lo, hi);
    h.vertices = {points[lo], points[hi]};
    h.input_index = {lo, hi};
    h.adjacency.resize(2);
    link(h, 0, 1);
    h.origin = points[lo];
    h.frame.normal = normalized(points[hi] - points[lo]);
    finish_adjacency(h);
    return h;
}

}  // namespace

ConvexHull convex_hull(std::span<const Vec3> points) {
    if (points.empty()) throw std::invalid_argument("convex_hull: empty point set");
    for (const auto& p : points)
        if (!is_finite(p)) throw std::invalid_argument("convex_hull: non-finite point");

    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const bool dup = std::any_of(reps.begin(), reps.end(),
                                     [&](std::size_t r) { return distance(points[r], points[i]) <= kDistinct; });
        if (!dup) reps.push_back(i);
    }
    std::vector<Vec3> rp;
    for (auto r : reps) rp.push_back(points[r]);
    const double diam = point_set_diameter(rp);
    if (reps.size() == 1 || diam == 0.0) return point_hull(points, reps.front());

    Vec3 centroid;
    for (const auto& p : rp) centroid += p;
    centroid = centroid / static_cast<double>(rp.size());
    Eigen::MatrixX3d centered(static_cast<Eigen::Index>(rp.size()), 3);
    for (std::size_t i = 0; i < rp.size(); ++i) {
        const Vec3 d = rp[i] - centroid;
        centered.row(static_cast<Eigen::Index>(i)) << d.x, d.y, d.z;
    }
    Eigen::JacobiSVD<Eigen::MatrixX3d> svd(centered, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > kRankTol * diam) ++rank;
    const auto& V = svd.matrixV();
    auto col = [&](int c) { return Vec3{V(0, c), V(1, c), V(2, c)}; };

    const double eps = 1e-11 * std::max(1.0, diam);

    if (rank == 3) {
        auto faces = build_polyhedron(rp, eps);
        if (!faces.empty()) {
            auto keep = extreme_vertices(rp, faces, eps);
            std::vector<Vec3> kp;
            for (auto k : keep) kp.push_back(rp[k]);
            if (keep.size() < rp.size()) faces = build_polyhedron(kp, eps);
            if (!faces.empty()) {
                ConvexHull h;
                h.dimensionality = 3;
                h.vertices = kp;
                for (auto k : keep) h.input_index.push_back(reps[k]);
                h.adjacency.resize(kp.size());
                h.origin = centroid;
                EdgeMap owner(kp.size());
                for (std::size_t f = 0; f < faces.size(); ++f) {
                    const auto& v = faces[f].v;
                    h.faces.push_back(v);
                    h.face_normals.push_back(faces[f].n);
                    h.face_offsets.push_back(faces[f].off);
                    for (int e = 0; e < 3; ++e) owner.set(v[e], v[(e + 1) % 3], f);
                }
                for (std::size_t f = 0; f < faces.size(); ++f)
                    for (int e = 0; e < 3; ++e) {
                        const std::size_t a = faces[f].v[e], b = faces[f].v[(e + 1) % 3];
                        if (a > b) continue;
                        const std::size_t twin = owner.find(b, a);
                        if (twin == EdgeMap::npos) continue;
                        const auto& g = faces[twin];
                        const std::size_t opp =
                            g.v[0] != a && g.v[0] != b ? g.v[0] : (g.v[1] != a && g.v[1] != b ? g.v[1] : g.v[2]);
                        // Diagonals of a coplanar facet are not hull edges.
                        if (faces[f].height(kp[opp]) < -eps) link(h, a, b);
                    }
                finish_adjacency(h);
                return h;
            }
        }
        rank = 2;
    }

    if (rank == 2) {
        const Vec3 u = col(0);
        const Vec3 w = normalized(cross(col(0), col(1)));
        const PlaneBasis frame{w, u, cross(w, u)};
        std::vector<Point2> flat;
        for (const auto& p : rp) flat.push_back(project(p - centroid, frame));
        const auto cyc = planar_hull_indices(flat, 1e-10 * diam * diam);
        if (cyc.size() >= 3) {
            ConvexHull h;
            h.dimensionality = 2;
            for (auto c : cyc) {
                h.vertices.push_back(rp[c]);
                h.input_index.push_back(reps[c]);
            }
            h.adjacency.resize(cyc.size());
            for (std::size_t k = 0; k < cyc.size(); ++k) link(h, k, (k + 1) % cyc.size());
            h.origin = centroid;
            h.frame = frame;
            finish_adjacency(h);
            return h;
        }
    }
    return segment_hull(points, reps, centroid, col(0));
}

std::optional<std::size_t> ConvexHull::vertex_of_input(std::size_t input) const {
    const auto it = std::find(input_index.begin(), input_index.end(), input);
    if (it == input_index.end()) return std::nullopt;
    return static_cast<std::size_t>(it - input_index.begin());
}

double ConvexHull::outside_distance(const Vec3& p) const {
    switch (dimensionality) {
        case 0:
            return distance(p, vertices.front());
        case 1: {
            const Vec3 a = vertices[0], b = vertices[1];
            const Vec3 ab = b - a;
            const double t = std::clamp(dot(p - a, ab) / norm2(ab), 0.0, 1.0);
            return distance(p, a + t * ab);
        }
        case 2: {
            const double off_plane = std::abs(dot(frame.normal, p - origin));
            const Point2 q = project(p - origin, frame);
            double inplane = -std::numeric_limits<double>::infinity();
            const std::size_t k = vertices.size();
            for (std::size_t i = 0; i < k; ++i) {
                const Point2 a = project(vertices[i] - origin, frame);
                const Point2 b = project(vertices[(i + 1) % k] - origin, frame);
                const double len = std::hypot(b.a - a.a, b.b - a.b);
                const double c = (b.a - a.a) * (q.b - a.b) - (b.b - a.b) * (q.a - a.a);
                inplane = std::max(inplane, -c / len);
            }
            return std::max(off_plane, inplane);
        }
        default: {
            double h = -std::numeric_limits<double>::infinity();
            for (std::size_t f = 0; f < face_normals.size(); ++f) h = std::max(h, dot(face_normals[f], p) - face_offsets[f]);
            return h;
        }
    }
}

bool ConvexHull::contains(const Vec3& p, double slack) const { return outside_distance(p) <= slack; }

}  // namespace gather3d
