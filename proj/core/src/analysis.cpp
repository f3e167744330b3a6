#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "gather3d/analysis.hpp"
#include "gather3d/strategies.hpp"

namespace gather3d {

bool Trace::has_vectors() const {
    if (kind == VectorKind::none || entries.empty()) return false;
    return std::all_of(entries.begin(), entries.end(),
                       [](const TraceEntry& e) { return e.vectors.size() == e.config.live(); });
}

}  // namespace gather3d

namespace gather3d::analysis {
namespace {

constexpr std::size_t kMaxDetails = 16;

CheckReport named_report(std::string name) {
    CheckReport rep;
    rep.property = std::move(name);
    return rep;
}

void require_velocities(const Trace& trace, const char* who) {
    if (trace.kind != VectorKind::velocity || !trace.has_vectors())
        throw std::invalid_argument(std::string(who) + ": trace carries no velocities");
}

// Distance from hull vertex k to the nearest facet (edge in 2D) not incident to
// it; infinity when every facet touches k.
double clearance(const ConvexHull& hull, std::size_t k) {
    double best = std::numeric_limits<double>::infinity();
    if (hull.dimensionality == 2) {
        const std::size_t m = hull.vertices.size();
        const Point2 q = project(hull.vertices[k] - hull.origin, hull.frame);
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t j = (i + 1) % m;
            if (i == k || j == k) continue;
            const Point2 a = project(hull.vertices[i] - hull.origin, hull.frame);
            const Point2 b = project(hull.vertices[j] - hull.origin, hull.frame);
            const double c = (b.a - a.a) * (q.b - a.b) - (b.b - a.b) * (q.a - a.a);
            best = std::min(best, c / std::hypot(b.a - a.a, b.b - a.b));
        }
    } else if (hull.dimensionality == 3) {
        for (std::size_t f = 0; f < hull.faces.size(); ++f) {
            const auto& v = hull.faces[f];
            if (v[0] == k || v[1] == k || v[2] == k) continue;
            best = std::min(best, hull.face_offsets[f] - dot(hull.face_normals[f], hull.vertices[k]));
        }
    }
    return best;
}

// Largest outward component of v against the facets incident to vertex k of a
// 2D or 3D hull: the probe excess per unit length as the probe shrinks to zero.
double cone_excess(const ConvexHull& hull, std::size_t k, const Vec3& v) {
    double worst = -std::numeric_limits<double>::infinity();
    if (hull.dimensionality == 2) {
        const std::size_t m = hull.vertices.size();
        const Point2 w = project(v, hull.frame);
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t j = (i + 1) % m;
            if (i != k && j != k) continue;
            const Point2 a = project(hull.vertices[i] - hull.origin, hull.frame);
            const Point2 b = project(hull.vertices[j] - hull.origin, hull.frame);
            const double len = std::hypot(b.a - a.a, b.b - a.b);
            worst = std::max(worst, ((b.b - a.b) * w.a - (b.a - a.a) * w.b) / len);
        }
        return std::max(worst, std::abs(dot(hull.frame.normal, v)));
    }
    for (std::size_t f = 0; f < hull.faces.size(); ++f) {
        const auto& t = hull.faces[f];
        if (t[0] == k || t[1] == k || t[2] == k) worst = std::max(worst, dot(hull.face_normals[f], v));
    }
    return worst;
}

std::vector<Point2> project_all(const Configuration& config, const PlaneBasis& basis) {
    std::vector<Point2> flat;
    flat.reserve(config.live());
    for (const auto& p : config.positions) flat.push_back(project(p, basis));
    return flat;
}

}  // namespace

void CheckReport::observe(double margin, double time, const std::string& what) {
    ++checked;
    worst_margin = std::max(worst_margin, margin);
    if (margin > 0.0) {
        ++violations;
        passed = false;
        if (!first_violation_time) first_violation_time = time;
        if (details.size() < kMaxDetails) {
            std::ostringstream os;
            os << "t=" << time << " margin=" << margin;
            if (!what.empty()) os << ' ' << what;
            details.push_back(os.str());
        }
    }
}

void CheckReport::merge(const CheckReport& other) {
    checked += other.checked;
    violations += other.violations;
    skipped += other.skipped;
    worst_margin = std::max(worst_margin, other.worst_margin);
    if (!other.passed) {
        passed = false;
        if (!first_violation_time ||
            (other.first_violation_time && *other.first_violation_time < *first_violation_time)) {
            first_violation_time = other.first_violation_time;
        }
    }
    for (const auto& d : other.details)
        if (details.size() < kMaxDetails) details.push_back(d);
}

Quadrature Quadrature::hemisphere(std::size_t count) {
    Quadrature q;
    q.directions = hemisphere_directions(count);
    q.weights.assign(count, 2.0 * std::numbers::pi / static_cast<double>(count));
    return q;
}

double global_ses_radius(const Configuration& config) { return enclosing_sphere(config.positions).radius; }

double projected_length(const Configuration& config, const Vec3& direction) {
    const auto basis = PlaneBasis::from_normal(direction);
    const auto flat = project_all(config, basis);
    return planar_hull_length(flat);
}

double big_L(const Configuration& config, const Quadrature& quad) {
    if (quad.directions.size() != quad.weights.size())
        throw std::invalid_argument("big_L: directions and weights differ in length");
    const double total = std::accumulate(quad.weights.begin(), quad.weights.end(), 0.0);
    if (std::abs(total - 2.0 * std::numbers::pi) > 1e-6) throw std::invalid_argument("big_L: weights must sum to 2*pi");
    double sum = 0.0;
    for (std::size_t k = 0; k < quad.directions.size(); ++k)
        sum += quad.weights[k] * projected_length(config, quad.directions[k]);
    return sum;
}

CheckReport contracting_check(const Configuration& config, std::span<const Vec3> velocities, double tol) {
    if (velocities.size() != config.live()) throw std::invalid_argument("contracting_check: velocity count mismatch");
    CheckReport rep = named_report("contracting");
    const ConvexHull hull = convex_hull(config.positions);
    if (hull.dimensionality == 0) return rep;
    const double probe = 1e-6 * diameter(config);
    for (std::size_t k = 0; k < hull.vertices.size(); ++k) {
        const std::size_t i = hull.input_index[k];
        const Vec3& v = velocities[i];
        const double speed_excess = std::abs(norm(v) - 1.0) - tol;
        // Thin hull near this vertex: incident facets only, at probe scale.
        const double reach = clearance(hull, k) >= 2.0 * probe
                                 ? hull.outside_distance(config.positions[i] + probe * v)
                                 : probe * cone_excess(hull, k, v);
        const double outside = reach - 1e-9;
        rep.observe(std::max(speed_excess, outside), config.time, "robot " + std::to_string(i));
    }
    return rep;
}

CheckReport tangential_normal_check(const Configuration& config, std::span<const Vec3> velocities,
                                    const VisibilityGraph& graph) {
    if (velocities.size() != config.live())
        throw std::invalid_argument("tangential_normal_check: velocity count mismatch");
    CheckReport rep = named_report("tangential-normal");
    constexpr double kLimit = std::numbers::pi / 2 - 1e-9;
    for (RobotId i = 0; i < config.live(); ++i) {
        if (norm2(velocities[i]) == 0.0) continue;
        for (const auto& e : strategies::local_hull_edges(i, config, graph))
            rep.observe(angle_between(velocities[i], e) - kLimit, config.time, "robot " + std::to_string(i));
    }
    return rep;
}

CheckReport ell_derivative_check(const Trace& trace, const Vec3& direction, int n) {
    require_velocities(trace, "ell_derivative_check");
    CheckReport rep = named_report("ell-derivative");
    const auto basis = PlaneBasis::from_normal(direction);
    const double slack = 10.0 * trace.step * n;
    for (std::size_t k = 0; k + 1 < trace.entries.size(); ++k) {
        const auto& e0 = trace.entries[k];
        const auto& e1 = trace.entries[k + 1];
        const auto flat = project_all(e0.config, basis);
        bool distinct = true;
        for (std::size_t i = 0; i < flat.size() && distinct; ++i)
            for (std::size_t j = i + 1; j < flat.size() && distinct; ++j)
                distinct = std::hypot(flat[i].a - flat[j].a, flat[i].b - flat[j].b) > 1e-6;
        const double ell0 = planar_hull_length(flat);
        if (!distinct || ell0 <= 0.0) {
            ++rep.skipped;
            continue;
        }
        double eps = std::numeric_limits<double>::infinity();
        for (const auto& v : e0.vectors) eps = std::min(eps, norm(v - dot(v, basis.normal) * basis.normal));
        const double rate = (projected_length(e1.config, direction) - ell0) / (e1.time() - e0.time());
        rep.observe(rate - (-8.0 * eps / n + slack), e0.time());
    }
    return rep;
}

CheckReport ell_monotonicity_check(const Trace& trace, std::span<const Vec3> directions) {
    CheckReport rep = named_report("ell-monotonicity");
    const double allowance = 10.0 * trace.step;
    for (const auto& dir : directions) {
        const auto basis = PlaneBasis::from_normal(dir);
        double prev = 0.0;
        for (std::size_t k = 0; k < trace.entries.size(); ++k) {
            const double ell = planar_hull_length(project_all(trace.entries[k].config, basis));
            if (k > 0) rep.observe(ell - prev - allowance, trace.entries[k].time());
            prev = ell;
        }
    }
    return rep;
}

CheckReport connectivity_check(const Trace& trace, double tol) {
    CheckReport rep = named_report("connectivity");
    for (std::size_t k = 0; k + 1 < trace.entries.size(); ++k) {
        const auto& e0 = trace.entries[k];
        const auto& e1 = trace.entries[k + 1];
        if (e0.next_index.size() != e0.config.live())
            throw std::invalid_argument("connectivity_check: trace entry lacks an index map");
        const auto graph = visibility_graph(e0.config);
        for (RobotId i = 0; i < graph.size(); ++i)
            for (auto j : graph.neighbors(i)) {
                if (j < i) continue;
                const double d = distance(e1.config.positions[e0.next_index[i]], e1.config.positions[e0.next_index[j]]);
                rep.observe(d - (1.0 + tol), e1.time(), "edge " + std::to_string(i) + "-" + std::to_string(j));
            }
    }
    return rep;
}

CheckReport contracting_check(const Trace& trace, double tol) {
    require_velocities(trace, "contracting_check");
    CheckReport rep = named_report("contracting");
    for (const auto& e : trace.entries) rep.merge(contracting_check(e.config, e.vectors, tol));
    return rep;
}

CheckReport tangential_normal_check(const Trace& trace) {
    require_velocities(trace, "tangential_normal_check");
    CheckReport rep = named_report("tangential-normal");
    for (const auto& e : trace.entries)
        rep.merge(tangential_normal_check(e.config, e.vectors, visibility_graph(e.config)));
    return rep;
}

CheckReport radius_monotonicity_check(const Trace& trace, double tol) {
    CheckReport rep = named_report("radius-monotonicity");
    double prev = 0.0;
    for (std::size_t k = 0; k < trace.entries.size(); ++k) {
        const double r = global_ses_radius(trace.entries[k].config);
        if (k > 0) rep.observe(r - prev - tol, trace.entries[k].time());
        prev = r;
    }
    return rep;
}

double epsilon_for_alpha(int n, double alpha) {
    if (n < 1) throw std::invalid_argument("epsilon_for_alpha: n must be >= 1");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("epsilon_for_alpha: alpha must lie in [0, 1]");
    const double nn = static_cast<double>(n);
    return std::sqrt(2.0 * nn * alpha - alpha * alpha) / nn;
}

double blocked_fraction(std::span<const Vec3> velocities, double eps, std::span<const Vec3> directions) {
    if (directions.empty()) return 0.0;
    const double cap = std::asin(std::clamp(eps, 0.0, 1.0));
    std::size_t blocked = 0;
    for (const auto& x : directions) {
        const bool hit = std::any_of(velocities.begin(), velocities.end(), [&](const Vec3& v) {
            if (norm2(v) == 0.0) return false;
            const double a = angle_between(x, v);
            return std::min(a, std::numbers::pi - a) < cap;
        });
        if (hit) ++blocked;
    }
    return static_cast<double>(blocked) / static_cast<double>(directions.size());
}

ScalingFit scaling_fit(std::span<const double> sizes, std::span<const double> measurements) {
    if (sizes.size() != measurements.size()) throw std::invalid_argument("scaling_fit: length mismatch");
    if (sizes.size() < 3) throw std::invalid_argument("scaling_fit: needs at least 3 points");
    const std::size_t m = sizes.size();
    std::vector<double> xs(m), ys(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(sizes[i] > 0.0) || !(measurements[i] > 0.0))
            throw std::invalid_argument("scaling_fit: sizes and measurements must be positive");
        xs[i] = std::log(sizes[i]);
        ys[i] = std::log(measurements[i]);
    }
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(m);
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("scaling_fit: sizes must not all be equal");
    ScalingFit fit;
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

}  // namespace gather3d::analysis
