#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <optional>
#include <stdexcept>

#include "gather3d/geometry.hpp"

namespace gather3d {
namespace {

using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using Column = Eigen::Matrix<double, 3, Eigen::Dynamic, 0, 3, 3>;

constexpr double kInsideRel = 1e-9;
constexpr double kWeightSlack = 1e-12;

struct Ball {
    Vec3 center;
    double radius = -1.0;  // negative: empty ball

    bool holds(const Vec3& p) const {
        return radius >= 0.0 && distance(p, center) <= radius + kInsideRel * (1.0 + radius);
    }
};

Eigen::Vector3d to_eigen(const Vec3& v) { return {v.x, v.y, v.z}; }

// Sphere through all points with its center in their affine hull.
std::optional<Ball> circumscribed(std::span<const Vec3> pts) {
    const std::size_t k = pts.size();
    if (k == 1) return Ball{pts[0], 0.0};
    const auto m = static_cast<Eigen::Index>(k - 1);
    Column a(3, m);
    double scale = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
        a.col(j) = to_eigen(pts[static_cast<std::size_t>(j) + 1] - pts[0]);
        scale = std::max(scale, a.col(j).squaredNorm());
    }
    if (scale == 0.0) return std::nullopt;
    SmallMatrix gram = a.transpose() * a;
    SmallVector rhs(m);
    for (Eigen::Index j = 0; j < m; ++j) rhs(j) = 0.5 * gram(j, j);
    Eigen::FullPivLU<SmallMatrix> lu(gram);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) return std::nullopt;
    const SmallVector lambda = lu.solve(rhs);
    const Eigen::Vector3d offset = a * lambda;
    if (!offset.allFinite()) return std::nullopt;
    const Vec3 c = pts[0] + Vec3{offset.x(), offset.y(), offset.z()};
    double r = 0.0;
    for (const auto& p : pts) r = std::max(r, distance(p, c));
    return Ball{c, r};
}

// Smallest ball of at most four points by subset enumeration; used when the
// circumscribed ball of a basis is numerically degenerate.
Ball brute_small(std::span<const Vec3> pts, std::vector<std::size_t>& chosen) {
    const std::size_t k = pts.size();
    Ball best;
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
        std::vector<Vec3> sub;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < k; ++i) {
            if (mask & (1u << i)) {
                sub.push_back(pts[i]);
                idx.push_back(i);
            }
        }
        auto ball = circumscribed(sub);
        if (!ball) continue;
        if (!std::all_of(pts.begin(), pts.end(), [&](const Vec3& p) { return ball->holds(p); })) continue;
        if (best.radius < 0.0 || ball->radius < best.radius) {
            best = *ball;
            chosen = idx;
        }
    }
    return best;
}

class MoveToFront {
public:
    explicit MoveToFront(std::span<const Vec3> pts) : pts_(pts) {
        for (std::size_t i = 0; i < pts.size(); ++i) order_.push_back(i);
    }

    Ball run() {
        recurse(order_.end());
        return ball_;
    }

    const std::vector<std::size_t>& witness() const { return ball_support_; }

private:
    void rebuild() {
        std::vector<Vec3> basis;
        basis.reserve(support_.size());
        for (auto i : support_) basis.push_back(pts_[i]);
        if (auto ball = circumscribed(basis)) {
            ball_ = *ball;
            ball_support_ = support_;
            return;
        }
        std::vector<std::size_t> chosen;
        ball_ = brute_small(basis, chosen);
        ball_support_.clear();
        for (auto c : chosen) ball_support_.push_back(support_[c]);
    }

    void recurse(std::list<std::size_t>::iterator end) {
        if (support_.size() == 4) return;
        for (auto it = order_.begin(); it != end;) {
            auto next = std::next(it);
            if (!ball_.holds(pts_[*it])) {
                support_.push_back(*it);
                rebuild();
                recurse(it);
                support_.pop_back();
                order_.splice(order_.begin(), order_, it);
            }
            it = next;
        }
    }

    std::span<const Vec3> pts_;
    std::list<std::size_t> order_;
    std::vector<std::size_t> support_;
    std::vector<std::size_t> ball_support_;
    Ball ball_;
};

void validate(std::span<const Vec3> points) {
    if (points.empty()) throw std::invalid_argument("smallest_enclosing_sphere: empty point set");
    for (const auto& p : points) {
        if (!is_finite(p)) throw std::invalid_argument("smallest_enclosing_sphere: non-finite point");
    }
}

Sphere finish(std::span<const Vec3> points, const Vec3& center) {
    double r = 0.0;
    for (const auto& p : points) r = std::max(r, distance(p, center));
    return {center, r};
}

bool is_convex_witness(std::span<const Vec3> basis, const Vec3& center) {
    const auto w = affine_weights(basis, center);
    if (w.empty()) return false;
    Vec3 recon;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] < -kWeightSlack) return false;
        recon += w[i] * basis[i];
    }
    return distance(recon, center) <= 1e-9 * (1.0 + norm(center));
}

// Searches surface points for at most four whose hull contains the center.
std::vector<Vec3> find_witness(std::span<const Vec3> points, const Sphere& s) {
    std::vector<Vec3> surface;
    const double tol = 1e-10 * (1.0 + s.radius);
    for (const auto& p : points) {
        if (std::abs(distance(p, s.center) - s.radius) <= tol &&
            std::find(surface.begin(), surface.end(), p) == surface.end()) {
            surface.push_back(p);
        }
    }
    const std::size_t m = surface.size();
    std::vector<Vec3> trial;
    for (std::size_t a = 0; a < m; ++a) {
        trial = {surface[a]};
        if (is_convex_witness(trial, s.center)) return trial;
    }
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b) {
            trial = {surface[a], surface[b]};
            if (is_convex_witness(trial, s.center)) return trial;
        }
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            for (std::size_t c = b + 1; c < m; ++c) {
                trial = {surface[a], surface[b], surface[c]};
                if (is_convex_witness(trial, s.center)) return trial;
            }
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            for (std::size_t c = b + 1; c < m; ++c)
                for (std::size_t d = c + 1; d < m; ++d) {
                    trial = {surface[a], surface[b], surface[c], surface[d]};
                    if (is_convex_witness(trial, s.center)) return trial;
                }
    return surface.size() > 4 ? std::vector<Vec3>(surface.begin(), surface.begin() + 4) : surface;
}

}  // namespace

std::vector<double> affine_weights(std::span<const Vec3> basis, const Vec3& target) {
    if (basis.empty()) return {};
    if (basis.size() == 1) return {1.0};
    const auto m = static_cast<Eigen::Index>(basis.size() - 1);
    if (m > 3) return {};
    Column a(3, m);
    for (Eigen::Index j = 0; j < m; ++j) a.col(j) = to_eigen(basis[static_cast<std::size_t>(j) + 1] - basis[0]);
    Eigen::ColPivHouseholderQR<Column> qr(a);
    qr.setThreshold(1e-12);
    if (qr.rank() < m) return {};
    const SmallVector lambda = qr.solve(to_eigen(target - basis[0]));
    std::vector<double> w(basis.size());
    w[0] = 1.0 - lambda.sum();
    for (Eigen::Index j = 0; j < m; ++j) w[static_cast<std::size_t>(j) + 1] = lambda(j);
    return w;
}

Sphere enclosing_sphere(std::span<const Vec3> points) {
    validate(points);
    MoveToFront mtf(points);
    const Ball ball = mtf.run();
    return finish(points, ball.center);
}

SesResult smallest_enclosing_sphere(std::span<const Vec3> points) {
    validate(points);
    MoveToFront mtf(points);
    const Ball ball = mtf.run();
    SesResult out{finish(points, ball.center), {}};
    for (auto i : mtf.witness()) out.support.push_back(points[i]);
    if (!is_convex_witness(out.support, out.sphere.center)) out.support = find_witness(points, out.sphere);
    return out;
}

}  // namespace gather3d
