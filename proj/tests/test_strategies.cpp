#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "gather3d/analysis.hpp"
#include "gather3d/generators.hpp"
#include "gather3d/strategies.hpp"
#include "oracles.hpp"

using namespace gather3d;
using namespace gather3d::strategies;
using doctest::Approx;

namespace {

Configuration random_config(std::uint64_t seed, int n) { return generators::random_connected(n, seed, 2.0); }

Configuration coplanar(std::uint64_t seed, int n, const PlaneBasis& plane, const Vec3& offset) {
    return generators::coplanar_embed(generators::random_connected_2d(n, seed, 2.0), plane, offset);
}

// Largest |target - midpoint| over neighbor pairs, minus the radius 1/2.
double limit_ball_excess(const Configuration& c, const std::vector<Vec3>& targets, const VisibilityGraph& g) {
    double worst = -INFINITY;
    for (RobotId i = 0; i < c.live(); ++i)
        for (auto j : g.neighbors(i))
            worst = std::max(worst, distance(targets[i], 0.5 * (c.positions[i] + c.positions[j])) - 0.5);
    return worst;
}

const ContinuousStrategy kStill{"still", [](RobotId, const Configuration&, const VisibilityGraph&) {
                                    return ContinuousMove{};
                                }};

}  // namespace

TEST_SUITE("gtc3d_target") {
    TEST_CASE("mutual neighbors at distance one meet at the midpoint") {
        const Configuration c({{0, 0, 0}, {1, 0, 0}});
        const auto g = visibility_graph(c);
        const Vec3 a = gtc3d_target(0, c, g), b = gtc3d_target(1, c, g);
        CHECK(a == b);
        CHECK(distance(a, {0.5, 0, 0}) < 1e-15);
    }

    TEST_CASE("isolated robot stays") {
        const Configuration c({{0.25, -1, 3}});
        CHECK(gtc3d_target(0, c, visibility_graph(c)) == Vec3{0.25, -1, 3});
    }

    TEST_CASE("step is capped at one half") {
        // Far end of a dense chain: SES center is 0.9 away, the self ball allows 1/2.
        const Configuration c({{0, 0, 0}, {0.9, 0, 0}, {0.9, 0.01, 0}});
        const auto g = visibility_graph(c);
        const Vec3 t = gtc3d_target(0, c, g);
        CHECK(distance(t, c.positions[0]) <= 0.5 + 1e-12);
    }

    TEST_CASE("targets stay inside every limit ball") {
        for (std::uint64_t seed = 1; seed <= 30; ++seed) {
            const auto c = random_config(seed, 25);
            const auto g = visibility_graph(c);
            std::vector<Vec3> t;
            for (RobotId i = 0; i < c.live(); ++i) t.push_back(gtc3d_target(i, c, g));
            REQUIRE(limit_ball_excess(c, t, g) <= 1e-9);
        }
    }

    TEST_CASE("coplanar configuration matches a planar implementation") {
        oracle::Rng rng(5);
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto plane = PlaneBasis::from_normal(rng.unit());
            const Vec3 offset = rng.in_cube(2);
            const auto c = coplanar(seed, 15, plane, offset);
            std::vector<oracle::P2> flat;
            for (const auto& p : c.positions) flat.push_back({dot(p - offset, plane.u), dot(p - offset, plane.v)});
            const auto expect = oracle::gtc2d_targets(flat);
            const auto g = visibility_graph(c);
            for (RobotId i = 0; i < c.live(); ++i) {
                const Vec3 want = embed({expect[i].x, expect[i].y}, plane, offset);
                const Vec3 got = gtc3d_target(i, c, g);
                REQUIRE(std::abs(got.x - want.x) <= 1e-9);
                REQUIRE(std::abs(got.y - want.y) <= 1e-9);
                REQUIRE(std::abs(got.z - want.z) <= 1e-9);
            }
        }
    }
}

TEST_SUITE("step_fsync") {
    TEST_CASE("coincident robots are a fixed point") {
        const Configuration c({{1, 2, 3}}, {6}, 4.0);
        const auto next = step_fsync(c, gtc3d());
        CHECK(next.positions == c.positions);
        CHECK(next.multiplicities == c.multiplicities);
        CHECK(next.time == 5.0);
    }

    TEST_CASE("two robots at distance one merge") {
        const auto next = step_fsync(Configuration({{0, 0, 0}, {1, 0, 0}}), gtc3d());
        CHECK(next.live() == 1);
        CHECK(next.multiplicities == std::vector<int>{2});
    }

    TEST_CASE("circle of eight shrinks symmetrically") {
        const auto c = generators::circle_config(8);
        const auto next = step_fsync(c, gtc3d());
        REQUIRE(next.live() == 8);
        const double r0 = norm(c.positions[0]);
        const double r1 = norm(next.positions[0]);
        CHECK(r1 < r0);
        for (std::size_t i = 0; i < 8; ++i) {
            CHECK(norm(next.positions[i]) < r0);
            CHECK(std::abs(norm(next.positions[i]) - r1) <= 1e-9);
            const double a = std::atan2(next.positions[i].y, next.positions[i].x);
            const double want = std::remainder(2 * std::numbers::pi * double(i) / 8.0, 2 * std::numbers::pi);
            CHECK(std::abs(std::remainder(a - want, 2 * std::numbers::pi)) <= 1e-9);
            CHECK(next.positions[i].z == 0.0);
        }
    }
}

TEST_SUITE("run_fsync") {
    TEST_CASE("already gathered") {
        const auto r = run_fsync(Configuration({{0, 0, 0}}), gtc3d(), 10, 1e-9);
        CHECK(r.gathered);
        CHECK(r.steps == 0);
        CHECK(r.trace.entries.size() == 1);
    }

    TEST_CASE("two robots gather in one round") {
        const auto r = run_fsync(Configuration({{0, 0, 0}, {1, 0, 0}}), gtc3d(), 10, 1e-9);
        CHECK(r.gathered);
        CHECK(r.steps == 1);
        CHECK(r.final_config.live() == 1);
        REQUIRE(r.trace.entries.size() == 2);
        CHECK(r.trace.entries[1].merges == 1);
        CHECK(r.trace.entries[0].next_index == std::vector<std::size_t>{0, 0});
    }

    TEST_CASE("circle round counts") {
        // Regression values established by the first run of this implementation.
        const std::pair<int, std::size_t> expected[] = {{8, 4}, {16, 12}, {32, 46}, {64, 181}};
        std::vector<double> ns, rounds;
        for (const auto& [n, want] : expected) {
            const auto r = run_fsync(generators::circle_config(n), gtc3d(), 100000, 1e-9, {false, 1});
            CHECK(r.gathered);
            CHECK(r.steps == want);
            CHECK(r.final_config.live() == 1);
            CHECK(r.final_config.robot_count() == n);
            ns.push_back(n);
            rounds.push_back(static_cast<double>(r.steps));
        }
        const auto fit = analysis::scaling_fit(ns, rounds);
        CHECK(fit.exponent >= 1.6);
        CHECK(fit.exponent <= 2.4);
    }

    TEST_CASE("horizon is reported") {
        const auto r = run_fsync(generators::circle_config(32), gtc3d(), 5, 1e-9);
        CHECK_FALSE(r.gathered);
        CHECK(r.steps == 5);
        CHECK(r.trace.entries.size() == 6);
    }

    TEST_CASE("trace bookkeeping") {
        const auto r = run_fsync(random_config(3, 20), gtc3d(), 100000, 1e-9);
        REQUIRE(r.gathered);
        const auto& e = r.trace.entries;
        CHECK(r.trace.kind == VectorKind::target);
        CHECK(e.size() == r.steps + 1);
        CHECK(r.trace.has_vectors());
        for (std::size_t k = 0; k < e.size(); ++k) {
            CHECK(e[k].time() == double(k));
            CHECK(e[k].config.robot_count() == 20);
            if (k + 1 < e.size()) {
                REQUIRE(e[k].next_index.size() == e[k].config.live());
                CHECK(e[k + 1].config.live() + e[k + 1].merges == e[k].config.live());
                // Each recorded target is where the robot lands in the next snapshot.
                for (std::size_t i = 0; i < e[k].config.live(); ++i)
                    CHECK(distance(e[k + 1].config.positions[e[k].next_index[i]], e[k].vectors[i]) <= 1e-9);
            }
        }
    }

    TEST_CASE("strided recording composes index maps") {
        const auto c = random_config(9, 20);
        const auto full = run_fsync(c, gtc3d(), 100000, 1e-9);
        const auto sparse = run_fsync(c, gtc3d(), 100000, 1e-9, {true, 4});
        REQUIRE(sparse.steps == full.steps);
        std::size_t merges = 0;
        for (const auto& e : sparse.trace.entries) merges += e.merges;
        CHECK(merges == 19);
        for (std::size_t k = 0; k + 1 < sparse.trace.entries.size(); ++k) {
            const auto& a = sparse.trace.entries[k];
            const auto& b = sparse.trace.entries[k + 1];
            const auto& fa = full.trace.entries[static_cast<std::size_t>(a.time())];
            REQUIRE(fa.config == a.config);
            for (auto j : a.next_index) REQUIRE(j < b.config.live());
        }
    }
}

TEST_SUITE("gtc3d_cont_velocity") {
    TEST_CASE("robot on its own center stays") {
        const Configuration c({{-0.5, 0, 0}, {0, 0, 0}, {0.5, 0, 0}});
        CHECK(gtc3d_cont_velocity(1, c, visibility_graph(c)) == Vec3{});
    }

    TEST_CASE("two robots head for the midpoint at unit speed") {
        const Configuration c({{0, 0, 0}, {1, 0, 0}});
        const auto g = visibility_graph(c);
        CHECK(distance(gtc3d_cont_velocity(0, c, g), {1, 0, 0}) < 1e-15);
        CHECK(distance(gtc3d_cont_velocity(1, c, g), {-1, 0, 0}) < 1e-15);
    }

    TEST_CASE("center lies in the local hull") {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto c = random_config(seed, 20);
            const auto g = visibility_graph(c);
            for (RobotId i = 0; i < c.live(); ++i) {
                const auto nb = neighborhood_points(i, c, g);
                const Vec3 center = local_ses_center(i, c, g);
                REQUIRE(convex_hull(nb).contains(center, 1e-9));
                const auto ses = smallest_enclosing_sphere(nb);
                const auto w = affine_weights(ses.support, center);
                REQUIRE(w.size() == ses.support.size());
                Vec3 rec;
                for (std::size_t k = 0; k < w.size(); ++k) {
                    REQUIRE(w[k] >= -1e-9);
                    rec += w[k] * ses.support[k];
                }
                REQUIRE(distance(rec, center) <= 1e-7);
                const Vec3 v = gtc3d_cont_velocity(i, c, g);
                REQUIRE(norm(v) <= 1.0 + 1e-12);
            }
        }
    }
}

TEST_SUITE("angle_minimizer") {
    TEST_CASE("single vector") {
        const std::vector<Vec3> v{{0, 3, 4}};
        CHECK(distance(angle_minimizer(v), {0, 0.6, 0.8}) < 1e-15);
    }
    TEST_CASE("pair symmetric about z") {
        const std::vector<Vec3> v{{1, 0, 1}, {-1, 0, 1}};
        CHECK(distance(angle_minimizer(v), {0, 0, 1}) < 1e-12);
    }
    TEST_CASE("coordinate axes") {
        const std::vector<Vec3> v{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        const Vec3 x = angle_minimizer(v);
        CHECK(distance(x, Vec3{1, 1, 1} / std::sqrt(3.0)) < 1e-12);
        CHECK(oracle::max_angle(x, v) <= oracle::sampled_minimax_angle(v, 100000) + 1e-2);
    }
    TEST_CASE("rejects degenerate input") {
        CHECK_THROWS_AS(angle_minimizer(std::vector<Vec3>{}), std::invalid_argument);
        CHECK_THROWS_AS(angle_minimizer(std::vector<Vec3>{{1, 0, 0}, {0, 0, 0}}), std::invalid_argument);
        CHECK_THROWS_AS(angle_minimizer(std::vector<Vec3>{{1, 0, 0}, {-1, 0, 0}}), std::invalid_argument);
        CHECK_THROWS_AS(angle_minimizer(std::vector<Vec3>{{1, 0, 0}, {-1, 1, 0}, {-1, -1, 0}}), std::invalid_argument);
    }
    TEST_CASE("halfspace-confined sets against dense sampling") {
        oracle::Rng rng(61);
        for (int trial = 0; trial < 60; ++trial) {
            const Vec3 axis = rng.unit();
            std::vector<Vec3> v;
            for (int k = rng.integer(1, 8); k > 0; --k) {
                Vec3 u = rng.unit();
                if (dot(u, axis) < 0.05) u = u + (0.05 - dot(u, axis) + rng.uniform(0, 1)) * axis;
                v.push_back(rng.uniform(0.1, 2) * u);
            }
            const Vec3 x = angle_minimizer(v);
            REQUIRE(std::abs(norm(x) - 1.0) < 1e-12);
            const double got = oracle::max_angle(x, v);
            REQUIRE(got < std::numbers::pi / 2 - 1e-9);
            REQUIRE(got <= oracle::sampled_minimax_angle(v, 100000) + 1e-2);
        }
    }
}

TEST_SUITE("moam_velocity") {
    TEST_CASE("interior robot waits") {
        const double s = 0.5;
        const Configuration c({{0, 0, 0}, {s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}});
        CHECK(moam_velocity(0, c, visibility_graph(c)) == Vec3{});
    }
    TEST_CASE("planar corner follows the inner bisector") {
        const Configuration c({{0, 0, 0}, {0.8, 0, 0}, {0, 0.8, 0}, {0.5, 0.5, 0}});
        const Vec3 v = moam_velocity(0, c, visibility_graph(c));
        CHECK(distance(v, Vec3{1, 1, 0} / std::sqrt(2.0)) < 1e-12);
    }
    TEST_CASE("segment end moves toward the other end") {
        const Configuration c({{0, 0, 0}, {0.4, 0, 0}, {0.8, 0, 0}});
        CHECK(distance(moam_velocity(0, c, visibility_graph(c)), {1, 0, 0}) < 1e-12);
        CHECK(moam_velocity(1, c, visibility_graph(c)) == Vec3{});
    }
    TEST_CASE("corner with three edges against dense sampling") {
        oracle::Rng rng(13);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Vec3> pts{{0, 0, 0}};
            for (int k = 0; k < 3; ++k) pts.push_back(rng.uniform(0.2, 0.9) * normalized(rng.unit() + Vec3{0, 0, 1.2}));
            const Configuration c(pts);
            const auto g = visibility_graph(c);
            const auto edges = local_hull_edges(0, c, g);
            REQUIRE(edges.size() == 3);
            const Vec3 v = moam_velocity(0, c, g);
            REQUIRE(oracle::max_angle(v, edges) <= oracle::sampled_minimax_angle(edges, 100000) + 1e-2);
        }
    }
    TEST_CASE("coincident neighborhood waits") {
        const Configuration c({{0, 0, 0}, {2, 0, 0}});
        CHECK(moam_velocity(0, c, visibility_graph(c)) == Vec3{});
    }
}

TEST_SUITE("integrate") {
    TEST_CASE("zero velocity keeps the configuration") {
        const auto c = random_config(2, 10);
        const auto r = integrate(c, kStill, 0.01, 0.5, 1e-3);
        CHECK_FALSE(r.gathered);
        CHECK(r.final_config.positions == c.positions);
        CHECK(r.time == Approx(0.5));
        CHECK(r.steps == 50);
    }

    TEST_CASE("two robots meet at time one half") {
        const auto r = integrate(Configuration({{0, 0, 0}, {1, 0, 0}}), gtc3d_cont(), 1e-3, 10, 1e-3);
        CHECK(r.gathered);
        CHECK(std::abs(r.time - 0.5) <= 1e-3 + 1e-12);
    }

    TEST_CASE("clamped steps never overshoot the center") {
        const auto c = random_config(4, 12);
        const auto g = visibility_graph(c);
        const auto step = euler_step(c, gtc3d_cont(), 0.3);
        for (RobotId i = 0; i < c.live(); ++i) {
            const Vec3 center = local_ses_center(i, c, g);
            const Vec3 landed = step.config.positions[step.merge.index_map[i]];
            CHECK(distance(landed, c.positions[i]) <= 0.3 + 1e-12);
            CHECK(distance(landed, center) <= distance(c.positions[i], center) + 1e-12);
        }
    }

    TEST_CASE("circle of eight under moam matches planar Move-On-Bisector") {
        const auto c = generators::circle_config(8);
        const auto r = integrate(c, moam(), 1e-3, 50, 1e-3, {false, 1});
        REQUIRE(r.gathered);
        std::vector<oracle::P2> flat;
        for (const auto& p : c.positions) flat.push_back({p.x, p.y});
        const double mob = oracle::move_on_bisector_time(flat, 1e-3, 1e-3, 50);
        REQUIRE(mob > 0);
        CHECK(std::abs(r.time - mob) <= 0.1 * mob);
    }

    TEST_CASE("horizon and stride") {
        const auto r = integrate(generators::circle_config(16), gtc3d_cont(), 0.01, 0.5, 1e-3, {true, 10});
        CHECK_FALSE(r.gathered);
        CHECK(r.time == Approx(0.5));
        CHECK(r.trace.entries.size() == 6);
        CHECK(r.trace.kind == VectorKind::velocity);
        CHECK(r.trace.step == 0.01);
        for (std::size_t k = 0; k < r.trace.entries.size(); ++k) CHECK(r.trace.entries[k].time() == Approx(0.1 * k));
    }

    TEST_CASE("rejects non-positive dt") {
        CHECK_THROWS_AS(integrate(Configuration({{0, 0, 0}}), gtc3d_cont(), 0.0, 1, 1e-3), std::invalid_argument);
    }
}

TEST_SUITE("invariants") {
    TEST_CASE("gtc3d keeps every edge, shrinks the radius and never splits merged robots") {
        for (std::uint64_t seed = 1; seed <= 15; ++seed) {
            const auto r = run_fsync(random_config(seed, 25), gtc3d(), 100000, 1e-9);
            REQUIRE(r.gathered);
            REQUIRE(r.final_config.live() == 1);
            REQUIRE(analysis::connectivity_check(r.trace, 1e-9).passed);
            REQUIRE(analysis::radius_monotonicity_check(r.trace, 1e-9).passed);
            for (const auto& e : r.trace.entries) REQUIRE(e.config.robot_count() == 25);
            for (std::size_t k = 0; k + 1 < r.trace.entries.size(); ++k) {
                const auto& e = r.trace.entries[k];
                // Mapping is onto, so live counts only shrink through merges.
                std::vector<int> mult(r.trace.entries[k + 1].config.live(), 0);
                for (std::size_t i = 0; i < e.config.live(); ++i) mult[e.next_index[i]] += e.config.multiplicities[i];
                REQUIRE(mult == r.trace.entries[k + 1].config.multiplicities);
            }
        }
    }

    TEST_CASE("gtc3d-cont keeps every edge up to 2 dt") {
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            const double dt = 1e-2;
            const auto r = integrate(random_config(seed, 15), gtc3d_cont(), dt, 100, 1e-2);
            REQUIRE(r.gathered);
            REQUIRE(analysis::connectivity_check(r.trace, 2 * dt).passed);
        }
    }

    TEST_CASE("distant robots do not change a robot's decision") {
        oracle::Rng rng(19);
        int compared = 0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto c = random_config(seed, 12);
            const auto g = visibility_graph(c);
            const RobotId i = static_cast<RobotId>(rng.integer(0, 11));
            Configuration more = c;
            for (int k = 0; k < 3; ++k) {
                Vec3 far;
                do far = c.positions[i] + rng.uniform(2.01, 4.0) * rng.unit();
                while (distance(far, c.positions[i]) <= 2.0);
                more.positions.push_back(far);
                more.multiplicities.push_back(1);
            }
            const auto g2 = visibility_graph(more);
            if (g2.neighbors(i) != g.neighbors(i)) continue;
            REQUIRE(gtc3d_target(i, more, g2) == gtc3d_target(i, c, g));
            REQUIRE(moam_velocity(i, more, g2) == moam_velocity(i, c, g));
            REQUIRE(gtc3d_cont_velocity(i, more, g2) == gtc3d_cont_velocity(i, c, g));
            ++compared;
        }
        CHECK(compared == 20);
    }

    TEST_CASE("rotation equivariance") {
        oracle::Rng rng(29);
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto c = random_config(seed, 15);
            const auto rot = oracle::Rotation::random(rng);
            const Vec3 shift = rng.in_cube(3);
            std::vector<Vec3> moved;
            for (const auto& p : c.positions) moved.push_back(rot(p) + shift);
            const Configuration d(moved);
            const auto g = visibility_graph(c), h = visibility_graph(d);
            REQUIRE(g.adjacency == h.adjacency);
            for (RobotId i = 0; i < c.live(); ++i) {
                REQUIRE(distance(gtc3d_target(i, d, h), rot(gtc3d_target(i, c, g)) + shift) <= 1e-9);
                REQUIRE(distance(gtc3d_cont_velocity(i, d, h), rot(gtc3d_cont_velocity(i, c, g))) <= 1e-9);
                REQUIRE(distance(moam_velocity(i, d, h), rot(moam_velocity(i, c, g))) <= 1e-9);
            }
        }
    }

    TEST_CASE("moam corners keep acute angles to their hull edges") {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const auto r = integrate(random_config(seed, 12), moam(), 1e-2, 30, 1e-2, {true, 5});
            const auto rep = analysis::tangential_normal_check(r.trace);
            REQUIRE(rep.checked > 0);
            REQUIRE(rep.passed);
        }
    }

    TEST_CASE("coplanar swarms stay in their plane") {
        oracle::Rng rng(37);
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto plane = PlaneBasis::from_normal(rng.unit());
            const Vec3 offset = rng.in_cube(2);
            const auto r = run_fsync(coplanar(seed, 20, plane, offset), gtc3d(), 100000, 1e-9);
            REQUIRE(r.gathered);
            for (const auto& e : r.trace.entries)
                for (const auto& p : e.config.positions) REQUIRE(std::abs(dot(p - offset, plane.normal)) <= 1e-9);
        }
    }

    TEST_CASE("coplanar runs track a planar simulation round by round") {
        oracle::Rng rng(43);
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto plane = PlaneBasis::from_normal(rng.unit());
            const Vec3 offset = rng.in_cube(2);
            const auto c = coplanar(seed, 15, plane, offset);
            std::vector<oracle::P2> flat;
            for (const auto& p : c.positions) flat.push_back({dot(p - offset, plane.u), dot(p - offset, plane.v)});
            const auto r = run_fsync(c, gtc3d(), 100000, 1e-9);
            for (const auto& e : r.trace.entries) {
                REQUIRE(flat.size() == e.config.live());
                for (std::size_t i = 0; i < flat.size(); ++i) {
                    const Vec3 want = embed({flat[i].x, flat[i].y}, plane, offset);
                    REQUIRE(distance(want, e.config.positions[i]) <= 1e-9);
                }
                flat = oracle::merge2d(oracle::gtc2d_targets(flat));
            }
        }
    }
}
