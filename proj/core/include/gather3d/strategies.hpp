#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gather3d/swarm.hpp"
#include "gather3d/trace.hpp"

namespace gather3d::strategies {

inline constexpr double kStayThreshold = 1e-12;

// Target point from the time-t snapshot (Look-Compute-Move).
struct DiscreteStrategy {
    std::string name;
    std::function<Vec3(RobotId, const Configuration&, const VisibilityGraph&)> target;
};

struct ContinuousMove {
    Vec3 velocity;  // norm <= 1
    // When set, a step never travels past this point and lands on it exactly.
    std::optional<Vec3> stop;
};

struct ContinuousStrategy {
    std::string name;
    std::function<ContinuousMove(RobotId, const Configuration&, const VisibilityGraph&)> move;
};

// Move toward the local SES center, clamped to the radius-1/2 limit balls around
// the midpoints to every robot of the neighborhood (including itself).
Vec3 gtc3d_target(RobotId i, const Configuration& config, const VisibilityGraph& graph);

// Local SES center of robot i's neighborhood.
Vec3 local_ses_center(RobotId i, const Configuration& config, const VisibilityGraph& graph);

// Unit vector toward the local SES center; zero when already on it.
Vec3 gtc3d_cont_velocity(RobotId i, const Configuration& config, const VisibilityGraph& graph);

// Unit angle minimizer of the local hull edges at robot i, or zero when i is
// not a corner of its local hull.
Vec3 moam_velocity(RobotId i, const Configuration& config, const VisibilityGraph& graph);

// Edge vectors p_j - p_i for hull neighbors of robot i in its local hull; empty if
// robot i is not a vertex of that hull (or the hull is a single point).
std::vector<Vec3> local_hull_edges(RobotId i, const Configuration& config, const VisibilityGraph& graph);

// Direction minimizing the maximum angle to all vectors: the normalized SES center
// of the normalized vectors. Throws std::invalid_argument if the vectors do not fit
// in an open halfspace (both the SES candidate and the normalized-sum fallback fail).
Vec3 angle_minimizer(std::span<const Vec3> vectors);

DiscreteStrategy gtc3d();
ContinuousStrategy gtc3d_cont();
ContinuousStrategy moam();

// ---- engines ---------------------------------------------------------------

struct StepResult {
    Configuration config;
    std::vector<Vec3> vectors;
    MergeResult merge;
};

// One FSYNC round: all targets from one snapshot, moved simultaneously, then merged.
StepResult fsync_round(const Configuration& config, const DiscreteStrategy& strategy);
Configuration step_fsync(const Configuration& config, const DiscreteStrategy& strategy);

struct RunResult {
    Trace trace;
    bool gathered = false;
    std::size_t steps = 0;
    double time = 0.0;
    Configuration final_config;
};

struct RecordOptions {
    bool record = true;
    std::size_t stride = 1;
};

RunResult run_fsync(const Configuration& config, const DiscreteStrategy& strategy, std::size_t max_rounds,
                    double gather_tol, RecordOptions rec = {});

// Explicit Euler from one snapshot: p_i += dt * v_i, clamped at each robot's stop point.
StepResult euler_step(const Configuration& config, const ContinuousStrategy& strategy, double dt);

RunResult integrate(const Configuration& config, const ContinuousStrategy& strategy, double dt, double max_time,
                    double gather_tol, RecordOptions rec = {});

}  // namespace gather3d::strategies
