#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gather3d/strategies.hpp"

namespace gather3d::strategies {
namespace {

// Appends snapshots to a trace, composing index maps across unrecorded steps.
class Recorder {
public:
    Recorder(Trace& trace, RecordOptions opt) : trace_(trace), opt_(opt) {
        if (opt_.stride == 0) opt_.stride = 1;
    }

    bool wants(std::size_t step) const { return opt_.record && step % opt_.stride == 0; }

    void snapshot(const Configuration& config, std::vector<Vec3> vectors) {
        if (!opt_.record) return;
        if (!trace_.entries.empty()) trace_.entries.back().next_index = carry_;
        trace_.entries.push_back({config, std::move(vectors), merges_, {}});
        carry_.resize(config.live());
        std::iota(carry_.begin(), carry_.end(), std::size_t{0});
        merges_ = 0;
    }

    void moved(const MergeResult& merge) {
        for (auto& c : carry_) c = merge.index_map[c];
        merges_ += merge.merges;
    }

private:
    Trace& trace_;
    RecordOptions opt_;
    std::vector<std::size_t> carry_;
    std::size_t merges_ = 0;
};

template <typename F>
std::vector<Vec3> evaluate_all(const Configuration& config, F&& f) {
    const auto graph = visibility_graph(config);
    std::vector<Vec3> out(config.live());
    for (RobotId i = 0; i < config.live(); ++i) out[i] = f(i, config, graph);
    return out;
}

}  // namespace

StepResult fsync_round(const Configuration& config, const DiscreteStrategy& strategy) {
    StepResult out;
    out.vectors = evaluate_all(config, strategy.target);
    Configuration moved(out.vectors, config.multiplicities, config.time + 1.0);
    out.merge = merge_coincident(moved);
    out.config = out.merge.config;
    return out;
}

Configuration step_fsync(const Configuration& config, const DiscreteStrategy& strategy) {
    return fsync_round(config, strategy).config;
}

RunResult run_fsync(const Configuration& config, const DiscreteStrategy& strategy, std::size_t max_rounds,
                    double gather_tol, RecordOptions rec) {
    RunResult res;
    res.trace.strategy = strategy.name;
    res.trace.kind = VectorKind::target;
    res.trace.step = 1.0;
    res.trace.initial_diameter = diameter(config);
    Recorder recorder(res.trace, rec);

    Configuration cur = merge_coincident(config).config;
    std::size_t round = 0;
    for (;;) {
        res.gathered = gathered(cur, gather_tol);
        if (res.gathered || round >= max_rounds) {
            recorder.snapshot(cur, evaluate_all(cur, strategy.target));
            break;
        }
        StepResult step = fsync_round(cur, strategy);
        if (recorder.wants(round)) recorder.snapshot(cur, std::move(step.vectors));
        recorder.moved(step.merge);
        cur = std::move(step.config);
        ++round;
    }
    res.steps = round;
    res.time = static_cast<double>(round);
    res.final_config = std::move(cur);
    return res;
}

StepResult euler_step(const Configuration& config, const ContinuousStrategy& strategy, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("euler_step: dt must be positive");
    const auto graph = visibility_graph(config);
    StepResult out;
    out.vectors.resize(config.live());
    std::vector<Vec3> next(config.live());
    for (RobotId i = 0; i < config.live(); ++i) {
        const auto mv = strategy.move(i, config, graph);
        const Vec3& p = config.positions[i];
        out.vectors[i] = mv.velocity;
        if (mv.stop && distance(*mv.stop, p) <= dt * norm(mv.velocity)) {
            next[i] = *mv.stop;
        } else {
            next[i] = p + dt * mv.velocity;
        }
    }
    Configuration moved(std::move(next), config.multiplicities, config.time + dt);
    out.merge = merge_coincident(moved);
    out.config = out.merge.config;
    return out;
}

RunResult integrate(const Configuration& config, const ContinuousStrategy& strategy, double dt, double max_time,
                    double gather_tol, RecordOptions rec) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
    RunResult res;
    res.trace.strategy = strategy.name;
    res.trace.kind = VectorKind::velocity;
    res.trace.step = dt;
    res.trace.initial_diameter = diameter(config);
    Recorder recorder(res.trace, rec);

    const auto max_steps = static_cast<std::size_t>(std::ceil(max_time / dt - 1e-9));
    const double t0 = config.time;
    Configuration cur = merge_coincident(config).config;
    std::size_t k = 0;
    auto velocities = [&](const Configuration& c) {
        return evaluate_all(c, [&](RobotId i, const Configuration& cc, const VisibilityGraph& g) {
            return strategy.move(i, cc, g).velocity;
        });
    };
    for (;;) {
        res.gathered = gathered(cur, gather_tol);
        if (res.gathered || k >= max_steps) {
            recorder.snapshot(cur, velocities(cur));
            break;
        }
        StepResult step = euler_step(cur, strategy, dt);
        ++k;
        step.config.time = t0 + static_cast<double>(k) * dt;
        if (recorder.wants(k - 1)) recorder.snapshot(cur, std::move(step.vectors));
        recorder.moved(step.merge);
        cur = std::move(step.config);
    }
    res.steps = k;
    res.time = cur.time - t0;
    res.final_config = std::move(cur);
    return res;
}

}  // namespace gather3d::strategies
