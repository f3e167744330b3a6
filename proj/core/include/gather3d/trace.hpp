#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gather3d/swarm.hpp"

namespace gather3d {

enum class VectorKind { none, target, velocity };

// One snapshot of an execution. `vectors` are aligned with the snapshot's live
// robots: FSYNC targets or continuous velocities, evaluated at this snapshot.
struct TraceEntry {
    Configuration config;
    std::vector<Vec3> vectors;
    // Robots coalesced while producing this snapshot from the previous one.
    std::size_t merges = 0;
    // This entry's live index -> live index in the next entry; empty for the last entry.
    std::vector<std::size_t> next_index;

    double time() const { return config.time; }
    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct Trace {
    std::string strategy;
    VectorKind kind = VectorKind::none;
    // Round length (1) for FSYNC, time step for continuous runs.
    double step = 1.0;
    double initial_diameter = 0.0;
    std::vector<TraceEntry> entries;

    bool has_vectors() const;
    friend bool operator==(const Trace&, const Trace&) = default;
};

}  // namespace gather3d
