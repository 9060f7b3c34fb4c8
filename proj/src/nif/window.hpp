#pragma once

#include <cstdint>
#include <vector>

#include "core/mat.hpp"
#include "geom/geom.hpp"

namespace trajalign::nif {

// Fixed-size trajectory window. Trajectories longer than the capacity are
// randomly downsampled (order-preserving); shorter ones are zero-padded.
// Token slots are filled later by the trajectory encoders; padded slots stay
// at the zero vector and are excluded from attention by the mask.
struct TrajectoryWindow {
    int capacity = 0;
    Mat tokens;                     // capacity x d, zero in padded slots
    std::vector<bool> mask;         // true = real waypoint
    std::vector<int> kept_indices;  // strictly increasing original indices

    int real_count() const { return static_cast<int>(kept_indices.size()); }
};

TrajectoryWindow window_trajectory(const geom::Trajectory& traj, int capacity,
                                   uint64_t rng_seed);

}  // namespace trajalign::nif
