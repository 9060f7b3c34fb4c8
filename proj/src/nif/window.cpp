#include "nif/window.hpp"

#include <algorithm>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace trajalign::nif {

TrajectoryWindow window_trajectory(const geom::Trajectory& traj, int capacity,
                                   uint64_t rng_seed) {
    require(capacity >= 2, "InvalidConfig", "window capacity must be >= 2");
    geom::validate_trajectory(traj);
    const int n = static_cast<int>(traj.waypoints.size());

    TrajectoryWindow w;
    w.capacity = capacity;
    w.mask.assign(capacity, false);
    if (n <= capacity) {
        w.kept_indices.resize(n);
        for (int i = 0; i < n; ++i) w.kept_indices[i] = i;
    } else {
        Rng rng(rng_seed);
        w.kept_indices = rng.sample_without_replacement(n, capacity);
        std::sort(w.kept_indices.begin(), w.kept_indices.end());
    }
    for (size_t i = 0; i < w.kept_indices.size(); ++i) w.mask[i] = true;
    return w;
}

}  // namespace trajalign::nif
