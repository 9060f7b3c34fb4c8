#include "geom/geom.hpp"

#include <algorithm>
#include <limits>

#include "core/error.hpp"

namespace trajalign::geom {

Vec2 normalize_coords(double lat, double lon, const GeoBounds& bounds) {
    require(bounds.valid(), "InvalidBounds", "min must be strictly below max");
    if (lat < bounds.min_lat || lat > bounds.max_lat || lon < bounds.min_lon ||
        lon > bounds.max_lon) {
        fail("OutOfBounds", "point (" + std::to_string(lat) + ", " + std::to_string(lon) +
                                ") lies outside the configured bounds");
    }
    return {(lat - bounds.min_lat) / (bounds.max_lat - bounds.min_lat),
            (lon - bounds.min_lon) / (bounds.max_lon - bounds.min_lon)};
}

std::pair<double, double> denormalize_coords(Vec2 coord, const GeoBounds& bounds) {
    require(bounds.valid(), "InvalidBounds", "min must be strictly below max");
    return {bounds.min_lat + coord.x * (bounds.max_lat - bounds.min_lat),
            bounds.min_lon + coord.y * (bounds.max_lon - bounds.min_lon)};
}

void validate_trajectory(const Trajectory& traj) {
    require(traj.waypoints.size() >= 2, "InvalidTrajectory",
            "trajectory " + traj.id + " has fewer than 2 waypoints");
    for (size_t j = 0; j < traj.waypoints.size(); ++j) {
        const auto& wp = traj.waypoints[j];
        require(wp.location.x >= 0.0 && wp.location.x <= 1.0 && wp.location.y >= 0.0 &&
                    wp.location.y <= 1.0,
                "OutOfBounds",
                "trajectory " + traj.id + " waypoint " + std::to_string(j) +
                    " outside [0,1]^2");
        if (j > 0) {
            require(traj.waypoints[j - 1].time <= wp.time, "NonMonotoneTime",
                    "trajectory " + traj.id + " timestamps decrease at index " +
                        std::to_string(j));
        }
    }
}

Footprint build_footprint(const Trajectory& traj) {
    validate_trajectory(traj);
    Footprint fp;
    fp.points.reserve(traj.waypoints.size());
    fp.cumlen.reserve(traj.waypoints.size());
    double acc = 0.0;
    for (size_t j = 0; j < traj.waypoints.size(); ++j) {
        fp.points.push_back(traj.waypoints[j].location);
        if (j > 0) acc += distance(fp.points[j - 1], fp.points[j]);
        fp.cumlen.push_back(acc);
    }
    return fp;
}

std::pair<double, double> point_segment_distance(Vec2 x, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = ab.dot(ab);
    double lambda = 0.0;
    if (len2 > 0.0) lambda = std::clamp((x - a).dot(ab) / len2, 0.0, 1.0);
    const Vec2 foot = a + ab * lambda;
    return {distance(x, foot), lambda};
}

double footprint_distance(Vec2 x, const Footprint& fp) {
    require(fp.segment_count() >= 1, "EmptyFootprint", "footprint needs >= 1 segment");
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < fp.segment_count(); ++i) {
        const double d = point_segment_distance(x, fp.points[i], fp.points[i + 1]).first;
        if (d < best) best = d;
    }
    return best;
}

Projection project_onto_footprint(Vec2 x, const Footprint& fp) {
    require(fp.segment_count() >= 1, "EmptyFootprint", "footprint needs >= 1 segment");
    Projection best;
    best.dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < fp.segment_count(); ++i) {
        const auto [d, lambda] = point_segment_distance(x, fp.points[i], fp.points[i + 1]);
        if (d < best.dist) {  // strict: ties keep the smallest index
            best.dist = d;
            best.segment_index = i;
            best.lambda = lambda;
        }
    }
    return best;
}

double synthetic_query_time(const Trajectory& traj, int segment_index, double lambda) {
    require(segment_index >= 0 &&
                segment_index + 1 < static_cast<int>(traj.waypoints.size()),
            "InvalidSegment", "segment index out of range");
    require(lambda >= 0.0 && lambda <= 1.0, "InvalidLambda", "lambda outside [0,1]");
    const double ta = traj.waypoints[segment_index].time;
    const double tb = traj.waypoints[segment_index + 1].time;
    return (1.0 - lambda) * ta + lambda * tb;
}

QuerySet build_query_set(const Trajectory& traj,
                         const std::vector<std::pair<std::string, Vec2>>& svi_locations,
                         double epsilon) {
    require(epsilon > 0.0, "InvalidEpsilon", "epsilon must be positive");
    const Footprint fp = build_footprint(traj);
    QuerySet qs;
    qs.trajectory_id = traj.id;
    for (const auto& [svi_id, loc] : svi_locations) {
        const Projection p = project_onto_footprint(loc, fp);
        if (p.dist <= epsilon) {
            QueryPoint qp;
            qp.svi_id = svi_id;
            qp.location = loc;
            qp.segment_index = p.segment_index;
            qp.lambda = p.lambda;
            qp.est_time = synthetic_query_time(traj, p.segment_index, p.lambda);
            qs.points.push_back(std::move(qp));
        }
    }
    return qs;
}

SnapResult snap_to_nearest_segment(Vec2 x, const std::vector<RoadSegment>& road_graph) {
    require(!road_graph.empty(), "EmptyGraph", "road graph has no segments");
    SnapResult best;
    double best_dist = std::numeric_limits<double>::infinity();
    int64_t best_id = 0;
    Vec2 best_foot;
    bool found = false;
    for (const auto& seg : road_graph) {
        const auto [d, lambda] = point_segment_distance(x, seg.a, seg.b);
        if (!found || d < best_dist || (d == best_dist && seg.id < best_id)) {
            found = true;
            best_dist = d;
            best_id = seg.id;
            best_foot = seg.a + (seg.b - seg.a) * lambda;
        }
    }
    best.segment_id = best_id;
    best.snapped = best_foot;
    best.dist = best_dist;
    return best;
}

}  // namespace trajalign::geom
