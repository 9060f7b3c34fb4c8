#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace trajalign::geom {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

struct GeoBounds {
    double min_lat = 0.0;
    double min_lon = 0.0;
    double max_lat = 1.0;
    double max_lon = 1.0;

    bool valid() const { return min_lat < max_lat && min_lon < max_lon; }
    static GeoBounds unit() { return {0.0, 0.0, 1.0, 1.0}; }
};

struct Waypoint {
    Vec2 location;  // normalized [0,1]^2, x from latitude, y from longitude
    double time = 0.0;  // seconds since dataset epoch
};

struct Trajectory {
    std::string id;
    std::vector<Waypoint> waypoints;  // timestamps non-decreasing, length >= 2

    size_t length() const { return waypoints.size(); }
    double start_time() const { return waypoints.front().time; }
    double end_time() const { return waypoints.back().time; }
};

// Piecewise-linear spatial footprint through the trajectory's waypoints.
// Segment i runs from point i to point i+1; zero-length segments are allowed.
struct Footprint {
    std::vector<Vec2> points;
    std::vector<double> cumlen;  // cumlen[i] = arc length up to point i

    int segment_count() const { return static_cast<int>(points.size()) - 1; }
    std::pair<Vec2, Vec2> segment(int i) const { return {points[i], points[i + 1]}; }
    double total_length() const { return cumlen.empty() ? 0.0 : cumlen.back(); }
    Vec2 point_at(int seg, double lambda) const {
        return points[seg] + (points[seg + 1] - points[seg]) * lambda;
    }
};

struct QueryPoint {
    std::string svi_id;
    Vec2 location;
    int segment_index = 0;
    double lambda = 0.0;   // clamped projection parameter in [0,1]
    double est_time = 0.0; // interpolated traversal time, seconds
};

struct QuerySet {
    std::string trajectory_id;
    std::vector<QueryPoint> points;

    bool empty() const { return points.empty(); }
    size_t size() const { return points.size(); }
};

struct RoadSegment {
    int64_t id = 0;
    Vec2 a;
    Vec2 b;
};

struct Projection {
    int segment_index = 0;
    double lambda = 0.0;
    double dist = 0.0;
};

// Affine map of (lat, lon) onto [0,1]^2. Points outside the bounds are an
// error, never clamped.
Vec2 normalize_coords(double lat, double lon, const GeoBounds& bounds);
// Exact inverse of normalize_coords given the same bounds.
std::pair<double, double> denormalize_coords(Vec2 coord, const GeoBounds& bounds);

Footprint build_footprint(const Trajectory& traj);

// Distance from x to one segment plus the clamped projection parameter.
// Zero-length segments project to lambda = 0.
std::pair<double, double> point_segment_distance(Vec2 x, Vec2 a, Vec2 b);

double footprint_distance(Vec2 x, const Footprint& fp);

// Segment achieving the minimum distance (ties -> smallest index).
Projection project_onto_footprint(Vec2 x, const Footprint& fp);

// t estimated by linear interpolation between the segment's endpoints.
double synthetic_query_time(const Trajectory& traj, int segment_index, double lambda);

QuerySet build_query_set(const Trajectory& traj,
                         const std::vector<std::pair<std::string, Vec2>>& svi_locations,
                         double epsilon);

struct SnapResult {
    int64_t segment_id = 0;
    Vec2 snapped;
    double dist = 0.0;
};

// Nearest road segment by point-to-segment distance (ties -> smallest id).
SnapResult snap_to_nearest_segment(Vec2 x, const std::vector<RoadSegment>& road_graph);

// Trajectory invariant checks shared by loaders and the synthetic generator.
void validate_trajectory(const Trajectory& traj);

}  // namespace trajalign::geom
