#include "nif/nif.hpp"

#include "core/error.hpp"
#include "kernels/kernels.hpp"

namespace trajalign::nif {

TimeEncodingMode parse_time_mode(const std::string& s) {
    if (s == "synthetic") return TimeEncodingMode::synthetic;
    if (s == "masked") return TimeEncodingMode::masked;
    fail("InvalidConfig", "unknown time mode: " + s);
}

std::string time_mode_name(TimeEncodingMode m) {
    return m == TimeEncodingMode::synthetic ? "synthetic" : "masked";
}

NifModel::NifModel(ParamStore& store, std::string prefix, TransformerConfig cfg,
                   const enc::LocationEncoder* traj_loc, const enc::TimeEncoder* traj_time,
                   Rng& init_rng)
    : store_(&store),
      prefix_(std::move(prefix)),
      cfg_(cfg),
      tf_(store, prefix_ + ".tf", cfg, init_rng),
      traj_loc_(traj_loc),
      traj_time_(traj_time) {
    Mat& m_time = store.create(prefix_ + ".m_time", 1, cfg_.d);
    for (auto& v : m_time.a) v = init_rng.normal(0.0, 0.02);
}

Mat NifModel::build_query_tokens(const geom::Trajectory& traj,
                                 const std::vector<QuerySpec>& queries,
                                 TimeEncodingMode mode, Cache& cache) const {
    const int q = static_cast<int>(queries.size());
    std::vector<geom::Vec2> coords(q);
    for (int i = 0; i < q; ++i) coords[i] = queries[i].location;
    Mat tokens = traj_loc_->forward(coords, cache.q_loc);

    if (mode == TimeEncodingMode::synthetic) {
        const double t0 = traj.start_time();
        std::vector<double> times(q);
        for (int i = 0; i < q; ++i) {
            require(queries[i].has_time, "ModeMismatch",
                    "synthetic time mode needs an estimated query time");
            times[i] = queries[i].est_time - t0;
        }
        const Mat th = traj_time_->forward(times, cache.q_time);
        kernels::vadd(static_cast<int>(tokens.size()), th.data(), tokens.data());
    } else {
        const Mat& m_time = store_->param(prefix_ + ".m_time");
        for (int i = 0; i < q; ++i) kernels::vadd(cfg_.d, m_time.row(0), tokens.row(i));
    }
    return tokens;
}

NifModel::Outputs NifModel::forward(const geom::Trajectory& traj,
                                    const TrajectoryWindow& window,
                                    const std::vector<QuerySpec>& queries,
                                    TimeEncodingMode mode, Cache& cache) const {
    const int W = window.real_count();
    const int Q = static_cast<int>(queries.size());
    require(W >= 1, "EmptyWindow", "window has no real waypoints");
    cache.mode = mode;
    cache.W = W;
    cache.Q = Q;

    // Tokenize the retained waypoints (times relative to the first waypoint of
    // the full trajectory).
    const double t0 = traj.start_time();
    std::vector<geom::Vec2> coords(W);
    std::vector<double> times(W);
    for (int i = 0; i < W; ++i) {
        const auto& wp = traj.waypoints[window.kept_indices[i]];
        coords[i] = wp.location;
        times[i] = wp.time - t0;
    }
    const Mat wl = traj_loc_->forward(coords, cache.wp_loc);
    const Mat wt = traj_time_->forward(times, cache.wp_time);

    Mat tokens(W + Q, cfg_.d);
    for (int i = 0; i < W; ++i) {
        double* row = tokens.row(i);
        const double* a = wl.row(i);
        const double* b = wt.row(i);
        for (int j = 0; j < cfg_.d; ++j) row[j] = a[j] + b[j];
    }
    if (Q > 0) {
        const Mat qt = build_query_tokens(traj, queries, mode, cache);
        for (int i = 0; i < Q; ++i)
            std::copy(qt.row(i), qt.row(i) + cfg_.d, tokens.row(W + i));
    }

    const Mat out = tf_.forward(tokens, W, cache.tf);
    Outputs o;
    o.waypoints.resize(W, cfg_.d);
    for (int i = 0; i < W; ++i)
        std::copy(out.row(i), out.row(i) + cfg_.d, o.waypoints.row(i));
    o.queries.resize(Q, cfg_.d);
    for (int i = 0; i < Q; ++i)
        std::copy(out.row(W + i), out.row(W + i) + cfg_.d, o.queries.row(i));
    return o;
}

NifModel::Outputs NifModel::localized_embeddings(const geom::Trajectory& traj,
                                                 const TrajectoryWindow& window,
                                                 const std::vector<QuerySpec>& queries,
                                                 TimeEncodingMode mode, Cache& cache) const {
    require(!queries.empty(), "EmptyQuerySet", "localized embeddings need >= 1 query");
    return forward(traj, window, queries, mode, cache);
}

void NifModel::backward(const Cache& cache, const Mat* dqueries, const Mat* dwaypoints,
                        std::vector<geom::Vec2>* dwp_coords,
                        std::vector<double>* dwp_times,
                        std::vector<geom::Vec2>* dq_coords) const {
    const int W = cache.W;
    const int Q = cache.Q;
    Mat dout(W + Q, cfg_.d);
    if (dwaypoints != nullptr) {
        require(dwaypoints->rows == W && dwaypoints->cols == cfg_.d, "ShapeMismatch",
                "bad waypoint gradient shape");
        for (int i = 0; i < W; ++i)
            std::copy(dwaypoints->row(i), dwaypoints->row(i) + cfg_.d, dout.row(i));
    }
    if (dqueries != nullptr) {
        require(dqueries->rows == Q && dqueries->cols == cfg_.d, "ShapeMismatch",
                "bad query gradient shape");
        for (int i = 0; i < Q; ++i)
            std::copy(dqueries->row(i), dqueries->row(i) + cfg_.d, dout.row(W + i));
    }

    const Mat dtokens = tf_.backward(cache.tf, dout);

    // Waypoint tokens: the same gradient feeds both encoders (additive token).
    Mat dwp(W, cfg_.d);
    for (int i = 0; i < W; ++i)
        std::copy(dtokens.row(i), dtokens.row(i) + cfg_.d, dwp.row(i));
    traj_loc_->backward(cache.wp_loc, dwp, dwp_coords);
    traj_time_->backward(cache.wp_time, dwp, dwp_times);

    if (Q > 0) {
        Mat dq(Q, cfg_.d);
        for (int i = 0; i < Q; ++i)
            std::copy(dtokens.row(W + i), dtokens.row(W + i) + cfg_.d, dq.row(i));
        traj_loc_->backward(cache.q_loc, dq, dq_coords);
        if (cache.mode == TimeEncodingMode::synthetic) {
            traj_time_->backward(cache.q_time, dq, nullptr);
        } else {
            Mat& dm = store_->grad(prefix_ + ".m_time");
            for (int i = 0; i < Q; ++i) kernels::vadd(cfg_.d, dq.row(i), dm.row(0));
        }
    }
}

Mat segment_pooled_embedding(const Mat& waypoint_outputs, const std::vector<int>& members) {
    require(!members.empty(), "NoWaypointsOnSegment",
            "segment pooling needs >= 1 member waypoint");
    Mat out(1, waypoint_outputs.cols);
    for (int idx : members) {
        require(idx >= 0 && idx < waypoint_outputs.rows, "InvalidIndex",
                "segment member index out of range");
        kernels::vadd(waypoint_outputs.cols, waypoint_outputs.row(idx), out.row(0));
    }
    kernels::vscale(waypoint_outputs.cols, 1.0 / static_cast<double>(members.size()),
                    out.row(0));
    return out;
}

}  // namespace trajalign::nif
