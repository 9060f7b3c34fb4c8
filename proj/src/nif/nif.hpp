#pragma once

#include <string>
#include <vector>

#include "encoders/location_encoder.hpp"
#include "encoders/time_encoder.hpp"
#include "nif/transformer.hpp"
#include "nif/window.hpp"

namespace trajalign::nif {

enum class TimeEncodingMode { synthetic, masked };

TimeEncodingMode parse_time_mode(const std::string& s);
std::string time_mode_name(TimeEncodingMode m);

// The trajectory neural implicit function: spatiotemporal waypoint tokens plus
// query-location tokens through the masked transformer. Query tokens are
// isolated from each other, so a joint multi-query call equals the
// corresponding single-query calls.
//
// All timestamps are encoded relative to the trajectory's first waypoint.
class NifModel {
public:
    struct QuerySpec {
        geom::Vec2 location;
        double est_time = 0.0;  // absolute seconds; used in synthetic mode only
        bool has_time = false;
    };

    struct Cache {
        enc::LocationEncoder::Cache wp_loc;
        enc::TimeEncoder::Cache wp_time;
        enc::LocationEncoder::Cache q_loc;
        enc::TimeEncoder::Cache q_time;
        MaskedTransformer::Cache tf;
        TimeEncodingMode mode = TimeEncodingMode::synthetic;
        int W = 0;  // real waypoint count
        int Q = 0;  // query count
    };

    struct Outputs {
        Mat queries;    // Q x d localized embeddings e_i[x]
        Mat waypoints;  // W x d encoder outputs at waypoint positions
    };

    NifModel(ParamStore& store, std::string prefix, TransformerConfig cfg,
             const enc::LocationEncoder* traj_loc, const enc::TimeEncoder* traj_time,
             Rng& init_rng);

    int dim() const { return cfg_.d; }
    const MaskedTransformer& transformer() const { return tf_; }

    // Query tokens per Eq. "location encoding + temporal embedding". Exposed
    // for tests; forward() builds them internally.
    Mat build_query_tokens(const geom::Trajectory& traj,
                           const std::vector<QuerySpec>& queries, TimeEncodingMode mode,
                           Cache& cache) const;

    // Runs the window's real tokens plus the query tokens through the
    // transformer. queries may be empty (waypoint outputs only).
    Outputs forward(const geom::Trajectory& traj, const TrajectoryWindow& window,
                    const std::vector<QuerySpec>& queries, TimeEncodingMode mode,
                    Cache& cache) const;

    // Same but requires >= 1 query (the spec's localized-embeddings contract).
    Outputs localized_embeddings(const geom::Trajectory& traj,
                                 const TrajectoryWindow& window,
                                 const std::vector<QuerySpec>& queries,
                                 TimeEncodingMode mode, Cache& cache) const;

    // Accumulates gradients into the transformer, the trajectory encoders and
    // m_time. Optional outputs expose input gradients for the checks.
    void backward(const Cache& cache, const Mat* dqueries, const Mat* dwaypoints,
                  std::vector<geom::Vec2>* dwp_coords = nullptr,
                  std::vector<double>* dwp_times = nullptr,
                  std::vector<geom::Vec2>* dq_coords = nullptr) const;

private:
    ParamStore* store_;
    std::string prefix_;
    TransformerConfig cfg_;
    MaskedTransformer tf_;
    const enc::LocationEncoder* traj_loc_;
    const enc::TimeEncoder* traj_time_;
};

// Mean of the encoder's waypoint-position outputs listed in `members`
// (indices into the waypoint output rows).
Mat segment_pooled_embedding(const Mat& waypoint_outputs, const std::vector<int>& members);

}  // namespace trajalign::nif
