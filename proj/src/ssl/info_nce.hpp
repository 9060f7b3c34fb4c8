#pragma once

#include <vector>

#include "core/mat.hpp"

namespace trajalign::ssl {

// Negative set as views into caller-owned embeddings. `grads` may be empty
// (detached negatives, e.g. queue snapshots) or parallel to `vecs` with
// nullptr entries for members that should not receive gradients.
struct NegativeSet {
    std::vector<const double*> vecs;
    std::vector<double*> grads;

    size_t size() const { return vecs.size(); }
    void add(const double* v, double* g = nullptr) {
        vecs.push_back(v);
        grads.push_back(g);
    }
};

// InfoNCE with cosine similarity and temperature tau, numerically stabilized
// by max-subtraction. An empty negative set gives exactly 0.
double info_nce(const double* u, const double* v_plus, const NegativeSet& negatives,
                int dim, double tau);

// Same value; additionally accumulates upstream * dL/d{u, v_plus, negatives}
// into the provided buffers (du/dv_plus may be nullptr to skip).
double info_nce_with_grad(const double* u, const double* v_plus,
                          const NegativeSet& negatives, int dim, double tau,
                          double upstream, double* du, double* dv_plus);

double cosine_similarity(const double* a, const double* b, int dim);

}  // namespace trajalign::ssl
