#pragma once

#include <string>
#include <vector>

#include "core/mat.hpp"
#include "core/params.hpp"

namespace trajalign::enc {

// Time2Vec-style temporal encoder: channel 0 is linear (w0*t + p0), channels
// 1..d-1 are sin(wk*t + pk). All frequencies and phases are learnable.
class TimeEncoder {
public:
    struct Cache {
        std::vector<double> t;
        Mat h;  // N x d
    };

    TimeEncoder(ParamStore& store, std::string prefix, int d);

    int dim() const { return d_; }

    Mat forward(const std::vector<double>& t, Cache& cache) const;
    Mat forward_one(double t, Cache& cache) const;

    // Accumulates parameter gradients; optionally emits dL/dt per input.
    void backward(const Cache& cache, const Mat& dh, std::vector<double>* dt = nullptr) const;

    const std::string& prefix() const { return prefix_; }

private:
    ParamStore* store_;
    std::string prefix_;
    int d_;
};

}  // namespace trajalign::enc
