#pragma once

#include <string>
#include <vector>

#include "core/mat.hpp"
#include "core/params.hpp"
#include "core/rng.hpp"
#include "geom/geom.hpp"

namespace trajalign::enc {

// Multi-scale sinusoidal location encoder. Deterministic raw features (sin and
// cos of the coordinate projected onto three unit directions at 0/120/240
// degrees, across S geometrically spaced wavelengths) followed by a learnable
// affine projection and tanh. Instantiated twice with independent parameters:
// once for street-view query locations, once for trajectory waypoints.
class LocationEncoder {
public:
    struct Cache {
        Mat raw;  // N x raw_dim
        Mat h;    // N x d
        std::vector<geom::Vec2> coords;
    };

    LocationEncoder(ParamStore& store, std::string prefix, int d, int num_scales,
                    double lambda_min, double lambda_max, Rng& init_rng);

    int dim() const { return d_; }
    int raw_dim() const { return num_scales_ * 6; }
    int num_scales() const { return num_scales_; }
    double wavelength(int scale) const;

    // Raw feature layout: [scale][direction][sin, cos].
    void raw_features(geom::Vec2 coord, double* out) const;

    Mat forward(const std::vector<geom::Vec2>& coords, Cache& cache) const;
    Mat forward_one(geom::Vec2 coord, Cache& cache) const;

    // Accumulates parameter gradients; when dcoords is non-null, also writes
    // the gradient with respect to each input coordinate.
    void backward(const Cache& cache, const Mat& dh,
                  std::vector<geom::Vec2>* dcoords = nullptr) const;

    const std::string& prefix() const { return prefix_; }

private:
    ParamStore* store_;
    std::string prefix_;
    int d_;
    int num_scales_;
    double lambda_min_;
    double lambda_max_;
};

}  // namespace trajalign::enc
