#pragma once

#include <memory>
#include <string>
#include <vector>

#include "core/mat.hpp"
#include "core/params.hpp"
#include "core/rng.hpp"
#include "encoders/image.hpp"

namespace trajalign::enc {

// Pluggable feature extractor behind the street-view image encoder. Downstream
// code only sees fixed-length feature vectors.
class ImageBackbone {
public:
    virtual ~ImageBackbone() = default;
    virtual int feature_dim() const = 0;
    virtual std::string kind() const = 0;
    virtual std::vector<double> features(const Image& img) const = 0;
    // Accumulate parameter gradients for trainable backbones; default no-op.
    virtual void backward(const Image& img, const std::vector<double>& dfeat) const {}
};

// Small trainable patch encoder for synthetic images: non-overlapping patches
// through a shared affine + tanh, mean-pooled over patches.
class PatchBackbone : public ImageBackbone {
public:
    PatchBackbone(ParamStore& store, std::string prefix, int image_size, int channels,
                  int patch_size, int feature_dim, Rng& init_rng);

    int feature_dim() const override { return feature_dim_; }
    std::string kind() const override { return "patch"; }
    std::vector<double> features(const Image& img) const override;
    void backward(const Image& img, const std::vector<double>& dfeat) const override;

private:
    void check_shape(const Image& img) const;
    void gather_patch(const Image& img, int py, int px, std::vector<double>& out) const;

    ParamStore* store_;
    std::string prefix_;
    int image_size_;
    int channels_;
    int patch_size_;
    int feature_dim_;
};

// Frozen backbone that serves precomputed per-id feature vectors (loaded from
// the feature file format). features(Image) is unsupported by construction.
class StoredFeatureBackbone : public ImageBackbone {
public:
    StoredFeatureBackbone(int dim) : dim_(dim) {}

    int feature_dim() const override { return dim_; }
    std::string kind() const override { return "features"; }
    std::vector<double> features(const Image&) const override;

    void put(const std::string& id, std::vector<double> feat);
    const std::vector<double>& lookup(const std::string& id) const;

private:
    int dim_;
    std::vector<std::pair<std::string, std::vector<double>>> rows_;
};

// Street-view image encoder: backbone features -> learnable affine + tanh
// projection into the shared d-dimensional space.
class ImageEncoder {
public:
    struct Cache {
        std::vector<double> feat;  // backbone features
        Mat h;                     // 1 x d
        const Image* image = nullptr;  // set when the backbone consumed pixels
    };

    ImageEncoder(ParamStore& store, std::string prefix, std::shared_ptr<ImageBackbone> backbone,
                 int d, Rng& init_rng);

    int dim() const { return d_; }
    const ImageBackbone& backbone() const { return *backbone_; }

    Mat encode_image(const Image& img, Cache& cache) const;
    Mat encode_features(const std::vector<double>& feat, Cache& cache) const;

    // Accumulates projection-head gradients and, when the cache came from
    // pixels and the backbone is unfrozen in the store, backbone gradients.
    void backward(const Cache& cache, const Mat& dh) const;

private:
    Mat project(Cache& cache) const;

    ParamStore* store_;
    std::string prefix_;
    std::shared_ptr<ImageBackbone> backbone_;
    int d_;
};

}  // namespace trajalign::enc
