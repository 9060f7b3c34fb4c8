#include "encoders/image_encoder.hpp"

#include <cmath>

#include "core/error.hpp"
#include "kernels/kernels.hpp"

namespace trajalign::enc {

PatchBackbone::PatchBackbone(ParamStore& store, std::string prefix, int image_size,
                             int channels, int patch_size, int feature_dim, Rng& init_rng)
    : store_(&store),
      prefix_(std::move(prefix)),
      image_size_(image_size),
      channels_(channels),
      patch_size_(patch_size),
      feature_dim_(feature_dim) {
    require(image_size % patch_size == 0, "InvalidConfig",
            "image size must be a multiple of the patch size");
    const int patch_dim = patch_size * patch_size * channels;
    Mat& w = store.create(prefix_ + ".w", patch_dim, feature_dim_);
    store.create(prefix_ + ".b", 1, feature_dim_);
    const double bound = std::sqrt(6.0 / (patch_dim + feature_dim_));
    for (auto& v : w.a) v = init_rng.uniform(-bound, bound);
}

void PatchBackbone::check_shape(const Image& img) const {
    require(img.width == image_size_ && img.height == image_size_ &&
                img.channels == channels_,
            "ShapeMismatch", "backbone expects " + std::to_string(image_size_) + "x" +
                                 std::to_string(image_size_) + "x" +
                                 std::to_string(channels_) + " images");
}

void PatchBackbone::gather_patch(const Image& img, int py, int px,
                                 std::vector<double>& out) const {
    int idx = 0;
    for (int y = 0; y < patch_size_; ++y)
        for (int x = 0; x < patch_size_; ++x)
            for (int c = 0; c < channels_; ++c)
                out[idx++] = img.at(py * patch_size_ + y, px * patch_size_ + x, c);
}

std::vector<double> PatchBackbone::features(const Image& img) const {
    check_shape(img);
    const int grid = image_size_ / patch_size_;
    const int patch_dim = patch_size_ * patch_size_ * channels_;
    const Mat& w = store_->param(prefix_ + ".w");
    const Mat& b = store_->param(prefix_ + ".b");
    std::vector<double> patch(patch_dim), pre(feature_dim_), acc(feature_dim_, 0.0);
    for (int py = 0; py < grid; ++py) {
        for (int px = 0; px < grid; ++px) {
            gather_patch(img, py, px, patch);
            kernels::gemm_nn(1, feature_dim_, patch_dim, patch.data(), patch_dim,
                             w.data(), feature_dim_, pre.data(), feature_dim_, false);
            for (int j = 0; j < feature_dim_; ++j) acc[j] += std::tanh(pre[j] + b.at(0, j));
        }
    }
    const double inv = 1.0 / (grid * grid);
    for (auto& v : acc) v *= inv;
    return acc;
}

void PatchBackbone::backward(const Image& img, const std::vector<double>& dfeat) const {
    check_shape(img);
    const int grid = image_size_ / patch_size_;
    const int patch_dim = patch_size_ * patch_size_ * channels_;
    const Mat& w = store_->param(prefix_ + ".w");
    const Mat& b = store_->param(prefix_ + ".b");
    Mat& dw = store_->grad(prefix_ + ".w");
    Mat& db = store_->grad(prefix_ + ".b");
    const double inv = 1.0 / (grid * grid);
    std::vector<double> patch(patch_dim), pre(feature_dim_), dpre(feature_dim_);
    for (int py = 0; py < grid; ++py) {
        for (int px = 0; px < grid; ++px) {
            gather_patch(img, py, px, patch);
            kernels::gemm_nn(1, feature_dim_, patch_dim, patch.data(), patch_dim,
                             w.data(), feature_dim_, pre.data(), feature_dim_, false);
            for (int j = 0; j < feature_dim_; ++j) {
                const double t = std::tanh(pre[j] + b.at(0, j));
                dpre[j] = dfeat[j] * inv * (1.0 - t * t);
            }
            kernels::gemm_tn(patch_dim, feature_dim_, 1, patch.data(), patch_dim,
                             dpre.data(), feature_dim_, dw.data(), feature_dim_, true);
            kernels::vadd(feature_dim_, dpre.data(), db.row(0));
        }
    }
}

std::vector<double> StoredFeatureBackbone::features(const Image&) const {
    fail("ShapeMismatch", "stored-feature backbone cannot consume pixel images");
}

void StoredFeatureBackbone::put(const std::string& id, std::vector<double> feat) {
    require(static_cast<int>(feat.size()) == dim_, "DimensionMismatch",
            "feature vector for " + id + " has wrong dimension");
    rows_.emplace_back(id, std::move(feat));
}

const std::vector<double>& StoredFeatureBackbone::lookup(const std::string& id) const {
    for (const auto& [key, feat] : rows_)
        if (key == id) return feat;
    fail("UnknownSvi", "no stored features for " + id);
}

ImageEncoder::ImageEncoder(ParamStore& store, std::string prefix,
                           std::shared_ptr<ImageBackbone> backbone, int d, Rng& init_rng)
    : store_(&store), prefix_(std::move(prefix)), backbone_(std::move(backbone)), d_(d) {
    const int in = backbone_->feature_dim();
    Mat& w = store.create(prefix_ + ".proj.w", in, d_);
    store.create(prefix_ + ".proj.b", 1, d_);
    const double bound = std::sqrt(6.0 / (in + d_));
    for (auto& v : w.a) v = init_rng.uniform(-bound, bound);
}

Mat ImageEncoder::project(Cache& cache) const {
    const int in = backbone_->feature_dim();
    require(static_cast<int>(cache.feat.size()) == in, "ShapeMismatch",
            "backbone feature dimension mismatch");
    const Mat& w = store_->param(prefix_ + ".proj.w");
    const Mat& b = store_->param(prefix_ + ".proj.b");
    cache.h.resize(1, d_);
    kernels::gemm_nn(1, d_, in, cache.feat.data(), in, w.data(), d_, cache.h.data(), d_,
                     false);
    for (int j = 0; j < d_; ++j) cache.h.at(0, j) = std::tanh(cache.h.at(0, j) + b.at(0, j));
    return cache.h;
}

Mat ImageEncoder::encode_image(const Image& img, Cache& cache) const {
    cache.feat = backbone_->features(img);
    cache.image = &img;
    return project(cache);
}

Mat ImageEncoder::encode_features(const std::vector<double>& feat, Cache& cache) const {
    cache.feat = feat;
    cache.image = nullptr;
    return project(cache);
}

void ImageEncoder::backward(const Cache& cache, const Mat& dh) const {
    const int in = backbone_->feature_dim();
    require(dh.rows == 1 && dh.cols == d_, "ShapeMismatch",
            "image encoder backward: bad gradient shape");
    Mat dpre(1, d_);
    for (int j = 0; j < d_; ++j) {
        const double h = cache.h.at(0, j);
        dpre.at(0, j) = dh.at(0, j) * (1.0 - h * h);
    }
    ParamBlock& wb = store_->block(prefix_ + ".proj.w");
    ParamBlock& bb = store_->block(prefix_ + ".proj.b");
    kernels::gemm_tn(in, d_, 1, cache.feat.data(), in, dpre.data(), d_, wb.g.data(), d_,
                     true);
    kernels::vadd(d_, dpre.row(0), bb.g.row(0));

    // Backbone gradients only when pixels were consumed and the backbone's
    // parameters are registered and unfrozen.
    if (cache.image != nullptr && store_->has(prefix_ + ".backbone.w") &&
        !store_->block(prefix_ + ".backbone.w").frozen) {
        std::vector<double> dfeat(in, 0.0);
        kernels::gemm_nt(1, in, d_, dpre.data(), d_, wb.w.data(), d_, dfeat.data(), in,
                         false);
        backbone_->backward(*cache.image, dfeat);
    }
}

}  // namespace trajalign::enc
