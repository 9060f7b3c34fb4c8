#include "encoders/location_encoder.hpp"

#include <cmath>

#include "core/error.hpp"
#include "kernels/kernels.hpp"

namespace trajalign::enc {

namespace {
// Unit directions at 0, 120, 240 degrees.
constexpr double kDirX[3] = {1.0, -0.5, -0.5};
const double kDirY[3] = {0.0, std::sqrt(3.0) / 2.0, -std::sqrt(3.0) / 2.0};
}  // namespace

LocationEncoder::LocationEncoder(ParamStore& store, std::string prefix, int d,
                                 int num_scales, double lambda_min, double lambda_max,
                                 Rng& init_rng)
    : store_(&store),
      prefix_(std::move(prefix)),
      d_(d),
      num_scales_(num_scales),
      lambda_min_(lambda_min),
      lambda_max_(lambda_max) {
    require(num_scales_ >= 1, "InvalidConfig", "location encoder needs >= 1 scale");
    require(lambda_min_ > 0.0 && lambda_min_ <= lambda_max_, "InvalidConfig",
            "wavelength range must satisfy 0 < min <= max");
    Mat& w = store.create(prefix_ + ".w", raw_dim(), d_);
    store.create(prefix_ + ".b", 1, d_);
    const double bound = std::sqrt(6.0 / (raw_dim() + d_));
    for (auto& v : w.a) v = init_rng.uniform(-bound, bound);
}

double LocationEncoder::wavelength(int scale) const {
    if (num_scales_ == 1) return lambda_min_;
    const double g = lambda_max_ / lambda_min_;
    return lambda_min_ * std::pow(g, static_cast<double>(scale) / (num_scales_ - 1));
}

void LocationEncoder::raw_features(geom::Vec2 coord, double* out) const {
    int idx = 0;
    for (int s = 0; s < num_scales_; ++s) {
        const double freq = 2.0 * M_PI / wavelength(s);
        for (int m = 0; m < 3; ++m) {
            const double p = freq * (coord.x * kDirX[m] + coord.y * kDirY[m]);
            out[idx++] = std::sin(p);
            out[idx++] = std::cos(p);
        }
    }
}

Mat LocationEncoder::forward(const std::vector<geom::Vec2>& coords, Cache& cache) const {
    const int n = static_cast<int>(coords.size());
    cache.coords = coords;
    cache.raw.resize(n, raw_dim());
    cache.h.resize(n, d_);
    for (int i = 0; i < n; ++i) raw_features(coords[i], cache.raw.row(i));

    const Mat& w = store_->param(prefix_ + ".w");
    const Mat& b = store_->param(prefix_ + ".b");
    kernels::gemm_nn(n, d_, raw_dim(), cache.raw.data(), raw_dim(), w.data(), d_,
                     cache.h.data(), d_, false);
    for (int i = 0; i < n; ++i) {
        double* h = cache.h.row(i);
        for (int j = 0; j < d_; ++j) h[j] = std::tanh(h[j] + b.at(0, j));
    }
    return cache.h;
}

Mat LocationEncoder::forward_one(geom::Vec2 coord, Cache& cache) const {
    return forward({coord}, cache);
}

void LocationEncoder::backward(const Cache& cache, const Mat& dh,
                               std::vector<geom::Vec2>* dcoords) const {
    const int n = cache.h.rows;
    require(dh.rows == n && dh.cols == d_, "ShapeMismatch",
            "location encoder backward: bad gradient shape");

    // dpre = dh * (1 - h^2)
    Mat dpre(n, d_);
    for (int i = 0; i < n; ++i) {
        const double* h = cache.h.row(i);
        const double* g = dh.row(i);
        double* o = dpre.row(i);
        for (int j = 0; j < d_; ++j) o[j] = g[j] * (1.0 - h[j] * h[j]);
    }

    ParamBlock& wb = store_->block(prefix_ + ".w");
    ParamBlock& bb = store_->block(prefix_ + ".b");
    kernels::gemm_tn(raw_dim(), d_, n, cache.raw.data(), raw_dim(), dpre.data(), d_,
                     wb.g.data(), d_, true);
    for (int i = 0; i < n; ++i) kernels::vadd(d_, dpre.row(i), bb.g.row(0));

    if (dcoords != nullptr) {
        Mat draw(n, raw_dim());
        kernels::gemm_nt(n, raw_dim(), d_, dpre.data(), d_, wb.w.data(), d_, draw.data(),
                         raw_dim(), false);
        dcoords->assign(n, geom::Vec2{});
        for (int i = 0; i < n; ++i) {
            const double* dr = draw.row(i);
            double gx = 0.0, gy = 0.0;
            int idx = 0;
            for (int s = 0; s < num_scales_; ++s) {
                const double freq = 2.0 * M_PI / wavelength(s);
                for (int m = 0; m < 3; ++m) {
                    const double p = freq * (cache.coords[i].x * kDirX[m] +
                                             cache.coords[i].y * kDirY[m]);
                    const double dsin = dr[idx++];
                    const double dcos = dr[idx++];
                    const double dp = dsin * std::cos(p) - dcos * std::sin(p);
                    gx += dp * freq * kDirX[m];
                    gy += dp * freq * kDirY[m];
                }
            }
            (*dcoords)[i] = {gx, gy};
        }
    }
}

}  // namespace trajalign::enc
