#include "encoders/time_encoder.hpp"

#include <cmath>

#include "core/error.hpp"

namespace trajalign::enc {

TimeEncoder::TimeEncoder(ParamStore& store, std::string prefix, int d)
    : store_(&store), prefix_(std::move(prefix)), d_(d) {
    Mat& omega = store.create(prefix_ + ".omega", 1, d_);
    store.create(prefix_ + ".phi", 1, d_);
    // Geometric spread of initial periods between 10 s and 1 h; channel 0 is
    // the linear term with a gentle slope. All of it is learnable.
    omega.at(0, 0) = 1.0 / 3600.0;
    for (int k = 1; k < d_; ++k) {
        const double frac = static_cast<double>(k - 1) / std::max(1, d_ - 2);
        const double period = 10.0 * std::pow(360.0, frac);
        omega.at(0, k) = 2.0 * M_PI / period;
    }
}

Mat TimeEncoder::forward(const std::vector<double>& t, Cache& cache) const {
    const int n = static_cast<int>(t.size());
    cache.t = t;
    cache.h.resize(n, d_);
    const Mat& omega = store_->param(prefix_ + ".omega");
    const Mat& phi = store_->param(prefix_ + ".phi");
    for (int i = 0; i < n; ++i) {
        double* h = cache.h.row(i);
        h[0] = omega.at(0, 0) * t[i] + phi.at(0, 0);
        for (int k = 1; k < d_; ++k) h[k] = std::sin(omega.at(0, k) * t[i] + phi.at(0, k));
    }
    return cache.h;
}

Mat TimeEncoder::forward_one(double t, Cache& cache) const { return forward({t}, cache); }

void TimeEncoder::backward(const Cache& cache, const Mat& dh, std::vector<double>* dt) const {
    const int n = static_cast<int>(cache.t.size());
    require(dh.rows == n && dh.cols == d_, "ShapeMismatch",
            "time encoder backward: bad gradient shape");
    const Mat& omega = store_->param(prefix_ + ".omega");
    const Mat& phi = store_->param(prefix_ + ".phi");
    Mat& domega = store_->grad(prefix_ + ".omega");
    Mat& dphi = store_->grad(prefix_ + ".phi");
    if (dt != nullptr) dt->assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double* g = dh.row(i);
        const double t = cache.t[i];
        domega.at(0, 0) += g[0] * t;
        dphi.at(0, 0) += g[0];
        double dti = g[0] * omega.at(0, 0);
        for (int k = 1; k < d_; ++k) {
            const double c = std::cos(omega.at(0, k) * t + phi.at(0, k));
            domega.at(0, k) += g[k] * c * t;
            dphi.at(0, k) += g[k] * c;
            dti += g[k] * c * omega.at(0, k);
        }
        if (dt != nullptr) (*dt)[i] = dti;
    }
}

}  // namespace trajalign::enc
