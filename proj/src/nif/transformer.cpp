#include "nif/transformer.hpp"

#include <cmath>
#include <limits>

#include "core/error.hpp"
#include "kernels/kernels.hpp"

namespace trajalign::nif {

namespace {
constexpr double kLnEps = 1e-5;

void xavier_init(Mat& w, Rng& rng) {
    const double bound = std::sqrt(6.0 / (w.rows + w.cols));
    for (auto& v : w.a) v = rng.uniform(-bound, bound);
}
}  // namespace

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0))); }

double gelu_grad(double x) {
    return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0))) +
           x * std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

MaskedTransformer::MaskedTransformer(ParamStore& store, std::string prefix,
                                     TransformerConfig cfg, Rng& init_rng)
    : store_(&store), prefix_(std::move(prefix)), cfg_(cfg) {
    require(cfg_.d % cfg_.heads == 0, "InvalidConfig",
            "model width must be divisible by the head count");
    for (int l = 0; l < cfg_.layers; ++l) {
        Mat& ln1g = store.create(lp(l, "ln1.g"), 1, cfg_.d);
        store.create(lp(l, "ln1.b"), 1, cfg_.d);
        xavier_init(store.create(lp(l, "wqkv"), cfg_.d, 3 * cfg_.d), init_rng);
        store.create(lp(l, "bqkv"), 1, 3 * cfg_.d);
        xavier_init(store.create(lp(l, "wo"), cfg_.d, cfg_.d), init_rng);
        store.create(lp(l, "bo"), 1, cfg_.d);
        Mat& ln2g = store.create(lp(l, "ln2.g"), 1, cfg_.d);
        store.create(lp(l, "ln2.b"), 1, cfg_.d);
        xavier_init(store.create(lp(l, "w1"), cfg_.d, cfg_.ffn), init_rng);
        store.create(lp(l, "b1"), 1, cfg_.ffn);
        xavier_init(store.create(lp(l, "w2"), cfg_.ffn, cfg_.d), init_rng);
        store.create(lp(l, "b2"), 1, cfg_.d);
        for (auto& v : ln1g.a) v = 1.0;
        for (auto& v : ln2g.a) v = 1.0;
    }
    Mat& lnfg = store.create(prefix_ + ".lnf.g", 1, cfg_.d);
    store.create(prefix_ + ".lnf.b", 1, cfg_.d);
    for (auto& v : lnfg.a) v = 1.0;
}

std::string MaskedTransformer::lp(int layer, const char* name) const {
    return prefix_ + ".l" + std::to_string(layer) + "." + name;
}

void MaskedTransformer::layer_norm(const Mat& x, const std::string& gname,
                                   const std::string& bname, Mat& normed,
                                   std::vector<double>& rstd, Mat& out) const {
    const int T = x.rows, d = x.cols;
    const Mat& g = store_->param(gname);
    const Mat& b = store_->param(bname);
    normed.resize(T, d);
    out.resize(T, d);
    rstd.assign(T, 0.0);
    for (int i = 0; i < T; ++i) {
        const double* xi = x.row(i);
        double mean = 0.0;
        for (int j = 0; j < d; ++j) mean += xi[j];
        mean /= d;
        double var = 0.0;
        for (int j = 0; j < d; ++j) var += (xi[j] - mean) * (xi[j] - mean);
        var /= d;
        const double r = 1.0 / std::sqrt(var + kLnEps);
        rstd[i] = r;
        double* ni = normed.row(i);
        double* oi = out.row(i);
        for (int j = 0; j < d; ++j) {
            ni[j] = (xi[j] - mean) * r;
            oi[j] = g.at(0, j) * ni[j] + b.at(0, j);
        }
    }
}

Mat MaskedTransformer::layer_norm_backward(const Mat& dy, const Mat& normed,
                                           const std::vector<double>& rstd,
                                           const std::string& gname,
                                           const std::string& bname) const {
    const int T = dy.rows, d = dy.cols;
    const Mat& g = store_->param(gname);
    Mat& dg = store_->grad(gname);
    Mat& db = store_->grad(bname);
    Mat dx(T, d);
    for (int i = 0; i < T; ++i) {
        const double* dyi = dy.row(i);
        const double* ni = normed.row(i);
        double m1 = 0.0, m2 = 0.0;
        for (int j = 0; j < d; ++j) {
            const double dxhat = dyi[j] * g.at(0, j);
            m1 += dxhat;
            m2 += dxhat * ni[j];
            dg.at(0, j) += dyi[j] * ni[j];
            db.at(0, j) += dyi[j];
        }
        m1 /= d;
        m2 /= d;
        double* dxi = dx.row(i);
        for (int j = 0; j < d; ++j) {
            const double dxhat = dyi[j] * g.at(0, j);
            dxi[j] = rstd[i] * (dxhat - m1 - ni[j] * m2);
        }
    }
    return dx;
}

Mat MaskedTransformer::forward(const Mat& tokens, int context_count, Cache& cache) const {
    const int T = tokens.rows;
    const int d = cfg_.d;
    const int dh = d / cfg_.heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
    require(tokens.cols == d, "ShapeMismatch", "token width must equal model width");
    require(context_count >= 1 && context_count <= T, "InvalidConfig",
            "context count out of range");

    cache.T = T;
    cache.context = context_count;
    cache.layers.assign(cfg_.layers, LayerCache{});

    Mat x = tokens;
    for (int l = 0; l < cfg_.layers; ++l) {
        LayerCache& lc = cache.layers[l];
        lc.x_in = x;
        layer_norm(x, lp(l, "ln1.g"), lp(l, "ln1.b"), lc.normed1, lc.rstd1, lc.n1);

        const Mat& wqkv = store_->param(lp(l, "wqkv"));
        const Mat& bqkv = store_->param(lp(l, "bqkv"));
        lc.qkv.resize(T, 3 * d);
        kernels::gemm_nn(T, 3 * d, d, lc.n1.data(), d, wqkv.data(), 3 * d,
                         lc.qkv.data(), 3 * d, false);
        for (int i = 0; i < T; ++i) kernels::vadd(3 * d, bqkv.row(0), lc.qkv.row(i));

        lc.attn.resize(T, d);
        lc.attn_probs.assign(cfg_.heads, Mat());
        Mat scores(T, T);
        for (int h = 0; h < cfg_.heads; ++h) {
            const double* Q = lc.qkv.data() + h * dh;
            const double* K = lc.qkv.data() + d + h * dh;
            const double* V = lc.qkv.data() + 2 * d + h * dh;
            kernels::gemm_nt(T, T, dh, Q, 3 * d, K, 3 * d, scores.data(), T, false);

            Mat& P = lc.attn_probs[h];
            P.resize(T, T);
            for (int i = 0; i < T; ++i) {
                const double* si = scores.row(i);
                double* pi = P.row(i);
                auto allowed = [&](int j) { return j < context_count || j == i; };
                double mx = -std::numeric_limits<double>::infinity();
                for (int j = 0; j < T; ++j)
                    if (allowed(j) && si[j] * scale > mx) mx = si[j] * scale;
                double sum = 0.0;
                for (int j = 0; j < T; ++j) {
                    if (allowed(j)) {
                        pi[j] = std::exp(si[j] * scale - mx);
                        sum += pi[j];
                    } else {
                        pi[j] = 0.0;
                    }
                }
                const double inv = 1.0 / sum;
                for (int j = 0; j < T; ++j) pi[j] *= inv;
            }
            kernels::gemm_nn(T, dh, T, P.data(), T, V, 3 * d, lc.attn.data() + h * dh, d,
                             false);
        }

        const Mat& wo = store_->param(lp(l, "wo"));
        const Mat& bo = store_->param(lp(l, "bo"));
        lc.x_mid.resize(T, d);
        kernels::gemm_nn(T, d, d, lc.attn.data(), d, wo.data(), d, lc.x_mid.data(), d,
                         false);
        for (int i = 0; i < T; ++i) {
            kernels::vadd(d, bo.row(0), lc.x_mid.row(i));
            kernels::vadd(d, lc.x_in.row(i), lc.x_mid.row(i));
        }

        layer_norm(lc.x_mid, lp(l, "ln2.g"), lp(l, "ln2.b"), lc.normed2, lc.rstd2, lc.n2);

        const Mat& w1 = store_->param(lp(l, "w1"));
        const Mat& b1 = store_->param(lp(l, "b1"));
        const Mat& w2 = store_->param(lp(l, "w2"));
        const Mat& b2 = store_->param(lp(l, "b2"));
        lc.f1.resize(T, cfg_.ffn);
        kernels::gemm_nn(T, cfg_.ffn, d, lc.n2.data(), d, w1.data(), cfg_.ffn,
                         lc.f1.data(), cfg_.ffn, false);
        for (int i = 0; i < T; ++i) kernels::vadd(cfg_.ffn, b1.row(0), lc.f1.row(i));
        lc.act.resize(T, cfg_.ffn);
        for (size_t i = 0; i < lc.f1.size(); ++i) lc.act.a[i] = gelu(lc.f1.a[i]);

        x.resize(T, d);
        kernels::gemm_nn(T, d, cfg_.ffn, lc.act.data(), cfg_.ffn, w2.data(), d, x.data(),
                         d, false);
        for (int i = 0; i < T; ++i) {
            kernels::vadd(d, b2.row(0), x.row(i));
            kernels::vadd(d, lc.x_mid.row(i), x.row(i));
        }
    }

    cache.x_final = x;
    layer_norm(x, prefix_ + ".lnf.g", prefix_ + ".lnf.b", cache.normed_final,
               cache.rstd_final, cache.out);
    return cache.out;
}

Mat MaskedTransformer::backward(const Cache& cache, const Mat& dout) const {
    const int T = cache.T;
    const int d = cfg_.d;
    const int dh = d / cfg_.heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
    require(dout.rows == T && dout.cols == d, "ShapeMismatch",
            "transformer backward: bad gradient shape");

    Mat dx = layer_norm_backward(dout, cache.normed_final, cache.rstd_final,
                                 prefix_ + ".lnf.g", prefix_ + ".lnf.b");

    for (int l = cfg_.layers - 1; l >= 0; --l) {
        const LayerCache& lc = cache.layers[l];

        // FFN block: x_out = x_mid + act * w2 + b2
        const Mat& w1 = store_->param(lp(l, "w1"));
        const Mat& w2 = store_->param(lp(l, "w2"));
        Mat& dw1 = store_->grad(lp(l, "w1"));
        Mat& db1 = store_->grad(lp(l, "b1"));
        Mat& dw2 = store_->grad(lp(l, "w2"));
        Mat& db2 = store_->grad(lp(l, "b2"));

        kernels::gemm_tn(cfg_.ffn, d, T, lc.act.data(), cfg_.ffn, dx.data(), d,
                         dw2.data(), d, true);
        for (int i = 0; i < T; ++i) kernels::vadd(d, dx.row(i), db2.row(0));
        Mat dact(T, cfg_.ffn);
        kernels::gemm_nt(T, cfg_.ffn, d, dx.data(), d, w2.data(), d, dact.data(),
                         cfg_.ffn, false);
        Mat df1(T, cfg_.ffn);
        for (size_t i = 0; i < df1.size(); ++i)
            df1.a[i] = dact.a[i] * gelu_grad(lc.f1.a[i]);
        kernels::gemm_tn(d, cfg_.ffn, T, lc.n2.data(), d, df1.data(), cfg_.ffn,
                         dw1.data(), cfg_.ffn, true);
        for (int i = 0; i < T; ++i) kernels::vadd(cfg_.ffn, df1.row(i), db1.row(0));
        Mat dn2(T, d);
        kernels::gemm_nt(T, d, cfg_.ffn, df1.data(), cfg_.ffn, w1.data(), cfg_.ffn,
                         dn2.data(), d, false);
        Mat dx_mid = layer_norm_backward(dn2, lc.normed2, lc.rstd2, lp(l, "ln2.g"),
                                         lp(l, "ln2.b"));
        kernels::vadd(static_cast<int>(dx.size()), dx.data(), dx_mid.data());

        // Attention block: x_mid = x_in + attn * wo + bo
        const Mat& wo = store_->param(lp(l, "wo"));
        Mat& dwo = store_->grad(lp(l, "wo"));
        Mat& dbo = store_->grad(lp(l, "bo"));
        kernels::gemm_tn(d, d, T, lc.attn.data(), d, dx_mid.data(), d, dwo.data(), d,
                         true);
        for (int i = 0; i < T; ++i) kernels::vadd(d, dx_mid.row(i), dbo.row(0));
        Mat dattn(T, d);
        kernels::gemm_nt(T, d, d, dx_mid.data(), d, wo.data(), d, dattn.data(), d, false);

        Mat dqkv(T, 3 * d);
        dqkv.zero();
        Mat dP(T, T), dS(T, T);
        for (int h = 0; h < cfg_.heads; ++h) {
            const double* Q = lc.qkv.data() + h * dh;
            const double* K = lc.qkv.data() + d + h * dh;
            const double* V = lc.qkv.data() + 2 * d + h * dh;
            const Mat& P = lc.attn_probs[h];
            const double* dO = dattn.data() + h * dh;

            kernels::gemm_nt(T, T, dh, dO, d, V, 3 * d, dP.data(), T, false);
            kernels::gemm_tn(T, dh, T, P.data(), T, dO, d,
                             dqkv.data() + 2 * d + h * dh, 3 * d, true);
            for (int i = 0; i < T; ++i) {
                const double* pi = P.row(i);
                const double* dpi = dP.row(i);
                const double rowdot = kernels::vdot(T, pi, dpi);
                double* dsi = dS.row(i);
                for (int j = 0; j < T; ++j) dsi[j] = scale * pi[j] * (dpi[j] - rowdot);
            }
            kernels::gemm_nn(T, dh, T, dS.data(), T, K, 3 * d, dqkv.data() + h * dh,
                             3 * d, true);
            kernels::gemm_tn(T, dh, T, dS.data(), T, Q, 3 * d,
                             dqkv.data() + d + h * dh, 3 * d, true);
        }

        const Mat& wqkv = store_->param(lp(l, "wqkv"));
        Mat& dwqkv = store_->grad(lp(l, "wqkv"));
        Mat& dbqkv = store_->grad(lp(l, "bqkv"));
        kernels::gemm_tn(d, 3 * d, T, lc.n1.data(), d, dqkv.data(), 3 * d, dwqkv.data(),
                         3 * d, true);
        for (int i = 0; i < T; ++i) kernels::vadd(3 * d, dqkv.row(i), dbqkv.row(0));
        Mat dn1(T, d);
        kernels::gemm_nt(T, d, 3 * d, dqkv.data(), 3 * d, wqkv.data(), 3 * d, dn1.data(),
                         d, false);
        Mat dx_in = layer_norm_backward(dn1, lc.normed1, lc.rstd1, lp(l, "ln1.g"),
                                        lp(l, "ln1.b"));
        kernels::vadd(static_cast<int>(dx_mid.size()), dx_mid.data(), dx_in.data());
        dx = std::move(dx_in);
    }
    return dx;
}

}  // namespace trajalign::nif
