#pragma once

#include <string>
#include <vector>

#include "core/mat.hpp"
#include "core/params.hpp"
#include "core/rng.hpp"

namespace trajalign::nif {

struct TransformerConfig {
    int d = 128;
    int layers = 4;
    int heads = 8;
    int ffn = 512;
};

// Pre-LN Transformer encoder with a two-zone attention mask: the first
// `context_count` rows are context tokens that attend to all context tokens;
// every later row is an isolated query token that attends to the context and
// to itself only. allowed(i, j) = (j < context) || (j == i). With
// context_count == T this is plain full bidirectional attention.
//
// Forward/backward are hand-written; caches hold every activation needed for
// the exact gradient.
class MaskedTransformer {
public:
    struct LayerCache {
        Mat x_in;
        Mat normed1;
        std::vector<double> rstd1;
        Mat n1;
        Mat qkv;
        std::vector<Mat> attn_probs;  // one T x T matrix per head
        Mat attn;                     // concatenated head outputs, pre out-proj
        Mat x_mid;
        Mat normed2;
        std::vector<double> rstd2;
        Mat n2;
        Mat f1;   // FFN pre-activation
        Mat act;  // gelu(f1)
    };

    struct Cache {
        int T = 0;
        int context = 0;
        std::vector<LayerCache> layers;
        Mat x_final;
        Mat normed_final;
        std::vector<double> rstd_final;
        Mat out;
    };

    MaskedTransformer(ParamStore& store, std::string prefix, TransformerConfig cfg,
                      Rng& init_rng);

    const TransformerConfig& config() const { return cfg_; }

    // tokens: T x d, first context_count rows are context tokens.
    Mat forward(const Mat& tokens, int context_count, Cache& cache) const;

    // Returns the gradient with respect to the input tokens and accumulates
    // all parameter gradients.
    Mat backward(const Cache& cache, const Mat& dout) const;

private:
    std::string lp(int layer, const char* name) const;

    void layer_norm(const Mat& x, const std::string& gname, const std::string& bname,
                    Mat& normed, std::vector<double>& rstd, Mat& out) const;
    // Returns dx; accumulates dgamma/dbeta.
    Mat layer_norm_backward(const Mat& dy, const Mat& normed,
                            const std::vector<double>& rstd, const std::string& gname,
                            const std::string& bname) const;

    ParamStore* store_;
    std::string prefix_;
    TransformerConfig cfg_;
};

double gelu(double x);
double gelu_grad(double x);

}  // namespace trajalign::nif
