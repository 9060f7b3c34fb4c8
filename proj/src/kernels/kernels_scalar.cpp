// Scalar reference kernels. These define the semantics the SIMD variants are
// equivalence-tested against.

#include <cmath>
#include <cstring>

#include "kernels/kernels.hpp"

namespace trajalign::kernels {
namespace {

void gemm_nn_scalar(int m, int n, int k, const double* A, int lda, const double* B,
                    int ldb, double* C, int ldc, bool accumulate) {
    for (int i = 0; i < m; ++i) {
        double* c = C + static_cast<size_t>(i) * ldc;
        if (!accumulate) std::memset(c, 0, static_cast<size_t>(n) * sizeof(double));
        const double* a = A + static_cast<size_t>(i) * lda;
        for (int p = 0; p < k; ++p) {
            const double av = a[p];
            const double* b = B + static_cast<size_t>(p) * ldb;
            for (int j = 0; j < n; ++j) c[j] += av * b[j];
        }
    }
}

void gemm_nt_scalar(int m, int n, int k, const double* A, int lda, const double* B,
                    int ldb, double* C, int ldc, bool accumulate) {
    for (int i = 0; i < m; ++i) {
        const double* a = A + static_cast<size_t>(i) * lda;
        double* c = C + static_cast<size_t>(i) * ldc;
        for (int j = 0; j < n; ++j) {
            const double* b = B + static_cast<size_t>(j) * ldb;
            double acc = 0.0;
            for (int p = 0; p < k; ++p) acc += a[p] * b[p];
            c[j] = accumulate ? c[j] + acc : acc;
        }
    }
}

void gemm_tn_scalar(int m, int n, int k, const double* A, int lda, const double* B,
                    int ldb, double* C, int ldc, bool accumulate) {
    if (!accumulate) {
        for (int i = 0; i < m; ++i)
            std::memset(C + static_cast<size_t>(i) * ldc, 0,
                        static_cast<size_t>(n) * sizeof(double));
    }
    for (int p = 0; p < k; ++p) {
        const double* a = A + static_cast<size_t>(p) * lda;
        const double* b = B + static_cast<size_t>(p) * ldb;
        for (int i = 0; i < m; ++i) {
            const double av = a[i];
            double* c = C + static_cast<size_t>(i) * ldc;
            for (int j = 0; j < n; ++j) c[j] += av * b[j];
        }
    }
}

void axpy_scalar(int n, double a, const double* x, double* y) {
    for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

void vadd_scalar(int n, const double* x, double* y) {
    for (int i = 0; i < n; ++i) y[i] += x[i];
}

void vscale_scalar(int n, double a, double* x) {
    for (int i = 0; i < n; ++i) x[i] *= a;
}

double vdot_scalar(int n, const double* x, const double* y) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void adam_update_scalar(int n, double* w, const double* g, double* m, double* v,
                        double lr, double beta1, double beta2, double eps,
                        double weight_decay, double bc1, double bc2) {
    for (int i = 0; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        w[i] -= lr * (mhat / (std::sqrt(vhat) + eps) + weight_decay * w[i]);
    }
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable t{gemm_nn_scalar, gemm_nt_scalar, gemm_tn_scalar,
                               axpy_scalar,    vadd_scalar,    vscale_scalar,
                               vdot_scalar,    adam_update_scalar};
    return t;
}

}  // namespace trajalign::kernels
