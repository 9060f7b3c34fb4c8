// NEON kernel variants for aarch64 (2-wide float64). Same contracts and
// k-ascending summation order as the scalar reference.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <cstring>

#include "kernels/kernels.hpp"

namespace trajalign::kernels {
namespace {

inline double hsum(float64x2_t v) { return vgetq_lane_f64(v, 0) + vgetq_lane_f64(v, 1); }

void gemm_nn_neon(int m, int n, int k, const double* A, int lda, const double* B,
                  int ldb, double* C, int ldc, bool accumulate) {
    const int n2 = n & ~1;
    for (int i = 0; i < m; ++i) {
        double* c = C + static_cast<size_t>(i) * ldc;
        if (!accumulate) std::memset(c, 0, static_cast<size_t>(n) * sizeof(double));
        const double* a = A + static_cast<size_t>(i) * lda;
        for (int p = 0; p < k; ++p) {
            const double av = a[p];
            const double* b = B + static_cast<size_t>(p) * ldb;
            const float64x2_t av2 = vdupq_n_f64(av);
            int j = 0;
            for (; j < n2; j += 2) {
                float64x2_t c2 = vld1q_f64(c + j);
                c2 = vfmaq_f64(c2, av2, vld1q_f64(b + j));
                vst1q_f64(c + j, c2);
            }
            for (; j < n; ++j) c[j] += av * b[j];
        }
    }
}

void gemm_nt_neon(int m, int n, int k, const double* A, int lda, const double* B,
                  int ldb, double* C, int ldc, bool accumulate) {
    const int k2 = k & ~1;
    for (int i = 0; i < m; ++i) {
        const double* a = A + static_cast<size_t>(i) * lda;
        double* c = C + static_cast<size_t>(i) * ldc;
        for (int j = 0; j < n; ++j) {
            const double* b = B + static_cast<size_t>(j) * ldb;
            float64x2_t s = vdupq_n_f64(0.0);
            for (int p = 0; p < k2; p += 2)
                s = vfmaq_f64(s, vld1q_f64(a + p), vld1q_f64(b + p));
            double d = hsum(s);
            for (int p = k2; p < k; ++p) d += a[p] * b[p];
            c[j] = accumulate ? c[j] + d : d;
        }
    }
}

void gemm_tn_neon(int m, int n, int k, const double* A, int lda, const double* B,
                  int ldb, double* C, int ldc, bool accumulate) {
    if (!accumulate) {
        for (int i = 0; i < m; ++i)
            std::memset(C + static_cast<size_t>(i) * ldc, 0,
                        static_cast<size_t>(n) * sizeof(double));
    }
    const int n2 = n & ~1;
    for (int p = 0; p < k; ++p) {
        const double* a = A + static_cast<size_t>(p) * lda;
        const double* b = B + static_cast<size_t>(p) * ldb;
        for (int i = 0; i < m; ++i) {
            const double av = a[i];
            double* c = C + static_cast<size_t>(i) * ldc;
            const float64x2_t av2 = vdupq_n_f64(av);
            int j = 0;
            for (; j < n2; j += 2) {
                float64x2_t c2 = vld1q_f64(c + j);
                c2 = vfmaq_f64(c2, av2, vld1q_f64(b + j));
                vst1q_f64(c + j, c2);
            }
            for (; j < n; ++j) c[j] += av * b[j];
        }
    }
}

void axpy_neon(int n, double a, const double* x, double* y) {
    const float64x2_t a2 = vdupq_n_f64(a);
    int i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), a2, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

void vadd_neon(int n, const double* x, double* y) {
    int i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += x[i];
}

void vscale_neon(int n, double a, double* x) {
    const float64x2_t a2 = vdupq_n_f64(a);
    int i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(a2, vld1q_f64(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

double vdot_neon(int n, const double* x, const double* y) {
    float64x2_t s = vdupq_n_f64(0.0);
    int i = 0;
    for (; i + 2 <= n; i += 2) s = vfmaq_f64(s, vld1q_f64(x + i), vld1q_f64(y + i));
    double d = hsum(s);
    for (; i < n; ++i) d += x[i] * y[i];
    return d;
}

void adam_update_neon(int n, double* w, const double* g, double* m, double* v,
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

const KernelTable& neon_table() {
    static const KernelTable t{gemm_nn_neon, gemm_nt_neon, gemm_tn_neon,
                               axpy_neon,    vadd_neon,    vscale_neon,
                               vdot_neon,    adam_update_neon};
    return t;
}

}  // namespace trajalign::kernels

#endif  // aarch64
