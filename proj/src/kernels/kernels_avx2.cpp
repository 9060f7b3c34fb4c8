// AVX2+FMA kernel variants. Compiled with -mavx2 -mfma on x86-64 only; the
// dispatcher selects this table at runtime when the CPU reports AVX2 and FMA.
//
// Summation order over k is ascending for every C element, matching the
// scalar kernels except for FMA rounding, so outputs agree to a few ulps.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstring>

#include "kernels/kernels.hpp"

namespace trajalign::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

// 4x8 register-blocked micro-kernel: rows i0..i0+3, cols j0..j0+7.
inline void gemm_nn_block4x8(int k, const double* A, int lda, const double* B, int ldb,
                             double* C, int ldc, int i0, int j0, bool accumulate) {
    __m256d acc[4][2];
    for (int r = 0; r < 4; ++r) {
        double* c = C + static_cast<size_t>(i0 + r) * ldc + j0;
        acc[r][0] = accumulate ? _mm256_loadu_pd(c) : _mm256_setzero_pd();
        acc[r][1] = accumulate ? _mm256_loadu_pd(c + 4) : _mm256_setzero_pd();
    }
    for (int p = 0; p < k; ++p) {
        const double* b = B + static_cast<size_t>(p) * ldb + j0;
        const __m256d b0 = _mm256_loadu_pd(b);
        const __m256d b1 = _mm256_loadu_pd(b + 4);
        for (int r = 0; r < 4; ++r) {
            const __m256d a = _mm256_set1_pd(A[static_cast<size_t>(i0 + r) * lda + p]);
            acc[r][0] = _mm256_fmadd_pd(a, b0, acc[r][0]);
            acc[r][1] = _mm256_fmadd_pd(a, b1, acc[r][1]);
        }
    }
    for (int r = 0; r < 4; ++r) {
        double* c = C + static_cast<size_t>(i0 + r) * ldc + j0;
        _mm256_storeu_pd(c, acc[r][0]);
        _mm256_storeu_pd(c + 4, acc[r][1]);
    }
}

// Single-row edge kernel over an arbitrary column range.
inline void gemm_nn_row(int n0, int n1, int k, const double* a, const double* B,
                        int ldb, double* c, bool accumulate) {
    for (int j = n0; j < n1; ++j) {
        if (!accumulate) c[j] = 0.0;
    }
    for (int p = 0; p < k; ++p) {
        const double av = a[p];
        const double* b = B + static_cast<size_t>(p) * ldb;
        int j = n0;
        const __m256d av4 = _mm256_set1_pd(av);
        for (; j + 4 <= n1; j += 4) {
            __m256d c4 = _mm256_loadu_pd(c + j);
            c4 = _mm256_fmadd_pd(av4, _mm256_loadu_pd(b + j), c4);
            _mm256_storeu_pd(c + j, c4);
        }
        for (; j < n1; ++j) c[j] += av * b[j];
    }
}

void gemm_nn_avx2(int m, int n, int k, const double* A, int lda, const double* B,
                  int ldb, double* C, int ldc, bool accumulate) {
    const int m4 = m & ~3;
    const int n8 = n & ~7;
    for (int i = 0; i < m4; i += 4) {
        for (int j = 0; j < n8; j += 8) gemm_nn_block4x8(k, A, lda, B, ldb, C, ldc, i, j, accumulate);
        if (n8 < n) {
            for (int r = 0; r < 4; ++r)
                gemm_nn_row(n8, n, k, A + static_cast<size_t>(i + r) * lda, B, ldb,
                            C + static_cast<size_t>(i + r) * ldc, accumulate);
        }
    }
    for (int i = m4; i < m; ++i)
        gemm_nn_row(0, n, k, A + static_cast<size_t>(i) * lda, B, ldb,
                    C + static_cast<size_t>(i) * ldc, accumulate);
}

void gemm_nt_avx2(int m, int n, int k, const double* A, int lda, const double* B,
                  int ldb, double* C, int ldc, bool accumulate) {
    const int k4 = k & ~3;
    for (int i = 0; i < m; ++i) {
        const double* a = A + static_cast<size_t>(i) * lda;
        double* c = C + static_cast<size_t>(i) * ldc;
        int j = 0;
        for (; j + 4 <= n; j += 4) {
            const double* b0 = B + static_cast<size_t>(j) * ldb;
            const double* b1 = B + static_cast<size_t>(j + 1) * ldb;
            const double* b2 = B + static_cast<size_t>(j + 2) * ldb;
            const double* b3 = B + static_cast<size_t>(j + 3) * ldb;
            __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
            __m256d s2 = _mm256_setzero_pd(), s3 = _mm256_setzero_pd();
            for (int p = 0; p < k4; p += 4) {
                const __m256d av = _mm256_loadu_pd(a + p);
                s0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b0 + p), s0);
                s1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b1 + p), s1);
                s2 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b2 + p), s2);
                s3 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b3 + p), s3);
            }
            double d0 = hsum(s0), d1 = hsum(s1), d2 = hsum(s2), d3 = hsum(s3);
            for (int p = k4; p < k; ++p) {
                d0 += a[p] * b0[p];
                d1 += a[p] * b1[p];
                d2 += a[p] * b2[p];
                d3 += a[p] * b3[p];
            }
            if (accumulate) {
                c[j] += d0; c[j + 1] += d1; c[j + 2] += d2; c[j + 3] += d3;
            } else {
                c[j] = d0; c[j + 1] = d1; c[j + 2] = d2; c[j + 3] = d3;
            }
        }
        for (; j < n; ++j) {
            const double* b = B + static_cast<size_t>(j) * ldb;
            __m256d s = _mm256_setzero_pd();
            for (int p = 0; p < k4; p += 4)
                s = _mm256_fmadd_pd(_mm256_loadu_pd(a + p), _mm256_loadu_pd(b + p), s);
            double d = hsum(s);
            for (int p = k4; p < k; ++p) d += a[p] * b[p];
            c[j] = accumulate ? c[j] + d : d;
        }
    }
}

void gemm_tn_avx2(int m, int n, int k, const double* A, int lda, const double* B,
                  int ldb, double* C, int ldc, bool accumulate) {
    if (!accumulate) {
        for (int i = 0; i < m; ++i)
            std::memset(C + static_cast<size_t>(i) * ldc, 0,
                        static_cast<size_t>(n) * sizeof(double));
    }
    const int n4 = n & ~3;
    for (int p = 0; p < k; ++p) {
        const double* a = A + static_cast<size_t>(p) * lda;
        const double* b = B + static_cast<size_t>(p) * ldb;
        for (int i = 0; i < m; ++i) {
            const double av = a[i];
            double* c = C + static_cast<size_t>(i) * ldc;
            const __m256d av4 = _mm256_set1_pd(av);
            int j = 0;
            for (; j < n4; j += 4) {
                __m256d c4 = _mm256_loadu_pd(c + j);
                c4 = _mm256_fmadd_pd(av4, _mm256_loadu_pd(b + j), c4);
                _mm256_storeu_pd(c + j, c4);
            }
            for (; j < n; ++j) c[j] += av * b[j];
        }
    }
}

void axpy_avx2(int n, double a, const double* x, double* y) {
    const __m256d a4 = _mm256_set1_pd(a);
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d y4 = _mm256_loadu_pd(y + i);
        y4 = _mm256_fmadd_pd(a4, _mm256_loadu_pd(x + i), y4);
        _mm256_storeu_pd(y + i, y4);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void vadd_avx2(int n, const double* x, double* y) {
    int i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) y[i] += x[i];
}

void vscale_avx2(int n, double a, double* x) {
    const __m256d a4 = _mm256_set1_pd(a);
    int i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(a4, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

double vdot_avx2(int n, const double* x, const double* y) {
    __m256d s = _mm256_setzero_pd();
    int i = 0;
    for (; i + 4 <= n; i += 4)
        s = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s);
    double d = hsum(s);
    for (; i < n; ++i) d += x[i] * y[i];
    return d;
}

void adam_update_avx2(int n, double* w, const double* g, double* m, double* v,
                      double lr, double beta1, double beta2, double eps,
                      double weight_decay, double bc1, double bc2) {
    const __m256d b1 = _mm256_set1_pd(beta1), ob1 = _mm256_set1_pd(1.0 - beta1);
    const __m256d b2 = _mm256_set1_pd(beta2), ob2 = _mm256_set1_pd(1.0 - beta2);
    const __m256d rbc1 = _mm256_set1_pd(1.0 / bc1), rbc2 = _mm256_set1_pd(1.0 / bc2);
    const __m256d lr4 = _mm256_set1_pd(lr), eps4 = _mm256_set1_pd(eps);
    const __m256d wd4 = _mm256_set1_pd(weight_decay);
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d g4 = _mm256_loadu_pd(g + i);
        __m256d m4 = _mm256_loadu_pd(m + i);
        __m256d v4 = _mm256_loadu_pd(v + i);
        m4 = _mm256_fmadd_pd(b1, m4, _mm256_mul_pd(ob1, g4));
        v4 = _mm256_fmadd_pd(b2, v4, _mm256_mul_pd(ob2, _mm256_mul_pd(g4, g4)));
        _mm256_storeu_pd(m + i, m4);
        _mm256_storeu_pd(v + i, v4);
        const __m256d mhat = _mm256_mul_pd(m4, rbc1);
        const __m256d vhat = _mm256_mul_pd(v4, rbc2);
        __m256d w4 = _mm256_loadu_pd(w + i);
        const __m256d step = _mm256_add_pd(
            _mm256_div_pd(mhat, _mm256_add_pd(_mm256_sqrt_pd(vhat), eps4)),
            _mm256_mul_pd(wd4, w4));
        w4 = _mm256_fnmadd_pd(lr4, step, w4);
        _mm256_storeu_pd(w + i, w4);
    }
    for (; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        w[i] -= lr * (mhat / (std::sqrt(vhat) + eps) + weight_decay * w[i]);
    }
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable t{gemm_nn_avx2, gemm_nt_avx2, gemm_tn_avx2,
                               axpy_avx2,    vadd_avx2,    vscale_avx2,
                               vdot_avx2,    adam_update_avx2};
    return t;
}

}  // namespace trajalign::kernels

#endif  // x86-64
