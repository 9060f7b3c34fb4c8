#pragma once

#include <string>

// Dense math kernels behind the model and optimizer inner loops.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, a SIMD variant (AVX2+FMA on x86-64, NEON on aarch64). The
// backend is picked once at startup from CPU features and can be overridden
// (tests force the scalar path to equivalence-check the SIMD one).
//
// All matrices are row-major with explicit leading dimensions so callers can
// pass strided views (e.g. per-head slices of a packed QKV block).

namespace trajalign::kernels {

enum class Backend { scalar, avx2, neon };

struct KernelTable {
    // C[m x n] = (accumulate ? C : 0) + A[m x k] * B[k x n]
    void (*gemm_nn)(int m, int n, int k, const double* A, int lda, const double* B,
                    int ldb, double* C, int ldc, bool accumulate);
    // C[m x n] = (accumulate ? C : 0) + A[m x k] * B[n x k]^T
    void (*gemm_nt)(int m, int n, int k, const double* A, int lda, const double* B,
                    int ldb, double* C, int ldc, bool accumulate);
    // C[m x n] = (accumulate ? C : 0) + A[k x m]^T * B[k x n]
    void (*gemm_tn)(int m, int n, int k, const double* A, int lda, const double* B,
                    int ldb, double* C, int ldc, bool accumulate);

    void (*axpy)(int n, double a, const double* x, double* y);  // y += a*x
    void (*vadd)(int n, const double* x, double* y);            // y += x
    void (*vscale)(int n, double a, double* x);                 // x *= a
    double (*vdot)(int n, const double* x, const double* y);

    // One Adam step with decoupled weight decay. bc1/bc2 are the bias
    // corrections 1-beta1^t and 1-beta2^t.
    void (*adam_update)(int n, double* w, const double* g, double* m, double* v,
                        double lr, double beta1, double beta2, double eps,
                        double weight_decay, double bc1, double bc2);
};

const KernelTable& scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_table();
#endif
#if defined(__aarch64__)
const KernelTable& neon_table();
#endif

Backend active_backend();
bool backend_available(Backend b);
void set_backend(Backend b);  // throws trajalign::Error("UnavailableBackend") if unsupported
std::string backend_name(Backend b);

// Dispatch wrappers.
void gemm_nn(int m, int n, int k, const double* A, int lda, const double* B, int ldb,
             double* C, int ldc, bool accumulate = false);
void gemm_nt(int m, int n, int k, const double* A, int lda, const double* B, int ldb,
             double* C, int ldc, bool accumulate = false);
void gemm_tn(int m, int n, int k, const double* A, int lda, const double* B, int ldb,
             double* C, int ldc, bool accumulate = false);
void axpy(int n, double a, const double* x, double* y);
void vadd(int n, const double* x, double* y);
void vscale(int n, double a, double* x);
double vdot(int n, const double* x, const double* y);
void adam_update(int n, double* w, const double* g, double* m, double* v, double lr,
                 double beta1, double beta2, double eps, double weight_decay,
                 double bc1, double bc2);

}  // namespace trajalign::kernels
