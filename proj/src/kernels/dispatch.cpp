// Runtime backend selection for the math kernels.

#include "kernels/kernels.hpp"

#include "core/error.hpp"

namespace trajalign::kernels {
namespace {

Backend detect_backend() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Backend::avx2;
#elif defined(__aarch64__)
    return Backend::neon;
#endif
    return Backend::scalar;
}

const KernelTable* table_for(Backend b) {
    switch (b) {
        case Backend::scalar:
            return &scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2:
            if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
                return &avx2_table();
            return nullptr;
#endif
#if defined(__aarch64__)
        case Backend::neon:
            return &neon_table();
#endif
        default:
            return nullptr;
    }
}

Backend g_backend = detect_backend();
const KernelTable* g_table = table_for(g_backend);

}  // namespace

Backend active_backend() { return g_backend; }

bool backend_available(Backend b) { return table_for(b) != nullptr; }

void set_backend(Backend b) {
    const KernelTable* t = table_for(b);
    if (t == nullptr)
        fail("UnavailableBackend", "kernel backend " + backend_name(b) +
                                       " is not supported on this CPU");
    g_backend = b;
    g_table = t;
}

std::string backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "unknown";
}

void gemm_nn(int m, int n, int k, const double* A, int lda, const double* B, int ldb,
             double* C, int ldc, bool accumulate) {
    g_table->gemm_nn(m, n, k, A, lda, B, ldb, C, ldc, accumulate);
}
void gemm_nt(int m, int n, int k, const double* A, int lda, const double* B, int ldb,
             double* C, int ldc, bool accumulate) {
    g_table->gemm_nt(m, n, k, A, lda, B, ldb, C, ldc, accumulate);
}
void gemm_tn(int m, int n, int k, const double* A, int lda, const double* B, int ldb,
             double* C, int ldc, bool accumulate) {
    g_table->gemm_tn(m, n, k, A, lda, B, ldb, C, ldc, accumulate);
}
void axpy(int n, double a, const double* x, double* y) { g_table->axpy(n, a, x, y); }
void vadd(int n, const double* x, double* y) { g_table->vadd(n, x, y); }
void vscale(int n, double a, double* x) { g_table->vscale(n, a, x); }
double vdot(int n, const double* x, const double* y) { return g_table->vdot(n, x, y); }
void adam_update(int n, double* w, const double* g, double* m, double* v, double lr,
                 double beta1, double beta2, double eps, double weight_decay,
                 double bc1, double bc2) {
    g_table->adam_update(n, w, g, m, v, lr, beta1, beta2, eps, weight_decay, bc1, bc2);
}

}  // namespace trajalign::kernels
