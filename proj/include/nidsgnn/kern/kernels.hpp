#pragma once

#include <cstddef>
#include <string>

// Dense double-precision kernels used by the nn layer. Each kernel has a
// scalar reference implementation and, on x86-64, an AVX2 variant. The
// active backend is picked once at startup (override with NIDSGNN_KERNEL=
// scalar|avx2). Vector variants keep the scalar accumulation order wherever
// noted so results are bit-identical across backends; matmul_nt reduces
// with a 4-lane tree and is equivalence-tested to 1e-12 instead.
namespace nidsgnn::kern {

struct Kernels {
    // C[m x n] = A[m x k] * B[k x n]. C is overwritten. Bit-exact across backends.
    void (*matmul_nn)(const double* a, const double* b, double* c,
                      std::size_t m, std::size_t n, std::size_t k);
    // C[m x n] = A[m x k] * B[n x k]^T. Overwritten.
    void (*matmul_nt)(const double* a, const double* b, double* c,
                      std::size_t m, std::size_t n, std::size_t k);
    // C[m x n] += A[k x m]^T * B[k x n]. Accumulates (gradient use). Bit-exact.
    void (*matmul_tn_acc)(const double* a, const double* b, double* c,
                          std::size_t m, std::size_t n, std::size_t k);
    // y += alpha * x
    void (*axpy)(std::size_t n, double alpha, const double* x, double* y);
    void (*scale)(std::size_t n, double alpha, const double* x, double* y);
    void (*relu_fwd)(std::size_t n, const double* x, double* y);
    // dx += dy where x > 0
    void (*relu_bwd)(std::size_t n, const double* x, const double* dy, double* dx);
    // Adam update with bias-corrected step size precomputed by the caller:
    //   m = b1*m + (1-b1)*g ; v = b2*v + (1-b2)*g*g
    //   w -= step * m / (sqrt(v) + eps_hat)
    void (*adam_update)(std::size_t n, double* w, const double* g, double* m,
                        double* v, double beta1, double beta2, double step,
                        double eps_hat);
};

namespace scalar { extern const Kernels kernels; }
#if defined(__x86_64__)
namespace avx2 { extern const Kernels kernels; bool supported(); }
#endif

// Active backend, resolved on first use.
const Kernels& active();
const std::string& active_name();

}  // namespace nidsgnn::kern
