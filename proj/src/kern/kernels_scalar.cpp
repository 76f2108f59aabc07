#include "nidsgnn/kern/kernels.hpp"

#include <cmath>
#include <cstring>

namespace nidsgnn::kern::scalar {

namespace {

void matmul_nn(const double* a, const double* b, double* c,
               std::size_t m, std::size_t n, std::size_t k) {
    std::memset(c, 0, m * n * sizeof(double));
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a + i * k;
        double* ci = c + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            const double av = ai[p];
            const double* bp = b + p * n;
            for (std::size_t j = 0; j < n; ++j) ci[j] += av * bp[j];
        }
    }
}

void matmul_nt(const double* a, const double* b, double* c,
               std::size_t m, std::size_t n, std::size_t k) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a + i * k;
        double* ci = c + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double* bj = b + j * k;
            double acc = 0.0;
            for (std::size_t p = 0; p < k; ++p) acc += ai[p] * bj[p];
            ci[j] = acc;
        }
    }
}

void matmul_tn_acc(const double* a, const double* b, double* c,
                   std::size_t m, std::size_t n, std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) {
        const double* ai = a + i * m;
        const double* bi = b + i * n;
        for (std::size_t p = 0; p < m; ++p) {
            const double av = ai[p];
            double* cp = c + p * n;
            for (std::size_t j = 0; j < n; ++j) cp[j] += av * bi[j];
        }
    }
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(std::size_t n, double alpha, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] = alpha * x[i];
}

void relu_fwd(std::size_t n, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_bwd(std::size_t n, const double* x, const double* dy, double* dx) {
    for (std::size_t i = 0; i < n; ++i)
        if (x[i] > 0.0) dx[i] += dy[i];
}

void adam_update(std::size_t n, double* w, const double* g, double* m,
                 double* v, double beta1, double beta2, double step,
                 double eps_hat) {
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * (g[i] * g[i]);
        w[i] -= step * m[i] / (std::sqrt(v[i]) + eps_hat);
    }
}

}  // namespace

const Kernels kernels = {matmul_nn, matmul_nt,  matmul_tn_acc, axpy,
                         scale,     relu_fwd,   relu_bwd,      adam_update};

}  // namespace nidsgnn::kern::scalar
