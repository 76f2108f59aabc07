#include "nidsgnn/kern/kernels.hpp"

#if defined(__x86_64__)

#include <immintrin.h>

#include <cmath>
#include <cstring>

// Compiled with -mavx2 but without FMA so mul+add round exactly like the
// scalar kernels. matmul_nn / matmul_tn_acc / axpy / scale / relu / adam
// keep the scalar per-element operation order and are bit-identical to the
// scalar backend; matmul_nt uses 4 accumulator lanes with a tree reduction.
namespace nidsgnn::kern::avx2 {

namespace {

void matmul_nn(const double* a, const double* b, double* c,
               std::size_t m, std::size_t n, std::size_t k) {
    std::memset(c, 0, m * n * sizeof(double));
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a + i * k;
        double* ci = c + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            const double av = ai[p];
            const __m256d avv = _mm256_set1_pd(av);
            const double* bp = b + p * n;
            std::size_t j = 0;
            for (; j + 4 <= n; j += 4) {
                __m256d cv = _mm256_loadu_pd(ci + j);
                __m256d bv = _mm256_loadu_pd(bp + j);
                cv = _mm256_add_pd(cv, _mm256_mul_pd(avv, bv));
                _mm256_storeu_pd(ci + j, cv);
            }
            for (; j < n; ++j) ci[j] += av * bp[j];
        }
    }
}

double hsum(__m256d v) {
    // pairwise tree: (v0+v2) + (v1+v3)
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s = _mm_add_pd(lo, hi);
    __m128d h = _mm_unpackhi_pd(s, s);
    return _mm_cvtsd_f64(_mm_add_sd(s, h));
}

void matmul_nt(const double* a, const double* b, double* c,
               std::size_t m, std::size_t n, std::size_t k) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a + i * k;
        double* ci = c + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double* bj = b + j * k;
            __m256d acc = _mm256_setzero_pd();
            std::size_t p = 0;
            for (; p + 4 <= k; p += 4) {
                __m256d av = _mm256_loadu_pd(ai + p);
                __m256d bv = _mm256_loadu_pd(bj + p);
                acc = _mm256_add_pd(acc, _mm256_mul_pd(av, bv));
            }
            double s = hsum(acc);
            for (; p < k; ++p) s += ai[p] * bj[p];
            ci[j] = s;
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
            const __m256d avv = _mm256_set1_pd(av);
            double* cp = c + p * n;
            std::size_t j = 0;
            for (; j + 4 <= n; j += 4) {
                __m256d cv = _mm256_loadu_pd(cp + j);
                __m256d bv = _mm256_loadu_pd(bi + j);
                cv = _mm256_add_pd(cv, _mm256_mul_pd(avv, bv));
                _mm256_storeu_pd(cp + j, cv);
            }
            for (; j < n; ++j) cp[j] += av * bi[j];
        }
    }
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
    const __m256d av = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d yv = _mm256_loadu_pd(y + i);
        __m256d xv = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(yv, _mm256_mul_pd(av, xv)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale(std::size_t n, double alpha, const double* x, double* y) {
    const __m256d av = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) y[i] = alpha * x[i];
}

void relu_fwd(std::size_t n, const double* x, double* y) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_max_pd(zero, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_bwd(std::size_t n, const double* x, const double* dy, double* dx) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xv = _mm256_loadu_pd(x + i);
        __m256d mask = _mm256_cmp_pd(xv, zero, _CMP_GT_OQ);
        __m256d add = _mm256_and_pd(mask, _mm256_loadu_pd(dy + i));
        _mm256_storeu_pd(dx + i, _mm256_add_pd(_mm256_loadu_pd(dx + i), add));
    }
    for (; i < n; ++i)
        if (x[i] > 0.0) dx[i] += dy[i];
}

void adam_update(std::size_t n, double* w, const double* g, double* m,
                 double* v, double beta1, double beta2, double step,
                 double eps_hat) {
    const __m256d b1 = _mm256_set1_pd(beta1);
    const __m256d b1c = _mm256_set1_pd(1.0 - beta1);
    const __m256d b2 = _mm256_set1_pd(beta2);
    const __m256d b2c = _mm256_set1_pd(1.0 - beta2);
    const __m256d st = _mm256_set1_pd(step);
    const __m256d ep = _mm256_set1_pd(eps_hat);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d gv = _mm256_loadu_pd(g + i);
        __m256d mv = _mm256_add_pd(_mm256_mul_pd(b1, _mm256_loadu_pd(m + i)),
                                   _mm256_mul_pd(b1c, gv));
        __m256d vv = _mm256_add_pd(_mm256_mul_pd(b2, _mm256_loadu_pd(v + i)),
                                   _mm256_mul_pd(b2c, _mm256_mul_pd(gv, gv)));
        _mm256_storeu_pd(m + i, mv);
        _mm256_storeu_pd(v + i, vv);
        __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vv), ep);
        __m256d upd = _mm256_div_pd(_mm256_mul_pd(st, mv), denom);
        _mm256_storeu_pd(w + i, _mm256_sub_pd(_mm256_loadu_pd(w + i), upd));
    }
    for (; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * (g[i] * g[i]);
        w[i] -= step * m[i] / (std::sqrt(v[i]) + eps_hat);
    }
}

}  // namespace

bool supported() { return __builtin_cpu_supports("avx2"); }

const Kernels kernels = {matmul_nn, matmul_nt,  matmul_tn_acc, axpy,
                         scale,     relu_fwd,   relu_bwd,      adam_update};

}  // namespace nidsgnn::kern::avx2

#endif  // __x86_64__
