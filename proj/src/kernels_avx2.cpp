#include "uavrl/kernels.hpp"

#include <immintrin.h>

#include <cmath>

// AVX2 + FMA variant (4-wide doubles). The gemm kernels accumulate over K in
// a fixed order that does not depend on M, so row i of a batched product is
// bit-identical to the same product run with a single row. Elementwise
// kernels mirror the scalar operation sequence exactly (no FMA contraction).

namespace uavrl::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

// K-major dot with one vector accumulator; every gemm_nt cell uses this
// exact accumulation order.
inline double dot1(std::size_t k, const double* x, const double* y) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t p = 0;
    for (; p + 4 <= k; p += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + p), _mm256_loadu_pd(y + p), acc);
    double s = hsum(acc);
    for (; p < k; ++p) s += x[p] * y[p];
    return s;
}

void gemm_nt_avx2(std::size_t m, std::size_t n, std::size_t k,
                  const double* a, std::size_t lda,
                  const double* b, std::size_t ldb,
                  double* c, std::size_t ldc) {
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const double* b0 = b + (j + 0) * ldb;
        const double* b1 = b + (j + 1) * ldb;
        const double* b2 = b + (j + 2) * ldb;
        const double* b3 = b + (j + 3) * ldb;
        std::size_t i = 0;
        for (; i + 2 <= m; i += 2) {
            const double* a0 = a + (i + 0) * lda;
            const double* a1 = a + (i + 1) * lda;
            __m256d c00 = _mm256_setzero_pd(), c01 = _mm256_setzero_pd();
            __m256d c02 = _mm256_setzero_pd(), c03 = _mm256_setzero_pd();
            __m256d c10 = _mm256_setzero_pd(), c11 = _mm256_setzero_pd();
            __m256d c12 = _mm256_setzero_pd(), c13 = _mm256_setzero_pd();
            std::size_t p = 0;
            for (; p + 4 <= k; p += 4) {
                const __m256d va0 = _mm256_loadu_pd(a0 + p);
                const __m256d va1 = _mm256_loadu_pd(a1 + p);
                __m256d vb;
                vb = _mm256_loadu_pd(b0 + p);
                c00 = _mm256_fmadd_pd(va0, vb, c00);
                c10 = _mm256_fmadd_pd(va1, vb, c10);
                vb = _mm256_loadu_pd(b1 + p);
                c01 = _mm256_fmadd_pd(va0, vb, c01);
                c11 = _mm256_fmadd_pd(va1, vb, c11);
                vb = _mm256_loadu_pd(b2 + p);
                c02 = _mm256_fmadd_pd(va0, vb, c02);
                c12 = _mm256_fmadd_pd(va1, vb, c12);
                vb = _mm256_loadu_pd(b3 + p);
                c03 = _mm256_fmadd_pd(va0, vb, c03);
                c13 = _mm256_fmadd_pd(va1, vb, c13);
            }
            double s00 = hsum(c00), s01 = hsum(c01), s02 = hsum(c02), s03 = hsum(c03);
            double s10 = hsum(c10), s11 = hsum(c11), s12 = hsum(c12), s13 = hsum(c13);
            for (; p < k; ++p) {
                s00 += a0[p] * b0[p]; s01 += a0[p] * b1[p];
                s02 += a0[p] * b2[p]; s03 += a0[p] * b3[p];
                s10 += a1[p] * b0[p]; s11 += a1[p] * b1[p];
                s12 += a1[p] * b2[p]; s13 += a1[p] * b3[p];
            }
            double* ci0 = c + (i + 0) * ldc + j;
            double* ci1 = c + (i + 1) * ldc + j;
            ci0[0] += s00; ci0[1] += s01; ci0[2] += s02; ci0[3] += s03;
            ci1[0] += s10; ci1[1] += s11; ci1[2] += s12; ci1[3] += s13;
        }
        if (i < m) {
            const double* a0 = a + i * lda;
            double* ci = c + i * ldc + j;
            ci[0] += dot1(k, a0, b0);
            ci[1] += dot1(k, a0, b1);
            ci[2] += dot1(k, a0, b2);
            ci[3] += dot1(k, a0, b3);
        }
    }
    for (; j < n; ++j) {
        const double* bj = b + j * ldb;
        for (std::size_t i = 0; i < m; ++i)
            c[i * ldc + j] += dot1(k, a + i * lda, bj);
    }
}

void gemm_nn_avx2(std::size_t m, std::size_t n, std::size_t k,
                  const double* a, std::size_t lda,
                  const double* b, std::size_t ldb,
                  double* c, std::size_t ldc) {
    for (std::size_t i = 0; i < m; ++i) {
        double* ci = c + i * ldc;
        const double* ai = a + i * lda;
        std::size_t p = 0;
        for (; p + 4 <= k; p += 4) {
            const __m256d va0 = _mm256_broadcast_sd(ai + p + 0);
            const __m256d va1 = _mm256_broadcast_sd(ai + p + 1);
            const __m256d va2 = _mm256_broadcast_sd(ai + p + 2);
            const __m256d va3 = _mm256_broadcast_sd(ai + p + 3);
            const double* b0 = b + (p + 0) * ldb;
            const double* b1 = b + (p + 1) * ldb;
            const double* b2 = b + (p + 2) * ldb;
            const double* b3 = b + (p + 3) * ldb;
            std::size_t jj = 0;
            for (; jj + 4 <= n; jj += 4) {
                __m256d cc = _mm256_loadu_pd(ci + jj);
                cc = _mm256_fmadd_pd(va0, _mm256_loadu_pd(b0 + jj), cc);
                cc = _mm256_fmadd_pd(va1, _mm256_loadu_pd(b1 + jj), cc);
                cc = _mm256_fmadd_pd(va2, _mm256_loadu_pd(b2 + jj), cc);
                cc = _mm256_fmadd_pd(va3, _mm256_loadu_pd(b3 + jj), cc);
                _mm256_storeu_pd(ci + jj, cc);
            }
            for (; jj < n; ++jj) {
                double s = ci[jj];
                s = std::fma(ai[p + 0], b0[jj], s);
                s = std::fma(ai[p + 1], b1[jj], s);
                s = std::fma(ai[p + 2], b2[jj], s);
                s = std::fma(ai[p + 3], b3[jj], s);
                ci[jj] = s;
            }
        }
        for (; p < k; ++p) {
            const __m256d va = _mm256_broadcast_sd(ai + p);
            const double* bp = b + p * ldb;
            std::size_t jj = 0;
            for (; jj + 4 <= n; jj += 4) {
                __m256d cc = _mm256_loadu_pd(ci + jj);
                cc = _mm256_fmadd_pd(va, _mm256_loadu_pd(bp + jj), cc);
                _mm256_storeu_pd(ci + jj, cc);
            }
            for (; jj < n; ++jj) ci[jj] = std::fma(ai[p], bp[jj], ci[jj]);
        }
    }
}

void gemm_tn_avx2(std::size_t m, std::size_t n, std::size_t k,
                  const double* a, std::size_t lda,
                  const double* b, std::size_t ldb,
                  double* c, std::size_t ldc) {
    constexpr std::size_t kBlock = 8; // B rows kept hot in L1 per pass over C
    for (std::size_t p0 = 0; p0 < k; p0 += kBlock) {
        const std::size_t pb = (k - p0 < kBlock) ? (k - p0) : kBlock;
        for (std::size_t i = 0; i < m; ++i) {
            __m256d va[kBlock];
            for (std::size_t t = 0; t < pb; ++t)
                va[t] = _mm256_broadcast_sd(a + (p0 + t) * lda + i);
            double* ci = c + i * ldc;
            std::size_t jj = 0;
            for (; jj + 4 <= n; jj += 4) {
                __m256d cc = _mm256_loadu_pd(ci + jj);
                for (std::size_t t = 0; t < pb; ++t)
                    cc = _mm256_fmadd_pd(va[t], _mm256_loadu_pd(b + (p0 + t) * ldb + jj), cc);
                _mm256_storeu_pd(ci + jj, cc);
            }
            for (; jj < n; ++jj) {
                double s = ci[jj];
                for (std::size_t t = 0; t < pb; ++t)
                    s = std::fma(a[(p0 + t) * lda + i], b[(p0 + t) * ldb + jj], s);
                ci[jj] = s;
            }
        }
    }
}

double dot_avx2(std::size_t n, const double* x, const double* y) {
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
        a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
        a2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 8), _mm256_loadu_pd(y + i + 8), a2);
        a3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 12), _mm256_loadu_pd(y + i + 12), a3);
    }
    for (; i + 4 <= n; i += 4)
        a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    double s = hsum(_mm256_add_pd(_mm256_add_pd(a0, a1), _mm256_add_pd(a2, a3)));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_avx2(std::size_t n, double a, const double* x, double* y) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void relu_avx2(std::size_t n, const double* z, double* out) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_max_pd(_mm256_loadu_pd(z + i), zero));
    for (; i < n; ++i) out[i] = z[i] > 0.0 ? z[i] : 0.0;
}

void relu_grad_avx2(std::size_t n, const double* z, double* g) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(z + i), zero, _CMP_GT_OQ);
        _mm256_storeu_pd(g + i, _mm256_and_pd(_mm256_loadu_pd(g + i), mask));
    }
    for (; i < n; ++i)
        if (!(z[i] > 0.0)) g[i] = 0.0;
}

void lerp_avx2(std::size_t n, double t, const double* online, double* target) {
    const __m256d vt = _mm256_set1_pd(t);
    const __m256d vk = _mm256_set1_pd(1.0 - t);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d blended = _mm256_add_pd(
            _mm256_mul_pd(vt, _mm256_loadu_pd(online + i)),
            _mm256_mul_pd(vk, _mm256_loadu_pd(target + i)));
        _mm256_storeu_pd(target + i, blended);
    }
    const double keep = 1.0 - t;
    for (; i < n; ++i) target[i] = t * online[i] + keep * target[i];
}

void adam_avx2(std::size_t n, double* w, const double* g, double* m, double* v,
               double lr, double b1, double b2, double eps, double l2,
               double bc1, double bc2) {
    const __m256d vlr = _mm256_set1_pd(lr);
    const __m256d vb1 = _mm256_set1_pd(b1), vnb1 = _mm256_set1_pd(1.0 - b1);
    const __m256d vb2 = _mm256_set1_pd(b2), vnb2 = _mm256_set1_pd(1.0 - b2);
    const __m256d veps = _mm256_set1_pd(eps), vl2 = _mm256_set1_pd(l2);
    const __m256d vbc1 = _mm256_set1_pd(bc1), vbc2 = _mm256_set1_pd(bc2);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d wi = _mm256_loadu_pd(w + i);
        const __m256d gi = _mm256_add_pd(_mm256_loadu_pd(g + i), _mm256_mul_pd(vl2, wi));
        const __m256d mi = _mm256_add_pd(_mm256_mul_pd(vb1, _mm256_loadu_pd(m + i)),
                                         _mm256_mul_pd(vnb1, gi));
        const __m256d vi = _mm256_add_pd(_mm256_mul_pd(vb2, _mm256_loadu_pd(v + i)),
                                         _mm256_mul_pd(vnb2, _mm256_mul_pd(gi, gi)));
        _mm256_storeu_pd(m + i, mi);
        _mm256_storeu_pd(v + i, vi);
        const __m256d num = _mm256_mul_pd(vlr, _mm256_mul_pd(mi, vbc1));
        const __m256d den = _mm256_add_pd(_mm256_sqrt_pd(_mm256_mul_pd(vi, vbc2)), veps);
        _mm256_storeu_pd(w + i, _mm256_sub_pd(wi, _mm256_div_pd(num, den)));
    }
    for (; i < n; ++i) {
        const double gi = g[i] + l2 * w[i];
        m[i] = b1 * m[i] + (1.0 - b1) * gi;
        v[i] = b2 * v[i] + (1.0 - b2) * (gi * gi);
        w[i] -= lr * (m[i] * bc1) / (std::sqrt(v[i] * bc2) + eps);
    }
}

} // namespace

const Ops& avx2_ops() {
    static const Ops ops{
        "avx2",
        &gemm_nt_avx2, &gemm_nn_avx2, &gemm_tn_avx2,
        &dot_avx2, &axpy_avx2,
        &relu_avx2, &relu_grad_avx2,
        &lerp_avx2, &adam_avx2,
    };
    return ops;
}

} // namespace uavrl::kernels
