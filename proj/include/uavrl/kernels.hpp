#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

// Dense-math kernels behind the network code. Every entry point has a plain
// scalar reference implementation plus SIMD variants (AVX2+FMA, AVX-512)
// selected once at startup from CPUID, overridable with UAVRL_KERNELS=
// {scalar|avx2|avx512}. All variants are equivalence-tested against the
// scalar reference. Matrices are row-major with an explicit row stride (ld).
//
// Rounding contract: the elementwise kernels (relu, relu_grad, lerp, adam,
// axpy) perform the same IEEE operation sequence in every variant and match
// the scalar reference bit for bit. The gemm/dot kernels use FMA and multiple
// accumulators in the SIMD variants, so they match only to rounding error.

namespace uavrl::kernels {

struct Ops {
    const char* name;

    // C[M x N] += A[M x K] * B[N x K]^T
    void (*gemm_nt)(std::size_t m, std::size_t n, std::size_t k,
                    const double* a, std::size_t lda,
                    const double* b, std::size_t ldb,
                    double* c, std::size_t ldc);

    // C[M x N] += A[M x K] * B[K x N]
    void (*gemm_nn)(std::size_t m, std::size_t n, std::size_t k,
                    const double* a, std::size_t lda,
                    const double* b, std::size_t ldb,
                    double* c, std::size_t ldc);

    // C[M x N] += A[K x M]^T * B[K x N]
    void (*gemm_tn)(std::size_t m, std::size_t n, std::size_t k,
                    const double* a, std::size_t lda,
                    const double* b, std::size_t ldb,
                    double* c, std::size_t ldc);

    double (*dot)(std::size_t n, const double* x, const double* y);

    // y += a * x
    void (*axpy)(std::size_t n, double a, const double* x, double* y);

    // out[i] = max(z[i], 0)
    void (*relu)(std::size_t n, const double* z, double* out);

    // g[i] *= (z[i] > 0)
    void (*relu_grad)(std::size_t n, const double* z, double* g);

    // target[i] = t * online[i] + (1 - t) * target[i]
    void (*lerp)(std::size_t n, double t, const double* online, double* target);

    // Adaptive-moment update with decoupled-from-caller bias correction:
    //   g' = g + l2 * w
    //   m  = b1 * m + (1 - b1) * g'
    //   v  = b2 * v + (1 - b2) * g'^2
    //   w -= lr * (m * bc1) / (sqrt(v * bc2) + eps)
    // bc1 = 1/(1 - b1^t), bc2 = 1/(1 - b2^t) are precomputed by the caller.
    void (*adam)(std::size_t n, double* w, const double* g, double* m, double* v,
                 double lr, double b1, double b2, double eps, double l2,
                 double bc1, double bc2);
};

const Ops& scalar();

bool cpu_has_avx2();
bool cpu_has_avx512();

// Variants compiled into this binary and usable on this CPU, scalar first.
std::vector<const Ops*> available();

// nullptr when the name is unknown, not compiled in, or unsupported here.
const Ops* find(std::string_view name);

// Selected once (env override, else widest supported variant).
const Ops& active();

// Replace the active variant. Not thread-safe; intended for process startup
// and tests. Throws ConfigError for names that find() rejects.
void force(std::string_view name);

} // namespace uavrl::kernels
