#include "uavrl/kernels.hpp"

#include <cmath>

// Reference implementations. Deliberately plain loops: these define the
// semantics the SIMD variants are tested against.

namespace uavrl::kernels {
namespace {

void gemm_nt_scalar(std::size_t m, std::size_t n, std::size_t k,
                    const double* a, std::size_t lda,
                    const double* b, std::size_t ldb,
                    double* c, std::size_t ldc) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a + i * lda;
        for (std::size_t j = 0; j < n; ++j) {
            const double* bj = b + j * ldb;
            double acc = 0.0;
            for (std::size_t p = 0; p < k; ++p) acc += ai[p] * bj[p];
            c[i * ldc + j] += acc;
        }
    }
}

void gemm_nn_scalar(std::size_t m, std::size_t n, std::size_t k,
                    const double* a, std::size_t lda,
                    const double* b, std::size_t ldb,
                    double* c, std::size_t ldc) {
    for (std::size_t i = 0; i < m; ++i) {
        double* ci = c + i * ldc;
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = a[i * lda + p];
            const double* bp = b + p * ldb;
            for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
        }
    }
}

void gemm_tn_scalar(std::size_t m, std::size_t n, std::size_t k,
                    const double* a, std::size_t lda,
                    const double* b, std::size_t ldb,
                    double* c, std::size_t ldc) {
    for (std::size_t p = 0; p < k; ++p) {
        const double* ap = a + p * lda;
        const double* bp = b + p * ldb;
        for (std::size_t i = 0; i < m; ++i) {
            const double api = ap[i];
            double* ci = c + i * ldc;
            for (std::size_t j = 0; j < n; ++j) ci[j] += api * bp[j];
        }
    }
}

double dot_scalar(std::size_t n, const double* x, const double* y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_scalar(std::size_t n, double a, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void relu_scalar(std::size_t n, const double* z, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = z[i] > 0.0 ? z[i] : 0.0;
}

void relu_grad_scalar(std::size_t n, const double* z, double* g) {
    for (std::size_t i = 0; i < n; ++i)
        if (!(z[i] > 0.0)) g[i] = 0.0;
}

void lerp_scalar(std::size_t n, double t, const double* online, double* target) {
    const double keep = 1.0 - t;
    for (std::size_t i = 0; i < n; ++i) target[i] = t * online[i] + keep * target[i];
}

void adam_scalar(std::size_t n, double* w, const double* g, double* m, double* v,
                 double lr, double b1, double b2, double eps, double l2,
                 double bc1, double bc2) {
    for (std::size_t i = 0; i < n; ++i) {
        const double gi = g[i] + l2 * w[i];
        m[i] = b1 * m[i] + (1.0 - b1) * gi;
        v[i] = b2 * v[i] + (1.0 - b2) * (gi * gi);
        w[i] -= lr * (m[i] * bc1) / (std::sqrt(v[i] * bc2) + eps);
    }
}

} // namespace

const Ops& scalar() {
    static const Ops ops{
        "scalar",
        &gemm_nt_scalar, &gemm_nn_scalar, &gemm_tn_scalar,
        &dot_scalar, &axpy_scalar,
        &relu_scalar, &relu_grad_scalar,
        &lerp_scalar, &adam_scalar,
    };
    return ops;
}

} // namespace uavrl::kernels
