#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "uavrl/errors.hpp"
#include "uavrl/kernels.hpp"
#include "uavrl/rng.hpp"

using namespace uavrl;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng, double lo = -1.0, double hi = 1.0) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

bool close(double a, double b, double atol = 1e-12, double rtol = 1e-12) {
    return std::abs(a - b) <= atol + rtol * std::max(std::abs(a), std::abs(b));
}

struct GemmCase {
    std::size_t m, n, k;
};

const GemmCase kCases[] = {
    {1, 1, 1}, {1, 4, 8}, {2, 3, 5}, {5, 7, 9}, {8, 8, 8},
    {17, 13, 31}, {3, 1, 400}, {128, 400, 12}, {64, 300, 400}, {33, 50, 129},
};

} // namespace

TEST_CASE("scalar variant is always available and listed first") {
    const auto all = kernels::available();
    REQUIRE(!all.empty());
    CHECK(std::string(all.front()->name) == "scalar");
    CHECK(kernels::find("scalar") == &kernels::scalar());
    CHECK(kernels::find("definitely-not-a-kernel") == nullptr);
}

TEST_CASE("gemm variants match the scalar reference") {
    const auto& ref = kernels::scalar();
    for (const kernels::Ops* ops : kernels::available()) {
        if (ops == &ref) continue;
        CAPTURE(ops->name);
        Rng rng(42);
        for (const auto& c : kCases) {
            CAPTURE(c.m);
            CAPTURE(c.n);
            CAPTURE(c.k);
            const auto a_nt = random_vec(c.m * c.k, rng);
            const auto b_nt = random_vec(c.n * c.k, rng);
            auto c0 = random_vec(c.m * c.n, rng);
            auto c1 = c0;
            ref.gemm_nt(c.m, c.n, c.k, a_nt.data(), c.k, b_nt.data(), c.k, c0.data(), c.n);
            ops->gemm_nt(c.m, c.n, c.k, a_nt.data(), c.k, b_nt.data(), c.k, c1.data(), c.n);
            for (std::size_t i = 0; i < c0.size(); ++i) CHECK(close(c0[i], c1[i]));

            const auto a_nn = random_vec(c.m * c.k, rng);
            const auto b_nn = random_vec(c.k * c.n, rng);
            c0 = random_vec(c.m * c.n, rng);
            c1 = c0;
            ref.gemm_nn(c.m, c.n, c.k, a_nn.data(), c.k, b_nn.data(), c.n, c0.data(), c.n);
            ops->gemm_nn(c.m, c.n, c.k, a_nn.data(), c.k, b_nn.data(), c.n, c1.data(), c.n);
            for (std::size_t i = 0; i < c0.size(); ++i) CHECK(close(c0[i], c1[i]));

            const auto a_tn = random_vec(c.k * c.m, rng);
            const auto b_tn = random_vec(c.k * c.n, rng);
            c0 = random_vec(c.m * c.n, rng);
            c1 = c0;
            ref.gemm_tn(c.m, c.n, c.k, a_tn.data(), c.m, b_tn.data(), c.n, c0.data(), c.n);
            ops->gemm_tn(c.m, c.n, c.k, a_tn.data(), c.m, b_tn.data(), c.n, c1.data(), c.n);
            for (std::size_t i = 0; i < c0.size(); ++i) CHECK(close(c0[i], c1[i]));
        }
    }
}

TEST_CASE("gemm_nt rows do not depend on the batch size") {
    // Forward passes rely on this: row i of a batched product equals the
    // single-row product, bit for bit.
    Rng rng(7);
    const std::size_t m = 6, n = 37, k = 129;
    const auto a = random_vec(m * k, rng);
    const auto b = random_vec(n * k, rng);
    for (const kernels::Ops* ops : kernels::available()) {
        CAPTURE(ops->name);
        std::vector<double> full(m * n, 0.0);
        ops->gemm_nt(m, n, k, a.data(), k, b.data(), k, full.data(), n);
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> single(n, 0.0);
            ops->gemm_nt(1, n, k, a.data() + i * k, k, b.data(), k, single.data(), n);
            for (std::size_t j = 0; j < n; ++j) CHECK(full[i * n + j] == single[j]);
        }
    }
}

TEST_CASE("dot and axpy match the scalar reference") {
    const auto& ref = kernels::scalar();
    Rng rng(11);
    for (std::size_t n : {1u, 3u, 4u, 15u, 16u, 17u, 64u, 401u}) {
        const auto x = random_vec(n, rng);
        const auto y = random_vec(n, rng);
        for (const kernels::Ops* ops : kernels::available()) {
            CAPTURE(ops->name);
            CAPTURE(n);
            CHECK(close(ops->dot(n, x.data(), y.data()), ref.dot(n, x.data(), y.data())));
            auto y0 = y;
            auto y1 = y;
            ref.axpy(n, 0.37, x.data(), y0.data());
            ops->axpy(n, 0.37, x.data(), y1.data());
            for (std::size_t i = 0; i < n; ++i) CHECK(y0[i] == y1[i]);
        }
    }
}

TEST_CASE("elementwise kernels are bit-identical across variants") {
    const auto& ref = kernels::scalar();
    Rng rng(13);
    for (std::size_t n : {1u, 5u, 8u, 33u, 1000u}) {
        auto z = random_vec(n, rng, -2.0, 2.0);
        z[0] = 0.0; // boundary: relu'(0) treated as 0
        if (n > 2) z[2] = -0.0;
        const auto g_in = random_vec(n, rng);
        const auto online = random_vec(n, rng);
        const auto target = random_vec(n, rng);
        const auto grad = random_vec(n, rng, -0.5, 0.5);
        const auto w_init = random_vec(n, rng);

        for (const kernels::Ops* ops : kernels::available()) {
            CAPTURE(ops->name);
            CAPTURE(n);

            std::vector<double> r0(n), r1(n);
            ref.relu(n, z.data(), r0.data());
            ops->relu(n, z.data(), r1.data());
            for (std::size_t i = 0; i < n; ++i) CHECK(r0[i] == r1[i]);

            auto g0 = g_in, g1 = g_in;
            ref.relu_grad(n, z.data(), g0.data());
            ops->relu_grad(n, z.data(), g1.data());
            for (std::size_t i = 0; i < n; ++i) CHECK(g0[i] == g1[i]);

            auto t0 = target, t1 = target;
            ref.lerp(n, 0.001, online.data(), t0.data());
            ops->lerp(n, 0.001, online.data(), t1.data());
            for (std::size_t i = 0; i < n; ++i) CHECK(t0[i] == t1[i]);

            auto w0 = w_init, w1 = w_init;
            std::vector<double> m0(n, 0.0), v0(n, 0.0), m1(n, 0.0), v1(n, 0.0);
            // Two consecutive steps exercise the moment recursion.
            for (std::uint64_t t = 1; t <= 2; ++t) {
                const double bc1 = 1.0 / (1.0 - std::pow(0.9, double(t)));
                const double bc2 = 1.0 / (1.0 - std::pow(0.999, double(t)));
                ref.adam(n, w0.data(), grad.data(), m0.data(), v0.data(),
                         1e-3, 0.9, 0.999, 1e-8, 1e-4, bc1, bc2);
                ops->adam(n, w1.data(), grad.data(), m1.data(), v1.data(),
                          1e-3, 0.9, 0.999, 1e-8, 1e-4, bc1, bc2);
            }
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(w0[i] == w1[i]);
                CHECK(m0[i] == m1[i]);
                CHECK(v0[i] == v1[i]);
            }
        }
    }
}

TEST_CASE("force selects a variant and rejects unknown names") {
    const std::string original = kernels::active().name;
    kernels::force("scalar");
    CHECK(std::string(kernels::active().name) == "scalar");
    CHECK_THROWS_AS(kernels::force("no-such-variant"), ConfigError);
    kernels::force(original);
    CHECK(std::string(kernels::active().name) == original);
}
