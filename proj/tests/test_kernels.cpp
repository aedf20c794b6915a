#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <holofourier/kernels.hpp>

#include <vector>

using hf::cplx;
namespace k = hf::kernels;

namespace {

std::vector<cplx> random_cplx(hf::Rng& rng, std::size_t n) {
    std::vector<cplx> v(n);
    for (auto& z : v) z = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    return v;
}

std::vector<double> random_real(hf::Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(-1, 1);
    return v;
}

cplx naive_weighted(const std::vector<double>& w, const std::vector<cplx>& v) {
    long double re = 0, im = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        re += w[i] * v[i].real();
        im += w[i] * v[i].imag();
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

cplx naive_dot_conj(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    long double re = 0, im = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        re += (long double)a[i].real() * b[i].real() + (long double)a[i].imag() * b[i].imag();
        im += (long double)a[i].imag() * b[i].real() - (long double)a[i].real() * b[i].imag();
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 63, 64, 257, 1000, 4097};

}  // namespace

TEST_CASE("scalar and AVX2 backends agree bitwise") {
    if (!k::avx2_available()) {
        MESSAGE("AVX2 not available; skipping equivalence");
        return;
    }
    hf::Rng rng(42);
    for (std::size_t n : kSizes) {
        auto v = random_cplx(rng, n);
        auto w = random_real(rng, n);
        auto b = random_cplx(rng, n);

        cplx s1 = k::detail::weighted_sum_scalar(w.data(), v.data(), n);
        cplx s2 = k::detail::weighted_sum_avx2(w.data(), v.data(), n);
        CHECK(s1.real() == s2.real());
        CHECK(s1.imag() == s2.imag());

        cplx d1 = k::detail::dot_conj_scalar(v.data(), b.data(), n);
        cplx d2 = k::detail::dot_conj_avx2(v.data(), b.data(), n);
        CHECK(d1.real() == d2.real());
        CHECK(d1.imag() == d2.imag());

        auto acc1 = random_cplx(rng, n);
        auto acc2 = acc1;
        cplx c(0.37, -1.21);
        k::detail::conj_scaled_accum_scalar(acc1.data(), c, v.data(), n);
        k::detail::conj_scaled_accum_avx2(acc2.data(), c, v.data(), n);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(acc1[i].real() == acc2[i].real());
            CHECK(acc1[i].imag() == acc2[i].imag());
        }
    }
}

TEST_CASE("kernels match long-double references") {
    hf::Rng rng(7);
    for (std::size_t n : kSizes) {
        if (n == 0) continue;
        auto v = random_cplx(rng, n);
        auto w = random_real(rng, n);
        auto b = random_cplx(rng, n);

        cplx ws = k::weighted_sum(w.data(), v.data(), n);
        cplx wn = naive_weighted(w, v);
        CHECK(std::abs(ws - wn) <= 1e-13 * (1.0 + std::abs(wn)));

        cplx ds = k::dot_conj(v.data(), b.data(), n);
        cplx dn = naive_dot_conj(v, b);
        CHECK(std::abs(ds - dn) <= 1e-13 * (1.0 + std::abs(dn)));
    }
}

TEST_CASE("conj_scaled_accum accumulates c * conj(x)") {
    hf::Rng rng(11);
    auto x = random_cplx(rng, 37);
    std::vector<cplx> acc(37, cplx(0.5, -0.25));
    cplx c(1.5, 2.0);
    k::conj_scaled_accum(acc.data(), c, x.data(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        cplx expect = cplx(0.5, -0.25) + c * std::conj(x[i]);
        CHECK(std::abs(acc[i] - expect) <= 1e-14);
    }
}

TEST_CASE("rank1_conj_accum forms a Gram update") {
    hf::Rng rng(13);
    std::size_t m = 9;
    auto v = random_cplx(rng, m);
    std::vector<cplx> G(m * m, cplx(0, 0));
    k::rank1_conj_accum(G.data(), v.data(), m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            CHECK(std::abs(G[i * m + j] - v[i] * std::conj(v[j])) <= 1e-14);
}

TEST_CASE("pairwise_sum is deterministic and accurate") {
    hf::Rng rng(17);
    auto v = random_cplx(rng, 10001);
    cplx a = k::pairwise_sum(v.data(), v.size());
    cplx b = k::pairwise_sum(v.data(), v.size());
    CHECK(a.real() == b.real());
    CHECK(a.imag() == b.imag());
    long double re = 0, im = 0;
    for (const auto& z : v) {
        re += z.real();
        im += z.imag();
    }
    CHECK(std::abs(a - cplx((double)re, (double)im)) <= 1e-12);
}

TEST_CASE("backend switching") {
    k::Backend initial = k::active();
    k::set_backend(k::Backend::Scalar);
    CHECK(k::active() == k::Backend::Scalar);
    if (k::avx2_available()) {
        k::set_backend(k::Backend::Avx2);
        CHECK(k::active() == k::Backend::Avx2);
    }
    k::set_backend(initial);
}
