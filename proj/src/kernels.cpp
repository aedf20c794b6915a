#include "holofourier/kernels.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <thread>

namespace hf {

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

unsigned worker_count() {
    static unsigned cached = [] {
        const char* env = std::getenv("HOLOFOURIER_THREADS");
        if (!env) return 1u;
        long v = std::strtol(env, nullptr, 10);
        if (v < 1) v = 1;
        if (v > 256) v = 256;
        return static_cast<unsigned>(v);
    }();
    return cached;
}

void parallel_blocks(std::size_t nblocks, const std::function<void(std::size_t)>& fn) {
    unsigned workers = worker_count();
    if (workers <= 1 || nblocks <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b) fn(b);
        return;
    }
    if (workers > nblocks) workers = static_cast<unsigned>(nblocks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t b = next.fetch_add(1);
                if (b >= nblocks) return;
                try {
                    fn(b);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace hf

namespace hf::kernels {

namespace detail {

cplx weighted_sum_scalar(const double* w, const cplx* v, std::size_t n) {
    double P[4] = {0, 0, 0, 0};
    double Q[4] = {0, 0, 0, 0};
    const double* x = reinterpret_cast<const double*>(v);
    std::size_t groups = n / 4;
    for (std::size_t g = 0; g < groups; ++g) {
        std::size_t i = 4 * g;
        P[0] += w[i] * x[2 * i];
        P[1] += w[i] * x[2 * i + 1];
        P[2] += w[i + 1] * x[2 * i + 2];
        P[3] += w[i + 1] * x[2 * i + 3];
        Q[0] += w[i + 2] * x[2 * i + 4];
        Q[1] += w[i + 2] * x[2 * i + 5];
        Q[2] += w[i + 3] * x[2 * i + 6];
        Q[3] += w[i + 3] * x[2 * i + 7];
    }
    double S0 = P[0] + Q[0];
    double S1 = P[1] + Q[1];
    double S2 = P[2] + Q[2];
    double S3 = P[3] + Q[3];
    double re = S0 + S2;
    double im = S1 + S3;
    for (std::size_t i = 4 * groups; i < n; ++i) {
        re += w[i] * v[i].real();
        im += w[i] * v[i].imag();
    }
    return {re, im};
}

cplx dot_conj_scalar(const cplx* a, const cplx* b, std::size_t n) {
    // t1 lanes: [ar*br, ai*bi], t2 lanes: [ar*bi, ai*br] per complex.
    double P1[4] = {0, 0, 0, 0}, Q1[4] = {0, 0, 0, 0};
    double P2[4] = {0, 0, 0, 0}, Q2[4] = {0, 0, 0, 0};
    std::size_t groups = n / 4;
    for (std::size_t g = 0; g < groups; ++g) {
        std::size_t i = 4 * g;
        for (int p = 0; p < 2; ++p) {
            const cplx& aa = a[i + p];
            const cplx& bb = b[i + p];
            P1[2 * p] += aa.real() * bb.real();
            P1[2 * p + 1] += aa.imag() * bb.imag();
            P2[2 * p] += aa.real() * bb.imag();
            P2[2 * p + 1] += aa.imag() * bb.real();
        }
        for (int p = 0; p < 2; ++p) {
            const cplx& aa = a[i + 2 + p];
            const cplx& bb = b[i + 2 + p];
            Q1[2 * p] += aa.real() * bb.real();
            Q1[2 * p + 1] += aa.imag() * bb.imag();
            Q2[2 * p] += aa.real() * bb.imag();
            Q2[2 * p + 1] += aa.imag() * bb.real();
        }
    }
    double S1[4], S2[4];
    for (int j = 0; j < 4; ++j) {
        S1[j] = P1[j] + Q1[j];
        S2[j] = P2[j] + Q2[j];
    }
    double re = (S1[0] + S1[1]) + (S1[2] + S1[3]);
    double im = (S2[1] - S2[0]) + (S2[3] - S2[2]);
    for (std::size_t i = 4 * groups; i < n; ++i) {
        re += (a[i].real() * b[i].real()) + (a[i].imag() * b[i].imag());
        im += (a[i].imag() * b[i].real()) - (a[i].real() * b[i].imag());
    }
    return {re, im};
}

void conj_scaled_accum_scalar(cplx* acc, cplx c, const cplx* x, std::size_t n) {
    const double cr = c.real();
    const double ci = c.imag();
    double* out = reinterpret_cast<double*>(acc);
    const double* in = reinterpret_cast<const double*>(x);
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = in[2 * i];
        const double xi = in[2 * i + 1];
        out[2 * i] += (ci * xi) + (cr * xr);
        out[2 * i + 1] += (ci * xr) - (cr * xi);
    }
}

}  // namespace detail

namespace {

Backend resolve_initial() {
    bool hw = detail::avx2_compiled() &&
#if defined(__x86_64__) || defined(__i386__)
              __builtin_cpu_supports("avx2");
#else
              false;
#endif
    const char* env = std::getenv("HOLOFOURIER_SIMD");
    if (env) {
        std::string s(env);
        if (s == "scalar") return Backend::Scalar;
        if (s == "avx2") return hw ? Backend::Avx2 : Backend::Scalar;
    }
    return hw ? Backend::Avx2 : Backend::Scalar;
}

Backend& backend_ref() {
    static Backend b = resolve_initial();
    return b;
}

}  // namespace

bool avx2_available() {
    return detail::avx2_compiled() &&
#if defined(__x86_64__) || defined(__i386__)
           __builtin_cpu_supports("avx2");
#else
           false;
#endif
}

Backend active() { return backend_ref(); }

void set_backend(Backend b) {
    if (b == Backend::Avx2 && !avx2_available())
        throw input_error("AVX2 backend requested but not available on this CPU/build");
    backend_ref() = b;
}

cplx weighted_sum(const double* w, const cplx* v, std::size_t n) {
    if (backend_ref() == Backend::Avx2) return detail::weighted_sum_avx2(w, v, n);
    return detail::weighted_sum_scalar(w, v, n);
}

cplx dot_conj(const cplx* a, const cplx* b, std::size_t n) {
    if (backend_ref() == Backend::Avx2) return detail::dot_conj_avx2(a, b, n);
    return detail::dot_conj_scalar(a, b, n);
}

void conj_scaled_accum(cplx* acc, cplx c, const cplx* x, std::size_t n) {
    if (backend_ref() == Backend::Avx2) return detail::conj_scaled_accum_avx2(acc, c, x, n);
    return detail::conj_scaled_accum_scalar(acc, c, x, n);
}

void rank1_conj_accum(cplx* G, const cplx* v, std::size_t m) {
    for (std::size_t i = 0; i < m; ++i) conj_scaled_accum(G + i * m, v[i], v, m);
}

cplx pairwise_sum(const cplx* x, std::size_t n) {
    if (n == 0) return {0.0, 0.0};
    if (n <= 16) {
        cplx s = x[0];
        for (std::size_t i = 1; i < n; ++i) s += x[i];
        return s;
    }
    std::size_t m = n / 2;
    return pairwise_sum(x, m) + pairwise_sum(x + m, n - m);
}

}  // namespace hf::kernels
