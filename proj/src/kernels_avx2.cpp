#include "holofourier/kernels.hpp"

#ifdef HOLOFOURIER_BUILD_AVX2
#include <immintrin.h>
#endif

namespace hf::kernels::detail {

#ifdef HOLOFOURIER_BUILD_AVX2

bool avx2_compiled() { return true; }

namespace {

// Lane layout: one __m256d holds two complexes as [re0, im0, re1, im1].

inline __m256d dup_weights(const double* w) {
    // [w0, w1] -> [w0, w0, w1, w1]
    __m256d t = _mm256_castpd128_pd256(_mm_loadu_pd(w));
    return _mm256_permute4x64_pd(t, 0x50);
}

inline cplx tail_weighted(double re, double im, const double* w, const cplx* v,
                          std::size_t from, std::size_t n) {
    for (std::size_t i = from; i < n; ++i) {
        re += w[i] * v[i].real();
        im += w[i] * v[i].imag();
    }
    return {re, im};
}

}  // namespace

cplx weighted_sum_avx2(const double* w, const cplx* v, std::size_t n) {
    const double* x = reinterpret_cast<const double*>(v);
    __m256d P = _mm256_setzero_pd();
    __m256d Q = _mm256_setzero_pd();
    std::size_t groups = n / 4;
    for (std::size_t g = 0; g < groups; ++g) {
        std::size_t i = 4 * g;
        P = _mm256_add_pd(P, _mm256_mul_pd(dup_weights(w + i), _mm256_loadu_pd(x + 2 * i)));
        Q = _mm256_add_pd(Q, _mm256_mul_pd(dup_weights(w + i + 2), _mm256_loadu_pd(x + 2 * i + 4)));
    }
    alignas(32) double S[4];
    _mm256_store_pd(S, _mm256_add_pd(P, Q));
    return tail_weighted(S[0] + S[2], S[1] + S[3], w, v, 4 * groups, n);
}

cplx dot_conj_avx2(const cplx* a, const cplx* b, std::size_t n) {
    const double* ax = reinterpret_cast<const double*>(a);
    const double* bx = reinterpret_cast<const double*>(b);
    __m256d P1 = _mm256_setzero_pd(), Q1 = _mm256_setzero_pd();
    __m256d P2 = _mm256_setzero_pd(), Q2 = _mm256_setzero_pd();
    std::size_t groups = n / 4;
    for (std::size_t g = 0; g < groups; ++g) {
        std::size_t i = 8 * g;
        __m256d aP = _mm256_loadu_pd(ax + i);
        __m256d bP = _mm256_loadu_pd(bx + i);
        __m256d aQ = _mm256_loadu_pd(ax + i + 4);
        __m256d bQ = _mm256_loadu_pd(bx + i + 4);
        __m256d bPs = _mm256_permute_pd(bP, 0x5);  // [bi0, br0, bi1, br1]
        __m256d bQs = _mm256_permute_pd(bQ, 0x5);
        P1 = _mm256_add_pd(P1, _mm256_mul_pd(aP, bP));
        P2 = _mm256_add_pd(P2, _mm256_mul_pd(aP, bPs));
        Q1 = _mm256_add_pd(Q1, _mm256_mul_pd(aQ, bQ));
        Q2 = _mm256_add_pd(Q2, _mm256_mul_pd(aQ, bQs));
    }
    alignas(32) double S1[4], S2[4];
    _mm256_store_pd(S1, _mm256_add_pd(P1, Q1));
    _mm256_store_pd(S2, _mm256_add_pd(P2, Q2));
    double re = (S1[0] + S1[1]) + (S1[2] + S1[3]);
    double im = (S2[1] - S2[0]) + (S2[3] - S2[2]);
    for (std::size_t i = 4 * groups; i < n; ++i) {
        re += (a[i].real() * b[i].real()) + (a[i].imag() * b[i].imag());
        im += (a[i].imag() * b[i].real()) - (a[i].real() * b[i].imag());
    }
    return {re, im};
}

void conj_scaled_accum_avx2(cplx* acc, cplx c, const cplx* x, std::size_t n) {
    double* out = reinterpret_cast<double*>(acc);
    const double* in = reinterpret_cast<const double*>(x);
    const __m256d cre = _mm256_set1_pd(c.real());
    const __m256d cim = _mm256_set1_pd(c.imag());
    const __m256d signflip = _mm256_set1_pd(-0.0);
    std::size_t pairs = n / 2;
    for (std::size_t p = 0; p < pairs; ++p) {
        std::size_t i = 4 * p;
        __m256d xv = _mm256_loadu_pd(in + i);
        __m256d xs = _mm256_permute_pd(xv, 0x5);            // [xi, xr, ...]
        __m256d t1 = _mm256_mul_pd(xv, cre);                // [cr*xr, cr*xi]
        __m256d t2 = _mm256_mul_pd(xs, cim);                // [ci*xi, ci*xr]
        __m256d nt1 = _mm256_xor_pd(t1, signflip);          // [-cr*xr, -cr*xi]
        // addsub: [t2_0 - nt1_0, t2_1 + nt1_1] = [(ci*xi)+(cr*xr), (ci*xr)-(cr*xi)]
        __m256d s = _mm256_addsub_pd(t2, nt1);
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i), s));
    }
    const double cr = c.real();
    const double ci = c.imag();
    for (std::size_t i = 2 * pairs; i < n; ++i) {
        const double xr = in[2 * i];
        const double xi = in[2 * i + 1];
        out[2 * i] += (ci * xi) + (cr * xr);
        out[2 * i + 1] += (ci * xr) - (cr * xi);
    }
}

#else

bool avx2_compiled() { return false; }

cplx weighted_sum_avx2(const double* w, const cplx* v, std::size_t n) {
    return weighted_sum_scalar(w, v, n);
}
cplx dot_conj_avx2(const cplx* a, const cplx* b, std::size_t n) {
    return dot_conj_scalar(a, b, n);
}
void conj_scaled_accum_avx2(cplx* acc, cplx c, const cplx* x, std::size_t n) {
    conj_scaled_accum_scalar(acc, c, x, n);
}

#endif

}  // namespace hf::kernels::detail
