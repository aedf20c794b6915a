#pragma once

#include "holofourier/common.hpp"

#include <cstddef>

namespace hf::kernels {

// Inner loops of the quadrature and transform sweeps. Each kernel has a
// scalar reference implementation and an AVX2 variant selected at runtime;
// both follow the same canonical evaluation order, element for element, so
// the two backends produce bitwise-identical results (the build disables
// FP contraction and the AVX2 code uses no FMA).
//
// Canonical order for the reductions, in groups of four complexes:
//   - two 4-wide real-lane accumulators P (complexes 0,1 of each group) and
//     Q (complexes 2,3) collect elementwise products;
//   - after the loop S = P + Q, then the real part combines lanes as
//     (S0 + S2) and the imaginary part as (S1 + S3) (weighted_sum), or the
//     documented per-kernel lane combination below;
//   - leftover elements (n mod 4) are folded in sequentially afterwards.

enum class Backend { Scalar, Avx2 };

/// Active backend. Resolved once from the CPU and HOLOFOURIER_SIMD
/// (auto|scalar|avx2); avx2 silently degrades to scalar when unsupported.
Backend active();

/// Force a backend (tests). Requesting Avx2 without CPU support throws.
void set_backend(Backend b);

bool avx2_available();

/// sum_i w[i] * v[i]  (real weights, complex values)
cplx weighted_sum(const double* w, const cplx* v, std::size_t n);

/// sum_i a[i] * conj(b[i])
cplx dot_conj(const cplx* a, const cplx* b, std::size_t n);

/// acc[i] += c * conj(x[i]), elementwise
void conj_scaled_accum(cplx* acc, cplx c, const cplx* x, std::size_t n);

/// G[i*m + j] += v[i] * conj(v[j])  (row-major Gram accumulation)
void rank1_conj_accum(cplx* G, const cplx* v, std::size_t m);

/// Fixed-shape tree sum: halves recursively, sequential below 16 elements.
/// Backend-independent; used to combine per-block partial sums.
cplx pairwise_sum(const cplx* x, std::size_t n);

namespace detail {
// Scalar reference implementations (always available; used by tests to pin
// the canonical semantics regardless of the active backend).
cplx weighted_sum_scalar(const double* w, const cplx* v, std::size_t n);
cplx dot_conj_scalar(const cplx* a, const cplx* b, std::size_t n);
void conj_scaled_accum_scalar(cplx* acc, cplx c, const cplx* x, std::size_t n);

// AVX2 variants; only callable when avx2_available().
cplx weighted_sum_avx2(const double* w, const cplx* v, std::size_t n);
cplx dot_conj_avx2(const cplx* a, const cplx* b, std::size_t n);
void conj_scaled_accum_avx2(cplx* acc, cplx c, const cplx* x, std::size_t n);
bool avx2_compiled();
}  // namespace detail

}  // namespace hf::kernels
