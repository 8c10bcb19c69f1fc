// Copyright (c) 2026 vqlab contributors
// SPDX-License-Identifier: Apache-2.0
#include "vqlab/kernels.hpp"

#ifdef VQLAB_HAVE_AVX2

#include <immintrin.h>

#include <bit>

namespace vqlab::kern {
namespace {

// A __m256d holds two complex doubles: [re0, im0, re1, im1].

inline std::size_t insert_zero(std::size_t v, int b) {
  const std::size_t low = (std::size_t(1) << b) - 1;
  return ((v & ~low) << 1) | (v & low);
}

// Both lanes multiplied by the same complex scalar, split into broadcast
// real (br) and imaginary (bi) parts.
inline __m256d cmul_bcast(__m256d a, __m256d br, __m256d bi) {
  const __m256d sw = _mm256_permute_pd(a, 0b0101);
  return _mm256_fmaddsub_pd(a, br, _mm256_mul_pd(sw, bi));
}

struct BCplx {
  __m256d re, im;
};

inline BCplx bcast(cplx v) {
  return {_mm256_set1_pd(v.real()), _mm256_set1_pd(v.imag())};
}

void apply1q_avx2(cplx* psi, std::size_t dim, int bit, const cplx* u) {
  double* d = reinterpret_cast<double*>(psi);
  const BCplx u00 = bcast(u[0]), u01 = bcast(u[1]);
  const BCplx u10 = bcast(u[2]), u11 = bcast(u[3]);
  if (bit == 0) {
    // Each register holds one (a0, a1) pair; mix across 128-bit lanes.
    const __m256d c0r = _mm256_set_pd(u[2].real(), u[2].real(), u[0].real(),
                                      u[0].real());
    const __m256d c0i = _mm256_set_pd(u[2].imag(), u[2].imag(), u[0].imag(),
                                      u[0].imag());
    const __m256d c1r = _mm256_set_pd(u[3].real(), u[3].real(), u[1].real(),
                                      u[1].real());
    const __m256d c1i = _mm256_set_pd(u[3].imag(), u[3].imag(), u[1].imag(),
                                      u[1].imag());
    for (std::size_t i = 0; i < dim; i += 2) {
      const __m256d v = _mm256_loadu_pd(d + 2 * i);
      const __m256d a0 = _mm256_permute2f128_pd(v, v, 0x00);
      const __m256d a1 = _mm256_permute2f128_pd(v, v, 0x11);
      const __m256d out = _mm256_add_pd(cmul_bcast(a0, c0r, c0i),
                                        cmul_bcast(a1, c1r, c1i));
      _mm256_storeu_pd(d + 2 * i, out);
    }
    return;
  }
  const std::size_t stride = std::size_t(1) << bit;
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; i += 2) {
      const __m256d a0 = _mm256_loadu_pd(d + 2 * i);
      const __m256d a1 = _mm256_loadu_pd(d + 2 * (i + stride));
      const __m256d n0 = _mm256_add_pd(cmul_bcast(a0, u00.re, u00.im),
                                       cmul_bcast(a1, u01.re, u01.im));
      const __m256d n1 = _mm256_add_pd(cmul_bcast(a0, u10.re, u10.im),
                                       cmul_bcast(a1, u11.re, u11.im));
      _mm256_storeu_pd(d + 2 * i, n0);
      _mm256_storeu_pd(d + 2 * (i + stride), n1);
    }
  }
}

void apply2q_avx2(cplx* psi, std::size_t dim, int bit_a, int bit_b,
                  const cplx* u) {
  // Each iteration handles two adjacent quads in one vector, which needs
  // index bit 0 free of gate bits and at least two quads present.
  const int lo = bit_a < bit_b ? bit_a : bit_b;
  if (lo == 0 || dim < 8) {
    scalar().apply2q(psi, dim, bit_a, bit_b, u);
    return;
  }
  double* d = reinterpret_cast<double*>(psi);
  const std::size_t ma = std::size_t(1) << bit_a;
  const std::size_t mb = std::size_t(1) << bit_b;
  const int hi = bit_a < bit_b ? bit_b : bit_a;
  BCplx uu[16];
  for (int t = 0; t < 16; ++t) uu[t] = bcast(u[t]);
  const std::size_t quads = dim >> 2;
  for (std::size_t k = 0; k < quads; k += 2) {
    const std::size_t i = insert_zero(insert_zero(k, lo), hi);
    const std::size_t idx[4] = {i, i + mb, i + ma, i + ma + mb};
    __m256d v[4], out[4];
    for (int c = 0; c < 4; ++c) v[c] = _mm256_loadu_pd(d + 2 * idx[c]);
    for (int r = 0; r < 4; ++r) {
      __m256d acc = cmul_bcast(v[0], uu[4 * r].re, uu[4 * r].im);
      for (int c = 1; c < 4; ++c)
        acc = _mm256_add_pd(
            acc, cmul_bcast(v[c], uu[4 * r + c].re, uu[4 * r + c].im));
      out[r] = acc;
    }
    for (int r = 0; r < 4; ++r) _mm256_storeu_pd(d + 2 * idx[r], out[r]);
  }
}

double expect_pauli_avx2(const cplx* psi, std::size_t dim, std::uint64_t xm,
                         std::uint64_t zm, cplx base) {
  const double* d = reinterpret_cast<const double*>(psi);
  const double tz = (zm & 1) ? -1.0 : 1.0;
  __m256d acc = _mm256_setzero_pd();
  if (xm == 0) {
    for (std::size_t c = 0; c < dim; c += 2) {
      const double s0 = (std::popcount(c & zm) & 1) ? -1.0 : 1.0;
      const double s1 = s0 * tz;
      const __m256d sv = _mm256_set_pd(s1, s1, s0, s0);
      const __m256d v = _mm256_loadu_pd(d + 2 * c);
      acc = _mm256_fmadd_pd(_mm256_mul_pd(v, v), sv, acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    const double total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    return (base * total).real();
  }
  const bool flip_low = (xm & 1) != 0;
  const std::uint64_t pbase_mask = flip_low ? (xm ^ 1) : xm;
  for (std::size_t c = 0; c < dim; c += 2) {
    const double s0 = (std::popcount(c & zm) & 1) ? -1.0 : 1.0;
    const double s1 = s0 * tz;
    const __m256d sv = _mm256_set_pd(s1, s1, s0, s0);
    const __m256d v = _mm256_loadu_pd(d + 2 * c);
    __m256d p = _mm256_loadu_pd(d + 2 * (c ^ pbase_mask));
    if (flip_low) p = _mm256_permute2f128_pd(p, p, 0x01);
    // conj(p) * v per lane.
    const __m256d pre = _mm256_movedup_pd(p);
    const __m256d pim = _mm256_permute_pd(p, 0b1111);
    const __m256d t = _mm256_fmsubadd_pd(
        pre, v, _mm256_mul_pd(pim, _mm256_permute_pd(v, 0b0101)));
    acc = _mm256_fmadd_pd(t, sv, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  const cplx total(lanes[0] + lanes[2], lanes[1] + lanes[3]);
  return (base * total).real();
}

}  // namespace

const Kernels* avx2_impl() {
  static const Kernels k{apply1q_avx2, apply2q_avx2, expect_pauli_avx2,
                         "avx2"};
  return &k;
}

}  // namespace vqlab::kern

#else

namespace vqlab::kern {
const Kernels* avx2_impl() { return nullptr; }
}  // namespace vqlab::kern

#endif
