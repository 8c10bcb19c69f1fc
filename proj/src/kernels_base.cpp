// Copyright (c) 2026 vqlab contributors
// SPDX-License-Identifier: Apache-2.0
#include <bit>

#include "vqlab/kernels.hpp"

namespace vqlab::kern {
namespace {

// Spreads `v` so that bit position `b` becomes a zero hole.
inline std::size_t insert_zero(std::size_t v, int b) {
  const std::size_t low = (std::size_t(1) << b) - 1;
  return ((v & ~low) << 1) | (v & low);
}

void apply1q_scalar(cplx* psi, std::size_t dim, int bit, const cplx* u) {
  const std::size_t stride = std::size_t(1) << bit;
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const cplx a0 = psi[i];
      const cplx a1 = psi[i + stride];
      psi[i] = u[0] * a0 + u[1] * a1;
      psi[i + stride] = u[2] * a0 + u[3] * a1;
    }
  }
}

void apply2q_scalar(cplx* psi, std::size_t dim, int bit_a, int bit_b,
                    const cplx* u) {
  const std::size_t ma = std::size_t(1) << bit_a;
  const std::size_t mb = std::size_t(1) << bit_b;
  const int lo = bit_a < bit_b ? bit_a : bit_b;
  const int hi = bit_a < bit_b ? bit_b : bit_a;
  const std::size_t quads = dim >> 2;
  for (std::size_t k = 0; k < quads; ++k) {
    const std::size_t i = insert_zero(insert_zero(k, lo), hi);
    const cplx a0 = psi[i];
    const cplx a1 = psi[i + mb];
    const cplx a2 = psi[i + ma];
    const cplx a3 = psi[i + ma + mb];
    psi[i] = u[0] * a0 + u[1] * a1 + u[2] * a2 + u[3] * a3;
    psi[i + mb] = u[4] * a0 + u[5] * a1 + u[6] * a2 + u[7] * a3;
    psi[i + ma] = u[8] * a0 + u[9] * a1 + u[10] * a2 + u[11] * a3;
    psi[i + ma + mb] = u[12] * a0 + u[13] * a1 + u[14] * a2 + u[15] * a3;
  }
}

double expect_pauli_scalar(const cplx* psi, std::size_t dim, std::uint64_t xm,
                           std::uint64_t zm, cplx base) {
  cplx acc = 0.0;
  if (xm == 0) {
    for (std::size_t c = 0; c < dim; ++c) {
      const double p = std::norm(psi[c]);
      acc += (std::popcount(c & zm) & 1) ? -p : p;
    }
  } else {
    for (std::size_t c = 0; c < dim; ++c) {
      const cplx t = std::conj(psi[c ^ xm]) * psi[c];
      acc += (std::popcount(c & zm) & 1) ? -t : t;
    }
  }
  return (base * acc).real();
}

}  // namespace

const Kernels& scalar() {
  static const Kernels k{apply1q_scalar, apply2q_scalar, expect_pauli_scalar,
                         "scalar"};
  return k;
}

}  // namespace vqlab::kern
