// Copyright (c) 2026 vqlab contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

namespace vqlab::kern {

using cplx = std::complex<double>;

// Statevector inner-loop kernels. All masks and bit positions are in INDEX
// space (bit 0 = fastest-varying amplitude index); callers translate from
// qubit numbering. Matrices are row-major.
//
// apply1q: 2x2 unitary on index bit `bit`.
// apply2q: 4x4 unitary on index bits (bit_a, bit_b) where bit_a carries the
//          gate's first qubit (row index high bit), bit_a != bit_b.
// expect_pauli: Re(base * sum_c sign(c) * conj(psi[c ^ xm]) * psi[c]) with
//          sign(c) = (-1)^popcount(c & zm); `base` folds the string's phase.
struct Kernels {
  void (*apply1q)(cplx* psi, std::size_t dim, int bit, const cplx* u);
  void (*apply2q)(cplx* psi, std::size_t dim, int bit_a, int bit_b,
                  const cplx* u);
  double (*expect_pauli)(const cplx* psi, std::size_t dim, std::uint64_t xm,
                         std::uint64_t zm, cplx base);
  const char* name;
};

// Scalar reference implementation; always available.
const Kernels& scalar();

// AVX2 implementation, or nullptr when the build or the CPU lacks support.
const Kernels* avx2();

// Runtime selection: AVX2 when available unless VQLAB_FORCE_SCALAR=1 is set
// in the environment (read once at first call).
const Kernels& active();

}  // namespace vqlab::kern
