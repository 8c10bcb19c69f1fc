// Copyright (c) 2026 vqlab contributors
// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <cstring>

#include "vqlab/kernels.hpp"

namespace vqlab::kern {

// Defined in kernels_avx2.cpp; null when built without AVX2 support.
const Kernels* avx2_impl();

const Kernels* avx2() {
  static const Kernels* k = []() -> const Kernels* {
    const Kernels* impl = avx2_impl();
    if (impl == nullptr) return nullptr;
    if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma"))
      return nullptr;
    return impl;
  }();
  return k;
}

const Kernels& active() {
  static const Kernels* k = []() -> const Kernels* {
    const char* force = std::getenv("VQLAB_FORCE_SCALAR");
    if (force != nullptr && std::strcmp(force, "1") == 0) return &scalar();
    const Kernels* simd = avx2();
    return simd != nullptr ? simd : &scalar();
  }();
  return *k;
}

}  // namespace vqlab::kern
