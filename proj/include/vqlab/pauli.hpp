// Copyright (c) 2026 vqlab contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace vqlab {

using cplx = std::complex<double>;

// Tensor product of {1, X, Y, Z} over n qubits with an i^phase_exp prefactor.
//
// Masks are qubit-indexed: bit q of x_mask / z_mask set means X / Z acts on
// qubit q, both set means Y. Qubit 0 is the leftmost tensor factor everywhere;
// in dense matrices it is the most significant index bit. The canonical
// phase-free string sigma(x, z) carries an implicit i per Y factor so that it
// is Hermitian (Y = i X Z).
struct PauliString {
  int n = 0;
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;
  int phase_exp = 0;  // power of i, mod 4

  static PauliString identity(int n);
  static PauliString single(int n, int qubit, char axis);  // axis in {X, Y, Z}
  static PauliString from_masks(int n, std::uint64_t x, std::uint64_t z,
                                int phase_exp = 0);
  // Parses "IXYZ" (left = qubit 0) with optional "i*", "-", "-i*" prefix.
  static PauliString parse(const std::string& text);

  bool is_identity() const { return x_mask == 0 && z_mask == 0; }
  std::uint64_t support() const { return x_mask | z_mask; }
  int locality() const;
  char axis_at(int qubit) const;  // 'I', 'X', 'Y', 'Z'
  std::string str() const;
};

bool operator==(const PauliString& a, const PauliString& b);

// Product ab with exact phase tracking.
PauliString mul(const PauliString& a, const PauliString& b);

// True iff [a, b] = 0: parity of popcount(a.x & b.z) + popcount(a.z & b.x).
bool commutes(const PauliString& a, const PauliString& b);

// Dense Hermitian matrix bridge for small-n oracles.
struct HermitianDense {
  int n = 0;
  Eigen::MatrixXcd mat;

  // Validates Hermiticity within 1e-12 (max elementwise deviation).
  static HermitianDense from(int n, Eigen::MatrixXcd m);
};

// Real-weighted collection of phase-free Pauli strings. All Hamiltonians and
// cost observables are PauliSums. Immutable use after construction is
// thread-safe; mutation is not synchronized.
class PauliSum {
 public:
  using Key = std::pair<std::uint64_t, std::uint64_t>;  // (x_mask, z_mask)

  PauliSum() = default;
  explicit PauliSum(int n) : n_(n) {}

  int n() const { return n_; }
  const std::map<Key, double>& terms() const { return terms_; }

  // Folds an even phase into the sign; odd phases are rejected (a Hermitian
  // sum cannot carry them).
  void add(const PauliString& s, double coeff);
  void add_axes(std::uint64_t x, std::uint64_t z, double coeff);
  void add(const PauliSum& other, double scale = 1.0);

  double coeff(std::uint64_t x, std::uint64_t z) const;
  PauliString term_string(const Key& k) const {
    return PauliString{n_, k.first, k.second, 0};
  }

  std::size_t cardinality() const { return terms_.size(); }
  int locality() const;
  // Removes |coeff| < eps terms; returns the number removed.
  std::size_t prune(double eps = 1e-12);
  // p-norm of the coefficient vector; p >= 1, or infinity.
  double coeff_norm(double p) const;

  std::string str() const;  // lines "coeff<TAB>string"
  static PauliSum parse(int n, const std::string& text);

 private:
  int n_ = 0;
  std::map<Key, double> terms_;
};

PauliSum operator*(double c, const PauliSum& s);
PauliSum operator+(const PauliSum& a, const PauliSum& b);

// Product of two Hermitian sums; defined when the result is Hermitian
// (e.g. a sum with itself), which is checked to 1e-9.
PauliSum mul(const PauliSum& a, const PauliSum& b);

// (1/2^n) Tr(adjoint(a) b).
double hs_inner(const HermitianDense& a, const HermitianDense& b);
// Same inner product evaluated symbolically: sum of coefficient products.
double hs_inner(const PauliSum& a, const PauliSum& b);

Eigen::MatrixXcd to_dense_matrix(const PauliString& s);
HermitianDense to_dense(const PauliSum& s);  // n <= 10

// Pauli-basis expansion, coefficients via hs_inner; n <= 10. Reconstruction
// error is below 1e-10 for Hermitian inputs.
PauliSum decompose(const HermitianDense& m);

namespace detail {
// Index-space image of a qubit-indexed mask: qubit q <-> index bit n-1-q,
// matching the convention that qubit 0 is the leftmost tensor factor.
inline std::uint64_t to_index_space(std::uint64_t mask, int n) {
  std::uint64_t out = 0;
  for (int q = 0; q < n; ++q)
    if ((mask >> q) & 1ULL) out |= 1ULL << (n - 1 - q);
  return out;
}
// Complex-weighted accumulator over phase-free keys, used by fermion
// encodings and symbolic products before Hermiticity is restored.
using CAccum = std::map<PauliSum::Key, cplx>;
// acc += c * sigma(s) with s.phase_exp folded into c.
void accum_add(CAccum& acc, const PauliString& s, cplx c);
// Product accumulation: out += ca * cb * sigma(a) * sigma(b).
void accum_mul_into(CAccum& out, const PauliString& a, cplx ca,
                    const PauliString& b, cplx cb);
// Converts to a real PauliSum; throws if any imaginary residue exceeds tol.
PauliSum accum_to_sum(int n, const CAccum& acc, double tol = 1e-9);
}  // namespace detail

}  // namespace vqlab
