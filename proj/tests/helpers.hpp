#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "vqlab/pauli.hpp"
#include "vqlab/rng.hpp"
#include "vqlab/simulator.hpp"

namespace testutil {

// Haar-distributed unitary via QR of a complex Gaussian matrix with the
// R-diagonal phase correction.
inline Eigen::MatrixXcd haar_unitary(int dim, vqlab::Rng& rng) {
  Eigen::MatrixXcd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      g(i, j) = vqlab::cplx(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    vqlab::cplx d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

inline vqlab::PauliString random_string(int n, vqlab::Rng& rng,
                                        bool random_phase = false) {
  std::uint64_t lim = (1ULL << n) - 1;
  std::uint64_t x = rng.next_u64() & lim;
  std::uint64_t z = rng.next_u64() & lim;
  int ph = random_phase ? static_cast<int>(rng.below(4)) : 0;
  return vqlab::PauliString::from_masks(n, x, z, ph);
}

inline double max_abs_diff(const Eigen::MatrixXcd& a,
                           const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline Eigen::VectorXcd to_eigen(const vqlab::StateVector& s) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t i = 0; i < s.dim(); ++i)
    v(static_cast<Eigen::Index>(i)) = s.amps[i];
  return v;
}

// Ground energy of J sum ZZ + h sum X on an even ring with J = 1, from the
// free-fermion single-particle spectrum in the antiperiodic sector.
inline double tfi_free_fermion_energy(int n, double h) {
  double e = 0.0;
  for (int m = 0; m < n; ++m) {
    const double k = (2.0 * m + 1.0) * std::numbers::pi / n;
    e -= std::sqrt(1.0 + h * h - 2.0 * h * std::cos(k));
  }
  return e;
}

}  // namespace testutil
