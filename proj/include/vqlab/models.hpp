// Copyright (c) 2026 vqlab contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vqlab/pauli.hpp"
#include "vqlab/simulator.hpp"

namespace vqlab {

// --- fermionic operators -----------------------------------------------------

// One creation (dagger=true) or annihilation operator on a mode.
using FermionOp = std::pair<int, bool>;

// A linear combination of normal-ordered fermionic monomials. The canonical
// order puts creation operators first (modes ascending) followed by
// annihilation operators (modes descending), so that the adjoint of a
// canonical monomial is again canonical. add() accepts arbitrary products
// and performs the anticommutator bookkeeping, including contractions.
struct FermionOperator {
  explicit FermionOperator(int modes);

  int modes() const { return modes_; }
  const std::map<std::vector<FermionOp>, cplx>& terms() const {
    return terms_;
  }

  void add(std::vector<FermionOp> ops, cplx coeff);
  void add(const FermionOperator& other, cplx scale = 1.0);
  FermionOperator dagger() const;
  void prune(double tol = 1e-12);

  // Text form, one monomial per line: "<re> <im> a^ i a j ...".
  std::string str() const;
  static FermionOperator parse(int modes, const std::string& text);

 private:
  int modes_ = 0;
  std::map<std::vector<FermionOp>, cplx> terms_;
};

// --- model construction --------------------------------------------------------

enum class Boundary { Ring, Line };
enum class FermionEncoding { JordanWigner, BravyiKitaev };

struct ModelSpec {
  enum class Family { TFI, XXZ, HubbardSpinless, RandomInterpolated };
  Family family = Family::TFI;
  int n = 2;
  Boundary boundary = Boundary::Ring;
  double j = 0.0, h = 0.0;            // TFI couplings
  double jperp = 0.0, jz = 0.0;       // XXZ couplings
  double t = 0.0, v1 = 0.0, v2 = 0.0; // spinless-Hubbard couplings
  FermionEncoding encoding = FermionEncoding::JordanWigner;
  double alpha = 0.0;                 // random-interpolation weight
  std::uint64_t seed = 0;             // random-interpolation draw
};

// J sum Z_i Z_{i+1} + h sum X_i; a ring closes the chain, and the
// degenerate two-site ring counts its single bond once.
PauliSum build_tfi(int n, double j, double h, Boundary boundary);

// sum over bonds of jperp (X_i X_{i+1} + Y_i Y_{i+1}) + jz Z_i Z_{i+1}.
PauliSum build_xxz(int n, double jperp, double jz, Boundary boundary);

// -t sum over bonds (a_i^ a_j + a_j^ a_i) + V1 sum n_i n_{i+1}
// + V2 sum n_i n_{i+2}; the V2 sum wraps only on rings.
FermionOperator build_hubbard_spinless(int n, double t, double v1, double v2,
                                       Boundary boundary);

// (1-alpha) H1 + alpha H2 for two dense draws with independent complex
// Gaussian entries Hermitized as (A + A^)/2, fixed by the seed, expanded
// into Pauli terms.
PauliSum build_random_interpolated(int n, double alpha, std::uint64_t seed);

// Dispatch on the spec family; fermionic models are encoded per spec.
PauliSum build_model(const ModelSpec& spec);

// --- fermion-to-qubit transforms ------------------------------------------------

// a_i -> Z_0 ... Z_{i-1} (X_i + i Y_i) / 2, extended linearly.
PauliSum jordan_wigner(const FermionOperator& f);

// Parity-tree encoding; the transform matrix for 2^k modes follows the
// block recursion beta_1 = [1], beta_2m = [[beta_m, 0], [L, beta_m]] with L
// carrying ones in its last row, and other mode counts use the leading
// minor. Exposed for tests.
std::vector<std::vector<int>> bravyi_kitaev_matrix(int modes);
PauliSum bravyi_kitaev(const FermionOperator& f);

// Index sets of the encoding, exposed for tests: update set U(j), flip set
// F(j), parity set P(j) and remainder set R(j) = P(j) \ F(j).
struct BkSets {
  std::vector<int> update, flip, parity, remainder;
};
BkSets bravyi_kitaev_sets(int modes, int j);

// H + M (N - m)^2 with the total-number operator N encoded as requested.
PauliSum add_number_penalty(const PauliSum& h, int m, double penalty,
                            FermionEncoding encoding =
                                FermionEncoding::JordanWigner);

// --- exact diagonalization ------------------------------------------------------

struct GroundState {
  double energy = 0.0;
  StateVector state;
  bool degenerate = false;
};

// Lowest eigenpair of the dense matrix (n <= 10). Ties within 1e-8 set the
// degenerate flag; the state is the solver's first column with its largest
// amplitude rotated to the positive real axis.
GroundState exact_ground(const PauliSum& h);

// C(m) = <n_0 n_m> - <n_0><n_m> with n_i = (1 - Z_i)/2 (occupation under
// the Jordan-Wigner convention).
double density_correlation(const StateVector& state, int m);

}  // namespace vqlab
