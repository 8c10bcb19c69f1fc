// Copyright (c) 2026 vqlab contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vqlab/ansatz.hpp"
#include "vqlab/pauli.hpp"
#include "vqlab/rng.hpp"
#include "vqlab/vqe.hpp"

namespace vqlab {

// Weighted collection of doubled Pauli strings: sum over entries of
// w * (h tensor h), where h is a phase-free string keyed like PauliSum
// terms. Mixed pairs h1 tensor h2 with h1 != h2 are not representable on
// purpose: one mixer sweep covering every qubit annihilates them, and the
// layouts studied here always contain such a sweep, so only the diagonal
// survives into anything observable.
struct SuperPauliEnsemble {
  int n = 0;
  std::map<PauliSum::Key, double> entries;
};

SuperPauliEnsemble super_string(const PauliString& h, double weight = 1.0);
double weight_sum(const SuperPauliEnsemble& e);

// Support of one averaging block. Must be nonempty and inside [0, n).
struct MixerSpec {
  std::vector<int> qubits;
};

// First and second moments of conjugation by a Haar-random unitary:
//   t=1:  (Tr A / d) * identity
//   t=2:  ((Tr A Tr B - Tr AB / d) * 1x1 + (Tr AB - Tr A Tr B / d) * S)
//         / (d^2 - 1)   on the doubled space, S the copy swap.
Eigen::MatrixXcd haar_moment_t1(const Eigen::MatrixXcd& a);
Eigen::MatrixXcd haar_moment_t2(const Eigen::MatrixXcd& a,
                                const Eigen::MatrixXcd& b);

// Haar-distributed unitary: QR of a complex Gaussian matrix, with the R
// diagonal phases folded into Q so the distribution is exactly invariant.
Eigen::MatrixXcd haar_unitary(int dim, Rng& rng);

// One block-averaging step. Entries trivial on the support pass through;
// an entry nontrivial there is spread uniformly (weight / (4^|Y| - 1))
// over every string that agrees with it off the support and is nontrivial
// on it. Total weight is conserved exactly.
SuperPauliEnsemble mixer_apply(const SuperPauliEnsemble& e,
                               const MixerSpec& m);

// Squared commutator action: entries commuting with f are dropped, each
// anticommuting entry moves to the product string with weight * 4 (the
// signs cancel between the two copies). f must be nontrivial.
SuperPauliEnsemble commutator_superop(const SuperPauliEnsemble& e,
                                      const PauliString& f);

// Expectation over the doubled all-zeros ket: entries whose string uses
// only identity and Z contribute their weight, everything else gives 0.
double zero_ket_average(const SuperPauliEnsemble& e);

// Analytic floor on Var d_theta E for any parameter of the given block:
//   (2*4^|Y|/(4^|Y|-1)) * (3/4)^(l - l_c) * sum_i c_i^2 * 3^(-|C(h_i)|),
// summing over Hamiltonian strings whose causal cone contains the block;
// l is the last layer of the layout and l_c the block's layer. Strings
// whose cone misses the block contribute nothing, so a block outside
// every cone gets exactly 0.
double variance_lower_bound(const AnsatzLayout& layout, const PauliSum& h,
                            int block_id);

struct VarianceEstimate {
  double mean = 0.0;
  double variance = 0.0;     // sample variance, N - 1 denominator
  double se_normal = 0.0;    // variance * sqrt(2 / (N - 1))
  double se_bootstrap = 0.0; // 200 resamples of the derivative sample
};

// Sample variance of one parameter-shift gradient component over angle
// draws uniform in [-pi, pi)^k. A slot outside the union causal cone of
// the Hamiltonian returns exact zeros without touching the simulator.
// Slots without a Pauli generator are rejected like grad_param_shift.
VarianceEstimate empirical_variance(const VqeProblem& p, int slot,
                                    int samples, std::uint64_t seed);

// Per-block summary: slot variances averaged within each block, next to
// the analytic floor for that block.
struct BlockVariance {
  int block_id = 0;
  int layer = 0;
  double empirical_var = 0.0;
  double se = 0.0;
  double lower_bound = 0.0;
};

std::vector<BlockVariance> block_variance_report(const VqeProblem& p,
                                                 int samples,
                                                 std::uint64_t seed);

// Header block_id,layer,empirical_var,se,lower_bound; 12 significant
// digits throughout.
std::string plateau_csv(const std::vector<BlockVariance>& rows);

// Distance of a two-qubit gate family to the Haar moment operator
// E[U^t tensor conj(U)^t], estimated from `samples` uniform parameter
// draws. lambda1 / lambda_inf / lambda2 are the induced 1-, infinity-
// and 2-norms of the difference (max column sum, max row sum, largest
// singular value). The se fields carry the sampling-noise scale of the
// estimator at this sample count, calibrated on the Haar self-test and
// shrinking as 1/sqrt(N); they are proxies, not per-entry errors.
struct TpeEstimate {
  BlockKind family = BlockKind::Entangler;
  bool haar = false;  // self-test rows ignore `family`
  int t = 2;
  std::int64_t samples = 0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda_inf = 0.0;
  double se1 = 0.0;
  double se2 = 0.0;
  double se_inf = 0.0;
};

// t must be 1 or 2; the family must be a two-qubit block.
TpeEstimate tpe_distance(BlockKind family, int t, std::int64_t samples,
                         std::uint64_t seed);

// Same estimator fed with Haar-random 4x4 unitaries. The exact moment is
// subtracted from samples of itself, so the lambdas measure pure sampling
// noise and should shrink as 1/sqrt(N).
TpeEstimate tpe_haar_selftest(int t, std::int64_t samples,
                              std::uint64_t seed);

// Header family,t,N,lambda1,lambda2,lambda_inf.
std::string tpe_csv(const std::vector<TpeEstimate>& rows);

}  // namespace vqlab
