// Copyright (c) 2026 vqlab contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vqlab/pauli.hpp"
#include "vqlab/simulator.hpp"

namespace vqlab {

// Stabilizer generators of a Clifford state: n signed Pauli strings
// (phase_exp 0 or 2) that mutually commute and are independent.
struct StabilizerTableau {
  int n = 0;
  std::vector<PauliString> generators;
};

// Tableau of |0...0>: generators Z_0 ... Z_{n-1}, all positive.
StabilizerTableau zero_tableau(int n);

// Conjugates every generator by a fixed Clifford gate (H, P, X, Z, CNOT,
// CZ), tracking signs. Parametrized and dense gates are rejected even when
// their particular angles happen to be Clifford.
StabilizerTableau clifford_conjugate(const StabilizerTableau& t,
                                     const Gate& g);

// Tableau of circuit|0...0> for an n-qubit Clifford circuit.
StabilizerTableau run_clifford(int n, const Circuit& c);

// Mutual commutation plus symplectic independence of the generators.
bool tableau_valid(const StabilizerTableau& t);

// Inverse circuit: gates reversed, P cubed; throws on non-Clifford gates.
Circuit invert_clifford(const Circuit& c);

// Parent Hamiltonian of the circuit output: minus the sum of the signed
// conjugated Z_i generators plus n times identity. Its ground energy is 0
// and the unique ground state is circuit|0...0>; n + 1 terms total.
PauliSum telescope(int n, const Circuit& c);

// Spectrum facts shared by every telescope: the generators are independent
// and commuting, so the energies are 0, 2, ..., 2n.
struct TelescopeSpectrum {
  double gap = 0.0;
  double lambda_max = 0.0;
};
TelescopeSpectrum telescope_gap_and_max(int n);

// Two-sided fidelity bounds from an energy measurement: given eigenvalues
// 0 < gap <= ... <= lambda_max and E = Tr(rho H), the ground-state weight
// lies in [1 - E/gap, 1 - E/lambda_max]. Bounds are clamped to [0, 1];
// `applicable` records whether E <= gap held (the lemma's hypothesis).
struct FidelityBounds {
  double lower = 0.0;
  double upper = 0.0;
  double energy = 0.0;
  double gap = 0.0;
  double lambda_max = 0.0;
  bool applicable = true;
};
FidelityBounds stability_bounds(double energy, double gap, double lambda_max);

// Energy of a telescope (or any Pauli observable) from simulated
// measurements. Strings are grouped into qubit-wise commuting families,
// one measurement series per family: a telescope needs at most n, and the
// GHZ telescope exactly two (Z chain and the X string). Per-term standard
// errors of the mean are combined in quadrature.
struct EnergyEstimate {
  double energy = 0.0;
  double se = 0.0;
  int series = 0;
};
EnergyEstimate measure_telescope_energy(const StateVector& psi,
                                        const PauliSum& h,
                                        std::int64_t shots_per_series,
                                        std::uint64_t seed);
EnergyEstimate measure_telescope_energy(const DensityMatrix& rho,
                                        const PauliSum& h,
                                        std::int64_t shots_per_series,
                                        std::uint64_t seed);

// Standard error of an estimator under parametrized bootstrap: each success
// probability is re-sampled as Binomial(shots, q)/shots, the estimator is
// recomputed, and the standard deviation over `resamples` runs is returned.
double bootstrap_se(
    const std::vector<double>& success_probs, std::int64_t shots,
    int resamples, std::uint64_t seed,
    const std::function<double(const std::vector<double>&)>& estimator);

// GHZ fidelity via parity oscillations: population from a Z-basis series,
// coherence from the amplitude of <Z^(x)n> under the phase-swept rotation
// exp(-i pi/4 (cos(phi) X + sin(phi) Y)) applied to every qubit, fitted at
// the known frequency n. fidelity = (population + coherence) / 2, the
// phase-optimized form. Population carries a standard error of the mean;
// coherence a parametrized-bootstrap error. `degenerate` flags a vanishing
// oscillation amplitude, which leaves the phase gamma unconstrained.
// `rotation_noise` optionally applies the depolarizing model to the
// basis-change rotations themselves.
struct ParityResult {
  double population = 0.0;
  double coherence = 0.0;
  double fidelity = 0.0;
  double se_population = 0.0;
  double se_coherence = 0.0;
  double se_fidelity = 0.0;
  double gamma = 0.0;
  bool degenerate = false;
  std::vector<double> phis;
  std::vector<double> parities;
};
ParityResult parity_oscillations(const DensityMatrix& rho, std::int64_t shots,
                                 std::uint64_t seed, int phi_points = 0,
                                 int resamples = 100,
                                 const NoiseModel& rotation_noise = {});

// GHZ coherence via multiple quantum coherences: rotate each qubit around Z
// by phi_j = pi j / (n + 1), run the unprepare circuit, and record the
// probability of the all-zeros outcome as the overlap signal. The coherence
// is 2 sqrt(I_n) where I_n is the real part of the signal's discrete
// Fourier coefficient at frequency n; shot noise can push I_n below zero,
// in which case it is clamped and flagged. `echo_x` inserts the X layer
// used on hardware to cancel coherent drift (a no-op for ideal GHZ input);
// `gate_noise` applies the depolarizing model to the added gates.
struct MqcResult {
  double coherence = 0.0;
  double se = 0.0;
  double i_n = 0.0;
  bool clamped = false;
  std::vector<double> signal;
};
MqcResult mqc(const DensityMatrix& rho, const Circuit& unprepare,
              std::int64_t shots, std::uint64_t seed, int resamples = 100,
              const NoiseModel& gate_noise = {}, bool echo_x = false);

// One row of a fidelity comparison: estimates from any of the methods plus
// the telescope bounds where they apply. lower/upper print empty when NaN.
struct FidelityReportRow {
  std::string method;
  int n = 0;
  std::int64_t shots = 0;
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double se = 0.0;
  std::uint64_t seed = 0;
  double p1 = 0.0;
  double p2 = 0.0;
  double alpha = 0.0;
};
// "method,n,shots,estimate,lower,upper,se,seed,p1,p2,alpha" rows,
// 12 significant digits.
std::string fidelity_csv(const std::vector<FidelityReportRow>& rows);

}  // namespace vqlab
