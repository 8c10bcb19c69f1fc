// Copyright (c) 2026 vqlab contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vqlab/pauli.hpp"

namespace vqlab {

// --- gates and circuits ----------------------------------------------------

enum class GateKind { H, P, X, Z, CNOT, CZ, PauliRot, Unitary };

// A gate instance with concrete parameters. Parametric gates record the
// parameter slot they were bound from (-1 for fixed gates) so that gradient
// code can locate them inside a circuit.
struct Gate {
  GateKind kind;
  std::vector<int> qubits;  // gate-order support; first qubit = row high bit
  double theta = 0.0;       // PauliRot angle, exp(-i theta G / 2)
  PauliString generator{1, 0, 0, 0};   // PauliRot only; phase_exp must be 0
  std::vector<cplx> matrix;            // Unitary only; row-major 2x2 or 4x4
  int param_slot = -1;

  static Gate h(int q);
  static Gate p(int q);
  static Gate x(int q);
  static Gate z(int q);
  static Gate cnot(int control, int target);
  static Gate cz(int a, int b);
  // exp(-i theta G / 2) for a Hermitian Pauli string G (phase_exp == 0).
  static Gate rot(const PauliString& generator, double theta, int slot = -1);
  static Gate unitary1(int q, const Eigen::Matrix2cd& u, int slot = -1);
  static Gate unitary2(int qa, int qb, const Eigen::Matrix4cd& u,
                       int slot = -1);
};

using Circuit = std::vector<Gate>;

// H on qubit 0 followed by a CNOT chain.
Circuit make_ghz(int n);

// --- pure states -------------------------------------------------------------

struct StateVector {
  int n = 0;
  std::vector<cplx> amps;  // 2^n amplitudes; qubit 0 = most significant bit

  static StateVector zero(int n);
  // Computational basis state from a bit string, qubit 0 leftmost.
  static StateVector basis(int n, const std::string& bits);

  std::size_t dim() const { return amps.size(); }
  double norm() const;
};

void apply_gate(StateVector& psi, const Gate& g);
// Overrides the angle of a PauliRot gate; throws for other kinds.
void apply_gate(StateVector& psi, const Gate& g, double theta);
void apply_gate_inverse(StateVector& psi, const Gate& g);
void apply_circuit(StateVector& psi, const Circuit& c);
// psi <- sigma |psi> for a Pauli string (phase included).
void apply_pauli(StateVector& psi, const PauliString& s);

double expectation(const StateVector& psi, const PauliString& s);
double expectation(const StateVector& psi, const PauliSum& h);
cplx overlap(const StateVector& a, const StateVector& b);

// Measures every qubit in the computational basis after appending
// `basis_rotations`, drawing `shots` independent samples. Keys are bit
// strings with qubit 0 leftmost; only observed outcomes appear.
std::map<std::string, std::int64_t> sample_counts(const StateVector& psi,
                                                  const Circuit& basis_rotations,
                                                  std::int64_t shots,
                                                  std::uint64_t seed);

// --- mixed states ------------------------------------------------------------

struct NoiseModel {
  double p1 = 0.0;  // depolarizing strength after one-qubit gates
  double p2 = 0.0;  // depolarizing strength after two-qubit gates
};

struct DensityMatrix {
  int n = 0;
  Eigen::MatrixXcd rho;

  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(int n);

  std::size_t dim() const { return static_cast<std::size_t>(rho.rows()); }
  double trace_real() const { return rho.trace().real(); }
  double purity() const;
};

void apply_gate(DensityMatrix& rho, const Gate& g);
double expectation(const DensityMatrix& rho, const PauliString& s);
double expectation(const DensityMatrix& rho, const PauliSum& h);
double fidelity_pure(const DensityMatrix& rho, const StateVector& psi);

// rho <- (1 - p) rho + p / 2^|Y| * (I_Y tensor Tr_Y rho) on qubit set Y.
void apply_depolarizing(DensityMatrix& rho, double p,
                        const std::vector<int>& qubits);

// Applies the circuit gate by gate, following every gate with a depolarizing
// channel on its support (p1 for one-qubit gates, p2 for two-qubit gates).
DensityMatrix evolve_noisy(const Circuit& c, const NoiseModel& noise,
                           const DensityMatrix& initial);

// (1 - alpha) |GHZ_n><GHZ_n| + alpha I / 2^n.
DensityMatrix global_depol_state(int n, double alpha);

std::map<std::string, std::int64_t> sample_counts(const DensityMatrix& rho,
                                                  const Circuit& basis_rotations,
                                                  std::int64_t shots,
                                                  std::uint64_t seed);

// "bitstring,count" rows sorted by bit string, with a header line.
std::string histogram_csv(const std::map<std::string, std::int64_t>& counts);

}  // namespace vqlab
