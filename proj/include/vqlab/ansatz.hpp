// Copyright (c) 2026 vqlab contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "vqlab/models.hpp"
#include "vqlab/simulator.hpp"

namespace vqlab {

// Two-qubit building blocks (Rank1 is the one-qubit exception). Rotation
// angles always follow the exp(-i theta G / 2) convention of Gate::rot.
//
//   Rank1              R_y, R_z on one qubit                      2 slots
//   Entangler          R_x per qubit, R_zz, R_z per qubit         5 slots
//   XZZZ               alias layout of Entangler                  5 slots
//   ParticleConserving explicit matrix, see pc_matrix below       2 slots
//   YRotCZ             R_y per qubit, then CZ                     2 slots
//   Cartan             ZYZ Euler pair, R_xx R_yy R_zz, ZYZ pair  15 slots
//   UniversalCNOT      ZYZ Euler pair, CNOT, ZYZ Euler pair      12 slots
//
// Entangler, XZZZ and Cartan reduce to the identity at zero parameters;
// the others are still unitary there but not trivial.
enum class BlockKind {
  Rank1,
  Entangler,
  ParticleConserving,
  YRotCZ,
  XZZZ,
  Cartan,
  UniversalCNOT
};

enum class Topology { Ring, Line, Lattice2d, Tree };

int block_param_count(BlockKind kind);
const char* block_kind_name(BlockKind kind);
int block_width(BlockKind kind);  // qubits acted on: 1 for Rank1, else 2

struct Block {
  int id = 0;               // position in build order
  std::vector<int> qubits;  // support; first qubit = row high bit
  int layer = 0;            // sublayer index, nondecreasing across the list
  BlockKind kind = BlockKind::Entangler;
  std::vector<int> slots;   // global parameter slots, one run per block
};

struct AnsatzLayout {
  int n = 0;
  Topology topology = Topology::Line;
  std::vector<Block> blocks;

  int param_count() const;
  // One block per line: id, layer, qubits, kind, slots (tab separated).
  std::string str() const;
};

struct Ansatz {
  AnsatzLayout layout;
  Circuit circuit;  // slot-tagged template with all angles at zero
};

// The number-conserving two-qubit matrix
//   [1    0                  0                 0]
//   [0    cos t1             e^{i t2} sin t1   0]
//   [0    e^{-i t2} sin t1  -cos t1            0]
//   [0    0                  0                 1].
Eigen::Matrix4cd pc_matrix(double theta1, double theta2);

// Appends the expansion of one block to `c`, binding parameters to
// consecutive slots starting at first_slot. Returns the next free slot.
int append_block(Circuit& c, BlockKind kind, const std::vector<int>& qubits,
                 int first_slot);

// Dense matrix of a block at the given parameter values (4x4, first qubit =
// row high bit). Rank1 is one-qubit and yields 2x2 via the overload result
// size; callers pass theta of length block_param_count(kind).
Eigen::MatrixXcd block_matrix(BlockKind kind, const std::vector<double>& theta);

// Re-expands the layout into a concrete circuit with the given parameters.
Circuit bind_circuit(const AnsatzLayout& layout, const std::vector<double>& params);

// True for slots that drive a single PauliRot gate (the parameter-shift rule
// applies); false for ParticleConserving slots.
std::vector<bool> pauli_rot_slots(const AnsatzLayout& layout);

// Brickwork ansatz: sublayer 2k pairs (2i, 2i+1), sublayer 2k+1 pairs
// (2i+1, 2i+2) plus the wrap-around pair (n-1, 0) on rings. `layers` counts
// sublayers.
Ansatz build_checkerboard(int n, int layers, BlockKind kind,
                          Boundary boundary);

// R_y then R_z on every qubit; product states only.
Ansatz build_rank1(int n);

// Balanced binary tree on a power-of-2 register, root block first. Every
// range [lo, hi) is represented by its leftmost qubit; the block for a range
// acts on (lo, mid). Levels are layers, so n = 8 gives 1 + 2 + 4 blocks.
Ansatz build_tree(int n, BlockKind kind = BlockKind::Entangler);

// 3x3 lattice brickwork. The base layer pairs (0,1), (3,4), (6,7)
// horizontally and (2,5) vertically; layer l applies the base pattern
// rotated clockwise by 90 degrees l times (period four).
Ansatz build_lattice2d(int rows, int cols, int layers, BlockKind kind);

struct CausalCone {
  std::vector<int> block_ids;   // ascending
  std::uint64_t support = 0;    // accumulated qubit mask
  int support_size = 0;
};

// Backward sweep over the block list: a block joins the cone when its support
// intersects the accumulated support, which starts at the support of h.
CausalCone causal_cone(const AnsatzLayout& layout, const PauliString& h);

}  // namespace vqlab
