// Copyright (c) 2026 vqlab contributors
// SPDX-License-Identifier: Apache-2.0
#include "vqlab/ansatz.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace vqlab {

namespace {

PauliString axis(int n, int q, char a) { return PauliString::single(n, q, a); }

PauliString two_axis(int n, int qa, int qb, char a) {
  const std::uint64_t m =
      (std::uint64_t{1} << qa) | (std::uint64_t{1} << qb);
  switch (a) {
    case 'X':
      return PauliString{n, m, 0, 0};
    case 'Y':
      return PauliString{n, m, m, 0};
    default:
      return PauliString{n, 0, m, 0};
  }
}

// Expands one block. `params` indexes the global parameter vector through
// `slots`; a null params binds every angle to zero (template circuits).
void expand(Circuit& c, BlockKind kind, const std::vector<int>& q,
            const std::vector<int>& slots, const std::vector<double>* params) {
  const auto ang = [&](int i) {
    return params ? (*params)[static_cast<std::size_t>(slots[i])] : 0.0;
  };
  const auto euler_zyz = [&](int reg, int qq, int s) {
    c.push_back(Gate::rot(axis(reg, qq, 'Z'), ang(s), slots[s]));
    c.push_back(Gate::rot(axis(reg, qq, 'Y'), ang(s + 1), slots[s + 1]));
    c.push_back(Gate::rot(axis(reg, qq, 'Z'), ang(s + 2), slots[s + 2]));
  };
  const int reg = 1 + *std::max_element(q.begin(), q.end());
  switch (kind) {
    case BlockKind::Rank1:
      c.push_back(Gate::rot(axis(reg, q[0], 'Y'), ang(0), slots[0]));
      c.push_back(Gate::rot(axis(reg, q[0], 'Z'), ang(1), slots[1]));
      break;
    case BlockKind::Entangler:
    case BlockKind::XZZZ:
      c.push_back(Gate::rot(axis(reg, q[0], 'X'), ang(0), slots[0]));
      c.push_back(Gate::rot(axis(reg, q[1], 'X'), ang(1), slots[1]));
      c.push_back(Gate::rot(two_axis(reg, q[0], q[1], 'Z'), ang(2), slots[2]));
      c.push_back(Gate::rot(axis(reg, q[1], 'Z'), ang(3), slots[3]));
      c.push_back(Gate::rot(axis(reg, q[0], 'Z'), ang(4), slots[4]));
      break;
    case BlockKind::ParticleConserving: {
      Eigen::Matrix4cd u = pc_matrix(ang(0), ang(1));
      c.push_back(Gate::unitary2(q[0], q[1], u, slots[0]));
      break;
    }
    case BlockKind::YRotCZ:
      c.push_back(Gate::rot(axis(reg, q[0], 'Y'), ang(0), slots[0]));
      c.push_back(Gate::rot(axis(reg, q[1], 'Y'), ang(1), slots[1]));
      c.push_back(Gate::cz(q[0], q[1]));
      break;
    case BlockKind::Cartan:
      euler_zyz(reg, q[0], 0);
      euler_zyz(reg, q[1], 3);
      c.push_back(Gate::rot(two_axis(reg, q[0], q[1], 'X'), ang(6), slots[6]));
      c.push_back(Gate::rot(two_axis(reg, q[0], q[1], 'Y'), ang(7), slots[7]));
      c.push_back(Gate::rot(two_axis(reg, q[0], q[1], 'Z'), ang(8), slots[8]));
      euler_zyz(reg, q[0], 9);
      euler_zyz(reg, q[1], 12);
      break;
    case BlockKind::UniversalCNOT:
      euler_zyz(reg, q[0], 0);
      euler_zyz(reg, q[1], 3);
      c.push_back(Gate::cnot(q[0], q[1]));
      euler_zyz(reg, q[0], 6);
      euler_zyz(reg, q[1], 9);
      break;
  }
}

std::vector<int> slot_run(int first, int count) {
  std::vector<int> s(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) s[static_cast<std::size_t>(i)] = first + i;
  return s;
}

void require_two_qubit(BlockKind kind) {
  if (block_width(kind) != 2)
    throw std::invalid_argument("two-qubit block kind required");
}

Ansatz assemble(int n, Topology topo, std::vector<Block> blocks) {
  Ansatz a;
  a.layout.n = n;
  a.layout.topology = topo;
  a.layout.blocks = std::move(blocks);
  for (const Block& b : a.layout.blocks)
    expand(a.circuit, b.kind, b.qubits, b.slots, nullptr);
  return a;
}

}  // namespace

int block_param_count(BlockKind kind) {
  switch (kind) {
    case BlockKind::Rank1:
    case BlockKind::ParticleConserving:
    case BlockKind::YRotCZ:
      return 2;
    case BlockKind::Entangler:
    case BlockKind::XZZZ:
      return 5;
    case BlockKind::Cartan:
      return 15;
    case BlockKind::UniversalCNOT:
      return 12;
  }
  throw std::invalid_argument("unknown block kind");
}

const char* block_kind_name(BlockKind kind) {
  switch (kind) {
    case BlockKind::Rank1:
      return "Rank1";
    case BlockKind::Entangler:
      return "Entangler";
    case BlockKind::ParticleConserving:
      return "ParticleConserving";
    case BlockKind::YRotCZ:
      return "YRotCZ";
    case BlockKind::XZZZ:
      return "XZZZ";
    case BlockKind::Cartan:
      return "Cartan";
    case BlockKind::UniversalCNOT:
      return "UniversalCNOT";
  }
  throw std::invalid_argument("unknown block kind");
}

int block_width(BlockKind kind) {
  return kind == BlockKind::Rank1 ? 1 : 2;
}

int AnsatzLayout::param_count() const {
  int count = 0;
  for (const Block& b : blocks)
    for (int s : b.slots) count = std::max(count, s + 1);
  return count;
}

std::string AnsatzLayout::str() const {
  std::ostringstream out;
  for (const Block& b : blocks) {
    out << b.id << '\t' << b.layer << '\t';
    for (std::size_t i = 0; i < b.qubits.size(); ++i)
      out << (i ? "," : "") << b.qubits[i];
    out << '\t' << block_kind_name(b.kind) << '\t';
    for (std::size_t i = 0; i < b.slots.size(); ++i)
      out << (i ? "," : "") << b.slots[i];
    out << '\n';
  }
  return out.str();
}

Eigen::Matrix4cd pc_matrix(double theta1, double theta2) {
  const double c = std::cos(theta1);
  const double s = std::sin(theta1);
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
  u(0, 0) = 1.0;
  u(3, 3) = 1.0;
  u(1, 1) = c;
  u(1, 2) = std::polar(s, theta2);
  u(2, 1) = std::polar(s, -theta2);
  u(2, 2) = -c;
  return u;
}

int append_block(Circuit& c, BlockKind kind, const std::vector<int>& qubits,
                 int first_slot) {
  if (static_cast<int>(qubits.size()) != block_width(kind))
    throw std::invalid_argument("block support size mismatch");
  const int count = block_param_count(kind);
  expand(c, kind, qubits, slot_run(first_slot, count), nullptr);
  return first_slot + count;
}

Eigen::MatrixXcd block_matrix(BlockKind kind,
                              const std::vector<double>& theta) {
  if (static_cast<int>(theta.size()) != block_param_count(kind))
    throw std::invalid_argument("block parameter count mismatch");
  const int w = block_width(kind);
  std::vector<int> q(static_cast<std::size_t>(w));
  for (int i = 0; i < w; ++i) q[static_cast<std::size_t>(i)] = i;
  Circuit c;
  expand(c, kind, q, slot_run(0, static_cast<int>(theta.size())), &theta);
  const std::size_t dim = std::size_t{1} << w;
  Eigen::MatrixXcd u(dim, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    StateVector psi = StateVector::zero(w);
    psi.amps[0] = 0.0;
    psi.amps[j] = 1.0;
    apply_circuit(psi, c);
    for (std::size_t i = 0; i < dim; ++i) u(i, j) = psi.amps[i];
  }
  return u;
}

Circuit bind_circuit(const AnsatzLayout& layout, const std::vector<double>& params) {
  if (static_cast<int>(params.size()) != layout.param_count())
    throw std::invalid_argument("parameter vector length mismatch");
  Circuit c;
  for (const Block& b : layout.blocks)
    expand(c, b.kind, b.qubits, b.slots, &params);
  return c;
}

std::vector<bool> pauli_rot_slots(const AnsatzLayout& layout) {
  std::vector<bool> mask(static_cast<std::size_t>(layout.param_count()), false);
  for (const Block& b : layout.blocks) {
    const bool shiftable = b.kind != BlockKind::ParticleConserving;
    for (int s : b.slots) mask[static_cast<std::size_t>(s)] = shiftable;
  }
  return mask;
}

Ansatz build_checkerboard(int n, int layers, BlockKind kind,
                          Boundary boundary) {
  if (n < 2) throw std::invalid_argument("checkerboard needs n >= 2");
  if (layers < 1) throw std::invalid_argument("checkerboard needs layers >= 1");
  require_two_qubit(kind);
  std::vector<Block> blocks;
  int id = 0;
  int slot = 0;
  for (int l = 0; l < layers; ++l) {
    std::vector<std::pair<int, int>> pairs;
    if (l % 2 == 0) {
      for (int a = 0; a + 1 < n; a += 2) pairs.emplace_back(a, a + 1);
    } else {
      for (int a = 1; a + 1 < n; a += 2) pairs.emplace_back(a, a + 1);
      if (boundary == Boundary::Ring) pairs.emplace_back(n - 1, 0);
    }
    for (const auto& [a, b] : pairs) {
      Block blk;
      blk.id = id++;
      blk.qubits = {a, b};
      blk.layer = l;
      blk.kind = kind;
      blk.slots = slot_run(slot, block_param_count(kind));
      slot += block_param_count(kind);
      blocks.push_back(std::move(blk));
    }
  }
  return assemble(
      n, boundary == Boundary::Ring ? Topology::Ring : Topology::Line,
      std::move(blocks));
}

Ansatz build_rank1(int n) {
  if (n < 1) throw std::invalid_argument("rank-1 ansatz needs n >= 1");
  std::vector<Block> blocks;
  for (int q = 0; q < n; ++q) {
    Block blk;
    blk.id = q;
    blk.qubits = {q};
    blk.layer = 0;
    blk.kind = BlockKind::Rank1;
    blk.slots = {2 * q, 2 * q + 1};
    blocks.push_back(std::move(blk));
  }
  return assemble(n, Topology::Line, std::move(blocks));
}

Ansatz build_tree(int n, BlockKind kind) {
  if (n < 2 || !std::has_single_bit(static_cast<unsigned>(n)))
    throw std::invalid_argument("tree ansatz needs a power-of-2 register");
  require_two_qubit(kind);
  std::vector<Block> blocks;
  int id = 0;
  int slot = 0;
  std::vector<std::pair<int, int>> level{{0, n}};
  for (int depth = 0; !level.empty(); ++depth) {
    std::vector<std::pair<int, int>> next;
    for (const auto& [lo, hi] : level) {
      if (hi - lo < 2) continue;
      const int mid = (lo + hi) / 2;
      Block blk;
      blk.id = id++;
      blk.qubits = {lo, mid};
      blk.layer = depth;
      blk.kind = kind;
      blk.slots = slot_run(slot, block_param_count(kind));
      slot += block_param_count(kind);
      blocks.push_back(std::move(blk));
      next.emplace_back(lo, mid);
      next.emplace_back(mid, hi);
    }
    level = std::move(next);
  }
  return assemble(n, Topology::Tree, std::move(blocks));
}

Ansatz build_lattice2d(int rows, int cols, int layers, BlockKind kind) {
  if (rows != 3 || cols != 3)
    throw std::invalid_argument("2d lattice ansatz supports 3x3 only");
  if (layers < 1) throw std::invalid_argument("lattice needs layers >= 1");
  require_two_qubit(kind);
  const auto rotate = [](int q) {
    const int r = q / 3;
    const int c = q % 3;
    return 3 * c + (2 - r);
  };
  const std::vector<std::pair<int, int>> base{{0, 1}, {3, 4}, {6, 7}, {2, 5}};
  std::vector<Block> blocks;
  int id = 0;
  int slot = 0;
  for (int l = 0; l < layers; ++l) {
    std::vector<std::pair<int, int>> pairs;
    for (auto [a, b] : base) {
      for (int t = 0; t < l % 4; ++t) {
        a = rotate(a);
        b = rotate(b);
      }
      pairs.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(pairs.begin(), pairs.end());
    for (const auto& [a, b] : pairs) {
      Block blk;
      blk.id = id++;
      blk.qubits = {a, b};
      blk.layer = l;
      blk.kind = kind;
      blk.slots = slot_run(slot, block_param_count(kind));
      slot += block_param_count(kind);
      blocks.push_back(std::move(blk));
    }
  }
  return assemble(9, Topology::Lattice2d, std::move(blocks));
}

CausalCone causal_cone(const AnsatzLayout& layout, const PauliString& h) {
  if (h.n != layout.n)
    throw std::invalid_argument("observable register size mismatch");
  CausalCone cone;
  cone.support = h.support();
  for (auto it = layout.blocks.rbegin(); it != layout.blocks.rend(); ++it) {
    std::uint64_t mask = 0;
    for (int q : it->qubits) mask |= std::uint64_t{1} << q;
    if (mask & cone.support) {
      cone.support |= mask;
      cone.block_ids.push_back(it->id);
    }
  }
  std::sort(cone.block_ids.begin(), cone.block_ids.end());
  cone.support_size = std::popcount(cone.support);
  return cone;
}

}  // namespace vqlab
