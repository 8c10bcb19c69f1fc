// Copyright (c) 2026 vqlab contributors
// SPDX-License-Identifier: Apache-2.0
#include "vqlab/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "vqlab/kernels.hpp"
#include "vqlab/rng.hpp"

namespace vqlab {

namespace {

const cplx kIPow[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};

void check_qubit(int n, int q) {
  if (q < 0 || q >= n) throw std::invalid_argument("qubit out of range");
}

// Index bit carrying qubit q (qubit 0 = most significant bit).
int index_bit(int n, int q) { return n - 1 - q; }

void axis_matrix(char axis, cplx* m) {
  switch (axis) {
    case 'X': m[0] = 0; m[1] = 1; m[2] = 1; m[3] = 0; return;
    case 'Y': m[0] = 0; m[1] = cplx(0, -1); m[2] = cplx(0, 1); m[3] = 0; return;
    case 'Z': m[0] = 1; m[1] = 0; m[2] = 0; m[3] = -1; return;
    default: throw std::logic_error("bad axis");
  }
}

// Deposits the bits of `v` into the set positions of `mask`.
std::size_t scatter_bits(std::size_t v, std::size_t mask) {
  std::size_t out = 0;
  int vi = 0;
  for (int b = 0; (mask >> b) != 0; ++b) {
    if ((mask >> b) & 1) {
      if ((v >> vi) & 1) out |= std::size_t(1) << b;
      ++vi;
    }
  }
  return out;
}

void fixed_matrix(GateKind kind, cplx* m) {
  const double s = 1.0 / std::sqrt(2.0);
  switch (kind) {
    case GateKind::H:
      m[0] = s; m[1] = s; m[2] = s; m[3] = -s;
      return;
    case GateKind::P:
      m[0] = 1; m[1] = 0; m[2] = 0; m[3] = cplx(0, 1);
      return;
    case GateKind::X:
      axis_matrix('X', m);
      return;
    case GateKind::Z:
      axis_matrix('Z', m);
      return;
    case GateKind::CNOT:
      std::fill(m, m + 16, cplx(0));
      m[0] = 1; m[5] = 1; m[11] = 1; m[14] = 1;
      return;
    case GateKind::CZ:
      std::fill(m, m + 16, cplx(0));
      m[0] = 1; m[5] = 1; m[10] = 1; m[15] = -1;
      return;
    default:
      throw std::logic_error("not a fixed gate");
  }
}

// In-place psi <- cos(t/2) psi - i sin(t/2) G psi for an arbitrary-weight
// Hermitian Pauli generator, used when the support exceeds two qubits.
void pauli_rot_generic(cplx* amps, std::size_t dim, int n,
                       const PauliString& g, double theta) {
  const std::uint64_t xi = detail::to_index_space(g.x_mask, n);
  const std::uint64_t zi = detail::to_index_space(g.z_mask, n);
  const cplx base = kIPow[std::popcount(g.x_mask & g.z_mask) & 3];
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const cplx mis(0, -s);
  if (xi == 0) {
    for (std::size_t r = 0; r < dim; ++r) {
      const double sgn = (std::popcount(r & zi) & 1) ? -1.0 : 1.0;
      amps[r] *= c + mis * sgn;
    }
    return;
  }
  const std::uint64_t hb = std::uint64_t(1)
                           << (63 - std::countl_zero(xi));
  const double q = (std::popcount(xi & zi) & 1) ? -1.0 : 1.0;
  for (std::size_t r = 0; r < dim; ++r) {
    if (r & hb) continue;
    const std::size_t t = r ^ xi;
    const double sgn = (std::popcount(r & zi) & 1) ? -1.0 : 1.0;
    const cplx ar = amps[r], at = amps[t];
    amps[r] = c * ar + mis * (base * (sgn * q) * at);
    amps[t] = c * at + mis * (base * sgn * ar);
  }
}

void apply_gate_raw(cplx* amps, std::size_t dim, int n, const Gate& g,
                    double theta) {
  const auto& k = kern::active();
  switch (g.kind) {
    case GateKind::H:
    case GateKind::P:
    case GateKind::X:
    case GateKind::Z: {
      cplx m[4];
      fixed_matrix(g.kind, m);
      k.apply1q(amps, dim, index_bit(n, g.qubits[0]), m);
      return;
    }
    case GateKind::CNOT:
    case GateKind::CZ: {
      cplx m[16];
      fixed_matrix(g.kind, m);
      k.apply2q(amps, dim, index_bit(n, g.qubits[0]),
                index_bit(n, g.qubits[1]), m);
      return;
    }
    case GateKind::PauliRot: {
      const auto sup = g.qubits;
      const double c = std::cos(theta / 2), s = std::sin(theta / 2);
      const cplx mis(0, -s);
      if (sup.size() == 1) {
        cplx a[4], m[4];
        axis_matrix(g.generator.axis_at(sup[0]), a);
        for (int i = 0; i < 4; ++i) m[i] = mis * a[i];
        m[0] += c;
        m[3] += c;
        k.apply1q(amps, dim, index_bit(n, sup[0]), m);
        return;
      }
      if (sup.size() == 2) {
        cplx a[4], b[4], m[16];
        axis_matrix(g.generator.axis_at(sup[0]), a);
        axis_matrix(g.generator.axis_at(sup[1]), b);
        for (int r = 0; r < 4; ++r)
          for (int c2 = 0; c2 < 4; ++c2)
            m[4 * r + c2] = mis * (a[2 * (r >> 1) + (c2 >> 1)] *
                                   b[2 * (r & 1) + (c2 & 1)]);
        for (int d2 = 0; d2 < 4; ++d2) m[5 * d2] += c;
        k.apply2q(amps, dim, index_bit(n, sup[0]), index_bit(n, sup[1]), m);
        return;
      }
      pauli_rot_generic(amps, dim, n, g.generator, theta);
      return;
    }
    case GateKind::Unitary: {
      if (g.matrix.size() == 4) {
        k.apply1q(amps, dim, index_bit(n, g.qubits[0]), g.matrix.data());
      } else {
        k.apply2q(amps, dim, index_bit(n, g.qubits[0]),
                  index_bit(n, g.qubits[1]), g.matrix.data());
      }
      return;
    }
  }
  throw std::logic_error("unhandled gate kind");
}

void check_gate(int n, const Gate& g) {
  for (int q : g.qubits) check_qubit(n, q);
  if (g.qubits.size() == 2 && g.qubits[0] == g.qubits[1])
    throw std::invalid_argument("gate qubits must be distinct");
}

std::string index_to_bits(std::size_t idx, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int q = 0; q < n; ++q)
    if ((idx >> (n - 1 - q)) & 1) s[static_cast<std::size_t>(q)] = '1';
  return s;
}

std::map<std::string, std::int64_t> sample_probs(const std::vector<double>& p,
                                                 int n, std::int64_t shots,
                                                 std::uint64_t seed) {
  if (shots < 0) throw std::invalid_argument("negative shot count");
  std::vector<double> cum(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += std::max(0.0, p[i]);
    cum[i] = acc;
  }
  if (std::abs(acc - 1.0) > 1e-9)
    throw std::runtime_error("probabilities do not sum to one");
  Rng rng(seed);
  std::map<std::string, std::int64_t> counts;
  for (std::int64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cum.begin());
    if (idx >= p.size()) idx = p.size() - 1;
    counts[index_to_bits(idx, n)] += 1;
  }
  return counts;
}

}  // namespace

// --- gate factories ----------------------------------------------------------

Gate Gate::h(int q) { return Gate{GateKind::H, {q}, 0.0, {1, 0, 0, 0}, {}, -1}; }
Gate Gate::p(int q) { return Gate{GateKind::P, {q}, 0.0, {1, 0, 0, 0}, {}, -1}; }
Gate Gate::x(int q) { return Gate{GateKind::X, {q}, 0.0, {1, 0, 0, 0}, {}, -1}; }
Gate Gate::z(int q) { return Gate{GateKind::Z, {q}, 0.0, {1, 0, 0, 0}, {}, -1}; }

Gate Gate::cnot(int control, int target) {
  return Gate{GateKind::CNOT, {control, target}, 0.0, {1, 0, 0, 0}, {}, -1};
}

Gate Gate::cz(int a, int b) {
  return Gate{GateKind::CZ, {a, b}, 0.0, {1, 0, 0, 0}, {}, -1};
}

Gate Gate::rot(const PauliString& generator, double theta, int slot) {
  if (generator.phase_exp != 0)
    throw std::invalid_argument("rotation generator must have phase zero");
  if (generator.is_identity())
    throw std::invalid_argument("rotation generator must be non-trivial");
  std::vector<int> qs;
  for (int q = 0; q < generator.n; ++q)
    if ((generator.support() >> q) & 1ULL) qs.push_back(q);
  return Gate{GateKind::PauliRot, std::move(qs), theta, generator, {}, slot};
}

namespace {
void check_unitary_matrix(const Eigen::MatrixXcd& u) {
  const Eigen::MatrixXcd d = u.adjoint() * u -
                             Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  if (d.cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("gate matrix is not unitary");
}
}  // namespace

Gate Gate::unitary1(int q, const Eigen::Matrix2cd& u, int slot) {
  check_unitary_matrix(u);
  Gate g{GateKind::Unitary, {q}, 0.0, {1, 0, 0, 0}, {}, slot};
  g.matrix = {u(0, 0), u(0, 1), u(1, 0), u(1, 1)};
  return g;
}

Gate Gate::unitary2(int qa, int qb, const Eigen::Matrix4cd& u, int slot) {
  check_unitary_matrix(u);
  Gate g{GateKind::Unitary, {qa, qb}, 0.0, {1, 0, 0, 0}, {}, slot};
  g.matrix.resize(16);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) g.matrix[static_cast<std::size_t>(4 * r + c)] = u(r, c);
  return g;
}

Circuit make_ghz(int n) {
  if (n < 1) throw std::invalid_argument("qubit count out of range");
  Circuit c;
  c.push_back(Gate::h(0));
  for (int q = 0; q + 1 < n; ++q) c.push_back(Gate::cnot(q, q + 1));
  return c;
}

// --- pure states -------------------------------------------------------------

StateVector StateVector::zero(int n) {
  if (n < 1 || n > 26) throw std::invalid_argument("qubit count out of range");
  StateVector s;
  s.n = n;
  s.amps.assign(std::size_t(1) << n, cplx(0));
  s.amps[0] = 1.0;
  return s;
}

StateVector StateVector::basis(int n, const std::string& bits) {
  StateVector s = zero(n);
  if (static_cast<int>(bits.size()) != n)
    throw std::invalid_argument("bit string length must match qubit count");
  std::size_t idx = 0;
  for (int q = 0; q < n; ++q) {
    const char b = bits[static_cast<std::size_t>(q)];
    if (b != '0' && b != '1')
      throw std::invalid_argument("bit string must contain only 0 and 1");
    if (b == '1') idx |= std::size_t(1) << (n - 1 - q);
  }
  s.amps[0] = 0.0;
  s.amps[idx] = 1.0;
  return s;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amps) s += std::norm(a);
  return std::sqrt(s);
}

void apply_gate(StateVector& psi, const Gate& g) {
  check_gate(psi.n, g);
  apply_gate_raw(psi.amps.data(), psi.dim(), psi.n, g, g.theta);
}

void apply_gate(StateVector& psi, const Gate& g, double theta) {
  if (g.kind != GateKind::PauliRot)
    throw std::invalid_argument("angle override requires a rotation gate");
  check_gate(psi.n, g);
  apply_gate_raw(psi.amps.data(), psi.dim(), psi.n, g, theta);
}

void apply_gate_inverse(StateVector& psi, const Gate& g) {
  check_gate(psi.n, g);
  switch (g.kind) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::Z:
    case GateKind::CNOT:
    case GateKind::CZ:
      apply_gate_raw(psi.amps.data(), psi.dim(), psi.n, g, 0.0);
      return;
    case GateKind::P: {
      cplx m[4] = {1, 0, 0, cplx(0, -1)};
      kern::active().apply1q(psi.amps.data(), psi.dim(),
                             index_bit(psi.n, g.qubits[0]), m);
      return;
    }
    case GateKind::PauliRot:
      apply_gate_raw(psi.amps.data(), psi.dim(), psi.n, g, -g.theta);
      return;
    case GateKind::Unitary: {
      Gate inv = g;
      if (g.matrix.size() == 4) {
        inv.matrix = {std::conj(g.matrix[0]), std::conj(g.matrix[2]),
                      std::conj(g.matrix[1]), std::conj(g.matrix[3])};
      } else {
        for (int r = 0; r < 4; ++r)
          for (int c = 0; c < 4; ++c)
            inv.matrix[static_cast<std::size_t>(4 * r + c)] =
                std::conj(g.matrix[static_cast<std::size_t>(4 * c + r)]);
      }
      apply_gate_raw(psi.amps.data(), psi.dim(), psi.n, inv, 0.0);
      return;
    }
  }
  throw std::logic_error("unhandled gate kind");
}

void apply_circuit(StateVector& psi, const Circuit& c) {
  for (const auto& g : c) apply_gate(psi, g);
}

void apply_pauli(StateVector& psi, const PauliString& s) {
  if (s.n != psi.n) throw std::invalid_argument("qubit count mismatch");
  const std::uint64_t xi = detail::to_index_space(s.x_mask, s.n);
  const std::uint64_t zi = detail::to_index_space(s.z_mask, s.n);
  const cplx base = kIPow[(s.phase_exp + std::popcount(s.x_mask & s.z_mask)) & 3];
  cplx* amps = psi.amps.data();
  const std::size_t dim = psi.dim();
  if (xi == 0) {
    for (std::size_t r = 0; r < dim; ++r)
      amps[r] *= (std::popcount(r & zi) & 1) ? -base : base;
    return;
  }
  const std::uint64_t hb = std::uint64_t(1) << (63 - std::countl_zero(xi));
  const double q = (std::popcount(xi & zi) & 1) ? -1.0 : 1.0;
  for (std::size_t r = 0; r < dim; ++r) {
    if (r & hb) continue;
    const std::size_t t = r ^ xi;
    const double sgn = (std::popcount(r & zi) & 1) ? -1.0 : 1.0;
    const cplx ar = amps[r], at = amps[t];
    amps[r] = base * (sgn * q) * at;
    amps[t] = base * sgn * ar;
  }
}

double expectation(const StateVector& psi, const PauliString& s) {
  if (s.n != psi.n) throw std::invalid_argument("qubit count mismatch");
  const std::uint64_t xi = detail::to_index_space(s.x_mask, s.n);
  const std::uint64_t zi = detail::to_index_space(s.z_mask, s.n);
  const cplx base = kIPow[(s.phase_exp + std::popcount(s.x_mask & s.z_mask)) & 3];
  return kern::active().expect_pauli(psi.amps.data(), psi.dim(), xi, zi, base);
}

double expectation(const StateVector& psi, const PauliSum& h) {
  if (h.n() != psi.n) throw std::invalid_argument("qubit count mismatch");
  double e = 0.0;
  for (const auto& [key, coeff] : h.terms()) {
    const std::uint64_t xi = detail::to_index_space(key.first, h.n());
    const std::uint64_t zi = detail::to_index_space(key.second, h.n());
    const cplx base = kIPow[std::popcount(key.first & key.second) & 3];
    e += coeff * kern::active().expect_pauli(psi.amps.data(), psi.dim(), xi,
                                             zi, base);
  }
  return e;
}

cplx overlap(const StateVector& a, const StateVector& b) {
  if (a.n != b.n) throw std::invalid_argument("qubit count mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    s += std::conj(a.amps[i]) * b.amps[i];
  return s;
}

std::map<std::string, std::int64_t> sample_counts(const StateVector& psi,
                                                  const Circuit& basis_rotations,
                                                  std::int64_t shots,
                                                  std::uint64_t seed) {
  if (std::abs(psi.norm() - 1.0) > 1e-10)
    throw std::runtime_error("state is not normalized");
  StateVector rotated = psi;
  apply_circuit(rotated, basis_rotations);
  std::vector<double> p(rotated.dim());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(rotated.amps[i]);
  return sample_probs(p, psi.n, shots, seed);
}

// --- mixed states ------------------------------------------------------------

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  if (psi.n > 10)
    throw std::invalid_argument("density matrices support at most 10 qubits");
  DensityMatrix d;
  d.n = psi.n;
  const auto dim = static_cast<Eigen::Index>(psi.dim());
  Eigen::Map<const Eigen::VectorXcd> v(psi.amps.data(), dim);
  d.rho = v * v.adjoint();
  return d;
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
  if (n < 1 || n > 10)
    throw std::invalid_argument("density matrices support at most 10 qubits");
  DensityMatrix d;
  d.n = n;
  const auto dim = static_cast<Eigen::Index>(std::size_t(1) << n);
  d.rho = Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
  return d;
}

double DensityMatrix::purity() const { return rho.squaredNorm(); }

void apply_gate(DensityMatrix& dm, const Gate& g) {
  check_gate(dm.n, g);
  const std::size_t dim = dm.dim();
  for (Eigen::Index j = 0; j < dm.rho.cols(); ++j)
    apply_gate_raw(dm.rho.col(j).data(), dim, dm.n, g, g.theta);
  Eigen::MatrixXcd t = dm.rho.adjoint();
  for (Eigen::Index j = 0; j < t.cols(); ++j)
    apply_gate_raw(t.col(j).data(), dim, dm.n, g, g.theta);
  dm.rho = t.adjoint();
}

double expectation(const DensityMatrix& dm, const PauliString& s) {
  if (s.n != dm.n) throw std::invalid_argument("qubit count mismatch");
  const std::uint64_t xi = detail::to_index_space(s.x_mask, s.n);
  const std::uint64_t zi = detail::to_index_space(s.z_mask, s.n);
  const cplx base = kIPow[(s.phase_exp + std::popcount(s.x_mask & s.z_mask)) & 3];
  cplx acc = 0.0;
  const std::size_t dim = dm.dim();
  for (std::size_t r = 0; r < dim; ++r) {
    const cplx v = dm.rho(static_cast<Eigen::Index>(r),
                          static_cast<Eigen::Index>(r ^ xi));
    acc += (std::popcount(r & zi) & 1) ? -v : v;
  }
  return (base * acc).real();
}

double expectation(const DensityMatrix& dm, const PauliSum& h) {
  if (h.n() != dm.n) throw std::invalid_argument("qubit count mismatch");
  double e = 0.0;
  for (const auto& [key, coeff] : h.terms()) {
    PauliString s{h.n(), key.first, key.second, 0};
    e += coeff * expectation(dm, s);
  }
  return e;
}

double fidelity_pure(const DensityMatrix& dm, const StateVector& psi) {
  if (psi.n != dm.n) throw std::invalid_argument("qubit count mismatch");
  Eigen::Map<const Eigen::VectorXcd> v(psi.amps.data(),
                                       static_cast<Eigen::Index>(psi.dim()));
  return (v.adjoint() * dm.rho * v)(0, 0).real();
}

void apply_depolarizing(DensityMatrix& dm, double p,
                        const std::vector<int>& qubits) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("depolarizing strength out of range");
  std::vector<int> qs = qubits;
  std::sort(qs.begin(), qs.end());
  if (std::adjacent_find(qs.begin(), qs.end()) != qs.end())
    throw std::invalid_argument("depolarizing qubits must be distinct");
  for (int q : qs) check_qubit(dm.n, q);
  if (p == 0.0 || qs.empty()) return;

  const std::size_t dim = dm.dim();
  std::size_t my = 0;
  for (int q : qs) my |= std::size_t(1) << index_bit(dm.n, q);
  const std::size_t comp = ~my & (dim - 1);
  const int k = static_cast<int>(qs.size());
  const std::size_t dy = std::size_t(1) << k;
  const std::size_t dc = dim >> k;

  std::vector<std::size_t> ys(dy), cs(dc);
  for (std::size_t y = 0; y < dy; ++y) ys[y] = scatter_bits(y, my);
  for (std::size_t c = 0; c < dc; ++c) cs[c] = scatter_bits(c, comp);

  Eigen::MatrixXcd traced(static_cast<Eigen::Index>(dc),
                          static_cast<Eigen::Index>(dc));
  for (std::size_t rc = 0; rc < dc; ++rc)
    for (std::size_t cc = 0; cc < dc; ++cc) {
      cplx s = 0.0;
      for (std::size_t y = 0; y < dy; ++y)
        s += dm.rho(static_cast<Eigen::Index>(cs[rc] | ys[y]),
                    static_cast<Eigen::Index>(cs[cc] | ys[y]));
      traced(static_cast<Eigen::Index>(rc), static_cast<Eigen::Index>(cc)) = s;
    }

  dm.rho *= (1.0 - p);
  const double w = p / static_cast<double>(dy);
  for (std::size_t rc = 0; rc < dc; ++rc)
    for (std::size_t cc = 0; cc < dc; ++cc) {
      const cplx add = w * traced(static_cast<Eigen::Index>(rc),
                                  static_cast<Eigen::Index>(cc));
      for (std::size_t y = 0; y < dy; ++y)
        dm.rho(static_cast<Eigen::Index>(cs[rc] | ys[y]),
               static_cast<Eigen::Index>(cs[cc] | ys[y])) += add;
    }
}

DensityMatrix evolve_noisy(const Circuit& c, const NoiseModel& noise,
                           const DensityMatrix& initial) {
  DensityMatrix dm = initial;
  for (const auto& g : c) {
    apply_gate(dm, g);
    const double p = (g.qubits.size() == 1) ? noise.p1 : noise.p2;
    if (p > 0.0) apply_depolarizing(dm, p, g.qubits);
  }
  return dm;
}

DensityMatrix global_depol_state(int n, double alpha) {
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("mixing weight out of range");
  StateVector ghz = StateVector::zero(n);
  apply_circuit(ghz, make_ghz(n));
  DensityMatrix dm = DensityMatrix::pure(ghz);
  const auto dim = static_cast<Eigen::Index>(dm.dim());
  dm.rho = (1.0 - alpha) * dm.rho +
           (alpha / static_cast<double>(dim)) *
               Eigen::MatrixXcd::Identity(dim, dim);
  return dm;
}

std::map<std::string, std::int64_t> sample_counts(const DensityMatrix& rho,
                                                  const Circuit& basis_rotations,
                                                  std::int64_t shots,
                                                  std::uint64_t seed) {
  DensityMatrix rotated = rho;
  for (const auto& g : basis_rotations) apply_gate(rotated, g);
  std::vector<double> p(rotated.dim());
  for (std::size_t i = 0; i < p.size(); ++i)
    p[i] = rotated.rho(static_cast<Eigen::Index>(i),
                       static_cast<Eigen::Index>(i)).real();
  return sample_probs(p, rho.n, shots, seed);
}

std::string histogram_csv(const std::map<std::string, std::int64_t>& counts) {
  std::ostringstream out;
  out << "bitstring,count\n";
  for (const auto& [bits, c] : counts) out << bits << "," << c << "\n";
  return out.str();
}

}  // namespace vqlab
