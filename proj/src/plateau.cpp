// Copyright (c) 2026 vqlab contributors
// SPDX-License-Identifier: Apache-2.0
#include "vqlab/plateau.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>

namespace vqlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// E[U^t tensor conj(U)^t] over the Haar measure, with the row index
// (i_1 .. i_t, i'_1 .. i'_t) in base d, primes marking the conjugate
// copies. For t = 2 these are the two-permutation Weingarten weights
// 1/(d^2-1) and -1/(d(d^2-1)).
Eigen::MatrixXcd haar_op_t1(int d) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i * d + i, j * d + j) = 1.0 / d;
  return m;
}

Eigen::MatrixXcd haar_op_t2(int d) {
  const double wg_e = 1.0 / (double(d) * d - 1.0);
  const double wg_s = -1.0 / (double(d) * (double(d) * d - 1.0));
  const int dd = d * d;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dd * dd, dd * dd);
  for (int i1 = 0; i1 < d; ++i1)
    for (int i2 = 0; i2 < d; ++i2)
      for (int k1 = 0; k1 < d; ++k1)
        for (int k2 = 0; k2 < d; ++k2) {
          const int row = ((i1 * d + i2) * d + k1) * d + k2;
          const bool ie = i1 == k1 && i2 == k2;
          const bool is = i1 == k2 && i2 == k1;
          if (!ie && !is) continue;
          for (int j1 = 0; j1 < d; ++j1)
            for (int j2 = 0; j2 < d; ++j2)
              for (int l1 = 0; l1 < d; ++l1)
                for (int l2 = 0; l2 < d; ++l2) {
                  const bool je = j1 == l1 && j2 == l2;
                  const bool js = j1 == l2 && j2 == l1;
                  if (!je && !js) continue;
                  double v = 0.0;
                  if (ie && je) v += wg_e;
                  if (is && js) v += wg_e;
                  if (ie && js) v += wg_s;
                  if (is && je) v += wg_s;
                  m(row, ((j1 * d + j2) * d + l1) * d + l2) = v;
                }
        }
  return m;
}

void induced_norms(const Eigen::MatrixXcd& a, double* l1, double* l2,
                   double* linf) {
  double col = 0.0, row = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    col = std::max(col, a.col(j).cwiseAbs().sum());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    row = std::max(row, a.row(i).cwiseAbs().sum());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.adjoint() * a);
  *l1 = col;
  *linf = row;
  *l2 = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

std::uint64_t qubit_bit(int q) { return std::uint64_t{1} << q; }

// Sampling-noise scale of the lambda estimators at this N, anchored on
// the Haar self-test at N = 500000 and following the 1/sqrt(N) law.
void noise_scales(int t, std::int64_t n, double* s1, double* s2,
                  double* sinf) {
  const double f = std::sqrt(500000.0 / double(n));
  if (t == 2) {
    *s1 = 0.022 * f;
    *s2 = 0.0028 * f;
    *sinf = 0.022 * f;
  } else {
    *s1 = 0.006 * f;
    *s2 = 0.0028 * f;
    *sinf = 0.006 * f;
  }
}

TpeEstimate tpe_from_samples(BlockKind family, bool haar, int t,
                             std::int64_t samples, std::uint64_t seed) {
  if (t != 1 && t != 2)
    throw std::invalid_argument("tpe_distance: t must be 1 or 2");
  if (samples < 1)
    throw std::invalid_argument("tpe_distance: need at least one sample");
  if (!haar && block_width(family) != 2)
    throw std::invalid_argument(
        "tpe_distance: only two-qubit families are supported");

  const int d = 4;
  const int dim = (t == 1) ? d * d : d * d * d * d;
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
  Rng rng(seed);
  const int k = haar ? 0 : block_param_count(family);
  std::vector<double> theta(k);
  for (std::int64_t s = 0; s < samples; ++s) {
    Eigen::MatrixXcd u;
    if (haar) {
      u = haar_unitary(d, rng);
    } else {
      for (int i = 0; i < k; ++i) theta[i] = rng.uniform(-kPi, kPi);
      u = block_matrix(family, theta);
    }
    if (t == 1) {
      const Eigen::MatrixXcd uc = u.conjugate();
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          acc.block(i * d, j * d, d, d).noalias() += u(i, j) * uc;
    } else {
      const Eigen::MatrixXcd u2 = kron(u, u);
      const Eigen::MatrixXcd u2c = u2.conjugate();
      const int dd = d * d;
      for (int i = 0; i < dd; ++i)
        for (int j = 0; j < dd; ++j)
          acc.block(i * dd, j * dd, dd, dd).noalias() += u2(i, j) * u2c;
    }
  }
  acc /= double(samples);

  const Eigen::MatrixXcd diff =
      ((t == 1) ? haar_op_t1(d) : haar_op_t2(d)) - acc;
  TpeEstimate out;
  out.family = family;
  out.t = t;
  out.samples = samples;
  induced_norms(diff, &out.lambda1, &out.lambda2, &out.lambda_inf);
  noise_scales(t, samples, &out.se1, &out.se2, &out.se_inf);
  return out;
}

}  // namespace

SuperPauliEnsemble super_string(const PauliString& h, double weight) {
  if (h.phase_exp % 2 != 0)
    throw std::invalid_argument("super_string: string must be Hermitian");
  SuperPauliEnsemble e;
  e.n = h.n;
  e.entries[{h.x_mask, h.z_mask}] = weight;
  return e;
}

double weight_sum(const SuperPauliEnsemble& e) {
  double s = 0.0;
  for (const auto& [key, w] : e.entries) s += w;
  return s;
}

Eigen::MatrixXcd haar_moment_t1(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw std::invalid_argument("haar_moment_t1: matrix must be square");
  const double d = double(a.rows());
  return (a.trace() / d) *
         Eigen::MatrixXcd::Identity(a.rows(), a.rows());
}

Eigen::MatrixXcd haar_moment_t2(const Eigen::MatrixXcd& a,
                                const Eigen::MatrixXcd& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw std::invalid_argument(
        "haar_moment_t2: matrices must be square with equal dims");
  const Eigen::Index d = a.rows();
  if (d < 2)
    throw std::invalid_argument(
        "haar_moment_t2: dimension 1 leaves d^2 - 1 = 0");
  const std::complex<double> tra = a.trace();
  const std::complex<double> trb = b.trace();
  const std::complex<double> trab = (a * b).trace();
  const double dd = double(d);
  const double denom = dd * dd - 1.0;
  const std::complex<double> c_id = (tra * trb - trab / dd) / denom;
  const std::complex<double> c_sw = (trab - tra * trb / dd) / denom;
  Eigen::MatrixXcd m = c_id * Eigen::MatrixXcd::Identity(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i * d + j, j * d + i) += c_sw;
  return m;
}

Eigen::MatrixXcd haar_unitary(int dim, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("haar_unitary: dim must be >= 1");
  Eigen::MatrixXcd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      a(i, j) = std::complex<double>(re, im);
    }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    const std::complex<double> rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= (mag > 0.0) ? rjj / mag : std::complex<double>(1.0, 0.0);
  }
  return q;
}

SuperPauliEnsemble mixer_apply(const SuperPauliEnsemble& e,
                               const MixerSpec& m) {
  if (m.qubits.empty())
    throw std::invalid_argument("mixer_apply: empty support");
  std::vector<int> qs = m.qubits;
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
  std::uint64_t mask = 0;
  for (int q : qs) {
    if (q < 0 || q >= e.n)
      throw std::invalid_argument("mixer_apply: qubit outside register");
    mask |= qubit_bit(q);
  }
  const int k = int(qs.size());
  const std::uint64_t codes = (std::uint64_t{1} << (2 * k)) - 1;
  const double share = 1.0 / double(codes);

  SuperPauliEnsemble out;
  out.n = e.n;
  for (const auto& [key, w] : e.entries) {
    if (((key.first | key.second) & mask) == 0) {
      out.entries[key] += w;
      continue;
    }
    const std::uint64_t x_off = key.first & ~mask;
    const std::uint64_t z_off = key.second & ~mask;
    for (std::uint64_t code = 1; code <= codes; ++code) {
      std::uint64_t x = x_off, z = z_off;
      for (int i = 0; i < k; ++i) {
        const std::uint64_t p = (code >> (2 * i)) & 3;
        if (p & 1) x |= qubit_bit(qs[i]);
        if (p & 2) z |= qubit_bit(qs[i]);
      }
      out.entries[{x, z}] += w * share;
    }
  }
  return out;
}

SuperPauliEnsemble commutator_superop(const SuperPauliEnsemble& e,
                                      const PauliString& f) {
  if (f.n != e.n)
    throw std::invalid_argument("commutator_superop: size mismatch");
  if ((f.x_mask | f.z_mask) == 0)
    throw std::invalid_argument("commutator_superop: trivial string");
  SuperPauliEnsemble out;
  out.n = e.n;
  for (const auto& [key, w] : e.entries) {
    const int sym = (std::popcount(key.first & f.z_mask) +
                     std::popcount(key.second & f.x_mask)) & 1;
    if (sym == 0) continue;  // commutes, both copies vanish
    out.entries[{key.first ^ f.x_mask, key.second ^ f.z_mask}] += 4.0 * w;
  }
  return out;
}

double zero_ket_average(const SuperPauliEnsemble& e) {
  double s = 0.0;
  for (const auto& [key, w] : e.entries)
    if (key.first == 0) s += w;
  return s;
}

double variance_lower_bound(const AnsatzLayout& layout, const PauliSum& h,
                            int block_id) {
  if (h.n() != layout.n)
    throw std::invalid_argument("variance_lower_bound: size mismatch");
  const Block* target = nullptr;
  int last_layer = 0;
  for (const Block& b : layout.blocks) {
    last_layer = std::max(last_layer, b.layer);
    if (b.id == block_id) target = &b;
  }
  if (target == nullptr)
    throw std::invalid_argument("variance_lower_bound: no such block");

  const double p4 = std::pow(4.0, double(target->qubits.size()));
  const double pref = 2.0 * p4 / (p4 - 1.0);
  const double depth = std::pow(0.75, double(last_layer - target->layer));

  double sum = 0.0;
  for (const auto& [key, c] : h.terms()) {
    if (key.first == 0 && key.second == 0) continue;
    const CausalCone cone = causal_cone(layout, h.term_string(key));
    if (!std::binary_search(cone.block_ids.begin(), cone.block_ids.end(),
                            block_id))
      continue;
    sum += c * c * std::pow(3.0, -double(cone.support_size));
  }
  return pref * depth * sum;
}

VarianceEstimate empirical_variance(const VqeProblem& p, int slot,
                                    int samples, std::uint64_t seed) {
  const int k = p.layout.param_count();
  if (slot < 0 || slot >= k)
    throw std::invalid_argument("empirical_variance: slot out of range");
  if (samples < 2)
    throw std::invalid_argument("empirical_variance: need >= 2 samples");
  if (!pauli_rot_slots(p.layout)[slot])
    throw std::invalid_argument(
        "empirical_variance: slot has no Pauli generator");

  const Block* owner = nullptr;
  for (const Block& b : p.layout.blocks)
    for (int s : b.slots)
      if (s == slot) owner = &b;
  bool in_cone = false;
  for (const auto& [key, c] : p.hamiltonian.terms()) {
    if (key.first == 0 && key.second == 0) continue;
    const CausalCone cone =
        causal_cone(p.layout, p.hamiltonian.term_string(key));
    if (owner != nullptr &&
        std::binary_search(cone.block_ids.begin(), cone.block_ids.end(),
                           owner->id)) {
      in_cone = true;
      break;
    }
  }
  if (!in_cone) return VarianceEstimate{};  // derivative identically zero

  Rng rng(seed);
  std::vector<double> g(samples);
  std::vector<double> theta(k);
  for (int s = 0; s < samples; ++s) {
    for (int i = 0; i < k; ++i) theta[i] = rng.uniform(-kPi, kPi);
    const double saved = theta[slot];
    theta[slot] = saved + kPi / 2.0;
    const double ep = energy(p, theta);
    theta[slot] = saved - kPi / 2.0;
    const double em = energy(p, theta);
    theta[slot] = saved;
    g[s] = (ep - em) / 2.0;
  }

  VarianceEstimate out;
  for (double v : g) out.mean += v;
  out.mean /= samples;
  for (double v : g) out.variance += (v - out.mean) * (v - out.mean);
  out.variance /= samples - 1;
  out.se_normal = out.variance * std::sqrt(2.0 / (samples - 1));

  const int b_count = 200;
  std::vector<double> boot(b_count);
  for (int b = 0; b < b_count; ++b) {
    double m1 = 0.0, m2 = 0.0;
    std::vector<double> pick(samples);
    for (int s = 0; s < samples; ++s)
      pick[s] = g[rng.below(std::uint64_t(samples))];
    for (double v : pick) m1 += v;
    m1 /= samples;
    for (double v : pick) m2 += (v - m1) * (v - m1);
    boot[b] = m2 / (samples - 1);
  }
  double bm = 0.0;
  for (double v : boot) bm += v;
  bm /= b_count;
  double bv = 0.0;
  for (double v : boot) bv += (v - bm) * (v - bm);
  out.se_bootstrap = std::sqrt(bv / (b_count - 1));
  return out;
}

std::vector<BlockVariance> block_variance_report(const VqeProblem& p,
                                                 int samples,
                                                 std::uint64_t seed) {
  std::vector<BlockVariance> rows;
  rows.reserve(p.layout.blocks.size());
  for (const Block& b : p.layout.blocks) {
    BlockVariance row;
    row.block_id = b.id;
    row.layer = b.layer;
    row.lower_bound =
        variance_lower_bound(p.layout, p.hamiltonian, b.id);
    double se2 = 0.0;
    for (int slot : b.slots) {
      const VarianceEstimate est =
          empirical_variance(p, slot, samples, Rng::hash2(seed, slot));
      row.empirical_var += est.variance;
      se2 += est.se_normal * est.se_normal;
    }
    const double k = double(b.slots.size());
    row.empirical_var /= k;
    row.se = std::sqrt(se2) / k;
    rows.push_back(row);
  }
  return rows;
}

std::string plateau_csv(const std::vector<BlockVariance>& rows) {
  std::string out = "block_id,layer,empirical_var,se,lower_bound\n";
  for (const BlockVariance& r : rows) {
    out += std::to_string(r.block_id) + ',' + std::to_string(r.layer) + ',';
    out += fmt12(r.empirical_var) + ',' + fmt12(r.se) + ',';
    out += fmt12(r.lower_bound) + '\n';
  }
  return out;
}

TpeEstimate tpe_distance(BlockKind family, int t, std::int64_t samples,
                         std::uint64_t seed) {
  return tpe_from_samples(family, false, t, samples, seed);
}

TpeEstimate tpe_haar_selftest(int t, std::int64_t samples,
                              std::uint64_t seed) {
  TpeEstimate out = tpe_from_samples(BlockKind::Entangler, true, t, samples,
                                     seed);
  out.haar = true;
  return out;
}

std::string tpe_csv(const std::vector<TpeEstimate>& rows) {
  std::string out = "family,t,N,lambda1,lambda2,lambda_inf\n";
  for (const TpeEstimate& r : rows) {
    out += (r.haar ? "Haar" : block_kind_name(r.family));
    out += ',' + std::to_string(r.t) + ',' + std::to_string(r.samples) + ',';
    out += fmt12(r.lambda1) + ',' + fmt12(r.lambda2) + ',';
    out += fmt12(r.lambda_inf) + '\n';
  }
  return out;
}

}  // namespace vqlab
