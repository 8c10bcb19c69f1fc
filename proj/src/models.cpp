// Copyright (c) 2026 vqlab contributors
// SPDX-License-Identifier: Apache-2.0
#include "vqlab/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "vqlab/rng.hpp"

namespace vqlab {

namespace {

void check_modes(int modes, int mode) {
  if (mode < 0 || mode >= modes)
    throw std::invalid_argument("mode index out of range");
}

// Unordered bond set for a chain; the two-site ring keeps its single bond.
std::vector<std::pair<int, int>> bonds(int n, int offset, Boundary b) {
  std::set<std::pair<int, int>> seen;
  std::vector<std::pair<int, int>> out;
  const int last = (b == Boundary::Ring) ? n : n - offset;
  for (int i = 0; i < last; ++i) {
    int j = i + offset;
    if (b == Boundary::Ring) j %= n;
    if (j >= n || i == j) continue;
    const std::pair<int, int> key = std::minmax(i, j);
    if (seen.insert(key).second) out.push_back({i, j});
  }
  return out;
}

}  // namespace

// --- fermionic operators -----------------------------------------------------

FermionOperator::FermionOperator(int modes) : modes_(modes) {
  if (modes < 1 || modes > 32)
    throw std::invalid_argument("mode count out of range");
}

void FermionOperator::add(std::vector<FermionOp> ops, cplx coeff) {
  for (const auto& [mode, dag] : ops) check_modes(modes_, mode);
  std::deque<std::pair<std::vector<FermionOp>, cplx>> work;
  work.push_back({std::move(ops), coeff});
  while (!work.empty()) {
    auto [v, c] = std::move(work.front());
    work.pop_front();
    if (c == cplx(0)) continue;
    bool reduced = false;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      const FermionOp a = v[i], b = v[i + 1];
      if (!a.second && b.second) {
        // Annihilator left of a creator: anticommute (plus contraction).
        if (a.first == b.first) {
          std::vector<FermionOp> shorter = v;
          shorter.erase(shorter.begin() + static_cast<std::ptrdiff_t>(i),
                        shorter.begin() + static_cast<std::ptrdiff_t>(i) + 2);
          work.push_back({std::move(shorter), c});
        }
        std::swap(v[i], v[i + 1]);
        work.push_back({std::move(v), -c});
        reduced = true;
        break;
      }
      if (a.second == b.second) {
        if (a.first == b.first) {
          reduced = true;  // repeated operator annihilates the term
          break;
        }
        const bool wrong = a.second ? (a.first > b.first)
                                    : (a.first < b.first);
        if (wrong) {
          std::swap(v[i], v[i + 1]);
          work.push_back({std::move(v), -c});
          reduced = true;
          break;
        }
      }
    }
    if (!reduced) {
      auto it = terms_.find(v);
      if (it == terms_.end())
        terms_.emplace(std::move(v), c);
      else
        it->second += c;
    }
  }
}

void FermionOperator::add(const FermionOperator& other, cplx scale) {
  if (other.modes_ != modes_)
    throw std::invalid_argument("mode count mismatch");
  for (const auto& [ops, c] : other.terms_) add(ops, scale * c);
}

FermionOperator FermionOperator::dagger() const {
  FermionOperator out(modes_);
  for (const auto& [ops, c] : terms_) {
    std::vector<FermionOp> rev(ops.rbegin(), ops.rend());
    for (auto& [mode, dag] : rev) dag = !dag;
    out.add(std::move(rev), std::conj(c));
  }
  return out;
}

void FermionOperator::prune(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= tol)
      it = terms_.erase(it);
    else
      ++it;
  }
}

std::string FermionOperator::str() const {
  std::ostringstream out;
  out.precision(17);
  for (const auto& [ops, c] : terms_) {
    out << c.real() << " " << c.imag();
    for (const auto& [mode, dag] : ops)
      out << " a" << (dag ? "^" : "") << " " << mode;
    out << "\n";
  }
  return out.str();
}

FermionOperator FermionOperator::parse(int modes, const std::string& text) {
  FermionOperator out(modes);
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::istringstream in(line);
    double re, im;
    if (!(in >> re >> im))
      throw std::invalid_argument("bad fermion term line: " + line);
    std::vector<FermionOp> ops;
    std::string tok;
    while (in >> tok) {
      bool dag;
      if (tok == "a^")
        dag = true;
      else if (tok == "a")
        dag = false;
      else
        throw std::invalid_argument("bad fermion operator token: " + tok);
      int mode;
      if (!(in >> mode))
        throw std::invalid_argument("missing mode index in: " + line);
      ops.push_back({mode, dag});
    }
    out.add(std::move(ops), cplx(re, im));
  }
  return out;
}

// --- model construction --------------------------------------------------------

PauliSum build_tfi(int n, double j, double h, Boundary boundary) {
  if (n < 2) throw std::invalid_argument("model needs at least two sites");
  PauliSum out(n);
  for (const auto& [a, b] : bonds(n, 1, boundary)) {
    PauliString zz = mul(PauliString::single(n, a, 'Z'),
                         PauliString::single(n, b, 'Z'));
    out.add(zz, j);
  }
  for (int q = 0; q < n; ++q) out.add(PauliString::single(n, q, 'X'), h);
  out.prune();
  return out;
}

PauliSum build_xxz(int n, double jperp, double jz, Boundary boundary) {
  if (n < 2) throw std::invalid_argument("model needs at least two sites");
  PauliSum out(n);
  for (const auto& [a, b] : bonds(n, 1, boundary)) {
    out.add(mul(PauliString::single(n, a, 'X'),
                PauliString::single(n, b, 'X')),
            jperp);
    out.add(mul(PauliString::single(n, a, 'Y'),
                PauliString::single(n, b, 'Y')),
            jperp);
    out.add(mul(PauliString::single(n, a, 'Z'),
                PauliString::single(n, b, 'Z')),
            jz);
  }
  out.prune();
  return out;
}

FermionOperator build_hubbard_spinless(int n, double t, double v1, double v2,
                                       Boundary boundary) {
  if (n < 2) throw std::invalid_argument("model needs at least two sites");
  FermionOperator out(n);
  for (const auto& [a, b] : bonds(n, 1, boundary)) {
    out.add({{a, true}, {b, false}}, -t);
    out.add({{b, true}, {a, false}}, -t);
    out.add({{a, true}, {a, false}, {b, true}, {b, false}}, v1);
  }
  for (const auto& [a, b] : bonds(n, 2, boundary))
    out.add({{a, true}, {a, false}, {b, true}, {b, false}}, v2);
  out.prune();
  return out;
}

PauliSum build_random_interpolated(int n, double alpha, std::uint64_t seed) {
  if (n < 1 || n > 6)
    throw std::invalid_argument("random interpolation supports at most 6 qubits");
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("interpolation weight out of range");
  const auto dim = static_cast<Eigen::Index>(std::size_t(1) << n);
  auto draw = [&](std::uint64_t stream) {
    Rng rng(Rng::hash2(seed, stream));
    Eigen::MatrixXcd a(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
      for (Eigen::Index c = 0; c < dim; ++c)
        a(r, c) = cplx(rng.normal(), rng.normal());
    return Eigen::MatrixXcd(0.5 * (a + a.adjoint()));
  };
  const Eigen::MatrixXcd h = (1.0 - alpha) * draw(1) + alpha * draw(2);
  PauliSum out = decompose(HermitianDense::from(n, h));
  out.prune();
  return out;
}

PauliSum build_model(const ModelSpec& spec) {
  switch (spec.family) {
    case ModelSpec::Family::TFI:
      return build_tfi(spec.n, spec.j, spec.h, spec.boundary);
    case ModelSpec::Family::XXZ:
      return build_xxz(spec.n, spec.jperp, spec.jz, spec.boundary);
    case ModelSpec::Family::HubbardSpinless: {
      const FermionOperator f = build_hubbard_spinless(
          spec.n, spec.t, spec.v1, spec.v2, spec.boundary);
      return spec.encoding == FermionEncoding::JordanWigner
                 ? jordan_wigner(f)
                 : bravyi_kitaev(f);
    }
    case ModelSpec::Family::RandomInterpolated:
      return build_random_interpolated(spec.n, spec.alpha, spec.seed);
  }
  throw std::logic_error("unhandled model family");
}

// --- fermion-to-qubit transforms ------------------------------------------------

namespace {

// Shared linear-extension scaffold: every mode is mapped to a two-string
// image a_mode = ha*s1 + wa*s2 (dagger flips the sign of the imaginary
// weight), and monomials are expanded by symbolic multiplication.
PauliSum encode_fermions(
    const FermionOperator& f,
    const std::function<std::pair<PauliString, PauliString>(int)>& image) {
  const int n = f.modes();
  detail::CAccum acc;
  for (const auto& [ops, c] : f.terms()) {
    detail::CAccum cur;
    cur[{0, 0}] = c;
    for (const auto& [mode, dag] : ops) {
      const auto [s1, s2] = image(mode);
      const cplx w1 = 0.5;
      const cplx w2 = dag ? cplx(0, -0.5) : cplx(0, 0.5);
      detail::CAccum next;
      for (const auto& [key, kc] : cur) {
        const PauliString a{n, key.first, key.second, 0};
        detail::accum_mul_into(next, a, kc, s1, w1);
        detail::accum_mul_into(next, a, kc, s2, w2);
      }
      cur = std::move(next);
    }
    for (const auto& [key, kc] : cur) acc[key] += kc;
  }
  PauliSum out = detail::accum_to_sum(n, acc, 1e-9);
  out.prune();
  return out;
}

}  // namespace

PauliSum jordan_wigner(const FermionOperator& f) {
  const int n = f.modes();
  return encode_fermions(f, [n](int mode) {
    const std::uint64_t trail = (std::uint64_t(1) << mode) - 1;
    const std::uint64_t xb = std::uint64_t(1) << mode;
    const PauliString s1{n, xb, trail, 0};       // Z trail times X
    const PauliString s2{n, xb, trail | xb, 0};  // Z trail times Y
    return std::pair<PauliString, PauliString>(s1, s2);
  });
}

std::vector<std::vector<int>> bravyi_kitaev_matrix(int modes) {
  if (modes < 1 || modes > 32)
    throw std::invalid_argument("mode count out of range");
  int p = 1;
  while (p < modes) p <<= 1;
  std::vector<std::vector<int>> beta{{1}};
  while (static_cast<int>(beta.size()) < p) {
    const int sz = static_cast<int>(beta.size());
    std::vector<std::vector<int>> next(
        static_cast<std::size_t>(2 * sz),
        std::vector<int>(static_cast<std::size_t>(2 * sz), 0));
    for (int r = 0; r < sz; ++r)
      for (int c = 0; c < sz; ++c) {
        next[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
            beta[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        next[static_cast<std::size_t>(sz + r)][static_cast<std::size_t>(sz + c)] =
            beta[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      }
    for (int c = 0; c < sz; ++c)
      next[static_cast<std::size_t>(2 * sz - 1)][static_cast<std::size_t>(c)] = 1;
    beta = std::move(next);
  }
  beta.resize(static_cast<std::size_t>(modes));
  for (auto& row : beta) row.resize(static_cast<std::size_t>(modes));
  return beta;
}

namespace {

// GF(2) inverse of a lower-unitriangular matrix by forward substitution.
std::vector<std::vector<int>> gf2_inverse(
    const std::vector<std::vector<int>>& m) {
  const int n = static_cast<int>(m.size());
  std::vector<std::vector<int>> a = m;
  std::vector<std::vector<int>> inv(
      static_cast<std::size_t>(n),
      std::vector<int>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  for (int col = 0; col < n; ++col) {
    if (a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)] != 1)
      throw std::logic_error("encoding matrix is not unitriangular");
    for (int row = col + 1; row < n; ++row) {
      if (a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] == 0) continue;
      for (int k = 0; k < n; ++k) {
        a[static_cast<std::size_t>(row)][static_cast<std::size_t>(k)] ^=
            a[static_cast<std::size_t>(col)][static_cast<std::size_t>(k)];
        inv[static_cast<std::size_t>(row)][static_cast<std::size_t>(k)] ^=
            inv[static_cast<std::size_t>(col)][static_cast<std::size_t>(k)];
      }
    }
  }
  return inv;
}

}  // namespace

BkSets bravyi_kitaev_sets(int modes, int j) {
  check_modes(modes, j);
  const auto beta = bravyi_kitaev_matrix(modes);
  const auto inv = gf2_inverse(beta);
  BkSets out;
  for (int k = j + 1; k < modes; ++k)
    if (beta[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)])
      out.update.push_back(k);
  for (int s = 0; s < modes; ++s)
    if (s != j && beta[static_cast<std::size_t>(j)][static_cast<std::size_t>(s)])
      out.flip.push_back(s);
  std::vector<int> parity_bits(static_cast<std::size_t>(modes), 0);
  for (int s = 0; s < j; ++s)
    for (int k = 0; k < modes; ++k)
      parity_bits[static_cast<std::size_t>(k)] ^=
          inv[static_cast<std::size_t>(s)][static_cast<std::size_t>(k)];
  for (int k = 0; k < modes; ++k)
    if (parity_bits[static_cast<std::size_t>(k)]) out.parity.push_back(k);
  for (int k : out.parity)
    if (std::find(out.flip.begin(), out.flip.end(), k) == out.flip.end())
      out.remainder.push_back(k);
  return out;
}

PauliSum bravyi_kitaev(const FermionOperator& f) {
  const int n = f.modes();
  std::vector<std::pair<PauliString, PauliString>> images;
  images.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const BkSets sets = bravyi_kitaev_sets(n, j);
    std::uint64_t xu = std::uint64_t(1) << j;
    for (int k : sets.update) xu |= std::uint64_t(1) << k;
    std::uint64_t zp = 0, zr = 0;
    for (int k : sets.parity) zp |= std::uint64_t(1) << k;
    for (int k : sets.remainder) zr |= std::uint64_t(1) << k;
    const PauliString s1{n, xu, zp, 0};
    const PauliString s2{n, xu, zr | (std::uint64_t(1) << j), 0};
    images.push_back({s1, s2});
  }
  return encode_fermions(f, [&images](int mode) {
    return images[static_cast<std::size_t>(mode)];
  });
}

PauliSum add_number_penalty(const PauliSum& h, int m, double penalty,
                            FermionEncoding encoding) {
  if (penalty <= 0.0)
    throw std::invalid_argument("penalty strength must be positive");
  if (m < 0 || m > h.n())
    throw std::invalid_argument("target particle count out of range");
  FermionOperator nf(h.n());
  for (int j = 0; j < h.n(); ++j) nf.add({{j, true}, {j, false}}, 1.0);
  const PauliSum num = encoding == FermionEncoding::JordanWigner
                           ? jordan_wigner(nf)
                           : bravyi_kitaev(nf);
  PauliSum out = h;
  out.add(mul(num, num), penalty);
  out.add(num, -2.0 * penalty * m);
  out.add(PauliString::identity(h.n()),
          penalty * static_cast<double>(m) * static_cast<double>(m));
  out.prune();
  return out;
}

// --- exact diagonalization ------------------------------------------------------

GroundState exact_ground(const PauliSum& h) {
  const int n = h.n();
  if (n > 10) throw std::invalid_argument("dense ground state needs n <= 10");
  const auto dim = static_cast<Eigen::Index>(std::size_t(1) << n);

  bool real_matrix = true;
  for (const auto& [key, coeff] : h.terms()) {
    (void)coeff;
    if (std::popcount(key.first & key.second) & 1) {
      real_matrix = false;
      break;
    }
  }

  Eigen::VectorXd evals;
  Eigen::VectorXcd ground;
  if (real_matrix) {
    const Eigen::MatrixXd hd = to_dense(h).mat.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hd);
    evals = es.eigenvalues();
    ground = es.eigenvectors().col(0).cast<cplx>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_dense(h).mat);
    evals = es.eigenvalues();
    ground = es.eigenvectors().col(0);
  }

  GroundState out;
  out.energy = evals(0);
  out.degenerate = dim > 1 && (evals(1) - evals(0) <= 1e-8);
  out.state = StateVector::zero(n);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < dim; ++i)
    if (std::abs(ground(i)) > std::abs(ground(best))) best = i;
  const cplx phase = std::conj(ground(best)) / std::abs(ground(best));
  for (Eigen::Index i = 0; i < dim; ++i)
    out.state.amps[static_cast<std::size_t>(i)] = ground(i) * phase;
  return out;
}

double density_correlation(const StateVector& state, int m) {
  if (m < 0 || m >= state.n)
    throw std::invalid_argument("site separation out of range");
  const double z0 = expectation(state, PauliString::single(state.n, 0, 'Z'));
  const double zm = expectation(state, PauliString::single(state.n, m, 'Z'));
  const double zz =
      m == 0 ? 1.0
             : expectation(state, mul(PauliString::single(state.n, 0, 'Z'),
                                      PauliString::single(state.n, m, 'Z')));
  return (zz - z0 * zm) / 4.0;
}

}  // namespace vqlab
