#include "vqlab/pauli.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vqlab {

namespace {

void check_n(int n) {
  if (n < 1 || n > 32) throw std::invalid_argument("qubit count out of range");
}

int popcount64(std::uint64_t v) { return std::popcount(v); }

using detail::to_index_space;

const cplx kIPow[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};

}  // namespace

PauliString PauliString::identity(int n) {
  check_n(n);
  return PauliString{n, 0, 0, 0};
}

PauliString PauliString::single(int n, int qubit, char axis) {
  check_n(n);
  if (qubit < 0 || qubit >= n) throw std::invalid_argument("qubit out of range");
  std::uint64_t bit = 1ULL << qubit;
  switch (axis) {
    case 'X': return PauliString{n, bit, 0, 0};
    case 'Y': return PauliString{n, bit, bit, 0};
    case 'Z': return PauliString{n, 0, bit, 0};
    default: throw std::invalid_argument("axis must be X, Y or Z");
  }
}

PauliString PauliString::from_masks(int n, std::uint64_t x, std::uint64_t z,
                                    int phase_exp) {
  check_n(n);
  std::uint64_t lim = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
  if ((x & ~lim) || (z & ~lim))
    throw std::invalid_argument("mask exceeds qubit count");
  return PauliString{n, x, z, ((phase_exp % 4) + 4) % 4};
}

PauliString PauliString::parse(const std::string& text) {
  std::size_t pos = 0;
  int phase = 0;
  if (text.compare(0, 3, "-i*") == 0) { phase = 3; pos = 3; }
  else if (text.compare(0, 2, "i*") == 0) { phase = 1; pos = 2; }
  else if (!text.empty() && text[0] == '-') { phase = 2; pos = 1; }
  std::string body = text.substr(pos);
  int n = static_cast<int>(body.size());
  check_n(n);
  std::uint64_t x = 0, z = 0;
  for (int q = 0; q < n; ++q) {
    switch (body[q]) {
      case 'I': break;
      case 'X': x |= 1ULL << q; break;
      case 'Y': x |= 1ULL << q; z |= 1ULL << q; break;
      case 'Z': z |= 1ULL << q; break;
      default: throw std::invalid_argument("bad Pauli letter");
    }
  }
  return PauliString{n, x, z, phase};
}

int PauliString::locality() const { return popcount64(x_mask | z_mask); }

char PauliString::axis_at(int qubit) const {
  bool x = (x_mask >> qubit) & 1ULL, z = (z_mask >> qubit) & 1ULL;
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

std::string PauliString::str() const {
  static const char* prefix[4] = {"", "i*", "-", "-i*"};
  std::string out = prefix[phase_exp & 3];
  for (int q = 0; q < n; ++q) out.push_back(axis_at(q));
  return out;
}

bool operator==(const PauliString& a, const PauliString& b) {
  return a.n == b.n && a.x_mask == b.x_mask && a.z_mask == b.z_mask &&
         a.phase_exp == b.phase_exp;
}

PauliString mul(const PauliString& a, const PauliString& b) {
  if (a.n != b.n) throw std::invalid_argument("size mismatch");
  std::uint64_t cx = a.x_mask ^ b.x_mask;
  std::uint64_t cz = a.z_mask ^ b.z_mask;
  // With sigma(x, z) = i^{|x&z|} X^x Z^z, commuting Z^za past X^xb gives
  // (-1)^{|za & xb|}; the canonical-phase bookkeeping adds the |x&z| terms.
  int e = a.phase_exp + b.phase_exp;
  e += popcount64(a.x_mask & a.z_mask) + popcount64(b.x_mask & b.z_mask);
  e -= popcount64(cx & cz);
  e += 2 * popcount64(a.z_mask & b.x_mask);
  return PauliString{a.n, cx, cz, ((e % 4) + 4) % 4};
}

bool commutes(const PauliString& a, const PauliString& b) {
  if (a.n != b.n) throw std::invalid_argument("size mismatch");
  int s = popcount64(a.x_mask & b.z_mask) + popcount64(a.z_mask & b.x_mask);
  return (s & 1) == 0;
}

HermitianDense HermitianDense::from(int n, Eigen::MatrixXcd m) {
  check_n(n);
  const Eigen::Index dim = Eigen::Index(1) << n;
  if (m.rows() != dim || m.cols() != dim)
    throw std::invalid_argument("dimension does not match qubit count");
  double dev = (m - m.adjoint().eval()).cwiseAbs().maxCoeff();
  if (dev > 1e-12) throw std::invalid_argument("matrix is not Hermitian");
  return HermitianDense{n, std::move(m)};
}

void PauliSum::add(const PauliString& s, double coeff) {
  if (s.n != n_) throw std::invalid_argument("size mismatch");
  if (s.phase_exp & 1)
    throw std::invalid_argument("odd phase cannot enter a Hermitian sum");
  double c = (s.phase_exp == 2) ? -coeff : coeff;
  terms_[{s.x_mask, s.z_mask}] += c;
}

void PauliSum::add_axes(std::uint64_t x, std::uint64_t z, double coeff) {
  terms_[{x, z}] += coeff;
}

void PauliSum::add(const PauliSum& other, double scale) {
  if (other.n_ != n_) throw std::invalid_argument("size mismatch");
  for (const auto& [k, c] : other.terms_) terms_[k] += scale * c;
}

double PauliSum::coeff(std::uint64_t x, std::uint64_t z) const {
  auto it = terms_.find({x, z});
  return it == terms_.end() ? 0.0 : it->second;
}

int PauliSum::locality() const {
  int loc = 0;
  for (const auto& [k, c] : terms_)
    loc = std::max(loc, popcount64(k.first | k.second));
  return loc;
}

std::size_t PauliSum::prune(double eps) {
  std::size_t removed = 0;
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < eps) {
      it = terms_.erase(it);
      ++removed;
    } else {
      ++it;
    }
  }
  return removed;
}

double PauliSum::coeff_norm(double p) const {
  if (std::isinf(p)) {
    double m = 0;
    for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }
  if (p < 1) throw std::invalid_argument("p-norm requires p >= 1");
  double acc = 0;
  for (const auto& [k, c] : terms_) acc += std::pow(std::abs(c), p);
  return std::pow(acc, 1.0 / p);
}

std::string PauliSum::str() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& [k, c] : terms_)
    os << c << '\t' << term_string(k).str() << '\n';
  return os.str();
}

PauliSum PauliSum::parse(int n, const std::string& text) {
  PauliSum out(n);
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw std::invalid_argument("bad sum line");
    double c = std::stod(line.substr(0, tab));
    PauliString s = PauliString::parse(line.substr(tab + 1));
    if (s.n != n) throw std::invalid_argument("size mismatch");
    out.add(s, c);
  }
  return out;
}

PauliSum operator*(double c, const PauliSum& s) {
  PauliSum out(s.n());
  out.add(s, c);
  return out;
}

PauliSum operator+(const PauliSum& a, const PauliSum& b) {
  PauliSum out = a;
  out.add(b);
  out.prune();
  return out;
}

PauliSum mul(const PauliSum& a, const PauliSum& b) {
  if (a.n() != b.n()) throw std::invalid_argument("size mismatch");
  detail::CAccum acc;
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms())
      detail::accum_mul_into(acc, PauliString{a.n(), ka.first, ka.second, 0},
                             ca, PauliString{b.n(), kb.first, kb.second, 0},
                             cb);
  return detail::accum_to_sum(a.n(), acc);
}

double hs_inner(const HermitianDense& a, const HermitianDense& b) {
  if (a.n != b.n) throw std::invalid_argument("dimension mismatch");
  cplx t = (a.mat.adjoint() * b.mat).trace();
  return t.real() / static_cast<double>(a.mat.rows());
}

double hs_inner(const PauliSum& a, const PauliSum& b) {
  if (a.n() != b.n()) throw std::invalid_argument("size mismatch");
  // Canonical strings are orthonormal under (1/2^n) Tr, so this is a sparse
  // dot product over matching keys.
  double acc = 0;
  auto ia = a.terms().begin(), ib = b.terms().begin();
  while (ia != a.terms().end() && ib != b.terms().end()) {
    if (ia->first < ib->first) ++ia;
    else if (ib->first < ia->first) ++ib;
    else { acc += ia->second * ib->second; ++ia; ++ib; }
  }
  return acc;
}

Eigen::MatrixXcd to_dense_matrix(const PauliString& s) {
  const Eigen::Index dim = Eigen::Index(1) << s.n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  std::uint64_t xi = to_index_space(s.x_mask, s.n);
  std::uint64_t zi = to_index_space(s.z_mask, s.n);
  cplx base = kIPow[(s.phase_exp + popcount64(s.x_mask & s.z_mask)) & 3];
  for (std::uint64_t c = 0; c < static_cast<std::uint64_t>(dim); ++c) {
    double sign = (popcount64(c & zi) & 1) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(c ^ xi), static_cast<Eigen::Index>(c)) =
        base * sign;
  }
  return m;
}

HermitianDense to_dense(const PauliSum& s) {
  if (s.n() > 10) throw std::invalid_argument("dense cap is 10 qubits");
  const Eigen::Index dim = Eigen::Index(1) << s.n();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [k, c] : s.terms())
    m += c * to_dense_matrix(s.term_string(k));
  return HermitianDense::from(s.n(), std::move(m));
}

namespace {

// Recursive block expansion over the leading qubit:
// M = A(+)I + B(+)X + C(+)Y + D(+)Z on the most significant index bit.
void decompose_rec(const Eigen::MatrixXcd& m, int n, std::uint64_t x,
                   std::uint64_t z, int qubit, cplx scale,
                   std::map<PauliSum::Key, cplx>& out) {
  if (qubit == n) {
    out[{x, z}] += scale * m(0, 0);
    return;
  }
  const Eigen::Index h = m.rows() / 2;
  auto tl = m.topLeftCorner(h, h), tr = m.topRightCorner(h, h);
  auto bl = m.bottomLeftCorner(h, h), br = m.bottomRightCorner(h, h);
  std::uint64_t bit = 1ULL << qubit;
  decompose_rec((tl + br) / 2, n, x, z, qubit + 1, scale, out);
  decompose_rec((tr + bl) / 2, n, x | bit, z, qubit + 1, scale, out);
  decompose_rec((tr - bl) / 2, n, x | bit, z | bit, qubit + 1,
                scale * cplx(0, 1), out);
  decompose_rec((tl - br) / 2, n, x, z | bit, qubit + 1, scale, out);
}

}  // namespace

PauliSum decompose(const HermitianDense& hd) {
  if (hd.n > 10) throw std::invalid_argument("dense cap is 10 qubits");
  std::map<PauliSum::Key, cplx> acc;
  decompose_rec(hd.mat, hd.n, 0, 0, 0, cplx(1, 0), acc);
  PauliSum out(hd.n);
  for (const auto& [k, c] : acc) {
    if (std::abs(c.imag()) > 1e-9)
      throw std::runtime_error("non-Hermitian decomposition residue");
    if (std::abs(c.real()) >= 1e-12) out.add_axes(k.first, k.second, c.real());
  }
  return out;
}

namespace detail {

void accum_add(CAccum& acc, const PauliString& s, cplx c) {
  acc[{s.x_mask, s.z_mask}] += c * kIPow[s.phase_exp & 3];
}

void accum_mul_into(CAccum& out, const PauliString& a, cplx ca,
                    const PauliString& b, cplx cb) {
  PauliString p = mul(a, b);
  accum_add(out, p, ca * cb);
}

PauliSum accum_to_sum(int n, const CAccum& acc, double tol) {
  PauliSum out(n);
  for (const auto& [k, c] : acc) {
    if (std::abs(c.imag()) > tol)
      throw std::runtime_error("imaginary residue in Hermitian sum");
    if (std::abs(c.real()) >= 1e-12) out.add_axes(k.first, k.second, c.real());
  }
  return out;
}

}  // namespace detail

}  // namespace vqlab
