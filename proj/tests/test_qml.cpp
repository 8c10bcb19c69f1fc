// Copyright (c) 2026 vqlab contributors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "helpers.hpp"
#include "vqlab/models.hpp"
#include "vqlab/qml.hpp"
#include "vqlab/rng.hpp"
#include "vqlab/vqe.hpp"

using namespace vqlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

StateVector state_of(const AnsatzLayout& layout,
                     const std::vector<double>& prep) {
  StateVector psi = StateVector::zero(layout.n);
  apply_circuit(psi, bind_circuit(layout, prep));
  return psi;
}

StateVector random_state(int n, Rng& rng) {
  StateVector psi = StateVector::zero(n);
  for (auto& a : psi.amps) a = {rng.normal(), rng.normal()};
  double s = 1.0 / psi.norm();
  for (auto& a : psi.amps) a *= s;
  return psi;
}

std::vector<double> random_angles(int count, Rng& rng) {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (auto& x : v) x = rng.uniform(-kPi, kPi);
  return v;
}

// Product states near |0...0> labeled 1 and near |1...1> labeled 0, so the
// classifier has to learn a global flip rather than act as the identity.
std::vector<LabeledStatePrep> flip_task(int n, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledStatePrep> data;
  for (int i = 0; i < count; ++i) {
    double alpha = (i % 2) ? rng.uniform(0.0, 0.35 * kPi)
                           : rng.uniform(0.65 * kPi, kPi);
    LabeledStatePrep d;
    for (int q = 0; q < n; ++q) {
      d.prep.push_back(alpha + rng.uniform(-0.1, 0.1));
      d.prep.push_back(rng.uniform(-0.3, 0.3));
    }
    d.label = (i % 2) ? 1 : 0;
    d.meta = alpha;
    data.push_back(d);
  }
  return data;
}

double bin_median(const std::vector<double>& v, int bin, int bins) {
  std::size_t lo = v.size() * static_cast<std::size_t>(bin) / bins;
  std::size_t hi = v.size() * static_cast<std::size_t>(bin + 1) / bins;
  std::vector<double> b(v.begin() + static_cast<std::ptrdiff_t>(lo),
                        v.begin() + static_cast<std::ptrdiff_t>(hi));
  std::sort(b.begin(), b.end());
  return b[b.size() / 2];
}

}  // namespace

TEST_CASE("vote observable eigenvalues and expectations") {
  VoteObservable v2 = vote_hamiltonian(2);
  CHECK(vote_value(v2, 0b00) == 0.0);
  CHECK(vote_value(v2, 0b01) == 0.5);
  CHECK(vote_value(v2, 0b10) == 0.5);
  CHECK(vote_value(v2, 0b11) == 1.0);

  VoteObservable v3 = vote_hamiltonian(3);
  CHECK(vote_value(v3, 0b111) == 1.0);
  CHECK(vote_value(v3, 0b100) == 0.0);
  for (std::uint64_t b = 0; b < 8; ++b)
    CHECK(vote_value(v3, b) != 0.5);  // odd n has no half-weight states

  CHECK_THROWS_AS(vote_hamiltonian(0), std::invalid_argument);

  // Uniform superposition averages to 1/2 for every register size.
  for (int n = 1; n <= 8; ++n) {
    StateVector plus = StateVector::zero(n);
    for (int q = 0; q < n; ++q) apply_gate(plus, Gate::h(q));
    CHECK(expectation(vote_hamiltonian(n), plus) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }

  // Dense diagonal cross-check on a random state.
  const int n = 5;
  Rng rng(11);
  StateVector psi = random_state(n, rng);
  VoteObservable v = vote_hamiltonian(n);
  Eigen::VectorXcd amps = testutil::to_eigen(psi);
  std::complex<double> dense = 0.0;
  for (int i = 0; i < amps.size(); ++i)
    dense += std::conj(amps[i]) * vote_value(v, static_cast<std::uint64_t>(i)) *
             amps[i];
  CHECK(expectation(v, psi) == doctest::Approx(dense.real()).epsilon(1e-12));
  CHECK(std::abs(dense.imag()) < 1e-12);

  CHECK_THROWS_AS(expectation(vote_hamiltonian(4), psi),
                  std::invalid_argument);
}

TEST_CASE("prediction runs data plus classifier and reads the vote") {
  const int n = 4;
  Ansatz data_az = build_rank1(n);
  Ansatz cls =
      build_checkerboard(n, 2, BlockKind::Entangler, Boundary::Ring);
  ClassifierModel m = make_classifier(data_az, cls);
  CHECK(static_cast<int>(m.phi.size()) == cls.layout.param_count());
  for (double p : m.phi) CHECK(p == 0.0);

  LabeledStatePrep zeros;
  zeros.prep.assign(static_cast<std::size_t>(data_az.layout.param_count()),
                    0.0);
  CHECK(predict(m, zeros) == doctest::Approx(0.0).epsilon(1e-12));

  LabeledStatePrep ones = zeros;
  for (int q = 0; q < n; ++q) ones.prep[static_cast<std::size_t>(2 * q)] = kPi;
  CHECK(predict(m, ones) == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    LabeledStatePrep d;
    d.prep = random_angles(data_az.layout.param_count(), rng);
    ClassifierModel r = m;
    r.phi = random_angles(cls.layout.param_count(), rng);
    double p = predict(r, d);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }

  CHECK_THROWS_AS(make_classifier(build_rank1(3), cls),
                  std::invalid_argument);
  LabeledStatePrep bad;
  bad.prep.assign(3, 0.0);
  CHECK_THROWS_AS(predict(m, bad), std::invalid_argument);
  ClassifierModel short_phi = m;
  short_phi.phi.pop_back();
  CHECK_THROWS_AS(predict(short_phi, zeros), std::invalid_argument);
}

TEST_CASE("vote expectation is invariant under outcome reordering") {
  const int n = 5;
  Rng rng(19);
  StateVector psi = random_state(n, rng);
  double base = expectation(vote_hamiltonian(n), psi);

  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = perm.size(); i > 1; --i)
    std::swap(perm[i - 1], perm[rng.below(i)]);

  StateVector rel = StateVector::zero(n);
  for (std::size_t i = 0; i < psi.amps.size(); ++i) {
    std::uint64_t j = 0;
    for (int b = 0; b < n; ++b)
      if (i >> b & 1) j |= std::uint64_t{1} << perm[static_cast<std::size_t>(b)];
    rel.amps[j] = psi.amps[i];
  }
  CHECK(expectation(vote_hamiltonian(n), rel) ==
        doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("log loss hits the clipped floor and the coin-flip value") {
  const int n = 4;
  ClassifierModel m = make_classifier(
      build_rank1(n),
      build_checkerboard(n, 2, BlockKind::Entangler, Boundary::Ring));

  LabeledStatePrep up;
  up.prep.assign(static_cast<std::size_t>(2 * n), 0.0);
  for (int q = 0; q < n; ++q) up.prep[static_cast<std::size_t>(2 * q)] = kPi;
  up.label = 1;
  LabeledStatePrep down;
  down.prep.assign(static_cast<std::size_t>(2 * n), 0.0);
  down.label = 0;
  double perfect = log_loss(m, {up, down});
  CHECK(perfect > 0.0);
  CHECK(perfect < 1e-8);  // two clipped terms of about 1e-9 each

  // |+...+> predicts exactly 1/2 whatever the label.
  std::vector<LabeledStatePrep> half;
  for (int i = 0; i < 4; ++i) {
    LabeledStatePrep d;
    d.prep.assign(static_cast<std::size_t>(2 * n), 0.0);
    for (int q = 0; q < n; ++q)
      d.prep[static_cast<std::size_t>(2 * q)] = kPi / 2;
    d.label = i % 2;
    half.push_back(d);
  }
  CHECK(log_loss(m, half) ==
        doctest::Approx(4.0 * std::log(2.0)).epsilon(1e-12));

  CHECK(accuracy(m, {up, down}) == 1.0);
  CHECK(accuracy(m, half) == 0.5);  // ties predict 1, half the labels are 1
  CHECK_THROWS_AS(accuracy(m, {}), std::invalid_argument);
}

TEST_CASE("training learns a flip task deterministically") {
  auto data = flip_task(3, 30, 101);
  SplitData sp = split_data(data, 0.7, 7);
  REQUIRE(sp.train.size() == 21);
  REQUIRE(sp.test.size() == 9);

  ClassifierModel m = make_classifier(
      build_rank1(3),
      build_checkerboard(3, 4, BlockKind::Entangler, Boundary::Ring));
  TrainConfig cfg;
  cfg.seed = 1;
  ClassifierModel m2 = m;
  TrainResult r = train(m, sp.train, cfg);

  CHECK(r.loss_trace.size() == 300);
  CHECK(r.phi == m.phi);
  CHECK(accuracy(m, sp.train) >= 0.95);
  CHECK(accuracy(m, sp.test) >= 0.95);
  CHECK(r.loss_trace.back() < r.loss_trace.front() / 3.0);
  for (int b = 0; b + 1 < 5; ++b)
    CHECK(bin_median(r.loss_trace, b + 1, 5) < bin_median(r.loss_trace, b, 5));

  // Same seed, same run; the trace and parameters match bit for bit.
  TrainResult r2 = train(m2, sp.train, cfg);
  CHECK(r2.phi == r.phi);
  CHECK(r2.loss_trace == r.loss_trace);

  ClassifierModel m3 = make_classifier(
      build_rank1(3),
      build_checkerboard(3, 4, BlockKind::Entangler, Boundary::Ring));
  TrainConfig other = cfg;
  other.seed = 2;
  TrainResult r3 = train(m3, sp.train, other);
  CHECK(r3.phi != r.phi);

  CHECK_THROWS_AS(train(m, {}, cfg), std::invalid_argument);
  TrainConfig zero = cfg;
  zero.epochs = 0;
  CHECK_THROWS_AS(train(m, sp.train, zero), std::invalid_argument);
  auto poisoned = sp.train;
  poisoned[0].prep[0] = std::nan("");
  CHECK_THROWS_AS(train(m, poisoned, cfg), std::runtime_error);
}

TEST_CASE("training on coin-flip labels stays at chance on held-out data") {
  for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
    Rng labels(seed * 77);
    auto data = flip_task(3, 60, 200 + seed);
    for (auto& d : data) d.label = static_cast<int>(labels.below(2));
    SplitData sp = split_data(data, 0.5, 9);
    ClassifierModel m = make_classifier(
        build_rank1(3),
        build_checkerboard(3, 4, BlockKind::Entangler, Boundary::Ring));
    TrainConfig cfg;
    cfg.seed = seed;
    train(m, sp.train, cfg);
    double acc = accuracy(m, sp.test);
    // binomial 3 sigma around 1/2 for 30 held-out points
    CHECK(acc > 0.5 - 3 * 0.5 / std::sqrt(30.0));
    CHECK(acc < 0.5 + 3 * 0.5 / std::sqrt(30.0));
  }
}

TEST_CASE("xxz augmentation preserves the symmetries it encodes") {
  const int n = 4;
  Ansatz az = build_checkerboard(n, 4, BlockKind::Entangler, Boundary::Ring);
  Rng rng(23);
  std::vector<double> prep = random_angles(az.layout.param_count(), rng);

  CHECK(augment_xxz(az.layout, prep, 0.0, false) == prep);

  PauliSum ring = build_xxz(n, 1.0, 0.7, Boundary::Ring);
  StateVector base = state_of(az.layout, prep);
  double e0 = expectation(base, ring);
  PauliString zall = PauliString::from_masks(n, 0, (1ull << n) - 1);
  double z0 = expectation(base, zall);

  for (double phi : {0.37, 1.9, -0.6}) {
    for (bool flip : {false, true}) {
      StateVector aug = state_of(az.layout, augment_xxz(az.layout, prep, phi, flip));
      CHECK(expectation(aug, ring) == doctest::Approx(e0).epsilon(1e-9));
      CHECK(std::abs(expectation(aug, zall)) ==
            doctest::Approx(std::abs(z0)).epsilon(1e-9));
    }
  }

  // Two flips return the original state up to a global phase.
  auto once = augment_xxz(az.layout, prep, 0.0, true);
  auto twice = augment_xxz(az.layout, once, 0.0, true);
  StateVector again = state_of(az.layout, twice);
  std::complex<double> ov = 0.0;
  for (std::size_t i = 0; i < base.amps.size(); ++i)
    ov += std::conj(base.amps[i]) * again.amps[i];
  CHECK(std::norm(ov) == doctest::Approx(1.0).epsilon(1e-12));

  // A final layer of (1,2) on a line leaves qubits 0 and 3 finishing in an
  // earlier block: rotations still work, flips cannot factor.
  Ansatz line = build_checkerboard(n, 2, BlockKind::Entangler, Boundary::Line);
  std::vector<double> lprep = random_angles(line.layout.param_count(), rng);
  PauliSum open_chain = build_xxz(n, 1.0, 0.7, Boundary::Line);
  double le0 = expectation(state_of(line.layout, lprep), open_chain);
  StateVector lrot = state_of(line.layout, augment_xxz(line.layout, lprep, 0.9, false));
  CHECK(expectation(lrot, open_chain) == doctest::Approx(le0).epsilon(1e-9));
  CHECK_THROWS_AS(augment_xxz(line.layout, lprep, 0.9, true),
                  std::invalid_argument);

  Ansatz cartan = build_checkerboard(n, 4, BlockKind::Cartan, Boundary::Ring);
  std::vector<double> cprep = random_angles(cartan.layout.param_count(), rng);
  CHECK_THROWS_AS(augment_xxz(cartan.layout, cprep, 0.5, false),
                  std::invalid_argument);
  Ansatz prod = build_rank1(n);
  std::vector<double> pprep = random_angles(prod.layout.param_count(), rng);
  CHECK_THROWS_AS(augment_xxz(prod.layout, pprep, 0.5, false),
                  std::invalid_argument);
  CHECK_THROWS_AS(augment_xxz(az.layout, lprep, 0.5, false),
                  std::invalid_argument);  // wrong angle count
}

TEST_CASE("splits, relabeling, and dataset files round-trip") {
  Rng rng(31);
  std::vector<LabeledStatePrep> data;
  for (int i = 0; i < 10; ++i) {
    LabeledStatePrep d;
    d.prep = random_angles(3, rng);
    d.label = i % 2;
    d.meta = 0.1 * i;
    data.push_back(d);
  }

  SplitData sp = split_data(data, 0.7, 5);
  CHECK(sp.train.size() == 7);
  CHECK(sp.test.size() == 3);
  std::vector<double> metas;
  for (const auto& d : sp.train) metas.push_back(d.meta);
  for (const auto& d : sp.test) metas.push_back(d.meta);
  std::sort(metas.begin(), metas.end());
  for (int i = 0; i < 10; ++i)
    CHECK(metas[static_cast<std::size_t>(i)] ==
          doctest::Approx(0.1 * i).epsilon(1e-12));
  SplitData sp2 = split_data(data, 0.7, 5);
  CHECK(sp2.train.size() == sp.train.size());
  for (std::size_t i = 0; i < sp.train.size(); ++i)
    CHECK(sp2.train[i].meta == sp.train[i].meta);

  CHECK(split_data(data, 1.0, 1).train.size() == 10);
  CHECK(split_data(data, 0.0, 1).test.size() == 10);
  CHECK_THROWS_AS(split_data(data, 1.5, 1), std::invalid_argument);

  auto lab = relabel(data, 0.45);
  for (const auto& d : lab) CHECK(d.label == (d.meta > 0.45 ? 1 : 0));
  // strict comparison: a point on the threshold goes to class 0
  std::vector<LabeledStatePrep> exact(2);
  exact[0].meta = 0.75;
  exact[1].meta = 1.0;
  auto edge = relabel(exact, 0.75);
  CHECK(edge[0].label == 0);
  CHECK(edge[1].label == 1);

  std::string csv = dataset_csv(data);
  CHECK(csv.rfind("grid_value,label,angles\n", 0) == 0);
  auto back = parse_dataset_csv(csv);
  REQUIRE(back.size() == data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(back[i].label == data[i].label);
    CHECK(back[i].meta == doctest::Approx(data[i].meta).epsilon(1e-12));
    REQUIRE(back[i].prep.size() == data[i].prep.size());
    for (std::size_t k = 0; k < data[i].prep.size(); ++k)
      CHECK(back[i].prep[k] ==
            doctest::Approx(data[i].prep[k]).epsilon(1e-10));
  }
  CHECK_THROWS_AS(parse_dataset_csv("wrong,header\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_dataset_csv("grid_value,label,angles\n0.5,2,0.1\n"),
                  std::invalid_argument);
}

TEST_CASE("confusion scan saturates away from the data and splits ties") {
  // Ground-state angles for a small transverse-field sweep.
  const int n = 4;
  std::vector<ModelSpec> grid;
  for (int i = 0; i < 12; ++i) {
    ModelSpec s;
    s.family = ModelSpec::Family::TFI;
    s.n = n;
    s.boundary = Boundary::Ring;
    s.j = 1.0;
    s.h = 0.2 + 1.6 * i / 11.0;
    grid.push_back(s);
  }
  Ansatz az = build_checkerboard(n, 8, BlockKind::Entangler, Boundary::Ring);
  OptimizerConfig ocfg;
  ocfg.max_iters = 200;
  ocfg.seed = 3;
  auto sweep = aavqe_sweep(grid, SweepDirection::Up,
                           make_problem(build_model(grid[0]), az), ocfg);
  std::vector<LabeledStatePrep> data;
  for (const auto& p : sweep) data.push_back({p.theta, 0, p.grid_value});

  ClassifierModel base = make_classifier(
      az, build_checkerboard(n, 8, BlockKind::Entangler, Boundary::Ring));
  TrainConfig cfg;
  cfg.seed = 5;

  // Thresholds outside the grid put every point in one class.
  auto scan = confusion_scan(base, data, {0.05, 1.94}, cfg);
  REQUIRE(scan.size() == 2);
  for (const auto& p : scan) {
    CHECK(p.train_accuracy == 1.0);
    CHECK(p.test_accuracy == 1.0);
  }
  auto scan2 = confusion_scan(base, data, {0.05, 1.94}, cfg);
  CHECK(confusion_csv(scan) == confusion_csv(scan2));

  std::string csv = confusion_csv(scan);
  CHECK(csv.rfind("threshold,train_accuracy,test_accuracy\n", 0) == 0);
  CHECK(csv.find("0.05,1,1\n") != std::string::npos);
  CHECK(csv.find("1.94,1,1\n") != std::string::npos);

  // Two identical states with labels split across the threshold: one of the
  // two is always wrong, so the combined accuracy is exactly the majority
  // baseline.
  std::vector<LabeledStatePrep> twin = {data[5], data[5]};
  twin[0].meta = 0.3;
  twin[1].meta = 0.7;
  auto deg = confusion_scan(base, twin, {0.5}, cfg);
  REQUIRE(deg.size() == 1);
  double combined = 0.5 * (deg[0].train_accuracy + deg[0].test_accuracy);
  CHECK(combined == 0.5);
  auto one_class = confusion_scan(base, twin, {0.1}, cfg);
  CHECK(0.5 * (one_class[0].train_accuracy + one_class[0].test_accuracy) ==
        1.0);

  CHECK_THROWS_AS(confusion_scan(base, data, {}, cfg), std::invalid_argument);
  CHECK_THROWS_AS(confusion_scan(base, {}, std::vector<double>{0.5}, cfg),
                  std::invalid_argument);
}
