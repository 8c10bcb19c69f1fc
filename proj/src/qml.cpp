// Copyright (c) 2026 vqlab contributors
// SPDX-License-Identifier: Apache-2.0
#include "vqlab/qml.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "vqlab/rng.hpp"

namespace vqlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kClip = 1e-9;

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double clip_p(double p) {
  return std::min(1.0 - kClip, std::max(kClip, p));
}

StateVector data_state(const ClassifierModel& m,
                       const std::vector<double>& prep) {
  if (static_cast<int>(prep.size()) != m.data_ansatz.layout.param_count())
    throw std::invalid_argument("predict: data angle count mismatch");
  StateVector psi = StateVector::zero(m.data_ansatz.layout.n);
  apply_circuit(psi, bind_circuit(m.data_ansatz.layout, prep));
  return psi;
}

double vote_on_state(const ClassifierModel& m, const std::vector<double>& phi,
                     const StateVector& data) {
  StateVector psi = data;
  apply_circuit(psi, bind_circuit(m.classifier.layout, phi));
  return expectation(VoteObservable{psi.n}, psi);
}

double loss_on_states(const ClassifierModel& m, const std::vector<double>& phi,
                      const std::vector<StateVector>& states,
                      const std::vector<int>& labels) {
  double loss = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    double p = vote_on_state(m, phi, states[i]);
    if (std::isnan(p)) return p;  // clipping must not mask a broken state
    p = clip_p(p);
    loss -= labels[i] ? std::log(p) : std::log1p(-p);
  }
  return loss;
}

// Final parameter slots per qubit: the X and Z rotation of the last
// entangler block that touches the qubit. Blocks appear in circuit order,
// so the last hit wins.
struct FinalSlots {
  int x_slot = -1;
  int z_slot = -1;
  int block_index = -1;
};

std::vector<FinalSlots> final_entangler_slots(const AnsatzLayout& layout) {
  std::vector<FinalSlots> per_qubit(static_cast<std::size_t>(layout.n));
  for (std::size_t b = 0; b < layout.blocks.size(); ++b) {
    const Block& blk = layout.blocks[b];
    for (std::size_t side = 0; side < blk.qubits.size(); ++side) {
      int q = blk.qubits[side];
      if (blk.kind != BlockKind::Entangler && blk.kind != BlockKind::XZZZ) {
        per_qubit[static_cast<std::size_t>(q)] = {-1, -1, -1};
        continue;
      }
      FinalSlots fs;
      fs.x_slot = blk.slots[side == 0 ? 0 : 1];
      fs.z_slot = blk.slots[side == 0 ? 4 : 3];
      fs.block_index = static_cast<int>(b);
      per_qubit[static_cast<std::size_t>(q)] = fs;
    }
  }
  return per_qubit;
}

}  // namespace

VoteObservable vote_hamiltonian(int n) {
  if (n < 1) throw std::invalid_argument("vote_hamiltonian: n must be >= 1");
  return VoteObservable{n};
}

double vote_value(const VoteObservable& v, std::uint64_t basis) {
  int w = std::popcount(basis);
  if (2 * w > v.n) return 1.0;
  if (2 * w == v.n) return 0.5;
  return 0.0;
}

double expectation(const VoteObservable& v, const StateVector& psi) {
  if (psi.n != v.n) throw std::invalid_argument("vote: qubit count mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < psi.amps.size(); ++i) {
    double pr = std::norm(psi.amps[i]);
    if (pr == 0.0) continue;
    acc += pr * vote_value(v, i);
  }
  return acc;
}

ClassifierModel make_classifier(const Ansatz& data_ansatz,
                                const Ansatz& classifier) {
  if (data_ansatz.layout.n != classifier.layout.n)
    throw std::invalid_argument("make_classifier: qubit counts differ");
  ClassifierModel m;
  m.data_ansatz = data_ansatz;
  m.classifier = classifier;
  m.phi.assign(static_cast<std::size_t>(classifier.layout.param_count()), 0.0);
  return m;
}

double predict(const ClassifierModel& m, const LabeledStatePrep& datum) {
  if (static_cast<int>(m.phi.size()) != m.classifier.layout.param_count())
    throw std::invalid_argument("predict: classifier angle count mismatch");
  return vote_on_state(m, m.phi, data_state(m, datum.prep));
}

double log_loss(const ClassifierModel& m,
                const std::vector<LabeledStatePrep>& data) {
  double loss = 0.0;
  for (const auto& d : data) {
    double p = clip_p(predict(m, d));
    loss -= d.label ? std::log(p) : std::log1p(-p);
  }
  return loss;
}

double accuracy(const ClassifierModel& m,
                const std::vector<LabeledStatePrep>& data) {
  if (data.empty()) throw std::invalid_argument("accuracy: no data");
  int hits = 0;
  for (const auto& d : data) {
    int predicted = predict(m, d) >= 0.5 ? 1 : 0;
    hits += predicted == d.label;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

TrainResult train(ClassifierModel& m, const std::vector<LabeledStatePrep>& data,
                  const TrainConfig& cfg) {
  if (data.empty()) throw std::invalid_argument("train: no data");
  if (cfg.epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
  const int k = m.classifier.layout.param_count();

  std::vector<StateVector> states;
  states.reserve(data.size());
  std::vector<int> labels;
  labels.reserve(data.size());
  for (const auto& d : data) {
    states.push_back(data_state(m, d.prep));
    labels.push_back(d.label);
  }

  Rng rng(cfg.seed);
  std::vector<double> phi(static_cast<std::size_t>(k));
  for (double& x : phi) x = rng.uniform(-kPi / 2, kPi / 2);

  TrainResult out;
  out.loss_trace.reserve(static_cast<std::size_t>(cfg.epochs));
  std::vector<double> plus(phi.size()), minus(phi.size());
  std::vector<double> delta(phi.size());
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(epoch));
    const double a = cfg.step0 * scale;
    const double c = cfg.probe0 * scale;
    for (std::size_t i = 0; i < phi.size(); ++i) {
      delta[i] = rng.below(2) ? 1.0 : -1.0;
      plus[i] = phi[i] + c * delta[i];
      minus[i] = phi[i] - c * delta[i];
    }
    const double lp = loss_on_states(m, plus, states, labels);
    const double lm = loss_on_states(m, minus, states, labels);
    // Per-sample gain keeps one step scale usable across dataset sizes;
    // the loss itself stays a sum.
    const double slope =
        (lp - lm) / (2.0 * c * static_cast<double>(states.size()));
    if (std::isnan(slope)) throw std::runtime_error("train: loss is NaN");
    for (std::size_t i = 0; i < phi.size(); ++i)
      phi[i] -= a * slope * delta[i];
    const double now = loss_on_states(m, phi, states, labels);
    if (std::isnan(now)) throw std::runtime_error("train: loss is NaN");
    out.loss_trace.push_back(now);
  }
  m.phi = phi;
  out.phi = std::move(phi);
  return out;
}

std::vector<double> augment_xxz(const AnsatzLayout& layout,
                                const std::vector<double>& prep, double phi,
                                bool flip) {
  if (static_cast<int>(prep.size()) != layout.param_count())
    throw std::invalid_argument("augment_xxz: angle count mismatch");
  auto finals = final_entangler_slots(layout);
  for (const auto& fs : finals)
    if (fs.z_slot < 0)
      throw std::invalid_argument(
          "augment_xxz: every qubit must end on an entangler block");

  std::vector<double> out = prep;
  for (const auto& fs : finals) out[static_cast<std::size_t>(fs.z_slot)] += phi;
  if (!flip) return out;

  // A spin flip factors through whole blocks only: both qubits of each
  // final block must finish there, or the X would have to cross the block's
  // coupling gate.
  for (const auto& fs : finals) {
    const Block& blk = layout.blocks[static_cast<std::size_t>(fs.block_index)];
    for (int q : blk.qubits)
      if (finals[static_cast<std::size_t>(q)].block_index != fs.block_index)
        throw std::invalid_argument(
            "augment_xxz: flip needs the final layer to cover whole blocks");
  }
  for (const auto& fs : finals) {
    std::size_t z = static_cast<std::size_t>(fs.z_slot);
    out[z] = -out[z];
    out[static_cast<std::size_t>(fs.x_slot)] += kPi;
  }
  return out;
}

SplitData split_data(const std::vector<LabeledStatePrep>& data,
                     double train_fraction, std::uint64_t seed) {
  if (train_fraction < 0.0 || train_fraction > 1.0)
    throw std::invalid_argument("split_data: fraction outside [0, 1]");
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.below(i)]);
  std::size_t cut = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(data.size())));
  SplitData s;
  for (std::size_t i = 0; i < order.size(); ++i)
    (i < cut ? s.train : s.test).push_back(data[order[i]]);
  return s;
}

std::vector<LabeledStatePrep> relabel(std::vector<LabeledStatePrep> data,
                                      double threshold) {
  for (auto& d : data) d.label = d.meta > threshold ? 1 : 0;
  return data;
}

std::vector<ConfusionPoint> confusion_scan(
    const ClassifierModel& base, const std::vector<LabeledStatePrep>& data,
    const std::vector<double>& thresholds, const TrainConfig& cfg) {
  if (thresholds.empty())
    throw std::invalid_argument("confusion_scan: empty threshold grid");
  if (data.empty()) throw std::invalid_argument("confusion_scan: no data");

  auto run_point = [&](std::size_t j) {
    const std::uint64_t sub = Rng::hash2(cfg.seed, j);
    auto labeled = relabel(data, thresholds[j]);
    SplitData split = split_data(labeled, 0.7, sub);
    ClassifierModel model = base;
    TrainConfig point_cfg = cfg;
    point_cfg.seed = sub;
    train(model, split.train, point_cfg);
    ConfusionPoint p;
    p.threshold = thresholds[j];
    p.train_accuracy = accuracy(model, split.train);
    p.test_accuracy = split.test.empty() ? 1.0 : accuracy(model, split.test);
    return p;
  };

  std::vector<ConfusionPoint> out(thresholds.size());
  if (std::thread::hardware_concurrency() > 1 && thresholds.size() > 1) {
    std::vector<std::future<ConfusionPoint>> jobs;
    jobs.reserve(thresholds.size());
    for (std::size_t j = 0; j < thresholds.size(); ++j)
      jobs.push_back(std::async(std::launch::async, run_point, j));
    for (std::size_t j = 0; j < thresholds.size(); ++j) out[j] = jobs[j].get();
  } else {
    for (std::size_t j = 0; j < thresholds.size(); ++j) out[j] = run_point(j);
  }
  return out;
}

std::string confusion_csv(const std::vector<ConfusionPoint>& rows) {
  std::string out = "threshold,train_accuracy,test_accuracy\n";
  for (const auto& r : rows) {
    out += fmt12(r.threshold);
    out += ',';
    out += fmt12(r.train_accuracy);
    out += ',';
    out += fmt12(r.test_accuracy);
    out += '\n';
  }
  return out;
}

std::string dataset_csv(const std::vector<LabeledStatePrep>& rows) {
  std::string out = "grid_value,label,angles\n";
  for (const auto& r : rows) {
    out += fmt12(r.meta);
    out += ',';
    out += std::to_string(r.label);
    out += ',';
    for (std::size_t i = 0; i < r.prep.size(); ++i) {
      if (i) out += ';';
      out += fmt12(r.prep[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<LabeledStatePrep> parse_dataset_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "grid_value,label,angles")
    throw std::invalid_argument("dataset: bad header");
  std::vector<LabeledStatePrep> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t c1 = line.find(',');
    std::size_t c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::invalid_argument("dataset: bad row");
    LabeledStatePrep d;
    d.meta = std::stod(line.substr(0, c1));
    d.label = std::stoi(line.substr(c1 + 1, c2 - c1 - 1));
    if (d.label != 0 && d.label != 1)
      throw std::invalid_argument("dataset: label must be 0 or 1");
    std::string angles = line.substr(c2 + 1);
    std::istringstream as(angles);
    std::string tok;
    while (std::getline(as, tok, ';'))
      if (!tok.empty()) d.prep.push_back(std::stod(tok));
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace vqlab
