// Copyright (c) 2026 vqlab contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vqlab/ansatz.hpp"
#include "vqlab/simulator.hpp"

namespace vqlab {

// Diagonal majority-vote observable. A basis state with Hamming weight w
// gets eigenvalue 1 when w > n/2, 1/2 when w == n/2 and 0 otherwise. It is
// evaluated straight from the output distribution; expanding it into Pauli
// terms would take 4^n of them.
struct VoteObservable {
  int n = 0;
};

VoteObservable vote_hamiltonian(int n);

// Eigenvalue of a computational basis state, one of {0, 1/2, 1}.
double vote_value(const VoteObservable& v, std::uint64_t basis);

// <psi| H_vote |psi>, exact.
double expectation(const VoteObservable& v, const StateVector& psi);

// One data point: the angles that prepare a state on the shared data
// circuit, the binary phase label, and the model grid value it came from.
struct LabeledStatePrep {
  std::vector<double> prep;
  int label = 0;
  double meta = 0.0;
};

// A classifier stacked behind a fixed data circuit. Predictions run the
// data circuit with the datum's angles, then the classifier with phi, and
// read out the majority vote.
struct ClassifierModel {
  Ansatz data_ansatz;
  Ansatz classifier;
  std::vector<double> phi;
};

// Zero-initialized classifier parameters. Throws if qubit counts disagree.
ClassifierModel make_classifier(const Ansatz& data_ansatz,
                                const Ansatz& classifier);

// Predicted probability of label 1, in [0, 1] by the spectrum of the vote.
double predict(const ClassifierModel& m, const LabeledStatePrep& datum);

// Cross entropy of the predictions against the labels, with probabilities
// clipped to [1e-9, 1 - 1e-9] to stay finite.
double log_loss(const ClassifierModel& m,
                const std::vector<LabeledStatePrep>& data);

// Fraction of data points whose thresholded prediction matches the label.
// The decision threshold is 1/2 and ties go to label 1.
double accuracy(const ClassifierModel& m,
                const std::vector<LabeledStatePrep>& data);

struct TrainConfig {
  int epochs = 300;
  double step0 = 2.0;   // learning-rate scale, decays as 1/sqrt(epoch)
  double probe0 = 1.0;  // finite-difference scale, same decay
  std::uint64_t seed = 1;
};

struct TrainResult {
  std::vector<double> phi;
  std::vector<double> loss_trace;  // loss after each epoch
};

// Simultaneous-perturbation descent on the log loss. Starts from uniform
// random angles drawn from the seed, runs the fixed epoch budget and leaves
// the trained parameters in the model. Deterministic per seed. Throws if
// the loss turns into NaN.
TrainResult train(ClassifierModel& m, const std::vector<LabeledStatePrep>& data,
                  const TrainConfig& cfg);

// Parameter-space symmetry moves for data prepared by entangler blocks:
// adds phi to the final Z rotation of every qubit (a global rotation about
// Z) and, when flip is set, negates those Z angles and advances the final X
// rotations by pi (a global spin flip). Both leave any XXZ energy intact.
// Throws when a final block is not an entangler or, for flips, when the
// final layer does not cover the qubits in whole blocks.
std::vector<double> augment_xxz(const AnsatzLayout& layout,
                                const std::vector<double>& prep, double phi,
                                bool flip);

struct SplitData {
  std::vector<LabeledStatePrep> train;
  std::vector<LabeledStatePrep> test;
};

// Seeded shuffle, then the first round(fraction * size) points train.
SplitData split_data(const std::vector<LabeledStatePrep>& data,
                     double train_fraction, std::uint64_t seed);

// Labels every point by whether its grid value lies above the threshold.
std::vector<LabeledStatePrep> relabel(std::vector<LabeledStatePrep> data,
                                      double threshold);

struct ConfusionPoint {
  double threshold = 0.0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
};

// Learning by confusion: for each candidate threshold, relabel the data
// across it, retrain from scratch and record both accuracies. Points are
// independent and may run concurrently; results follow the input order.
std::vector<ConfusionPoint> confusion_scan(
    const ClassifierModel& base, const std::vector<LabeledStatePrep>& data,
    const std::vector<double>& thresholds, const TrainConfig& cfg);

// "threshold,train_accuracy,test_accuracy" rows, 12 significant digits.
std::string confusion_csv(const std::vector<ConfusionPoint>& rows);

// "grid_value,label,angles" rows with the angles joined by semicolons,
// 12 significant digits, and the inverse parser.
std::string dataset_csv(const std::vector<LabeledStatePrep>& rows);
std::vector<LabeledStatePrep> parse_dataset_csv(const std::string& text);

}  // namespace vqlab
