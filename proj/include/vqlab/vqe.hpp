// Copyright (c) 2026 vqlab contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vqlab/ansatz.hpp"
#include "vqlab/models.hpp"
#include "vqlab/pauli.hpp"
#include "vqlab/simulator.hpp"

namespace vqlab {

// A variational eigensolver instance: cost observable, parametrized circuit
// (kept both as the layout and its zero-angle template), and the basis state
// the circuit acts on. The template's slot tags always match the layout.
struct VqeProblem {
  PauliSum hamiltonian;
  AnsatzLayout layout;
  Circuit circuit;            // zero-angle template with slot tags
  std::string initial_state;  // basis bits, qubit 0 leftmost
};

// Bundles an observable with an ansatz. An empty initial state means |0...0>.
// Throws if qubit counts disagree or the bit string is malformed.
VqeProblem make_problem(const PauliSum& hamiltonian, const Ansatz& ansatz,
                        std::string initial_state = "");

// |psi(theta)> = U(theta) |initial>.
StateVector prepare(const VqeProblem& p, const std::vector<double>& theta);

// E(theta) = <psi(theta)| H |psi(theta)>, exact. Throws on length mismatch.
double energy(const VqeProblem& p, const std::vector<double>& theta);

// Shift-rule gradient: component i is (E(theta + pi/2 e_i) -
// E(theta - pi/2 e_i)) / 2, which is the exact derivative when every
// parametrized gate has a Pauli-string generator (spectrum {-1, +1}).
// Slots whose block lies outside the causal cone of every Hamiltonian term
// are returned as exact 0.0 without evaluation. Throws invalid_argument when
// the layout contains slots without Pauli generators.
std::vector<double> grad_param_shift(const VqeProblem& p,
                                     const std::vector<double>& theta);

// Reverse-mode gradient: one forward sweep, one backward sweep with gate
// inverses, d E / d theta_i = Im <b| G_i |a>. Mathematically identical to
// the shift rule (same precondition) at circuit-depth cost instead of
// 2 * slots evaluations; tests pin agreement to 1e-10.
std::vector<double> grad_adjoint(const VqeProblem& p,
                                 const std::vector<double>& theta);

// Central finite differences, (E(theta + d e_i) - E(theta - d e_i)) / (2d).
// Works for any layout, including blocks without Pauli generators.
std::vector<double> grad_finite_diff(const VqeProblem& p,
                                     const std::vector<double>& theta,
                                     double delta);

enum class OptMethod { SPSA, GradientDescent, FiniteDiffBFGS };

// SPSA gains follow a_k = a / (k + 1 + A)^0.602 and c_k = c / (k + 1)^0.101.
// FiniteDiffBFGS drives an L-BFGS two-loop (history m = 10, Armijo
// backtracking) with central-difference gradients at delta = 1e-6; bound
// constraints are unnecessary because all angles are periodic.
struct OptimizerConfig {
  OptMethod method = OptMethod::FiniteDiffBFGS;
  int max_iters = 2000;
  double tolerance = 1e-8;     // stop when max_i |delta theta_i| < tolerance
  double learning_rate = 0.1;  // GradientDescent step size
  double spsa_a = 0.2;
  double spsa_c = 0.1;
  double spsa_big_a = 10.0;
  std::uint64_t seed = 0;  // initial angles and SPSA perturbations
};

struct TracePoint {
  int iter = 0;
  double energy = 0.0;
  double grad_norm = 0.0;  // SPSA records the norm of its estimate
  double wall_ms = 0.0;    // elapsed since optimize() entry
};

struct OptResult {
  std::vector<double> theta;
  double energy = 0.0;
  bool converged = false;  // stopped by the tolerance test, not the budget
  std::vector<TracePoint> trace;
};

// Minimizes energy(p, .) from theta0; an empty theta0 draws every angle
// uniformly from [-pi, pi) using the config seed. GradientDescent uses the
// reverse-mode gradient when every slot has a Pauli generator and central
// differences (delta = 1e-6) otherwise. Runs are deterministic given
// (problem, config, theta0). Throws runtime_error with the iteration index
// if the energy turns non-finite.
OptResult optimize(const VqeProblem& p, const OptimizerConfig& cfg,
                   std::vector<double> theta0 = {});

// "iter,energy,grad_norm,wall_ms" rows, 12 significant digits.
std::string trace_csv(const std::vector<TracePoint>& trace);

enum class SweepDirection { Up, Down };

struct SweepPoint {
  double grid_value = 0.0;
  SweepDirection direction = SweepDirection::Up;
  double energy = 0.0;
  double overlap = 0.0;  // |<psi*|ground>|^2; NaN when n > 10
  std::vector<double> theta;
};

// The coupling a sweep varies, by family: TFI -> h, XXZ -> jz,
// HubbardSpinless -> v1, RandomInterpolated -> alpha.
double sweep_grid_value(const ModelSpec& spec);

// Adiabatically-assisted sweep over an ordered model grid: each point after
// the first starts from the previous optimum (Up walks the grid forward,
// Down backward; the first point of either direction uses the default
// initialization). The template provides ansatz and initial state; its
// hamiltonian is replaced per point. Results are reported in grid order.
std::vector<SweepPoint> aavqe_sweep(const std::vector<ModelSpec>& grid,
                                    SweepDirection direction,
                                    const VqeProblem& tpl,
                                    const OptimizerConfig& cfg);

// Keeps the lower-energy result per grid point. Grids must match.
std::vector<SweepPoint> merge_best(const std::vector<SweepPoint>& up,
                                   const std::vector<SweepPoint>& down);

// "grid_value,direction,energy,overlap" rows, 12 significant digits; the
// overlap field is left empty when unavailable.
std::string sweep_csv(const std::vector<SweepPoint>& points);

}  // namespace vqlab
