// Copyright (c) 2026 vqlab contributors
// SPDX-License-Identifier: Apache-2.0
#include "vqlab/vqe.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vqlab/rng.hpp"

namespace vqlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_theta(const VqeProblem& p, const std::vector<double>& theta) {
  const int want = p.layout.param_count();
  if (static_cast<int>(theta.size()) != want)
    throw std::invalid_argument("theta has " + std::to_string(theta.size()) +
                                " entries; layout has " +
                                std::to_string(want) + " slots");
}

void require_pauli_slots(const AnsatzLayout& layout) {
  const std::vector<bool> ok = pauli_rot_slots(layout);
  for (std::size_t i = 0; i < ok.size(); ++i)
    if (!ok[i])
      throw std::invalid_argument(
          "slot " + std::to_string(i) +
          " has no Pauli generator; use finite differences");
}

bool all_pauli_slots(const AnsatzLayout& layout) {
  const std::vector<bool> ok = pauli_rot_slots(layout);
  return std::all_of(ok.begin(), ok.end(), [](bool b) { return b; });
}

// slot -> whether its block lies inside the causal cone of at least one
// Hamiltonian term. Derivatives of the remaining slots vanish identically.
std::vector<char> slots_in_cone(const PauliSum& h, const AnsatzLayout& layout) {
  std::vector<char> block_in(layout.blocks.size(), 0);
  for (const auto& [key, coeff] : h.terms()) {
    (void)coeff;
    if (key.first == 0 && key.second == 0) continue;
    const CausalCone cone = causal_cone(layout, h.term_string(key));
    for (int id : cone.block_ids) block_in[static_cast<std::size_t>(id)] = 1;
  }
  std::vector<char> slot_in(static_cast<std::size_t>(layout.param_count()), 0);
  for (const Block& b : layout.blocks) {
    if (!block_in[static_cast<std::size_t>(b.id)]) continue;
    for (int s : b.slots) slot_in[static_cast<std::size_t>(s)] = 1;
  }
  return slot_in;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_finite(double e, int iter) {
  if (!std::isfinite(e))
    throw std::runtime_error("optimize: energy became non-finite at iteration " +
                             std::to_string(iter) + "; aborting");
}

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

VqeProblem make_problem(const PauliSum& hamiltonian, const Ansatz& ansatz,
                        std::string initial_state) {
  const int n = ansatz.layout.n;
  if (hamiltonian.n() != n)
    throw std::invalid_argument("hamiltonian acts on " +
                                std::to_string(hamiltonian.n()) +
                                " qubits; ansatz has " + std::to_string(n));
  if (initial_state.empty()) initial_state.assign(static_cast<std::size_t>(n), '0');
  if (static_cast<int>(initial_state.size()) != n)
    throw std::invalid_argument("initial state length mismatch");
  for (char c : initial_state)
    if (c != '0' && c != '1')
      throw std::invalid_argument("initial state must be a 0/1 string");
  return VqeProblem{hamiltonian, ansatz.layout, ansatz.circuit,
                    std::move(initial_state)};
}

StateVector prepare(const VqeProblem& p, const std::vector<double>& theta) {
  check_theta(p, theta);
  const Circuit bound = bind_circuit(p.layout, theta);
  StateVector psi = StateVector::basis(p.layout.n, p.initial_state);
  apply_circuit(psi, bound);
  return psi;
}

double energy(const VqeProblem& p, const std::vector<double>& theta) {
  const StateVector psi = prepare(p, theta);
  return expectation(psi, p.hamiltonian);
}

std::vector<double> grad_param_shift(const VqeProblem& p,
                                     const std::vector<double>& theta) {
  check_theta(p, theta);
  require_pauli_slots(p.layout);
  const std::vector<char> active = slots_in_cone(p.hamiltonian, p.layout);
  std::vector<double> g(theta.size(), 0.0);
  std::vector<double> shifted = theta;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!active[i]) continue;
    shifted[i] = theta[i] + kPi / 2;
    const double ep = energy(p, shifted);
    shifted[i] = theta[i] - kPi / 2;
    const double em = energy(p, shifted);
    shifted[i] = theta[i];
    g[i] = 0.5 * (ep - em);
  }
  return g;
}

std::vector<double> grad_adjoint(const VqeProblem& p,
                                 const std::vector<double>& theta) {
  check_theta(p, theta);
  require_pauli_slots(p.layout);
  const int n = p.layout.n;
  const Circuit bound = bind_circuit(p.layout, theta);

  StateVector a = StateVector::basis(n, p.initial_state);
  apply_circuit(a, bound);

  StateVector b = a;
  std::fill(b.amps.begin(), b.amps.end(), cplx(0.0));
  StateVector tmp = a;
  for (const auto& [key, coeff] : p.hamiltonian.terms()) {
    tmp.amps = a.amps;
    apply_pauli(tmp, p.hamiltonian.term_string(key));
    for (std::size_t i = 0; i < b.amps.size(); ++i)
      b.amps[i] += coeff * tmp.amps[i];
  }

  // Walking the circuit backwards keeps a = U_j..U_1 |init> and
  // b = U_{j+1}^dag..U_P^dag H |psi> when gate j is processed, so
  // dE/dtheta_j = 2 Re <b| (-i/2) G_j |a> = Im <b| G_j |a>.
  std::vector<double> g(theta.size(), 0.0);
  for (std::size_t j = bound.size(); j-- > 0;) {
    const Gate& gate = bound[j];
    if (gate.param_slot >= 0) {
      tmp.amps = a.amps;
      const PauliString lifted{n, gate.generator.x_mask, gate.generator.z_mask,
                               gate.generator.phase_exp};
      apply_pauli(tmp, lifted);
      g[static_cast<std::size_t>(gate.param_slot)] +=
          std::imag(overlap(b, tmp));
    }
    apply_gate_inverse(a, gate);
    apply_gate_inverse(b, gate);
  }
  return g;
}

std::vector<double> grad_finite_diff(const VqeProblem& p,
                                     const std::vector<double>& theta,
                                     double delta) {
  check_theta(p, theta);
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  std::vector<double> g(theta.size(), 0.0);
  std::vector<double> shifted = theta;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    shifted[i] = theta[i] + delta;
    const double ep = energy(p, shifted);
    shifted[i] = theta[i] - delta;
    const double em = energy(p, shifted);
    shifted[i] = theta[i];
    g[i] = (ep - em) / (2.0 * delta);
  }
  return g;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

using GradFn =
    std::function<std::vector<double>(const std::vector<double>&)>;

OptResult run_gradient_descent(const VqeProblem& p, const OptimizerConfig& cfg,
                               std::vector<double> theta, const GradFn& grad) {
  const auto start = Clock::now();
  OptResult out;
  out.converged = false;
  for (int k = 0; k < cfg.max_iters; ++k) {
    const double e = energy(p, theta);
    check_finite(e, k);
    const std::vector<double> g = grad(theta);
    out.trace.push_back({k, e, norm2(g), elapsed_ms(start)});
    double max_step = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const double step = cfg.learning_rate * g[i];
      theta[i] -= step;
      max_step = std::max(max_step, std::abs(step));
    }
    if (max_step < cfg.tolerance) {
      out.converged = true;
      break;
    }
  }
  out.energy = energy(p, theta);
  check_finite(out.energy, cfg.max_iters);
  out.theta = std::move(theta);
  return out;
}

OptResult run_spsa(const VqeProblem& p, const OptimizerConfig& cfg,
                   std::vector<double> theta) {
  const auto start = Clock::now();
  Rng rng(Rng::hash2(cfg.seed, 1));
  const std::size_t dim = theta.size();
  OptResult out;
  out.converged = false;
  std::vector<double> delta(dim), probe(dim), ghat(dim);
  for (int k = 0; k < cfg.max_iters; ++k) {
    const double ck = cfg.spsa_c / std::pow(k + 1.0, 0.101);
    const double ak =
        cfg.spsa_a / std::pow(k + 1.0 + cfg.spsa_big_a, 0.602);
    for (std::size_t i = 0; i < dim; ++i)
      delta[i] = rng.below(2) ? 1.0 : -1.0;
    for (std::size_t i = 0; i < dim; ++i) probe[i] = theta[i] + ck * delta[i];
    const double ep = energy(p, probe);
    for (std::size_t i = 0; i < dim; ++i) probe[i] = theta[i] - ck * delta[i];
    const double em = energy(p, probe);
    check_finite(ep, k);
    check_finite(em, k);
    for (std::size_t i = 0; i < dim; ++i)
      ghat[i] = (ep - em) / (2.0 * ck * delta[i]);
    const double e = energy(p, theta);
    check_finite(e, k);
    out.trace.push_back({k, e, norm2(ghat), elapsed_ms(start)});
    double max_step = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double step = ak * ghat[i];
      theta[i] -= step;
      max_step = std::max(max_step, std::abs(step));
    }
    if (max_step < cfg.tolerance) {
      out.converged = true;
      break;
    }
  }
  out.energy = energy(p, theta);
  check_finite(out.energy, cfg.max_iters);
  out.theta = std::move(theta);
  return out;
}

OptResult run_lbfgs(const VqeProblem& p, const OptimizerConfig& cfg,
                    std::vector<double> theta, const GradFn& grad) {
  constexpr int kHistory = 10;
  constexpr double kArmijo = 1e-4;
  const auto start = Clock::now();
  const std::size_t dim = theta.size();

  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;

  OptResult out;
  out.converged = false;
  double f = energy(p, theta);
  check_finite(f, 0);
  std::vector<double> g = grad(theta);

  std::vector<double> d(dim), trial(dim), alphas;
  for (int k = 0; k < cfg.max_iters; ++k) {
    out.trace.push_back({k, f, norm2(g), elapsed_ms(start)});

    // Two-loop recursion for d = -H g.
    d = g;
    alphas.assign(s_hist.size(), 0.0);
    for (std::size_t i = s_hist.size(); i-- > 0;) {
      alphas[i] = rho_hist[i] * dot(s_hist[i], d);
      for (std::size_t j = 0; j < dim; ++j) d[j] -= alphas[i] * y_hist[i][j];
    }
    if (!s_hist.empty()) {
      const double gamma = dot(s_hist.back(), y_hist.back()) /
                           dot(y_hist.back(), y_hist.back());
      for (double& x : d) x *= gamma;
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * dot(y_hist[i], d);
      for (std::size_t j = 0; j < dim; ++j)
        d[j] += (alphas[i] - beta) * s_hist[i][j];
    }
    for (double& x : d) x = -x;

    double dg = dot(d, g);
    if (dg >= 0.0) {  // stale curvature; fall back to steepest descent
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t j = 0; j < dim; ++j) d[j] = -g[j];
      dg = -dot(g, g);
    }
    if (dg == 0.0) {  // exactly stationary
      out.converged = true;
      break;
    }

    double alpha = 1.0;
    double f_new = f;
    bool descended = false;
    for (int ls = 0; ls < 50; ++ls) {
      for (std::size_t j = 0; j < dim; ++j) trial[j] = theta[j] + alpha * d[j];
      f_new = energy(p, trial);
      check_finite(f_new, k);
      if (f_new <= f + kArmijo * alpha * dg) {
        descended = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!descended) break;  // stuck at the finite-difference noise floor

    double max_step = 0.0;
    for (std::size_t j = 0; j < dim; ++j)
      max_step = std::max(max_step, std::abs(alpha * d[j]));

    const std::vector<double> g_new = grad(trial);
    std::vector<double> s(dim), y(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      s[j] = trial[j] - theta[j];
      y[j] = g_new[j] - g[j];
    }
    const double sy = dot(s, y);
    if (sy > 1e-12 * norm2(s) * norm2(y)) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > kHistory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    theta = trial;
    f = f_new;
    g = g_new;
    if (max_step < cfg.tolerance) {
      out.converged = true;
      break;
    }
  }
  out.energy = f;
  out.theta = std::move(theta);
  return out;
}

}  // namespace

OptResult optimize(const VqeProblem& p, const OptimizerConfig& cfg,
                   std::vector<double> theta0) {
  if (cfg.max_iters < 1)
    throw std::invalid_argument("max_iters must be at least 1");
  if (!(cfg.tolerance > 0.0))
    throw std::invalid_argument("tolerance must be positive");
  if (cfg.method == OptMethod::GradientDescent && !(cfg.learning_rate > 0.0))
    throw std::invalid_argument("learning rate must be positive");
  if (cfg.method == OptMethod::SPSA &&
      (!(cfg.spsa_a > 0.0) || !(cfg.spsa_c > 0.0) || cfg.spsa_big_a < 0.0))
    throw std::invalid_argument("SPSA gains must be positive");

  const int want = p.layout.param_count();
  if (theta0.empty()) {
    Rng rng(Rng::hash2(cfg.seed, 0));
    theta0.resize(static_cast<std::size_t>(want));
    for (double& t : theta0) t = rng.uniform(-kPi, kPi);
  } else {
    check_theta(p, theta0);
  }

  for (double t : theta0)
    if (!std::isfinite(t))
      throw std::runtime_error(
          "optimize: energy became non-finite at iteration 0; aborting "
          "(non-finite start angles)");

  const double fd_delta = 1e-6;
  GradFn grad;
  if (cfg.method == OptMethod::GradientDescent && all_pauli_slots(p.layout)) {
    grad = [&p](const std::vector<double>& t) { return grad_adjoint(p, t); };
  } else {
    grad = [&p, fd_delta](const std::vector<double>& t) {
      return grad_finite_diff(p, t, fd_delta);
    };
  }

  switch (cfg.method) {
    case OptMethod::SPSA:
      return run_spsa(p, cfg, std::move(theta0));
    case OptMethod::GradientDescent:
      return run_gradient_descent(p, cfg, std::move(theta0), grad);
    case OptMethod::FiniteDiffBFGS:
      return run_lbfgs(p, cfg, std::move(theta0), grad);
  }
  throw std::logic_error("unhandled optimizer method");
}

std::string trace_csv(const std::vector<TracePoint>& trace) {
  std::string out = "iter,energy,grad_norm,wall_ms\n";
  for (const TracePoint& t : trace) {
    out += std::to_string(t.iter);
    out += ',';
    out += fmt12(t.energy);
    out += ',';
    out += fmt12(t.grad_norm);
    out += ',';
    out += fmt12(t.wall_ms);
    out += '\n';
  }
  return out;
}

double sweep_grid_value(const ModelSpec& spec) {
  switch (spec.family) {
    case ModelSpec::Family::TFI:
      return spec.h;
    case ModelSpec::Family::XXZ:
      return spec.jz;
    case ModelSpec::Family::HubbardSpinless:
      return spec.v1;
    case ModelSpec::Family::RandomInterpolated:
      return spec.alpha;
  }
  throw std::logic_error("unhandled model family");
}

std::vector<SweepPoint> aavqe_sweep(const std::vector<ModelSpec>& grid,
                                    SweepDirection direction,
                                    const VqeProblem& tpl,
                                    const OptimizerConfig& cfg) {
  if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
  const int n = tpl.layout.n;
  for (const ModelSpec& spec : grid)
    if (spec.n != n)
      throw std::invalid_argument("grid qubit count differs from the ansatz");

  const std::size_t count = grid.size();
  std::vector<SweepPoint> out(count);
  std::vector<double> warm;  // empty: first point uses the default init
  for (std::size_t step = 0; step < count; ++step) {
    const std::size_t idx =
        direction == SweepDirection::Up ? step : count - 1 - step;
    VqeProblem prob{build_model(grid[idx]), tpl.layout, tpl.circuit,
                    tpl.initial_state};
    OptResult r = optimize(prob, cfg, warm);
    warm = r.theta;
    double ov = std::numeric_limits<double>::quiet_NaN();
    if (n <= 10) {
      const GroundState gs = exact_ground(prob.hamiltonian);
      const StateVector psi = prepare(prob, r.theta);
      ov = std::norm(overlap(gs.state, psi));
    }
    out[idx] = SweepPoint{sweep_grid_value(grid[idx]), direction, r.energy, ov,
                          std::move(r.theta)};
  }
  return out;
}

std::vector<SweepPoint> merge_best(const std::vector<SweepPoint>& up,
                                   const std::vector<SweepPoint>& down) {
  if (up.size() != down.size())
    throw std::invalid_argument("sweeps cover different grids");
  std::vector<SweepPoint> out;
  out.reserve(up.size());
  for (std::size_t i = 0; i < up.size(); ++i) {
    if (up[i].grid_value != down[i].grid_value)
      throw std::invalid_argument("sweeps cover different grids");
    out.push_back(up[i].energy <= down[i].energy ? up[i] : down[i]);
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::string out = "grid_value,direction,energy,overlap\n";
  for (const SweepPoint& pt : points) {
    out += fmt12(pt.grid_value);
    out += ',';
    out += pt.direction == SweepDirection::Up ? "up" : "down";
    out += ',';
    out += fmt12(pt.energy);
    out += ',';
    if (!std::isnan(pt.overlap)) out += fmt12(pt.overlap);
    out += '\n';
  }
  return out;
}

}  // namespace vqlab
