#include <algorithm>
#include <cmath>

#include "qoc/gradcheck.hpp"
#include "qoc/linalg.hpp"

namespace qoc {
namespace {

double total_cost(const ControlProblem& p, const PulseGrid& pulses, const ExpmConfig& cfg) {
  return evaluate_problem(p, bounded_map(pulses), cfg, nullptr).total;
}

// Forward evaluation with an extra kick exp(-i dt eps H_k) applied right
// after step j, leaving u itself untouched.
double kicked_cost(const ControlProblem& p, const RealGrid& u, const ExpmConfig& cfg,
                   std::size_t k, std::size_t j, double eps) {
  std::vector<Trajectory> trajs;
  const auto step_state = [&](ComplexVector psi) {
    Trajectory t;
    t.states.reserve(p.grid.steps + 1);
    t.states.push_back(std::move(psi));
    for (std::size_t jj = 0; jj < p.grid.steps; ++jj) {
      ComplexVector next = expm_apply(hamiltonian_at(p.h, u, jj), p.grid.dt, cfg,
                                      t.states.back());
      if (jj == j) next = expm_apply(p.h.controls[k], p.grid.dt * eps, cfg, next);
      t.states.push_back(std::move(next));
    }
    return t;
  };
  if (p.mode == EvolutionMode::Unitary) {
    Trajectory t;
    t.unitaries.reserve(p.grid.steps + 1);
    t.unitaries.push_back(ComplexMatrix::identity(p.dim()));
    for (std::size_t jj = 0; jj < p.grid.steps; ++jj) {
      ComplexMatrix next = expm_apply(hamiltonian_at(p.h, u, jj), p.grid.dt, cfg,
                                      t.unitaries.back());
      if (jj == j) next = expm_apply(p.h.controls[k], p.grid.dt * eps, cfg, next);
      t.unitaries.push_back(std::move(next));
    }
    trajs.push_back(std::move(t));
  } else {
    for (const auto& psi0 : p.initial_states) trajs.push_back(step_state(psi0));
  }
  return evaluate_total(p.terms, trajs, u).total;
}

std::size_t checked_vars(const PulseGrid& pulses, std::size_t max_vars) {
  return std::min(pulses.raw.size(), max_vars);
}

}  // namespace

RealGrid finite_difference_gradient(const ControlProblem& p, const PulseGrid& pulses,
                                    const ExpmConfig& cfg, double scale,
                                    std::size_t max_vars) {
  RealGrid grad(pulses.controls(), pulses.steps());
  PulseGrid work = pulses;
  const std::size_t d = checked_vars(pulses, max_vars);
  for (std::size_t i = 0; i < d; ++i) {
    const double v0 = pulses.raw.data()[i];
    const double h = scale * (1.0 + std::abs(v0));
    work.raw.data()[i] = v0 + h;
    const double cp = total_cost(p, work, cfg);
    work.raw.data()[i] = v0 - h;
    const double cm = total_cost(p, work, cfg);
    work.raw.data()[i] = v0;
    grad.data()[i] = (cp - cm) / (2.0 * h);
  }
  return grad;
}

RealGrid matched_finite_difference_gradient(const ControlProblem& p,
                                            const PulseGrid& pulses, const ExpmConfig& cfg,
                                            double scale, std::size_t max_vars) {
  const RealGrid u = bounded_map(pulses);
  const RealGrid chain = bounded_map_derivative(pulses);
  RealGrid grad(pulses.controls(), pulses.steps());
  const std::size_t d = checked_vars(pulses, max_vars);
  const std::size_t n = pulses.steps();

  // Penalty-term contribution (C3/C4 depend on u directly, not through the
  // propagator): plain central differences in u.
  double w3 = 0.0, w4 = 0.0;
  for (const auto& t : p.terms) {
    if (t.kind == CostKind::Amplitude) w3 += t.weight;
    if (t.kind == CostKind::Variation) w4 += t.weight;
  }
  RealGrid u_work = u;
  const auto penalty = [&](const RealGrid& g) {
    return w3 * c3_amplitude(g) + w4 * c4_variation(g);
  };

  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t k = i / n, j = i % n;
    const double h = scale * (1.0 + std::abs(u.data()[i]));
    double deriv = (kicked_cost(p, u, cfg, k, j, h) - kicked_cost(p, u, cfg, k, j, -h)) /
                   (2.0 * h);
    if (w3 != 0.0 || w4 != 0.0) {
      const double u0 = u.data()[i];
      u_work.data()[i] = u0 + h;
      const double pp = penalty(u_work);
      u_work.data()[i] = u0 - h;
      const double pm = penalty(u_work);
      u_work.data()[i] = u0;
      deriv += (pp - pm) / (2.0 * h);
    }
    grad.data()[i] = deriv * chain.data()[i];
  }
  return grad;
}

GradCheckReport run_gradient_check(const ControlProblem& p, const PulseGrid& pulses,
                                   const ExpmConfig& cfg, std::size_t max_vars) {
  GradCheckReport r;
  r.vars_checked = checked_vars(pulses, max_vars);

  const RealGrid g_exact = compute_gradient(p, pulses, cfg, GradientPath::AutogradExact);
  const RealGrid g_approx = compute_gradient(p, pulses, cfg, GradientPath::AutogradApprox);
  const RealGrid g_analytic = compute_gradient(p, pulses, cfg, GradientPath::Analytic);
  const RealGrid g_fd = finite_difference_gradient(p, pulses, cfg, 1e-6, max_vars);
  const RealGrid g_mfd = matched_finite_difference_gradient(p, pulses, cfg, 1e-6, max_vars);

  for (std::size_t i = 0; i < r.vars_checked; ++i) {
    r.max_abs_exact_vs_fd =
        std::max(r.max_abs_exact_vs_fd, std::abs(g_exact.data()[i] - g_fd.data()[i]));
    r.max_abs_approx_vs_matched =
        std::max(r.max_abs_approx_vs_matched, std::abs(g_approx.data()[i] - g_mfd.data()[i]));
    r.max_abs_value = std::max(r.max_abs_value, std::abs(g_exact.data()[i]));
  }
  for (std::size_t i = 0; i < g_exact.size(); ++i)
    r.max_abs_analytic_vs_approx = std::max(
        r.max_abs_analytic_vs_approx, std::abs(g_analytic.data()[i] - g_approx.data()[i]));
  return r;
}

}  // namespace qoc
