#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>

#include "qoc/optimize.hpp"

namespace qoc {
namespace {

using Clock = std::chrono::steady_clock;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

std::vector<double> flatten(const RealGrid& g) {
  return std::vector<double>(g.data(), g.data() + g.size());
}

bool all_finite(const std::vector<double>& a) {
  for (double x : a)
    if (!std::isfinite(x)) return false;
  return true;
}

struct LbfgsPair {
  std::vector<double> s, y;
  double rho;
};

// Two-loop recursion; returns the (descent-intended) search direction.
std::vector<double> lbfgs_direction(const std::vector<double>& g,
                                    const std::deque<LbfgsPair>& mem) {
  std::vector<double> q = g;
  std::vector<double> alpha(mem.size());
  for (std::size_t i = mem.size(); i-- > 0;) {
    alpha[i] = mem[i].rho * dot(mem[i].s, q);
    for (std::size_t n = 0; n < q.size(); ++n) q[n] -= alpha[i] * mem[i].y[n];
  }
  if (!mem.empty()) {
    const auto& last = mem.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& x : q) x *= gamma;
  }
  for (std::size_t i = 0; i < mem.size(); ++i) {
    const double beta = mem[i].rho * dot(mem[i].y, q);
    for (std::size_t n = 0; n < q.size(); ++n) q[n] += (alpha[i] - beta) * mem[i].s[n];
  }
  for (double& x : q) x = -x;
  return q;
}

}  // namespace

OptimizerMethod parse_optimizer_method(const std::string& name) {
  if (name == "sd") return OptimizerMethod::Sd;
  if (name == "adam") return OptimizerMethod::Adam;
  if (name == "lbfgs") return OptimizerMethod::Lbfgs;
  throw std::runtime_error("unknown optimizer: " + name);
}

const char* optimizer_method_name(OptimizerMethod m) {
  switch (m) {
    case OptimizerMethod::Sd: return "sd";
    case OptimizerMethod::Adam: return "adam";
    case OptimizerMethod::Lbfgs: return "lbfgs";
  }
  return "?";
}

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::FidelityReached: return "fidelity_reached";
    case StopReason::MaxIterations: return "max_iterations";
    case StopReason::GradientFloor: return "gradient_floor";
    case StopReason::Stalled: return "stalled";
    case StopReason::NonFinite: return "non_finite";
  }
  return "?";
}

PulseGrid random_initial_pulses(const ControlProblem& p, std::uint64_t seed,
                                double init_scale) {
  PulseGrid pulses;
  pulses.raw = RealGrid(p.h.num_controls(), p.grid.steps);
  pulses.bounds = p.bounds;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-init_scale, init_scale);
  for (std::size_t i = 0; i < pulses.raw.size(); ++i) pulses.raw.data()[i] = dist(rng);
  return pulses;
}

OptimizationResult optimize(const ControlProblem& p, const OptimizerConfig& cfg,
                            const ExpmConfig& expm_cfg,
                            const IterationCallback& on_iteration) {
  return optimize_from(p, random_initial_pulses(p, cfg.seed, cfg.init_scale), cfg,
                       expm_cfg, on_iteration);
}

OptimizationResult optimize_from(const ControlProblem& p, PulseGrid start,
                                 const OptimizerConfig& cfg, const ExpmConfig& expm_cfg,
                                 const IterationCallback& on_iteration) {
  p.validate();
  OptimizationResult result;
  result.pulses = std::move(start);
  const std::size_t dim = result.pulses.raw.size();
  std::vector<double> v = flatten(result.pulses.raw);

  // Adam state.
  std::vector<double> m(dim, 0.0), s2(dim, 0.0);
  // L-BFGS state.
  std::deque<LbfgsPair> mem;
  std::vector<double> prev_v, prev_g;

  const auto write_back = [&](const std::vector<double>& src) {
    for (std::size_t i = 0; i < dim; ++i) result.pulses.raw.data()[i] = src[i];
  };
  // Re-derive the global (p, n) from the current amplitudes so unbounded
  // controls keep the Taylor radius in range as they grow. Runaway amplitudes
  // (non-finite, or needing an absurd number of squarings) are treated as a
  // divergent evaluation instead of attempting 2^n propagation sub-steps.
  const auto chosen_cfg = [&]() -> std::optional<ExpmConfig> {
    if (!all_finite(flatten(result.pulses.raw))) return std::nullopt;
    const ExpmConfig c = choose_pn_for(p.h, bounded_map(result.pulses), p.bounds,
                                       p.grid.dt, expm_cfg.tolerance);
    if (c.squarings > 40) return std::nullopt;
    return c;
  };
  const auto eval = [&](const std::vector<double>& at, CostReport* rep) {
    for (std::size_t i = 0; i < dim; ++i) result.pulses.raw.data()[i] = at[i];
    CostReport local;
    std::vector<double> out;
    if (const auto c = chosen_cfg()) {
      RealGrid g = compute_gradient(p, result.pulses, *c, cfg.path, &local);
      out = flatten(g);
    } else {
      local.total = std::numeric_limits<double>::infinity();
      out.assign(dim, std::numeric_limits<double>::quiet_NaN());
    }
    if (rep) *rep = local;
    return out;
  };
  const auto cost_only = [&](const std::vector<double>& at) {
    for (std::size_t i = 0; i < dim; ++i) result.pulses.raw.data()[i] = at[i];
    const auto c = chosen_cfg();
    if (!c) return std::numeric_limits<double>::infinity();
    return evaluate_problem(p, bounded_map(result.pulses), *c, nullptr).total;
  };

  const auto t0 = Clock::now();
  CostReport report;
  std::vector<double> g = eval(v, &report);
  double best_recent = report.total;
  std::size_t since_improve = 0;

  result.reason = StopReason::MaxIterations;
  for (std::size_t it = 0; it <= cfg.max_iterations; ++it) {
    const double gnorm = norm2(g);
    IterationRecord rec;
    rec.iteration = it;
    rec.total_cost = report.total;
    rec.fidelity = report.fidelity;
    rec.gradient_norm = gnorm;
    rec.term_values = report.term_values;
    rec.elapsed_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    result.history.push_back(rec);
    if (on_iteration) on_iteration(rec);
    result.iterations = it;

    if (!std::isfinite(report.total) || !all_finite(g)) {
      result.reason = StopReason::NonFinite;
      break;
    }
    if (report.fidelity >= cfg.target_fidelity) {
      result.reason = StopReason::FidelityReached;
      break;
    }
    if (cfg.gradient_norm_floor > 0.0 && gnorm < cfg.gradient_norm_floor) {
      result.reason = StopReason::GradientFloor;
      break;
    }
    if (report.total < best_recent * (1.0 - cfg.stall_tolerance) ||
        report.total < best_recent - cfg.stall_tolerance) {
      best_recent = report.total;
      since_improve = 0;
    } else if (++since_improve >= cfg.stall_window) {
      result.reason = StopReason::Stalled;
      break;
    }
    if (it == cfg.max_iterations) break;

    switch (cfg.method) {
      case OptimizerMethod::Sd: {
        for (std::size_t i = 0; i < dim; ++i) v[i] -= cfg.learning_rate * g[i];
        g = eval(v, &report);
        break;
      }
      case OptimizerMethod::Adam: {
        const double t = double(it + 1);
        for (std::size_t i = 0; i < dim; ++i) {
          m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
          s2[i] = cfg.beta2 * s2[i] + (1.0 - cfg.beta2) * g[i] * g[i];
          const double mh = m[i] / (1.0 - std::pow(cfg.beta1, t));
          const double sh = s2[i] / (1.0 - std::pow(cfg.beta2, t));
          v[i] -= cfg.learning_rate * mh / (std::sqrt(sh) + cfg.epsilon);
        }
        g = eval(v, &report);
        break;
      }
      case OptimizerMethod::Lbfgs: {
        std::vector<double> dir = lbfgs_direction(g, mem);
        if (dot(dir, g) >= 0.0) {  // not a descent direction: reset
          mem.clear();
          dir = g;
          for (double& x : dir) x = -x;
        }
        // Armijo backtracking.
        const double slope = dot(dir, g);
        double step = mem.empty() ? std::min(1.0, 1.0 / std::max(gnorm, 1e-12)) : 1.0;
        const double c0 = report.total;
        std::vector<double> trial(dim);
        double trial_cost = c0;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
          for (std::size_t i = 0; i < dim; ++i) trial[i] = v[i] + step * dir[i];
          trial_cost = cost_only(trial);
          if (std::isfinite(trial_cost) && trial_cost <= c0 + 1e-4 * step * slope) {
            accepted = true;
            break;
          }
          step *= 0.5;
        }
        if (!accepted) {  // fall back to a tiny gradient step
          mem.clear();
          for (std::size_t i = 0; i < dim; ++i)
            trial[i] = v[i] - (cfg.learning_rate / std::max(gnorm, 1.0)) * g[i];
        }
        prev_v = v;
        prev_g = g;
        v = trial;
        g = eval(v, &report);
        LbfgsPair pair;
        pair.s.resize(dim);
        pair.y.resize(dim);
        for (std::size_t i = 0; i < dim; ++i) {
          pair.s[i] = v[i] - prev_v[i];
          pair.y[i] = g[i] - prev_g[i];
        }
        const double sy = dot(pair.s, pair.y);
        if (sy > 1e-14) {
          pair.rho = 1.0 / sy;
          mem.push_back(std::move(pair));
          if (mem.size() > cfg.lbfgs_memory) mem.pop_front();
        }
        break;
      }
    }
  }
  write_back(v);
  result.final_report = report;
  return result;
}

}  // namespace qoc
