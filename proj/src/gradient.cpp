#include <cmath>
#include <type_traits>

#include "qoc/gradient.hpp"
#include "qoc/linalg.hpp"

namespace qoc {
namespace {

double im_inner(const ComplexVector& p, const ComplexVector& v) { return inner(p, v).imag(); }
double im_inner(const ComplexMatrix& p, const ComplexMatrix& v) { return hs_inner(p, v).imag(); }

ComplexVector apply_op(const ComplexMatrix& h, const ComplexVector& x) { return matvec(h, x); }
ComplexMatrix apply_op(const ComplexMatrix& h, const ComplexMatrix& x) { return matmul(h, x); }

cplx overlap(const ComplexVector& a, const ComplexVector& b) { return inner(a, b); }
cplx overlap(const ComplexMatrix& a, const ComplexMatrix& b) { return hs_inner(a, b); }

std::size_t y_size(const ComplexVector& v) { return v.dim(); }
std::size_t y_size(const ComplexMatrix& m) { return m.size(); }
const cplx* y_data(const ComplexVector& v) { return v.data(); }
const cplx* y_data(const ComplexMatrix& m) { return m.data(); }
cplx* y_data(ComplexVector& v) { return v.data(); }
cplx* y_data(ComplexMatrix& m) { return m.data(); }

template <typename T>
void axpy_obj(cplx a, const T& x, T& y) {
  for (std::size_t i = 0; i < y_size(y); ++i) y_data(y)[i] += a * y_data(x)[i];
}

// One running adjoint attached to an evolved object. `refresh` entries are
// re-added to p after each reverse step (Algorithm 3 style recursions).
template <typename T>
struct Channel {
  T p;
  const std::vector<T>* refresh = nullptr;
  double coef = 0.0;
};

// Reverse sweep for one evolved object X (state or unitary) carrying any
// number of adjoint channels. At loop entry for step j, X holds the forward
// value at j+1, reconstructed via X <- U_j^dagger X unless `cached` is given.
// Gradients over u accumulate into `grad` scaled by `weight`.
template <typename T>
double reverse_sweep(const ControlHamiltonian& h, const RealGrid& u, const TimeGrid& grid,
                     const ExpmConfig& cfg, T x, std::vector<Channel<T>>& channels,
                     const T& start_value, RealGrid& grad, double weight,
                     std::type_identity_t<const std::vector<T>*> cached) {
  const std::size_t n = grid.steps;
  for (std::size_t jj = n; jj-- > 0;) {
    const ComplexMatrix hj = hamiltonian_at(h, u, jj);
    for (std::size_t k = 0; k < h.num_controls(); ++k) {
      const T hk_x = apply_op(h.controls[k], x);
      for (const auto& ch : channels)
        grad(k, jj) += weight * ch.coef * im_inner(ch.p, hk_x);
    }
    if (cached) {
      x = (*cached)[jj];
    } else {
      x = expm_apply(hj, -grid.dt, cfg, x);
    }
    for (auto& ch : channels) {
      ch.p = expm_apply(hj, -grid.dt, cfg, ch.p);
      if (ch.refresh)
        for (const auto& f : *ch.refresh) axpy_obj(overlap(f, x), f, ch.p);
    }
  }
  // Reconstruction residual against the known start of the evolution.
  double res = 0.0;
  for (std::size_t i = 0; i < y_size(x); ++i)
    res += std::norm(y_data(x)[i] - y_data(start_value)[i]);
  return std::sqrt(res);
}

ComplexVector scaled(cplx s, const ComplexVector& v) { return scale(s, v); }
ComplexMatrix scaled(cplx s, const ComplexMatrix& m) { return scale(s, m); }

}  // namespace

RealGrid grad_c1(const ControlHamiltonian& h, const RealGrid& u, const TimeGrid& grid,
                 const ExpmConfig& cfg, const ComplexMatrix& k_t) {
  ComplexMatrix k = ComplexMatrix::identity(h.dim());
  for (std::size_t j = 0; j < grid.steps; ++j)
    k = expm_apply(hamiltonian_at(h, u, j), grid.dt, cfg, k);
  const double d = double(h.dim());
  std::vector<Channel<ComplexMatrix>> ch(1);
  ch[0].p = scaled(hs_inner(k_t, k), k_t);
  ch[0].coef = -2.0 * grid.dt / (d * d);
  RealGrid grad(u.controls(), u.steps());
  reverse_sweep(h, u, grid, cfg, std::move(k), ch, ComplexMatrix::identity(h.dim()),
                grad, 1.0, nullptr);
  return grad;
}

RealGrid grad_c2(const ControlHamiltonian& h, const RealGrid& u, const TimeGrid& grid,
                 const ExpmConfig& cfg, const ComplexVector& psi0,
                 const ComplexVector& psi_t) {
  ComplexVector psi = psi0;
  for (std::size_t j = 0; j < grid.steps; ++j)
    psi = expm_apply(hamiltonian_at(h, u, j), grid.dt, cfg, psi);
  std::vector<Channel<ComplexVector>> ch(1);
  ch[0].p = scaled(inner(psi_t, psi), psi_t);
  ch[0].coef = -2.0 * grid.dt;
  RealGrid grad(u.controls(), u.steps());
  reverse_sweep(h, u, grid, cfg, std::move(psi), ch, psi0, grad, 1.0, nullptr);
  return grad;
}

RealGrid grad_c2_composite(const ControlHamiltonian& h, const RealGrid& u,
                           const TimeGrid& grid, const ExpmConfig& cfg,
                           const std::vector<ComplexVector>& initial,
                           const std::vector<ComplexVector>& targets,
                           const ComplexMatrix& projector) {
  const double s_count = double(initial.size());
  std::vector<ComplexVector> finals;
  finals.reserve(initial.size());
  std::vector<ComplexVector> proj_targets;
  cplx mean = 0.0;
  for (std::size_t s = 0; s < initial.size(); ++s) {
    ComplexVector psi = initial[s];
    for (std::size_t j = 0; j < grid.steps; ++j)
      psi = expm_apply(hamiltonian_at(h, u, j), grid.dt, cfg, psi);
    proj_targets.push_back(matvec(adjoint(projector), targets[s]));
    mean += inner(proj_targets.back(), psi);
    finals.push_back(std::move(psi));
  }
  mean /= s_count;
  RealGrid grad(u.controls(), u.steps());
  for (std::size_t s = 0; s < initial.size(); ++s) {
    std::vector<Channel<ComplexVector>> ch(1);
    ch[0].p = scaled(mean / s_count, proj_targets[s]);
    ch[0].coef = -2.0 * grid.dt;
    reverse_sweep(h, u, grid, cfg, std::move(finals[s]), ch, initial[s], grad, 1.0,
                  nullptr);
  }
  return grad;
}

RealGrid grad_c3(const RealGrid& u) {
  RealGrid g(u.controls(), u.steps());
  for (std::size_t i = 0; i < u.size(); ++i) g.data()[i] = 2.0 * u.data()[i];
  return g;
}

RealGrid grad_c4(const RealGrid& u) {
  RealGrid g(u.controls(), u.steps());
  const std::size_t n = u.steps();
  for (std::size_t k = 0; k < u.controls(); ++k)
    for (std::size_t j = 0; j < n; ++j) {
      double v = 0.0;
      if (j >= 1) v += 2.0 * (u(k, j) - u(k, j - 1));
      if (j + 1 < n) v -= 2.0 * (u(k, j + 1) - u(k, j));
      g(k, j) = v;
    }
  return g;
}

RealGrid grad_c5(const ControlHamiltonian& h, const RealGrid& u, const TimeGrid& grid,
                 const ExpmConfig& cfg, const std::vector<ComplexVector>& initial,
                 const std::vector<ComplexVector>& forbidden) {
  RealGrid grad(u.controls(), u.steps());
  if (forbidden.empty()) return grad;
  for (const auto& psi0 : initial) {
    ComplexVector psi = psi0;
    for (std::size_t j = 0; j < grid.steps; ++j)
      psi = expm_apply(hamiltonian_at(h, u, j), grid.dt, cfg, psi);
    std::vector<Channel<ComplexVector>> ch(1);
    ch[0].p = ComplexVector(h.dim());
    for (const auto& f : forbidden) axpy_obj(inner(f, psi), f, ch[0].p);
    ch[0].refresh = &forbidden;
    ch[0].coef = 2.0 * grid.dt;
    reverse_sweep(h, u, grid, cfg, std::move(psi), ch, psi0, grad, 1.0, nullptr);
  }
  return grad;
}

RealGrid grad_c6(const ControlHamiltonian& h, const RealGrid& u, const TimeGrid& grid,
                 const ExpmConfig& cfg, const ComplexMatrix& k_t) {
  ComplexMatrix k = ComplexMatrix::identity(h.dim());
  for (std::size_t j = 0; j < grid.steps; ++j)
    k = expm_apply(hamiltonian_at(h, u, j), grid.dt, cfg, k);
  const double d = double(h.dim());
  std::vector<ComplexMatrix> target{k_t};
  std::vector<Channel<ComplexMatrix>> ch(1);
  ch[0].p = scaled(hs_inner(k_t, k), k_t);
  ch[0].refresh = &target;
  ch[0].coef = -2.0 * grid.dt / (double(grid.steps) * d * d);
  RealGrid grad(u.controls(), u.steps());
  reverse_sweep(h, u, grid, cfg, std::move(k), ch, ComplexMatrix::identity(h.dim()),
                grad, 1.0, nullptr);
  return grad;
}

RealGrid grad_c7(const ControlHamiltonian& h, const RealGrid& u, const TimeGrid& grid,
                 const ExpmConfig& cfg, const ComplexVector& psi0,
                 const ComplexVector& psi_t) {
  ComplexVector psi = psi0;
  for (std::size_t j = 0; j < grid.steps; ++j)
    psi = expm_apply(hamiltonian_at(h, u, j), grid.dt, cfg, psi);
  std::vector<ComplexVector> target{psi_t};
  std::vector<Channel<ComplexVector>> ch(1);
  ch[0].p = scaled(inner(psi_t, psi), psi_t);
  ch[0].refresh = &target;
  ch[0].coef = -2.0 * grid.dt / double(grid.steps);
  RealGrid grad(u.controls(), u.steps());
  reverse_sweep(h, u, grid, cfg, std::move(psi), ch, psi0, grad, 1.0, nullptr);
  return grad;
}

RealGrid assemble_gradient(const std::vector<double>& weights,
                           const std::vector<RealGrid>& term_grads,
                           const RealGrid& chain) {
  RealGrid out(chain.controls(), chain.steps());
  for (std::size_t t = 0; t < term_grads.size(); ++t)
    for (std::size_t i = 0; i < out.size(); ++i)
      out.data()[i] += weights[t] * term_grads[t].data()[i];
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= chain.data()[i];
  return out;
}

namespace {

// Forward pass without trajectory caching: final objects plus the running
// sums needed by intermediate-time cost terms.
struct LeanForward {
  std::vector<ComplexVector> final_states;
  ComplexMatrix final_unitary;
  std::vector<double> c5_sums;   // per term index
  std::vector<double> c67_sums;  // per term index
};

LeanForward lean_forward(const ControlProblem& p, const RealGrid& u, const ExpmConfig& cfg) {
  LeanForward fwd;
  fwd.c5_sums.assign(p.terms.size(), 0.0);
  fwd.c67_sums.assign(p.terms.size(), 0.0);
  const double d = double(p.dim());
  if (p.mode == EvolutionMode::Unitary) {
    ComplexMatrix k = ComplexMatrix::identity(p.dim());
    for (std::size_t j = 0; j < p.grid.steps; ++j) {
      k = expm_apply(hamiltonian_at(p.h, u, j), p.grid.dt, cfg, k);
      for (std::size_t t = 0; t < p.terms.size(); ++t)
        if (p.terms[t].kind == CostKind::TimeOptimalGate)
          fwd.c67_sums[t] += std::norm(hs_inner(p.terms[t].target_gate, k) / d);
    }
    fwd.final_unitary = std::move(k);
  } else {
    for (const auto& psi0 : p.initial_states) {
      ComplexVector psi = psi0;
      for (std::size_t j = 0; j < p.grid.steps; ++j) {
        psi = expm_apply(hamiltonian_at(p.h, u, j), p.grid.dt, cfg, psi);
        for (std::size_t t = 0; t < p.terms.size(); ++t) {
          const auto& term = p.terms[t];
          if (term.kind == CostKind::ForbiddenOccupation) {
            for (const auto& f : term.forbidden) fwd.c5_sums[t] += std::norm(inner(f, psi));
          } else if (term.kind == CostKind::TimeOptimalState) {
            fwd.c67_sums[t] += std::norm(inner(term.target_state, psi));
          }
        }
      }
      fwd.final_states.push_back(std::move(psi));
    }
  }
  return fwd;
}

}  // namespace

AnalyticResult analytic_gradient_into(const ControlProblem& p, const RealGrid& u,
                                      const RealGrid& chain, const ExpmConfig& cfg,
                                      RealGrid& grad_v) {
  AnalyticResult result;
  const double d = double(p.dim());
  const double n = double(p.grid.steps);
  LeanForward fwd = lean_forward(p, u, cfg);

  // Cost report from the lean forward.
  bool have_fid = false;
  cplx composite_mean = 0.0;
  std::vector<ComplexVector> proj_targets;
  for (std::size_t t = 0; t < p.terms.size(); ++t) {
    const auto& term = p.terms[t];
    double value = 0.0;
    switch (term.kind) {
      case CostKind::GateInfidelity:
        value = 1.0 - std::norm(hs_inner(term.target_gate, fwd.final_unitary) / d);
        break;
      case CostKind::StateInfidelity:
        value = 1.0 - std::norm(inner(term.target_state, fwd.final_states.at(0)));
        break;
      case CostKind::CompositeStateInfidelity: {
        cplx mean = 0.0;
        proj_targets.clear();
        for (std::size_t s = 0; s < term.target_set.size(); ++s) {
          proj_targets.push_back(matvec(adjoint(term.projector), term.target_set[s]));
          mean += inner(proj_targets.back(), fwd.final_states.at(s));
        }
        mean /= double(term.target_set.size());
        composite_mean = mean;
        value = 1.0 - std::norm(mean);
        break;
      }
      case CostKind::Amplitude: value = c3_amplitude(u); break;
      case CostKind::Variation: value = c4_variation(u); break;
      case CostKind::ForbiddenOccupation: value = fwd.c5_sums[t]; break;
      case CostKind::TimeOptimalGate: value = 1.0 - fwd.c67_sums[t] / n; break;
      case CostKind::TimeOptimalState: value = 1.0 - fwd.c67_sums[t] / n; break;
    }
    result.report.term_values.push_back(value);
    result.report.total += term.weight * value;
    if (!have_fid &&
        (term.kind == CostKind::GateInfidelity || term.kind == CostKind::StateInfidelity ||
         term.kind == CostKind::CompositeStateInfidelity)) {
      result.report.fidelity = 1.0 - value;
      have_fid = true;
    }
  }

  // Build adjoint channels, grouped by evolved object so every trajectory is
  // reconstructed once.
  for (std::size_t i = 0; i < grad_v.size(); ++i) grad_v.data()[i] = 0.0;

  auto run_sweeps = [&](const std::vector<Trajectory>* cached) {
    double worst = 0.0;
    if (p.mode == EvolutionMode::Unitary) {
      // p is kept unweighted so refresh additions stay consistent; the term
      // weight is folded into coef.
      std::vector<Channel<ComplexMatrix>> channels;
      std::vector<std::vector<ComplexMatrix>> refreshes;
      refreshes.reserve(p.terms.size());
      for (const auto& term : p.terms) {
        if (term.weight == 0.0) continue;
        if (term.kind == CostKind::GateInfidelity) {
          Channel<ComplexMatrix> ch;
          ch.p = scaled(hs_inner(term.target_gate, fwd.final_unitary), term.target_gate);
          ch.coef = -2.0 * p.grid.dt * term.weight / (d * d);
          channels.push_back(std::move(ch));
        } else if (term.kind == CostKind::TimeOptimalGate) {
          refreshes.push_back({term.target_gate});
          Channel<ComplexMatrix> ch;
          ch.p = scaled(hs_inner(term.target_gate, fwd.final_unitary), term.target_gate);
          ch.refresh = &refreshes.back();
          ch.coef = -2.0 * p.grid.dt * term.weight / (n * d * d);
          channels.push_back(std::move(ch));
        }
      }
      if (!channels.empty()) {
        worst = std::max(worst, reverse_sweep(p.h, u, p.grid, cfg, fwd.final_unitary,
                                              channels, ComplexMatrix::identity(p.dim()),
                                              grad_v, 1.0,
                                              cached ? &(*cached)[0].unitaries : nullptr));
      }
    } else {
      std::vector<std::vector<ComplexVector>> refreshes;
      refreshes.reserve(p.terms.size() * p.initial_states.size());
      for (std::size_t s = 0; s < p.initial_states.size(); ++s) {
        std::vector<Channel<ComplexVector>> channels;
        for (std::size_t t = 0; t < p.terms.size(); ++t) {
          const auto& term = p.terms[t];
          if (term.weight == 0.0) continue;
          if (term.kind == CostKind::StateInfidelity && s == 0) {
            Channel<ComplexVector> ch;
            ch.p = scaled(inner(term.target_state, fwd.final_states[0]), term.target_state);
            ch.coef = -2.0 * p.grid.dt * term.weight;
            channels.push_back(std::move(ch));
          } else if (term.kind == CostKind::CompositeStateInfidelity) {
            const ComplexVector pt = matvec(adjoint(term.projector), term.target_set[s]);
            Channel<ComplexVector> ch;
            ch.p = scaled(composite_mean / double(term.target_set.size()), pt);
            ch.coef = -2.0 * p.grid.dt * term.weight;
            channels.push_back(std::move(ch));
          } else if (term.kind == CostKind::ForbiddenOccupation && !term.forbidden.empty()) {
            Channel<ComplexVector> ch;
            ch.p = ComplexVector(p.dim());
            for (const auto& f : term.forbidden)
              axpy_obj(inner(f, fwd.final_states[s]), f, ch.p);
            ch.refresh = &term.forbidden;
            ch.coef = 2.0 * p.grid.dt * term.weight;
            channels.push_back(std::move(ch));
          } else if (term.kind == CostKind::TimeOptimalState && s == 0) {
            refreshes.push_back({term.target_state});
            Channel<ComplexVector> ch;
            ch.p = scaled(inner(term.target_state, fwd.final_states[0]), term.target_state);
            ch.refresh = &refreshes.back();
            ch.coef = -2.0 * p.grid.dt * term.weight / n;
            channels.push_back(std::move(ch));
          }
        }
        if (channels.empty()) continue;
        worst = std::max(
            worst, reverse_sweep(p.h, u, p.grid, cfg, fwd.final_states[s], channels,
                                 p.initial_states[s], grad_v, 1.0,
                                 cached ? &(*cached)[s].states : nullptr));
      }
    }
    return worst;
  };

  result.reconstruction_residual = run_sweeps(nullptr);
  if (result.reconstruction_residual > 1e-6) {
    result.used_fallback = true;
    std::vector<Trajectory> trajs;
    if (p.mode == EvolutionMode::Unitary) {
      trajs.push_back(propagate_unitary(p.h, u, p.grid, cfg));
    } else {
      trajs = propagate_states(p.initial_states, p.h, u, p.grid, cfg);
    }
    for (std::size_t i = 0; i < grad_v.size(); ++i) grad_v.data()[i] = 0.0;
    run_sweeps(&trajs);
  }

  // Closed-form terms plus the bounded-map chain factor.
  for (std::size_t t = 0; t < p.terms.size(); ++t) {
    const auto& term = p.terms[t];
    if (term.kind == CostKind::Amplitude) {
      for (std::size_t i = 0; i < grad_v.size(); ++i)
        grad_v.data()[i] += term.weight * 2.0 * u.data()[i];
    } else if (term.kind == CostKind::Variation) {
      const RealGrid g4 = grad_c4(u);
      for (std::size_t i = 0; i < grad_v.size(); ++i)
        grad_v.data()[i] += term.weight * g4.data()[i];
    }
  }
  for (std::size_t i = 0; i < grad_v.size(); ++i) grad_v.data()[i] *= chain.data()[i];
  return result;
}

RealGrid analytic_gradient(const ControlProblem& p, const PulseGrid& pulses,
                           const ExpmConfig& cfg, CostReport* report) {
  const RealGrid u = bounded_map(pulses);
  const RealGrid chain = bounded_map_derivative(pulses);
  RealGrid grad(pulses.controls(), pulses.steps());
  AnalyticResult res = analytic_gradient_into(p, u, chain, cfg, grad);
  if (report) *report = res.report;
  return grad;
}

const char* gradient_path_name(GradientPath path) {
  switch (path) {
    case GradientPath::AutogradExact: return "autograd-exact";
    case GradientPath::AutogradApprox: return "autograd-approx";
    case GradientPath::Analytic: return "analytic";
  }
  return "?";
}

RealGrid compute_gradient(const ControlProblem& p, const PulseGrid& pulses,
                          const ExpmConfig& cfg, GradientPath path, CostReport* report) {
  if (path == GradientPath::Analytic) return analytic_gradient(p, pulses, cfg, report);
  Tape tape = Tape::record_forward(p, pulses, cfg);
  if (report) *report = tape.report();
  return tape.backward(path == GradientPath::AutogradExact ? GradientMode::ExactSeries
                                                           : GradientMode::Approximate);
}

}  // namespace qoc
