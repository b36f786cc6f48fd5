#include <cmath>

#include "qoc/autograd.hpp"
#include "qoc/linalg.hpp"

namespace qoc {
namespace {

// --- exact-series VJP through the Taylor polynomial and squarings ---------

void accumulate_outer(ComplexMatrix& a_bar, const ComplexVector& x, const ComplexVector& y,
                      double inv_m) {
  // a_bar += x y^dagger / m
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const cplx xi = x[i] * inv_m;
    for (std::size_t j = 0; j < y.dim(); ++j) a_bar(i, j) += xi * std::conj(y[j]);
  }
}

void accumulate_outer(ComplexMatrix& a_bar, const ComplexMatrix& x, const ComplexMatrix& y,
                      double inv_m) {
  ComplexMatrix prod = matmul(x, adjoint(y));
  prod *= inv_m;
  a_bar += prod;
}

ComplexVector apply_h(const ComplexMatrix& h, const ComplexVector& x) { return matvec(h, x); }
ComplexMatrix apply_h(const ComplexMatrix& h, const ComplexMatrix& x) { return matmul(h, x); }

template <typename T>
struct SeriesVjp {
  ComplexMatrix a_bar;  // adjoint of A = factor * H
  T input_adjoint;
};

// Backward through reps applications of P(A) = sum_{m<=p} A^m / m!,
// A = factor * H with H Hermitian. Forward intermediates are recomputed
// from `input`; nothing beyond the chain of application inputs is cached.
template <typename T>
SeriesVjp<T> series_vjp(const ComplexMatrix& h, cplx factor, int order, int reps,
                        const T& input, const T& out_adjoint) {
  std::vector<T> app_inputs;
  app_inputs.reserve(reps);
  T cur = input;
  for (int s = 0; s < reps; ++s) {
    app_inputs.push_back(cur);
    T result = cur;
    T term = cur;
    for (int m = 1; m <= order; ++m) {
      term = apply_h(h, term);
      term *= factor / double(m);
      result += term;
    }
    cur = std::move(result);
  }

  SeriesVjp<T> out{ComplexMatrix(h.rows(), h.cols()), out_adjoint};
  const cplx factor_conj = std::conj(factor);
  std::vector<T> terms(order + 1);
  for (int s = reps - 1; s >= 0; --s) {
    terms[0] = app_inputs[s];
    for (int m = 1; m <= order; ++m) {
      terms[m] = apply_h(h, terms[m - 1]);
      terms[m] *= factor / double(m);
    }
    const T& b = out.input_adjoint;  // adjoint of this application's output
    T tbar = b;                      // adjoint of term m, starting at m = order
    for (int m = order; m >= 1; --m) {
      accumulate_outer(out.a_bar, tbar, terms[m - 1], 1.0 / double(m));
      T next = apply_h(h, tbar);
      next *= factor_conj / double(m);
      next += b;
      tbar = std::move(next);
    }
    out.input_adjoint = std::move(tbar);
  }
  return out;
}

double adjoint_imag_inner(const ComplexVector& bar, const ComplexVector& v) {
  return inner(bar, v).imag();
}
double adjoint_imag_inner(const ComplexMatrix& bar, const ComplexMatrix& v) {
  return hs_inner(bar, v).imag();
}

template <typename T>
void step_vjp_impl(const ComplexMatrix& h_j, const std::vector<ComplexMatrix>& h_controls,
                   double dt, const ExpmConfig& cfg, const T& input, const T& out_adjoint,
                   GradientMode mode, std::vector<double>& grad_u, T& input_adjoint) {
  grad_u.assign(h_controls.size(), 0.0);
  if (mode == GradientMode::Approximate) {
    const T output = expm_apply(h_j, dt, cfg, input);
    for (std::size_t k = 0; k < h_controls.size(); ++k) {
      // d(out)/du_k ~= (-i dt H_k) out
      const T hk_out = apply_h(h_controls[k], output);
      grad_u[k] = 2.0 * dt * adjoint_imag_inner(out_adjoint, hk_out);
    }
    input_adjoint = expm_apply(h_j, -dt, cfg, out_adjoint);
  } else {
    const double scale_factor = std::ldexp(1.0, -cfg.squarings);
    const cplx factor(0.0, -dt * scale_factor);
    auto res = series_vjp(h_j, factor, cfg.taylor_order, 1 << cfg.squarings, input,
                          out_adjoint);
    for (std::size_t k = 0; k < h_controls.size(); ++k) {
      const cplx z = hs_inner(res.a_bar, h_controls[k]);
      grad_u[k] = 2.0 * dt * scale_factor * z.imag();
    }
    input_adjoint = std::move(res.input_adjoint);
  }
}

}  // namespace

StepVjp expm_apply_vjp(const ComplexMatrix& h_j, const std::vector<ComplexMatrix>& h_controls,
                       double dt, const ExpmConfig& cfg, const ComplexVector& input,
                       const ComplexVector& output_adjoint, GradientMode mode) {
  StepVjp out;
  step_vjp_impl(h_j, h_controls, dt, cfg, input, output_adjoint, mode, out.grad_u,
                out.input_adjoint);
  return out;
}

// --- tape ------------------------------------------------------------------

std::uint32_t Tape::push(Node n) {
  nodes_.push_back(std::move(n));
  return std::uint32_t(nodes_.size() - 1);
}

std::size_t Tape::node_count() const { return nodes_.size(); }

Tape Tape::record_forward(const ControlProblem& problem, const PulseGrid& pulses,
                          const ExpmConfig& cfg) {
  problem.validate();
  Tape t(&problem, &pulses, cfg);
  const std::size_t m = pulses.controls();
  const std::size_t n = pulses.steps();
  t.u_ = bounded_map(pulses);
  t.chain_ = bounded_map_derivative(pulses);

  t.raw_ids_.resize(m * n);
  t.bounded_ids_.resize(m * n);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < n; ++j) {
      Node raw{Op::RawParam, {}, pulses.raw(k, j), 0.0};
      t.raw_ids_[k * n + j] = t.push(std::move(raw));
      Node bp{Op::BoundedParam, {t.raw_ids_[k * n + j]}, t.u_(k, j), 0.0};
      bp.aux0 = t.chain_(k, j);
      t.bounded_ids_[k * n + j] = t.push(std::move(bp));
    }

  auto step_params = [&](std::size_t j) {
    std::vector<std::uint32_t> ids;
    ids.reserve(m);
    for (std::size_t k = 0; k < m; ++k) ids.push_back(t.bounded_ids_[k * n + j]);
    return ids;
  };

  // Propagation chains. state_ids[s][j] is |Psi_j> of initial state s;
  // unitary_ids[j] is K_j.
  std::vector<std::vector<std::uint32_t>> state_ids;
  std::vector<std::uint32_t> unitary_ids;
  if (problem.mode == EvolutionMode::State) {
    state_ids.resize(problem.initial_states.size());
    for (std::size_t s = 0; s < problem.initial_states.size(); ++s) {
      std::uint32_t prev =
          t.push(Node{Op::ConstVec, {}, problem.initial_states[s], 0.0});
      state_ids[s].push_back(prev);
      for (std::size_t j = 0; j < n; ++j) {
        const ComplexMatrix hj = hamiltonian_at(problem.h, t.u_, j);
        Node node{Op::ExpmState, {prev},
                  expm_apply(hj, problem.grid.dt, cfg,
                             std::get<ComplexVector>(t.nodes_[prev].value)),
                  0.0};
        node.step = j;
        auto params = step_params(j);
        node.parents.insert(node.parents.end(), params.begin(), params.end());
        prev = t.push(std::move(node));
        state_ids[s].push_back(prev);
      }
    }
  } else {
    std::uint32_t prev =
        t.push(Node{Op::ConstMat, {}, ComplexMatrix::identity(problem.dim()), 0.0});
    unitary_ids.push_back(prev);
    for (std::size_t j = 0; j < n; ++j) {
      const ComplexMatrix hj = hamiltonian_at(problem.h, t.u_, j);
      Node node{Op::ExpmUnitary, {prev},
                expm_apply(hj, problem.grid.dt, cfg,
                           std::get<ComplexMatrix>(t.nodes_[prev].value)),
                0.0};
      node.step = j;
      auto params = step_params(j);
      node.parents.insert(node.parents.end(), params.begin(), params.end());
      prev = t.push(std::move(node));
      unitary_ids.push_back(prev);
    }
  }

  auto all_bounded = [&]() {
    return std::vector<std::uint32_t>(t.bounded_ids_.begin(), t.bounded_ids_.end());
  };
  auto infidelity_of = [&](std::uint32_t complex_scalar_id) {
    const cplx w = std::get<cplx>(t.nodes_[complex_scalar_id].value);
    std::uint32_t abs2 = t.push(Node{Op::Abs2, {complex_scalar_id}, std::norm(w), 0.0});
    Node aff{Op::AffineScalar, {abs2}, 1.0 - std::norm(w), 0.0};
    aff.aux0 = 1.0;
    aff.aux1 = -1.0;
    return t.push(std::move(aff));
  };
  const double d_dim = double(problem.dim());

  for (const auto& term : problem.terms) {
    std::uint32_t term_id = 0;
    switch (term.kind) {
      case CostKind::GateInfidelity: {
        std::uint32_t kt = t.push(Node{Op::ConstMat, {}, term.target_gate, 0.0});
        const cplx w = hs_inner(term.target_gate,
                                std::get<ComplexMatrix>(t.nodes_[unitary_ids.back()].value)) /
                       d_dim;
        Node tr{Op::TraceProd, {kt, unitary_ids.back()}, w, 0.0};
        tr.aux0 = 1.0 / d_dim;
        term_id = infidelity_of(t.push(std::move(tr)));
        break;
      }
      case CostKind::StateInfidelity: {
        std::uint32_t c = t.push(Node{Op::ConstVec, {}, term.target_state, 0.0});
        const cplx w = inner(term.target_state,
                             std::get<ComplexVector>(t.nodes_[state_ids[0].back()].value));
        term_id = infidelity_of(t.push(Node{Op::Inner, {c, state_ids[0].back()}, w, 0.0}));
        break;
      }
      case CostKind::CompositeStateInfidelity: {
        std::vector<std::uint32_t> inners;
        cplx mean = 0.0;
        for (std::size_t s = 0; s < term.target_set.size(); ++s) {
          const ComplexVector proj_target =
              matvec(adjoint(term.projector), term.target_set[s]);
          std::uint32_t c = t.push(Node{Op::ConstVec, {}, proj_target, 0.0});
          const cplx w = inner(proj_target,
                               std::get<ComplexVector>(t.nodes_[state_ids[s].back()].value));
          inners.push_back(t.push(Node{Op::Inner, {c, state_ids[s].back()}, w, 0.0}));
          mean += w;
        }
        mean /= double(inners.size());
        Node mn{Op::ComplexMean, inners, mean, 0.0};
        mn.aux0 = 1.0 / double(inners.size());
        term_id = infidelity_of(t.push(std::move(mn)));
        break;
      }
      case CostKind::Amplitude: {
        term_id = t.push(Node{Op::AmplitudePenalty, all_bounded(), c3_amplitude(t.u_), 0.0});
        break;
      }
      case CostKind::Variation: {
        term_id = t.push(Node{Op::VariationPenalty, all_bounded(), c4_variation(t.u_), 0.0});
        break;
      }
      case CostKind::ForbiddenOccupation: {
        std::vector<std::uint32_t> abs2s;
        double sum = 0.0;
        for (std::size_t s = 0; s < state_ids.size(); ++s) {
          for (const auto& f : term.forbidden) {
            std::uint32_t c = t.push(Node{Op::ConstVec, {}, f, 0.0});
            for (std::size_t j = 1; j <= n; ++j) {
              const cplx w =
                  inner(f, std::get<ComplexVector>(t.nodes_[state_ids[s][j]].value));
              std::uint32_t in = t.push(Node{Op::Inner, {c, state_ids[s][j]}, w, 0.0});
              abs2s.push_back(t.push(Node{Op::Abs2, {in}, std::norm(w), 0.0}));
              sum += std::norm(w);
            }
          }
        }
        term_id = t.push(Node{Op::ScalarSum, abs2s, sum, 0.0});
        break;
      }
      case CostKind::TimeOptimalGate: {
        std::uint32_t kt = t.push(Node{Op::ConstMat, {}, term.target_gate, 0.0});
        std::vector<std::uint32_t> abs2s;
        double sum = 0.0;
        for (std::size_t j = 1; j <= n; ++j) {
          const cplx w = hs_inner(term.target_gate,
                                  std::get<ComplexMatrix>(t.nodes_[unitary_ids[j]].value)) /
                         d_dim;
          Node tr{Op::TraceProd, {kt, unitary_ids[j]}, w, 0.0};
          tr.aux0 = 1.0 / d_dim;
          std::uint32_t trid = t.push(std::move(tr));
          abs2s.push_back(t.push(Node{Op::Abs2, {trid}, std::norm(w), 0.0}));
          sum += std::norm(w);
        }
        std::uint32_t sum_id = t.push(Node{Op::ScalarSum, abs2s, sum, 0.0});
        Node aff{Op::AffineScalar, {sum_id}, 1.0 - sum / double(n), 0.0};
        aff.aux0 = 1.0;
        aff.aux1 = -1.0 / double(n);
        term_id = t.push(std::move(aff));
        break;
      }
      case CostKind::TimeOptimalState: {
        std::uint32_t c = t.push(Node{Op::ConstVec, {}, term.target_state, 0.0});
        std::vector<std::uint32_t> abs2s;
        double sum = 0.0;
        for (std::size_t j = 1; j <= n; ++j) {
          const cplx w = inner(term.target_state,
                               std::get<ComplexVector>(t.nodes_[state_ids[0][j]].value));
          std::uint32_t in = t.push(Node{Op::Inner, {c, state_ids[0][j]}, w, 0.0});
          abs2s.push_back(t.push(Node{Op::Abs2, {in}, std::norm(w), 0.0}));
          sum += std::norm(w);
        }
        std::uint32_t sum_id = t.push(Node{Op::ScalarSum, abs2s, sum, 0.0});
        Node aff{Op::AffineScalar, {sum_id}, 1.0 - sum / double(n), 0.0};
        aff.aux0 = 1.0;
        aff.aux1 = -1.0 / double(n);
        term_id = t.push(std::move(aff));
        break;
      }
    }
    t.term_ids_.push_back(term_id);
  }

  double total = 0.0;
  for (std::size_t i = 0; i < t.term_ids_.size(); ++i) {
    const double v = std::get<double>(t.nodes_[t.term_ids_[i]].value);
    t.report_.term_values.push_back(v);
    total += problem.terms[i].weight * v;
  }
  Node ws{Op::WeightedSum, t.term_ids_, total, 0.0};
  t.total_id_ = t.push(std::move(ws));
  t.report_.total = total;
  t.report_.fidelity = 0.0;
  for (std::size_t i = 0; i < problem.terms.size(); ++i) {
    const CostKind k = problem.terms[i].kind;
    if (k == CostKind::GateInfidelity || k == CostKind::StateInfidelity ||
        k == CostKind::CompositeStateInfidelity) {
      t.report_.fidelity = 1.0 - t.report_.term_values[i];
      break;
    }
  }
  return t;
}

void Tape::clear_adjoints() {
  for (auto& node : nodes_) {
    switch (node.value.index()) {
      case 0: node.adjoint = 0.0; break;
      case 1: node.adjoint = cplx(0.0); break;
      case 2:
        node.adjoint = ComplexVector(std::get<ComplexVector>(node.value).dim());
        break;
      case 3: {
        const auto& mat = std::get<ComplexMatrix>(node.value);
        node.adjoint = ComplexMatrix(mat.rows(), mat.cols());
        break;
      }
    }
  }
}

void Tape::backward_node(std::uint32_t id, GradientMode mode) {
  Node& node = nodes_[id];
  const std::size_t m = problem_->num_controls();
  switch (node.op) {
    case Op::RawParam:
    case Op::ConstVec:
    case Op::ConstMat:
      break;
    case Op::BoundedParam:
      std::get<double>(nodes_[node.parents[0]].adjoint) +=
          node.aux0 * std::get<double>(node.adjoint);
      break;
    case Op::ExpmState: {
      const auto& out_bar = std::get<ComplexVector>(node.adjoint);
      const ComplexMatrix hj = hamiltonian_at(problem_->h, u_, node.step);
      const auto& input = std::get<ComplexVector>(nodes_[node.parents[0]].value);
      std::vector<double> grad_u;
      ComplexVector in_bar;
      step_vjp_impl(hj, problem_->h.controls, problem_->grid.dt, cfg_, input, out_bar,
                    mode, grad_u, in_bar);
      std::get<ComplexVector>(nodes_[node.parents[0]].adjoint) += in_bar;
      for (std::size_t k = 0; k < m; ++k)
        std::get<double>(nodes_[node.parents[1 + k]].adjoint) += grad_u[k];
      break;
    }
    case Op::ExpmUnitary: {
      const auto& out_bar = std::get<ComplexMatrix>(node.adjoint);
      const ComplexMatrix hj = hamiltonian_at(problem_->h, u_, node.step);
      const auto& input = std::get<ComplexMatrix>(nodes_[node.parents[0]].value);
      std::vector<double> grad_u;
      ComplexMatrix in_bar;
      step_vjp_impl(hj, problem_->h.controls, problem_->grid.dt, cfg_, input, out_bar,
                    mode, grad_u, in_bar);
      std::get<ComplexMatrix>(nodes_[node.parents[0]].adjoint) += in_bar;
      for (std::size_t k = 0; k < m; ++k)
        std::get<double>(nodes_[node.parents[1 + k]].adjoint) += grad_u[k];
      break;
    }
    case Op::Inner: {
      const cplx wbar = std::get<cplx>(node.adjoint);
      const auto& c = std::get<ComplexVector>(nodes_[node.parents[0]].value);
      auto& xbar = std::get<ComplexVector>(nodes_[node.parents[1]].adjoint);
      for (std::size_t i = 0; i < c.dim(); ++i) xbar[i] += wbar * c[i];
      break;
    }
    case Op::TraceProd: {
      const cplx wbar = std::get<cplx>(node.adjoint) * node.aux0;
      const auto& kt = std::get<ComplexMatrix>(nodes_[node.parents[0]].value);
      auto& kbar = std::get<ComplexMatrix>(nodes_[node.parents[1]].adjoint);
      for (std::size_t i = 0; i < kt.size(); ++i) kbar.data()[i] += wbar * kt.data()[i];
      break;
    }
    case Op::Abs2: {
      const double ybar = std::get<double>(node.adjoint);
      const cplx z = std::get<cplx>(nodes_[node.parents[0]].value);
      std::get<cplx>(nodes_[node.parents[0]].adjoint) += ybar * z;
      break;
    }
    case Op::AffineScalar:
      std::get<double>(nodes_[node.parents[0]].adjoint) +=
          node.aux1 * std::get<double>(node.adjoint);
      break;
    case Op::ScalarSum: {
      const double ybar = std::get<double>(node.adjoint);
      for (auto p : node.parents) std::get<double>(nodes_[p].adjoint) += ybar;
      break;
    }
    case Op::ComplexMean: {
      const cplx wbar = std::get<cplx>(node.adjoint) * node.aux0;
      for (auto p : node.parents) std::get<cplx>(nodes_[p].adjoint) += wbar;
      break;
    }
    case Op::AmplitudePenalty: {
      const double ybar = std::get<double>(node.adjoint);
      for (auto p : node.parents)
        std::get<double>(nodes_[p].adjoint) +=
            ybar * 2.0 * std::get<double>(nodes_[p].value);
      break;
    }
    case Op::VariationPenalty: {
      const double ybar = std::get<double>(node.adjoint);
      const std::size_t n = u_.steps();
      for (std::size_t k = 0; k < u_.controls(); ++k)
        for (std::size_t j = 0; j < n; ++j) {
          double g = 0.0;
          if (j >= 1) g += 2.0 * (u_(k, j) - u_(k, j - 1));
          if (j + 1 < n) g -= 2.0 * (u_(k, j + 1) - u_(k, j));
          std::get<double>(nodes_[node.parents[k * n + j]].adjoint) += ybar * g;
        }
      break;
    }
    case Op::WeightedSum: {
      const double ybar = std::get<double>(node.adjoint);
      for (std::size_t i = 0; i < node.parents.size(); ++i)
        std::get<double>(nodes_[node.parents[i]].adjoint) +=
            ybar * problem_->terms[i].weight;
      break;
    }
  }
}

namespace {

bool adjoint_is_zero(const std::variant<double, cplx, ComplexVector, ComplexMatrix>& a) {
  switch (a.index()) {
    case 0: return std::get<double>(a) == 0.0;
    case 1: return std::get<cplx>(a) == cplx(0.0);
    case 2: {
      const auto& v = std::get<ComplexVector>(a);
      for (std::size_t i = 0; i < v.dim(); ++i)
        if (v[i] != cplx(0.0)) return false;
      return true;
    }
    default: {
      const auto& mat = std::get<ComplexMatrix>(a);
      for (std::size_t i = 0; i < mat.size(); ++i)
        if (mat.data()[i] != cplx(0.0)) return false;
      return true;
    }
  }
}

}  // namespace

RealGrid Tape::backward(GradientMode mode) {
  clear_adjoints();
  visits_.assign(nodes_.size(), 0);
  nodes_[total_id_].adjoint = 1.0;
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    ++visits_[i];
    if (!adjoint_is_zero(nodes_[i].adjoint)) backward_node(std::uint32_t(i), mode);
  }
  const std::size_t m = u_.controls(), n = u_.steps();
  RealGrid grad(m, n);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < n; ++j)
      grad(k, j) = std::get<double>(nodes_[raw_ids_[k * n + j]].adjoint);
  return grad;
}

}  // namespace qoc
