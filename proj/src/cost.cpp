#include <cmath>

#include "qoc/cost.hpp"
#include "qoc/linalg.hpp"

namespace qoc {

const char* cost_kind_name(CostKind kind) {
  switch (kind) {
    case CostKind::GateInfidelity: return "gate_infidelity";
    case CostKind::StateInfidelity: return "state_infidelity";
    case CostKind::CompositeStateInfidelity: return "composite_state_infidelity";
    case CostKind::Amplitude: return "amplitude";
    case CostKind::Variation: return "variation";
    case CostKind::ForbiddenOccupation: return "forbidden_occupation";
    case CostKind::TimeOptimalGate: return "time_optimal_gate";
    case CostKind::TimeOptimalState: return "time_optimal_state";
  }
  return "?";
}

void ControlProblem::validate() const {
  if (h.dim() == 0) throw std::runtime_error("problem: empty Hamiltonian");
  if (h.hermiticity_defect() > 1e-12)
    throw std::runtime_error("problem: drift or control operator not Hermitian");
  if (bounds.size() != h.num_controls())
    throw std::runtime_error("problem: bounds list does not match control count");
  if (mode == EvolutionMode::State) {
    if (initial_states.empty()) throw std::runtime_error("problem: no initial state");
    for (const auto& s : initial_states) {
      if (s.dim() != dim()) throw dim_error("problem: initial state dimension mismatch");
      if (std::abs(norm(s) - 1.0) > 1e-10)
        throw std::runtime_error("problem: initial state not normalized");
    }
  }
  for (const auto& t : terms) {
    if (t.weight < 0.0 || !std::isfinite(t.weight))
      throw std::runtime_error("problem: invalid cost weight");
    if (t.needs_unitary() && mode != EvolutionMode::Unitary)
      throw std::runtime_error("problem: gate cost term in state-mode run");
    if (t.needs_state() && mode != EvolutionMode::State)
      throw std::runtime_error("problem: state cost term in unitary-mode run");
    switch (t.kind) {
      case CostKind::GateInfidelity:
      case CostKind::TimeOptimalGate:
        if (unitarity_defect(t.target_gate) > 1e-9)
          throw std::runtime_error("problem: target gate not unitary");
        break;
      case CostKind::StateInfidelity:
      case CostKind::TimeOptimalState:
        if (std::abs(norm(t.target_state) - 1.0) > 1e-9)
          throw std::runtime_error("problem: target state not normalized");
        break;
      case CostKind::CompositeStateInfidelity:
        if (t.target_set.size() != initial_states.size() || t.target_set.empty())
          throw std::runtime_error("problem: composite target set size mismatch");
        break;
      case CostKind::ForbiddenOccupation:
        for (const auto& f : t.forbidden)
          if (std::abs(norm(f) - 1.0) > 1e-9)
            throw std::runtime_error("problem: forbidden state not normalized");
        break;
      default:
        break;
    }
  }
}

double c1_gate_infidelity(const ComplexMatrix& k_n, const ComplexMatrix& k_t) {
  k_n.require_same_shape(k_t);
  const double d = double(k_n.rows());
  return 1.0 - std::norm(hs_inner(k_t, k_n) / d);
}

double c2_state_infidelity(const ComplexVector& psi_n, const ComplexVector& psi_t) {
  return 1.0 - std::norm(inner(psi_t, psi_n));
}

double c2_composite(const std::vector<ComplexVector>& psi_n,
                    const std::vector<ComplexVector>& psi_t,
                    const ComplexMatrix& projector) {
  if (psi_n.size() != psi_t.size() || psi_n.empty())
    throw std::runtime_error("c2_composite: state set mismatch or empty");
  cplx acc = 0.0;
  for (std::size_t s = 0; s < psi_n.size(); ++s)
    acc += inner(psi_t[s], matvec(projector, psi_n[s]));
  acc /= double(psi_n.size());
  return 1.0 - std::norm(acc);
}

double c3_amplitude(const RealGrid& u) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u.data()[i] * u.data()[i];
  return s;
}

double c4_variation(const RealGrid& u) {
  double s = 0.0;
  for (std::size_t k = 0; k < u.controls(); ++k)
    for (std::size_t j = 1; j < u.steps(); ++j) {
      const double d = u(k, j) - u(k, j - 1);
      s += d * d;
    }
  return s;
}

double c5_forbidden(const Trajectory& traj, const std::vector<ComplexVector>& forbidden) {
  if (traj.states.empty()) throw std::runtime_error("c5: state trajectory required");
  double s = 0.0;
  for (std::size_t j = 1; j < traj.states.size(); ++j)
    for (const auto& f : forbidden) s += std::norm(inner(f, traj.states[j]));
  return s;
}

double c6_time_optimal_gate(const Trajectory& traj, const ComplexMatrix& k_t) {
  if (traj.unitaries.empty()) throw std::runtime_error("c6: unitary trajectory required");
  const double d = double(k_t.rows());
  const std::size_t n = traj.num_steps();
  double s = 0.0;
  for (std::size_t j = 1; j <= n; ++j)
    s += std::norm(hs_inner(k_t, traj.unitaries[j]) / d);
  return 1.0 - s / double(n);
}

double c7_time_optimal_state(const Trajectory& traj, const ComplexVector& psi_t) {
  if (traj.states.empty()) throw std::runtime_error("c7: state trajectory required");
  const std::size_t n = traj.num_steps();
  double s = 0.0;
  for (std::size_t j = 1; j <= n; ++j) s += std::norm(inner(psi_t, traj.states[j]));
  return 1.0 - s / double(n);
}

namespace {

bool is_fidelity_kind(CostKind k) {
  return k == CostKind::GateInfidelity || k == CostKind::StateInfidelity ||
         k == CostKind::CompositeStateInfidelity;
}

}  // namespace

CostReport evaluate_total(const std::vector<CostTerm>& terms,
                          const std::vector<Trajectory>& trajs, const RealGrid& u) {
  CostReport report;
  report.term_values.reserve(terms.size());
  bool have_fidelity = false;
  for (const auto& term : terms) {
    double value = 0.0;
    switch (term.kind) {
      case CostKind::GateInfidelity:
        value = c1_gate_infidelity(trajs.at(0).unitaries.back(), term.target_gate);
        break;
      case CostKind::StateInfidelity:
        value = c2_state_infidelity(trajs.at(0).states.back(), term.target_state);
        break;
      case CostKind::CompositeStateInfidelity: {
        std::vector<ComplexVector> finals;
        finals.reserve(trajs.size());
        for (const auto& t : trajs) finals.push_back(t.states.back());
        value = c2_composite(finals, term.target_set, term.projector);
        break;
      }
      case CostKind::Amplitude:
        value = c3_amplitude(u);
        break;
      case CostKind::Variation:
        value = c4_variation(u);
        break;
      case CostKind::ForbiddenOccupation:
        for (const auto& t : trajs) value += c5_forbidden(t, term.forbidden);
        break;
      case CostKind::TimeOptimalGate:
        value = c6_time_optimal_gate(trajs.at(0), term.target_gate);
        break;
      case CostKind::TimeOptimalState:
        if (trajs.size() != 1)
          throw std::runtime_error("c7: expects a single propagated state");
        value = c7_time_optimal_state(trajs.at(0), term.target_state);
        break;
    }
    report.term_values.push_back(value);
    report.total += term.weight * value;
    if (!have_fidelity && is_fidelity_kind(term.kind)) {
      report.fidelity = 1.0 - value;
      have_fidelity = true;
    }
  }
  return report;
}

CostReport evaluate_problem(const ControlProblem& p, const RealGrid& u,
                            const ExpmConfig& cfg, std::vector<Trajectory>* out_trajs) {
  std::vector<Trajectory> trajs;
  if (p.mode == EvolutionMode::Unitary) {
    trajs.push_back(propagate_unitary(p.h, u, p.grid, cfg));
  } else {
    trajs = propagate_states(p.initial_states, p.h, u, p.grid, cfg);
  }
  CostReport report = evaluate_total(p.terms, trajs, u);
  if (out_trajs) *out_trajs = std::move(trajs);
  return report;
}

}  // namespace qoc
