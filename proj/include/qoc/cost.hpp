#ifndef QOC_COST_HPP
#define QOC_COST_HPP

#include <string>

#include "qoc/propagation.hpp"

namespace qoc {

enum class CostKind {
  GateInfidelity,            // C1
  StateInfidelity,           // C2
  CompositeStateInfidelity,  // C2 over a subspace basis
  Amplitude,                 // C3
  Variation,                 // C4
  ForbiddenOccupation,       // C5
  TimeOptimalGate,           // C6
  TimeOptimalState,          // C7
};

const char* cost_kind_name(CostKind kind);

struct CostTerm {
  CostKind kind;
  double weight = 1.0;
  ComplexMatrix target_gate;               // C1, C6
  ComplexVector target_state;              // C2, C7
  std::vector<ComplexVector> target_set;   // composite, aligned with the
                                           // problem's initial states
  ComplexMatrix projector;                 // composite P_S
  std::vector<ComplexVector> forbidden;    // C5
  bool needs_unitary() const {
    return kind == CostKind::GateInfidelity || kind == CostKind::TimeOptimalGate;
  }
  bool needs_state() const {
    return kind == CostKind::StateInfidelity ||
           kind == CostKind::CompositeStateInfidelity ||
           kind == CostKind::ForbiddenOccupation ||
           kind == CostKind::TimeOptimalState;
  }
};

enum class EvolutionMode { Unitary, State };

/// Full optimization problem: Hamiltonian, time grid, propagation mode,
/// initial state(s), weighted cost terms, and amplitude bounds.
struct ControlProblem {
  std::string name;
  ControlHamiltonian h;
  TimeGrid grid;
  EvolutionMode mode = EvolutionMode::State;
  std::vector<ComplexVector> initial_states;  // state mode; size S >= 1
  std::vector<CostTerm> terms;
  std::vector<std::optional<double>> bounds;  // per control

  std::size_t dim() const { return h.dim(); }
  std::size_t num_controls() const { return h.num_controls(); }
  /// Throws on inconsistent shapes, non-Hermitian operators, unnormalized
  /// targets, or terms incompatible with the propagation mode.
  void validate() const;
};

struct CostReport {
  std::vector<double> term_values;  // raw C_mu, aligned with terms
  double total = 0.0;               // sum_mu alpha_mu C_mu
  double fidelity = 0.0;            // 1 - raw infidelity of the primary term
};

// Individual Table-style contributions.
double c1_gate_infidelity(const ComplexMatrix& k_n, const ComplexMatrix& k_t);
double c2_state_infidelity(const ComplexVector& psi_n, const ComplexVector& psi_t);
double c2_composite(const std::vector<ComplexVector>& psi_n,
                    const std::vector<ComplexVector>& psi_t,
                    const ComplexMatrix& projector);
double c3_amplitude(const RealGrid& u);
double c4_variation(const RealGrid& u);
/// Sum over steps j = 1..N and all forbidden states of |<F|Psi_j>|^2.
double c5_forbidden(const Trajectory& traj, const std::vector<ComplexVector>& forbidden);
double c6_time_optimal_gate(const Trajectory& traj, const ComplexMatrix& k_t);
double c7_time_optimal_state(const Trajectory& traj, const ComplexVector& psi_t);

/// Evaluate all terms against propagated trajectories. In unitary mode
/// `trajs` holds the single unitary trajectory; in state mode one state
/// trajectory per initial state.
CostReport evaluate_total(const std::vector<CostTerm>& terms,
                          const std::vector<Trajectory>& trajs, const RealGrid& u);

/// Forward propagation + cost in one call.
CostReport evaluate_problem(const ControlProblem& p, const RealGrid& u,
                            const ExpmConfig& cfg, std::vector<Trajectory>* out_trajs = nullptr);

}  // namespace qoc

#endif
