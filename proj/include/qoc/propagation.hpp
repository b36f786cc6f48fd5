#ifndef QOC_PROPAGATION_HPP
#define QOC_PROPAGATION_HPP

#include "qoc/expm.hpp"
#include "qoc/model.hpp"

namespace qoc {

/// Forward-pass cache: K_0..K_N (unitary mode) or Psi_0..Psi_N (state mode).
/// Step j applies U_j = exp(-i H_j dt) built from pulses u_{.,j}, j = 0..N-1.
struct Trajectory {
  std::vector<ComplexMatrix> unitaries;
  std::vector<ComplexVector> states;
  bool is_unitary() const { return !unitaries.empty(); }
  std::size_t num_steps() const {
    return (is_unitary() ? unitaries.size() : states.size()) - 1;
  }
};

Trajectory propagate_unitary(const ControlHamiltonian& h, const RealGrid& u,
                             const TimeGrid& grid, const ExpmConfig& cfg);

Trajectory propagate_state(const ComplexVector& psi0, const ControlHamiltonian& h,
                           const RealGrid& u, const TimeGrid& grid,
                           const ExpmConfig& cfg);

/// Propagate several initial states at once (composite-basis problems).
std::vector<Trajectory> propagate_states(const std::vector<ComplexVector>& initial,
                                         const ControlHamiltonian& h, const RealGrid& u,
                                         const TimeGrid& grid, const ExpmConfig& cfg);

}  // namespace qoc

#endif
