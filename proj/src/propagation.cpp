#include <cmath>

#include "qoc/linalg.hpp"
#include "qoc/propagation.hpp"

namespace qoc {

Trajectory propagate_unitary(const ControlHamiltonian& h, const RealGrid& u,
                             const TimeGrid& grid, const ExpmConfig& cfg) {
  if (u.controls() != h.num_controls() || u.steps() != grid.steps)
    throw dim_error("propagate_unitary: pulse grid shape mismatch");
  Trajectory traj;
  traj.unitaries.reserve(grid.steps + 1);
  traj.unitaries.push_back(ComplexMatrix::identity(h.dim()));
  for (std::size_t j = 0; j < grid.steps; ++j) {
    const ComplexMatrix hj = hamiltonian_at(h, u, j);
    const ComplexMatrix uj = expm_taylor(scale(cplx(0.0, -grid.dt), hj), cfg);
    traj.unitaries.push_back(matmul(uj, traj.unitaries.back()));
  }
  return traj;
}

Trajectory propagate_state(const ComplexVector& psi0, const ControlHamiltonian& h,
                           const RealGrid& u, const TimeGrid& grid,
                           const ExpmConfig& cfg) {
  if (std::abs(norm(psi0) - 1.0) > 1e-10)
    throw std::runtime_error("propagate_state: initial state not normalized");
  if (u.controls() != h.num_controls() || u.steps() != grid.steps)
    throw dim_error("propagate_state: pulse grid shape mismatch");
  Trajectory traj;
  traj.states.reserve(grid.steps + 1);
  traj.states.push_back(psi0);
  for (std::size_t j = 0; j < grid.steps; ++j) {
    const ComplexMatrix hj = hamiltonian_at(h, u, j);
    traj.states.push_back(expm_apply(hj, grid.dt, cfg, traj.states.back()));
  }
  return traj;
}

std::vector<Trajectory> propagate_states(const std::vector<ComplexVector>& initial,
                                         const ControlHamiltonian& h, const RealGrid& u,
                                         const TimeGrid& grid, const ExpmConfig& cfg) {
  std::vector<Trajectory> out;
  out.reserve(initial.size());
  for (const auto& psi0 : initial) out.push_back(propagate_state(psi0, h, u, grid, cfg));
  return out;
}

}  // namespace qoc
