#ifndef QOC_MODEL_HPP
#define QOC_MODEL_HPP

#include <optional>

#include "qoc/types.hpp"

namespace qoc {

// Units: time in ns, Hamiltonian entries in rad/ns (hbar = 1). A lab
// frequency f in GHz enters as 2*pi*f.

struct TimeGrid {
  std::size_t steps = 1;  // N
  double dt = 1.0;        // ns
  double duration() const { return steps * dt; }
};

/// Drift H0 plus M Hermitian control operators, all l x l.
struct ControlHamiltonian {
  ComplexMatrix drift;
  std::vector<ComplexMatrix> controls;
  std::size_t dim() const { return drift.rows(); }
  std::size_t num_controls() const { return controls.size(); }
  /// Max Hermiticity defect over drift and controls (Frobenius).
  double hermiticity_defect() const;
};

/// Raw optimizer variables v_{k,j} plus per-control amplitude bounds.
/// Bounded controls map through u = bound * tanh(v); unbounded pass through.
struct PulseGrid {
  RealGrid raw;                               // v, M x N
  std::vector<std::optional<double>> bounds;  // Omega_max per control
  std::size_t controls() const { return raw.controls(); }
  std::size_t steps() const { return raw.steps(); }
};

RealGrid bounded_map(const PulseGrid& v);
RealGrid bounded_map_derivative(const PulseGrid& v);
/// Invert the amplitude map (atanh for bounded controls). |u| must be
/// strictly below the bound.
RealGrid bounded_map_inverse(const RealGrid& u,
                             const std::vector<std::optional<double>>& bounds);

/// H_j = H0 + sum_k u_{k,j} H_k.
ComplexMatrix hamiltonian_at(const ControlHamiltonian& h, const RealGrid& u,
                             std::size_t j);

// Operator builders.

enum class PauliAxis { X, Y, Z };
ComplexMatrix pauli(PauliAxis axis);
/// Lowering operator b with b[i, i+1] = sqrt(i+1).
ComplexMatrix ladder(std::size_t dim);
ComplexMatrix number_op(std::size_t dim);
/// (alpha/2) b'b (b'b - 1).
ComplexMatrix anharmonic_term(std::size_t dim, double alpha);
/// Place op at `site` of a multi-site space via kron with identities.
ComplexMatrix embed(const ComplexMatrix& op, std::size_t site,
                    const std::vector<std::size_t>& dims);

struct CoherentState {
  ComplexVector state;        // normalized after truncation
  double truncation_weight;   // 1 - sum_{n<dim} e^{-|l|^2} |l|^{2n} / n!
};
CoherentState coherent_state(std::size_t dim, cplx lambda);

ComplexVector basis_state(std::size_t dim, std::size_t index);

}  // namespace qoc

#endif
