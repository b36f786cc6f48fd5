#ifndef QOC_EXPM_HPP
#define QOC_EXPM_HPP

#include "qoc/model.hpp"
#include "qoc/types.hpp"

namespace qoc {

struct ExpmConfig {
  int taylor_order = 13;   // p
  int squarings = 0;       // n
  double tolerance = 1e-14;
};

/// Pick global (p, n) so the scaled radius is at most 0.5 and the Taylor
/// remainder 0.5^(p+1)/(p+1)! is below tol. With tol = 1e-14 this gives p = 13.
ExpmConfig choose_pn(double radius_bound, double dt, double tol = 1e-14);

/// Conservative spectral-radius bound ||H0||_F + sum_k Omega_k ||H_k||_F,
/// with Omega_k the amplitude bound or, for unbounded controls, max_j |u_kj|.
double radius_bound(const ControlHamiltonian& h, const RealGrid& u,
                    const std::vector<std::optional<double>>& bounds);

/// choose_pn applied to the problem's radius bound at the given amplitudes.
ExpmConfig choose_pn_for(const ControlHamiltonian& h, const RealGrid& u,
                         const std::vector<std::optional<double>>& bounds, double dt,
                         double tol = 1e-14);

/// [sum_{k<=p} (M/2^n)^k / k!]^(2^n).
ComplexMatrix expm_taylor(const ComplexMatrix& m, const ExpmConfig& cfg);

/// exp(-i dt H) x via nested matrix-vector products; the propagator is never
/// formed. Pass a negative dt for the adjoint step (H Hermitian).
ComplexVector expm_apply(const ComplexMatrix& h, double dt, const ExpmConfig& cfg,
                         const ComplexVector& x);
/// Same polynomial action applied from the left to a matrix.
ComplexMatrix expm_apply(const ComplexMatrix& h, double dt, const ExpmConfig& cfg,
                         const ComplexMatrix& x);

}  // namespace qoc

#endif
