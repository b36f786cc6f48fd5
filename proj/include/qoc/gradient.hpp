#ifndef QOC_GRADIENT_HPP
#define QOC_GRADIENT_HPP

#include "qoc/autograd.hpp"

namespace qoc {

// Analytic cost gradients via backward propagation. The evolved object is
// reconstructed step by step through reverse unitarity (X <- U_j^dagger X),
// so memory stays O(l^2) (gate) or O(l) (state), independent of N. The
// propagator derivative uses dU/du ~= (-i dt H_k) U, matching the
// Approximate autograd mode.

RealGrid grad_c1(const ControlHamiltonian& h, const RealGrid& u, const TimeGrid& grid,
                 const ExpmConfig& cfg, const ComplexMatrix& k_t);
RealGrid grad_c2(const ControlHamiltonian& h, const RealGrid& u, const TimeGrid& grid,
                 const ExpmConfig& cfg, const ComplexVector& psi0,
                 const ComplexVector& psi_t);
RealGrid grad_c2_composite(const ControlHamiltonian& h, const RealGrid& u,
                           const TimeGrid& grid, const ExpmConfig& cfg,
                           const std::vector<ComplexVector>& initial,
                           const std::vector<ComplexVector>& targets,
                           const ComplexMatrix& projector);
RealGrid grad_c3(const RealGrid& u);
RealGrid grad_c4(const RealGrid& u);
RealGrid grad_c5(const ControlHamiltonian& h, const RealGrid& u, const TimeGrid& grid,
                 const ExpmConfig& cfg, const std::vector<ComplexVector>& initial,
                 const std::vector<ComplexVector>& forbidden);
RealGrid grad_c6(const ControlHamiltonian& h, const RealGrid& u, const TimeGrid& grid,
                 const ExpmConfig& cfg, const ComplexMatrix& k_t);
RealGrid grad_c7(const ControlHamiltonian& h, const RealGrid& u, const TimeGrid& grid,
                 const ExpmConfig& cfg, const ComplexVector& psi0,
                 const ComplexVector& psi_t);

/// sum_mu alpha_mu (dC_mu/du) elementwise-times du/dv.
RealGrid assemble_gradient(const std::vector<double>& weights,
                           const std::vector<RealGrid>& term_grads,
                           const RealGrid& chain);

struct AnalyticResult {
  CostReport report;
  double reconstruction_residual = 0.0;  // worst ||X_end - start|| over sweeps
  bool used_fallback = false;            // cached-trajectory rerun triggered
};

/// Full weighted gradient over raw variables, accumulated into `grad_v`
/// (which must be pre-sized M x N and is overwritten). `u` and `chain` are
/// the precomputed bounded_map outputs, so the sweep itself allocates no
/// N-proportional buffers.
AnalyticResult analytic_gradient_into(const ControlProblem& p, const RealGrid& u,
                                      const RealGrid& chain, const ExpmConfig& cfg,
                                      RealGrid& grad_v);

/// Convenience wrapper allocating the output grid.
RealGrid analytic_gradient(const ControlProblem& p, const PulseGrid& pulses,
                           const ExpmConfig& cfg, CostReport* report = nullptr);

enum class GradientPath { AutogradExact, AutogradApprox, Analytic };

const char* gradient_path_name(GradientPath path);

/// Dispatch over the three gradient evaluation paths; always returns
/// dC/dv including the bounded-map chain factor.
RealGrid compute_gradient(const ControlProblem& p, const PulseGrid& pulses,
                          const ExpmConfig& cfg, GradientPath path,
                          CostReport* report = nullptr);

}  // namespace qoc

#endif
