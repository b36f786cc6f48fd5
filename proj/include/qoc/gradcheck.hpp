#ifndef QOC_GRADCHECK_HPP
#define QOC_GRADCHECK_HPP

#include "qoc/gradient.hpp"

namespace qoc {

/// Central finite differences of the full forward evaluation with respect to
/// the raw variables v, step h = scale*(1 + |v|). O(d) forward passes; the
/// variable count is capped to keep checks tractable.
RealGrid finite_difference_gradient(const ControlProblem& p, const PulseGrid& pulses,
                                    const ExpmConfig& cfg, double scale = 1e-6,
                                    std::size_t max_vars = 200);

/// Finite differences matched to the approximate propagator derivative:
/// perturbing (k, j) by h applies an extra exp(-i dt h H_k) after step j, so
/// the derivative it probes is exactly dU/du = (-i dt H_k) U. Reported over
/// raw variables (chain factor applied).
RealGrid matched_finite_difference_gradient(const ControlProblem& p,
                                            const PulseGrid& pulses, const ExpmConfig& cfg,
                                            double scale = 1e-6,
                                            std::size_t max_vars = 200);

struct GradCheckReport {
  double max_abs_exact_vs_fd = 0.0;        // autograd exact-series vs central FD
  double max_abs_analytic_vs_approx = 0.0; // analytic vs autograd approximate
  double max_abs_approx_vs_matched = 0.0;  // autograd approximate vs matched FD
  double max_abs_value = 0.0;              // largest |gradient| entry seen
  std::size_t vars_checked = 0;
};

/// Runs all three cross-checks on one problem instance.
GradCheckReport run_gradient_check(const ControlProblem& p, const PulseGrid& pulses,
                                   const ExpmConfig& cfg, std::size_t max_vars = 200);

}  // namespace qoc

#endif
