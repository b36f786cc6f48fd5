#ifndef QOC_PROBLEMS_HPP
#define QOC_PROBLEMS_HPP

#include <string>
#include <utility>

#include "qoc/cost.hpp"

namespace qoc {

/// A ready-to-optimize problem plus the metadata the CLI prints.
struct ProblemInstance {
  ControlProblem problem;
  std::vector<std::size_t> subspace_dims;
  std::vector<std::string> control_names;
  std::vector<std::pair<std::string, std::string>> parameters;  // (name, value+unit)
};

/// Two-level |0> -> |1> transfer: H = (w/2) sz + Omega(t) sx,
/// w/2pi = 3.9 GHz, |Omega|/2pi <= 300 MHz, 3 ns window.
/// c7_weight > 0 adds the time-optimal award term (same target).
ProblemInstance build_qubit_transfer(double c7_weight = 0.0, std::size_t steps = 300);

/// Two coupled 5-level transmons (l = 25), CNOT on the computational
/// subspace via composite state infidelity over the 4 basis states, with
/// forbidden levels 3-4 of each transmon (C5). 10 ns.
ProblemInstance build_two_transmon_cnot(double c5_weight = 1.0, double c3_weight = 0.0,
                                        double c4_weight = 0.0, std::size_t steps = 1000);

/// Transmon (7) x cavity (22), drive on the transmon only, target
/// |0>_q x |cat(lambda=2)>_r; C2 + C5 (transmon 3-6, cavity 20-21) + C4.
/// 40 ns, N = 8000.
ProblemInstance build_cat_state(double c5_weight = 1.0, double c4_weight = 0.001,
                                std::size_t steps = 8000);

/// Desk-scale cat instance: transmon 4 x cavity 10, lambda = 1, 10 ns,
/// N = 1000.
ProblemInstance build_cat_state_reduced(double c5_weight = 0.01, std::size_t steps = 1000);

/// Normalized truncated cat state (|l> + |-l>)/sqrt(2) plus the squared-norm
/// deviation before renormalization (= Re<l|-l> ~ e^{-2|l|^2}).
struct CatTarget {
  ComplexVector state;
  double norm_deviation = 0.0;
};
CatTarget cat_state_target(std::size_t dim, double lambda);

enum class SpinChainTarget { Hadamard, Ghz };

/// Open chain of N_qubits spins, J sz sz coupling (J/2pi = 100 MHz), per-spin
/// sx/sy drives bounded at 500 MHz; 2N ns over 10N steps.
ProblemInstance build_spin_chain(std::size_t n_qubits,
                                 SpinChainTarget target = SpinChainTarget::Hadamard);

ComplexMatrix hadamard_target(std::size_t n_qubits);
ComplexVector ghz_target(std::size_t n_qubits);

/// Small randomized problem for gradient cross-checks: dims 2-5, 1-3
/// controls (mixed bounded/unbounded), 8-14 steps, cost-term mix cycling
/// through all seven kinds across seeds. Returns the problem plus a random
/// pulse grid to evaluate at.
struct RandomProblem {
  ControlProblem problem;
  PulseGrid pulses;
};
RandomProblem make_random_problem(std::uint64_t seed);

}  // namespace qoc

#endif
