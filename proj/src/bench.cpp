#include <chrono>

#include "qoc/bench.hpp"
#include "qoc/gradient.hpp"
#include "qoc/optimize.hpp"

namespace qoc {

BenchRow bench_one(std::size_t n_qubits, EvolutionMode mode, std::size_t steps,
                   std::size_t iters, GradientPath path) {
  ProblemInstance inst = build_spin_chain(
      n_qubits, mode == EvolutionMode::Unitary ? SpinChainTarget::Hadamard
                                               : SpinChainTarget::Ghz);
  ControlProblem& p = inst.problem;
  if (steps) p.grid.steps = steps;
  PulseGrid pulses = random_initial_pulses(p, 7);
  const ExpmConfig cfg = choose_pn_for(p.h, bounded_map(pulses), p.bounds, p.grid.dt);

  // Warm-up evaluation outside the timed window.
  volatile double sink = 0.0;
  RealGrid g = compute_gradient(p, pulses, cfg, path);
  sink += g.data()[0];

  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < iters; ++i) {
    g = compute_gradient(p, pulses, cfg, path);
    sink += g.data()[0];
  }
  const auto t1 = std::chrono::steady_clock::now();
  (void)sink;

  BenchRow row;
  row.dim = p.dim();
  row.mode = mode == EvolutionMode::Unitary ? "unitary" : "state";
  row.steps = p.grid.steps;
  row.ms_per_iter =
      std::chrono::duration<double, std::milli>(t1 - t0).count() / double(iters);
  return row;
}

BenchScaling bench_step_scaling(std::size_t n_qubits, EvolutionMode mode,
                                std::size_t steps, std::size_t iters, GradientPath path) {
  BenchScaling s;
  s.at_n = bench_one(n_qubits, mode, steps, iters, path);
  s.at_2n = bench_one(n_qubits, mode, steps * 2, iters, path);
  s.ratio = s.at_2n.ms_per_iter / s.at_n.ms_per_iter;
  return s;
}

}  // namespace qoc
