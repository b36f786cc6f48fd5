#ifndef QOC_BENCH_HPP
#define QOC_BENCH_HPP

#include "qoc/gradient.hpp"
#include "qoc/problems.hpp"

namespace qoc {

struct BenchRow {
  std::size_t dim = 0;
  std::string mode;
  std::size_t steps = 0;
  double ms_per_iter = 0.0;
};

/// One forward + gradient evaluation timed over `iters` repetitions for the
/// spin-chain problem at the given qubit count and mode.
BenchRow bench_one(std::size_t n_qubits, EvolutionMode mode, std::size_t steps,
                   std::size_t iters, GradientPath path);

struct BenchScaling {
  BenchRow at_n, at_2n;
  double ratio = 0.0;  // time(2N) / time(N)
};

/// Runs N and 2N at fixed dimension to check linear scaling in step count.
BenchScaling bench_step_scaling(std::size_t n_qubits, EvolutionMode mode,
                                std::size_t steps, std::size_t iters, GradientPath path);

}  // namespace qoc

#endif
