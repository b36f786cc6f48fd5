#ifndef QOC_OPTIMIZE_HPP
#define QOC_OPTIMIZE_HPP

#include <functional>

#include "qoc/gradient.hpp"

namespace qoc {

enum class OptimizerMethod { Sd, Adam, Lbfgs };

OptimizerMethod parse_optimizer_method(const std::string& name);
const char* optimizer_method_name(OptimizerMethod m);

struct OptimizerConfig {
  OptimizerMethod method = OptimizerMethod::Adam;
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t lbfgs_memory = 10;
  std::size_t max_iterations = 1000;
  double target_fidelity = 0.999;
  double gradient_norm_floor = 0.0;  // 0 disables the floor stop
  std::uint64_t seed = 0;
  GradientPath path = GradientPath::AutogradExact;
  double init_scale = 0.5;  // raw v drawn from U[-init_scale, init_scale]
  // Relative-improvement stall detection window.
  std::size_t stall_window = 50;
  double stall_tolerance = 1e-10;
};

enum class StopReason { FidelityReached, MaxIterations, GradientFloor, Stalled, NonFinite };

const char* stop_reason_name(StopReason r);

struct IterationRecord {
  std::size_t iteration = 0;
  double total_cost = 0.0;
  double fidelity = 0.0;
  double gradient_norm = 0.0;
  std::vector<double> term_values;
  double elapsed_ms = 0.0;
};

struct OptimizationResult {
  PulseGrid pulses;
  CostReport final_report;
  StopReason reason = StopReason::MaxIterations;
  std::size_t iterations = 0;
  std::vector<IterationRecord> history;
};

using IterationCallback = std::function<void(const IterationRecord&)>;

/// Seeded uniform initial raw variables for a problem's pulse grid.
PulseGrid random_initial_pulses(const ControlProblem& p, std::uint64_t seed,
                                double init_scale = 0.5);

OptimizationResult optimize(const ControlProblem& p, const OptimizerConfig& cfg,
                            const ExpmConfig& expm_cfg,
                            const IterationCallback& on_iteration = nullptr);

/// Same loop but starting from caller-provided pulses.
OptimizationResult optimize_from(const ControlProblem& p, PulseGrid start,
                                 const OptimizerConfig& cfg, const ExpmConfig& expm_cfg,
                                 const IterationCallback& on_iteration = nullptr);

}  // namespace qoc

#endif
