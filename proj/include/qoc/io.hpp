#ifndef QOC_IO_HPP
#define QOC_IO_HPP

#include <string>

#include "qoc/optimize.hpp"
#include "qoc/problems.hpp"

namespace qoc {

/// All numeric output uses 17 significant digits (exact double round-trip).
std::string format_double(double v);

/// pulses.csv: header comments carry M, N, dt, control names and bounds;
/// data rows are t_j, u_{1,j}, ..., u_{M,j} (mapped amplitudes).
void write_pulse_file(const std::string& path, const ProblemInstance& inst,
                      const PulseGrid& pulses);

struct LoadedPulses {
  PulseGrid pulses;  // raw variables recovered through the inverse map
  double dt = 0.0;
  std::vector<std::string> control_names;
};
LoadedPulses load_pulse_file(const std::string& path);

void write_trace_file(const std::string& path, const std::vector<IterationRecord>& history,
                      const std::vector<CostTerm>& terms);

void write_report_file(const std::string& path, const ProblemInstance& inst,
                       const OptimizationResult& result, const OptimizerConfig& opt_cfg);

/// populations.csv: |<basis|Psi_j>|^2 per stored step for every propagated
/// initial state, uniformly downsampled to at most `max_rows` steps.
void write_population_file(const std::string& path, const ProblemInstance& inst,
                           const PulseGrid& pulses, const ExpmConfig& cfg,
                           std::size_t max_rows = 2000);

}  // namespace qoc

#endif
