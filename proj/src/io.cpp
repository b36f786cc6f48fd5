#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qoc/io.hpp"
#include "qoc/linalg.hpp"

namespace qoc {
namespace {

using nlohmann::json;

[[noreturn]] void io_fail(const std::string& msg) { throw std::runtime_error(msg); }

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) io_fail("cannot write file: " + path);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_pulse_file(const std::string& path, const ProblemInstance& inst,
                      const PulseGrid& pulses) {
  const RealGrid u = bounded_map(pulses);
  std::ofstream out = open_out(path);
  out << "# controls=" << pulses.controls() << " steps=" << pulses.steps()
      << " dt=" << format_double(inst.problem.grid.dt) << "\n";
  out << "# bounds=";
  for (std::size_t k = 0; k < pulses.bounds.size(); ++k) {
    if (k) out << ",";
    out << (pulses.bounds[k] ? format_double(*pulses.bounds[k]) : std::string("none"));
  }
  out << "\n";
  out << "t";
  for (std::size_t k = 0; k < pulses.controls(); ++k) {
    const std::string name = k < inst.control_names.size() ? inst.control_names[k]
                                                           : "u" + std::to_string(k + 1);
    out << "," << name;
  }
  out << "\n";
  for (std::size_t j = 0; j < pulses.steps(); ++j) {
    out << format_double(double(j) * inst.problem.grid.dt);
    for (std::size_t k = 0; k < pulses.controls(); ++k) out << "," << format_double(u(k, j));
    out << "\n";
  }
}

LoadedPulses load_pulse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) io_fail("cannot open pulse file: " + path);
  std::string line;
  std::size_t controls = 0, steps = 0;
  double dt = 0.0;
  std::vector<std::optional<double>> bounds;
  // Header comment lines.
  if (!std::getline(in, line) || line.rfind("# controls=", 0) != 0)
    io_fail("pulse file: missing header line 1");
  if (std::sscanf(line.c_str(), "# controls=%zu steps=%zu dt=%lf", &controls, &steps,
                  &dt) != 3)
    io_fail("pulse file: malformed header line 1");
  if (!std::getline(in, line) || line.rfind("# bounds=", 0) != 0)
    io_fail("pulse file: missing bounds header");
  for (const std::string& b : split_csv(line.substr(9)))
    bounds.push_back(b == "none" ? std::optional<double>{} : std::optional<double>(std::stod(b)));
  if (bounds.size() != controls) io_fail("pulse file: bounds count mismatch");

  LoadedPulses result;
  result.dt = dt;
  if (!std::getline(in, line)) io_fail("pulse file: missing column header");
  std::vector<std::string> names = split_csv(line);
  if (names.size() != controls + 1) io_fail("pulse file: column count mismatch");
  result.control_names.assign(names.begin() + 1, names.end());

  RealGrid u(controls, steps);
  for (std::size_t j = 0; j < steps; ++j) {
    if (!std::getline(in, line)) io_fail("pulse file: truncated data");
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != controls + 1) io_fail("pulse file: bad row width");
    for (std::size_t k = 0; k < controls; ++k) u(k, j) = std::stod(fields[k + 1]);
  }
  result.pulses.raw = bounded_map_inverse(u, bounds);
  result.pulses.bounds = std::move(bounds);
  return result;
}

void write_trace_file(const std::string& path, const std::vector<IterationRecord>& history,
                      const std::vector<CostTerm>& terms) {
  std::ofstream out = open_out(path);
  for (const auto& rec : history) {
    json j;
    j["iteration"] = rec.iteration;
    j["total_cost"] = rec.total_cost;
    j["fidelity"] = rec.fidelity;
    j["gradient_norm"] = rec.gradient_norm;
    j["elapsed_ms"] = rec.elapsed_ms;
    json tv = json::object();
    for (std::size_t t = 0; t < rec.term_values.size() && t < terms.size(); ++t)
      tv[std::string(cost_kind_name(terms[t].kind)) + "_" + std::to_string(t)] =
          rec.term_values[t];
    j["terms"] = tv;
    out << j.dump() << "\n";
  }
}

void write_report_file(const std::string& path, const ProblemInstance& inst,
                       const OptimizationResult& result, const OptimizerConfig& opt_cfg) {
  json j;
  j["problem"] = inst.problem.name;
  j["dim"] = inst.problem.dim();
  j["controls"] = inst.problem.h.num_controls();
  j["steps"] = inst.problem.grid.steps;
  j["dt"] = inst.problem.grid.dt;
  j["optimizer"] = optimizer_method_name(opt_cfg.method);
  j["grad_path"] = gradient_path_name(opt_cfg.path);
  j["seed"] = opt_cfg.seed;
  j["iterations"] = result.iterations;
  j["termination"] = stop_reason_name(result.reason);
  j["fidelity"] = result.final_report.fidelity;
  j["total_cost"] = result.final_report.total;
  json terms = json::array();
  for (std::size_t t = 0; t < result.final_report.term_values.size(); ++t) {
    json term;
    term["kind"] = cost_kind_name(inst.problem.terms[t].kind);
    term["weight"] = inst.problem.terms[t].weight;
    term["value"] = result.final_report.term_values[t];
    terms.push_back(term);
  }
  j["terms"] = terms;
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
}

void write_population_file(const std::string& path, const ProblemInstance& inst,
                           const PulseGrid& pulses, const ExpmConfig& cfg,
                           std::size_t max_rows) {
  const ControlProblem& p = inst.problem;
  if (p.mode != EvolutionMode::State) return;
  const RealGrid u = bounded_map(pulses);
  const std::size_t n = p.grid.steps;
  const std::size_t stride = n <= max_rows ? 1 : (n + max_rows - 1) / max_rows;

  std::ofstream out = open_out(path);
  out << "t";
  for (std::size_t s = 0; s < p.initial_states.size(); ++s)
    for (std::size_t b = 0; b < p.dim(); ++b) out << ",s" << s << "_p" << b;
  out << "\n";

  std::vector<ComplexVector> psis = p.initial_states;
  const auto emit = [&](std::size_t j) {
    out << format_double(double(j) * p.grid.dt);
    for (const auto& psi : psis)
      for (std::size_t b = 0; b < p.dim(); ++b) out << "," << format_double(std::norm(psi[b]));
    out << "\n";
  };
  emit(0);
  for (std::size_t j = 0; j < n; ++j) {
    const ComplexMatrix hj = hamiltonian_at(p.h, u, j);
    for (auto& psi : psis) psi = expm_apply(hj, p.grid.dt, cfg, psi);
    if ((j + 1) % stride == 0 || j + 1 == n) emit(j + 1);
  }
}

}  // namespace qoc
