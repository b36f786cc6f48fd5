// qoc: quantum optimal control pulse engine command-line front end.
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "qoc/bench.hpp"
#include "qoc/config.hpp"
#include "qoc/gradcheck.hpp"
#include "qoc/io.hpp"
#include "qoc/kernels.hpp"

namespace fs = std::filesystem;
using namespace qoc;

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_iters;
  std::optional<std::string> optimizer;
  std::optional<std::string> grad_path;
  std::optional<std::string> out_dir;
};

void apply_overrides(RunConfig& cfg, const Overrides& ov) {
  if (ov.seed) cfg.optimizer.seed = *ov.seed;
  if (ov.max_iters) cfg.optimizer.max_iterations = *ov.max_iters;
  if (ov.optimizer) cfg.optimizer.method = parse_optimizer_method(*ov.optimizer);
  if (ov.grad_path) {
    if (*ov.grad_path == "autograd-exact")
      cfg.optimizer.path = GradientPath::AutogradExact;
    else if (*ov.grad_path == "autograd-approx")
      cfg.optimizer.path = GradientPath::AutogradApprox;
    else if (*ov.grad_path == "analytic")
      cfg.optimizer.path = GradientPath::Analytic;
    else
      throw std::runtime_error("unknown grad path: " + *ov.grad_path);
  }
  if (ov.out_dir) cfg.out_dir = *ov.out_dir;
}

int cmd_run(const std::string& config_path, const Overrides& ov) {
  RunConfig cfg = load_run_config(config_path);
  apply_overrides(cfg, ov);

  fs::create_directories(cfg.out_dir);
  OptimizationResult result = optimize(cfg.instance.problem, cfg.optimizer, ExpmConfig{});
  const ControlProblem& prob = cfg.instance.problem;
  const ExpmConfig expm_cfg =
      choose_pn_for(prob.h, bounded_map(result.pulses), prob.bounds, prob.grid.dt);

  write_pulse_file((fs::path(cfg.out_dir) / "pulses.csv").string(), cfg.instance,
                   result.pulses);
  write_trace_file((fs::path(cfg.out_dir) / "trace.jsonl").string(), result.history,
                   cfg.instance.problem.terms);
  write_report_file((fs::path(cfg.out_dir) / "report.json").string(), cfg.instance, result,
                    cfg.optimizer);
  if (cfg.instance.problem.mode == EvolutionMode::State)
    write_population_file((fs::path(cfg.out_dir) / "populations.csv").string(),
                          cfg.instance, result.pulses, expm_cfg);

  std::cout << "problem:     " << cfg.instance.problem.name << "\n"
            << "termination: " << stop_reason_name(result.reason) << "\n"
            << "iterations:  " << result.iterations << "\n"
            << "fidelity:    " << format_double(result.final_report.fidelity) << "\n"
            << "total cost:  " << format_double(result.final_report.total) << "\n"
            << "outputs:     " << cfg.out_dir << "/{pulses.csv,trace.jsonl,report.json"
            << (cfg.instance.problem.mode == EvolutionMode::State ? ",populations.csv}"
                                                                  : "}")
            << "\n";
  return result.reason == StopReason::FidelityReached ? 0 : 2;
}

int cmd_grad_check(const std::string& config_path, const Overrides& ov, double tol_fd,
                   double tol_analytic, double tol_matched) {
  RunConfig cfg = load_run_config(config_path);
  apply_overrides(cfg, ov);
  const ControlProblem& p = cfg.instance.problem;
  const std::size_t d = p.h.num_controls() * p.grid.steps;
  if (d > 200) {
    std::cerr << "grad-check: problem has " << d
              << " variables; finite differences capped at 200\n";
    return 1;
  }
  PulseGrid pulses = random_initial_pulses(p, cfg.optimizer.seed, cfg.optimizer.init_scale);
  const ExpmConfig expm_cfg =
      choose_pn_for(p.h, bounded_map(pulses), p.bounds, p.grid.dt);
  GradCheckReport rep = run_gradient_check(p, pulses, expm_cfg);

  // Negative-control hook for tests: corrupt one comparison on purpose.
  if (std::getenv("QOC_CORRUPT_GRAD")) rep.max_abs_exact_vs_fd += 1e-3;

  std::cout << "variables checked:            " << rep.vars_checked << "\n"
            << "max |exact - fd|:             " << format_double(rep.max_abs_exact_vs_fd)
            << "\n"
            << "max |analytic - approx|:      "
            << format_double(rep.max_abs_analytic_vs_approx) << "\n"
            << "max |approx - matched fd|:    "
            << format_double(rep.max_abs_approx_vs_matched) << "\n";
  const bool ok = rep.max_abs_exact_vs_fd < tol_fd &&
                  rep.max_abs_analytic_vs_approx < tol_analytic &&
                  rep.max_abs_approx_vs_matched < tol_matched;
  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? 0 : 2;
}

int cmd_bench(const std::vector<std::size_t>& qubit_list, std::size_t steps,
              std::size_t iters, const std::string& mode_name, bool check_scaling) {
  const EvolutionMode mode =
      mode_name == "unitary" ? EvolutionMode::Unitary : EvolutionMode::State;
  std::cout << "dim,mode,steps,ms_per_iter\n";
  for (std::size_t q : qubit_list) {
    if ((std::size_t(1) << q) > 2048) {
      std::cerr << "bench: dim cap 2048 exceeded for " << q << " qubits\n";
      return 1;
    }
    const BenchRow row = bench_one(q, mode, steps, iters, GradientPath::Analytic);
    std::cout << row.dim << "," << row.mode << "," << row.steps << ","
              << format_double(row.ms_per_iter) << "\n";
  }
  if (check_scaling) {
    const BenchScaling s = bench_step_scaling(qubit_list.empty() ? 3 : qubit_list.front(),
                                              mode, steps, iters, GradientPath::Analytic);
    std::cout << "# step scaling ratio (2N/N): " << format_double(s.ratio) << "\n";
  }
  return 0;
}

int cmd_describe(const std::string& name) {
  ProblemInstance inst;
  if (name == "qubit-transfer") inst = build_qubit_transfer();
  else if (name == "cnot") inst = build_two_transmon_cnot();
  else if (name == "cat") inst = build_cat_state();
  else if (name == "cat-reduced") inst = build_cat_state_reduced();
  else if (name == "spin-chain") inst = build_spin_chain(2);
  else {
    std::cerr << "unknown problem '" << name
              << "'; builtins: qubit-transfer, cnot, cat, cat-reduced, spin-chain\n";
    return 1;
  }
  const ControlProblem& p = inst.problem;
  std::cout << "problem: " << p.name << "\n"
            << "dim (l): " << p.dim() << "\n"
            << "controls (M): " << p.h.num_controls() << "\n"
            << "steps (N): " << p.grid.steps << "\n"
            << "dt: " << format_double(p.grid.dt) << " ns\n"
            << "mode: " << (p.mode == EvolutionMode::Unitary ? "unitary" : "state") << "\n";
  std::cout << "control names:";
  for (const auto& n : inst.control_names) std::cout << " " << n;
  std::cout << "\nsubspace dims:";
  for (auto d : inst.subspace_dims) std::cout << " " << d;
  std::cout << "\ncost terms:\n";
  for (const auto& t : p.terms)
    std::cout << "  " << cost_kind_name(t.kind) << " (weight " << format_double(t.weight)
              << ")\n";
  std::cout << "parameters:\n";
  for (const auto& [k, v] : inst.parameters) std::cout << "  " << k << " = " << v << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qoc: GRAPE-style quantum optimal control pulse engine"};
  app.require_subcommand(1);

  Overrides ov;
  std::string config_path;
  double tol_fd = 1e-6, tol_analytic = 1e-10, tol_matched = 1e-6;
  std::vector<std::size_t> qubit_list{2, 3};
  std::size_t bench_steps = 100, bench_iters = 3;
  std::string bench_mode = "state", describe_name;
  bool check_scaling = false;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", ov.seed, "Override RNG seed");
    cmd->add_option("--max-iters", ov.max_iters, "Override iteration cap");
    cmd->add_option("--optimizer", ov.optimizer, "sd | adam | lbfgs");
    cmd->add_option("--grad-path", ov.grad_path,
                    "autograd-exact | autograd-approx | analytic");
    cmd->add_option("--out-dir", ov.out_dir, "Output directory");
  };

  CLI::App* run = app.add_subcommand("run", "Optimize pulses for a configured problem");
  run->add_option("config", config_path, "Run configuration file")->required();
  add_common(run);

  CLI::App* gc = app.add_subcommand("grad-check", "Cross-check gradient implementations");
  gc->add_option("config", config_path, "Run configuration file")->required();
  gc->add_option("--tol-fd", tol_fd, "Tolerance: autograd-exact vs finite differences");
  gc->add_option("--tol-analytic", tol_analytic, "Tolerance: analytic vs autograd-approx");
  gc->add_option("--tol-matched", tol_matched, "Tolerance: approx vs matched FD");
  add_common(gc);

  CLI::App* bench = app.add_subcommand("bench", "Spin-chain timing benchmark");
  bench->add_option("--qubits", qubit_list, "Qubit counts to benchmark");
  bench->add_option("--steps", bench_steps, "Time steps N");
  bench->add_option("--iters", bench_iters, "Repetitions per timing");
  bench->add_option("--mode", bench_mode, "state | unitary");
  bench->add_flag("--check-scaling", check_scaling, "Also time 2N for the ratio test");

  CLI::App* describe = app.add_subcommand("describe", "Print a builtin problem's layout");
  describe->add_option("name", describe_name, "Builtin problem name")->required();

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(config_path, ov);
    if (gc->parsed())
      return cmd_grad_check(config_path, ov, tol_fd, tol_analytic, tol_matched);
    if (bench->parsed())
      return cmd_bench(qubit_list, bench_steps, bench_iters, bench_mode, check_scaling);
    if (describe->parsed()) return cmd_describe(describe_name);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
