#include <fstream>
#include <map>
#include <sstream>

#include "qoc/config.hpp"
#include "qoc/linalg.hpp"

namespace qoc {
namespace {

struct Line {
  std::size_t number;
  std::string text;
};

struct Section {
  std::string kind;   // "problem", "drift", "control", "initial", "term", ...
  std::string label;  // control name / term kind
  std::size_t line;
  std::map<std::string, std::pair<std::string, std::size_t>> keys;  // value, line
  std::vector<Line> rows;  // non key=value data rows
};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(std::size_t line, std::size_t col, const std::string& msg) {
  throw config_error(line, col, msg);
}

double parse_double(const Section& s, const std::string& key, double fallback) {
  auto it = s.keys.find(key);
  if (it == s.keys.end()) return fallback;
  try {
    std::size_t used = 0;
    double v = std::stod(it->second.first, &used);
    if (used != it->second.first.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail(it->second.second, 1, "expected a number for '" + key + "'");
  }
}

std::uint64_t parse_uint(const Section& s, const std::string& key, std::uint64_t fallback) {
  auto it = s.keys.find(key);
  if (it == s.keys.end()) return fallback;
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(it->second.first, &used);
    if (used != it->second.first.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail(it->second.second, 1, "expected a non-negative integer for '" + key + "'");
  }
}

std::string get_str(const Section& s, const std::string& key, const std::string& fallback) {
  auto it = s.keys.find(key);
  return it == s.keys.end() ? fallback : it->second.first;
}

std::vector<double> parse_row(const Line& row, std::size_t expected) {
  std::vector<double> vals;
  std::istringstream in(row.text);
  std::string tok;
  std::size_t col = 1;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      fail(row.number, col, "expected a number, got '" + tok + "'");
    }
    col += tok.size() + 1;
  }
  if (vals.size() != expected)
    fail(row.number, 1,
         "expected " + std::to_string(expected) + " values per row, got " +
             std::to_string(vals.size()));
  return vals;
}

ComplexMatrix parse_matrix(const Section& s, std::size_t dim) {
  ComplexMatrix m = ComplexMatrix::zeros(dim, dim);
  for (const auto& row : s.rows) {
    const std::vector<double> v = parse_row(row, 4);
    const auto r = std::size_t(v[0]), c = std::size_t(v[1]);
    if (v[0] < 0 || v[1] < 0 || r >= dim || c >= dim)
      fail(row.number, 1, "matrix index out of range for dim " + std::to_string(dim));
    m(r, c) = cplx(v[2], v[3]);
  }
  return m;
}

ComplexVector parse_vector(const std::vector<Line>& rows, std::size_t dim,
                           std::size_t section_line) {
  ComplexVector vec(dim);
  if (rows.empty()) fail(section_line, 1, "vector section has no entries");
  for (const auto& row : rows) {
    const std::vector<double> v = parse_row(row, 3);
    const auto i = std::size_t(v[0]);
    if (v[0] < 0 || i >= dim)
      fail(row.number, 1, "vector index out of range for dim " + std::to_string(dim));
    vec[i] = cplx(v[1], v[2]);
  }
  return vec;
}

CostKind parse_kind(const std::string& name, std::size_t line) {
  if (name == "gate_infidelity") return CostKind::GateInfidelity;
  if (name == "state_infidelity") return CostKind::StateInfidelity;
  if (name == "composite_state_infidelity") return CostKind::CompositeStateInfidelity;
  if (name == "amplitude") return CostKind::Amplitude;
  if (name == "variation") return CostKind::Variation;
  if (name == "forbidden_occupation") return CostKind::ForbiddenOccupation;
  if (name == "time_optimal_gate") return CostKind::TimeOptimalGate;
  if (name == "time_optimal_state") return CostKind::TimeOptimalState;
  fail(line, 1, "unknown cost term kind '" + name + "'");
}

ProblemInstance build_builtin(const Section& prob) {
  const std::string name = get_str(prob, "builtin", "");
  const auto steps = std::size_t(parse_uint(prob, "steps", 0));
  if (name == "qubit-transfer")
    return build_qubit_transfer(parse_double(prob, "c7_weight", 0.0),
                                steps ? steps : 300);
  if (name == "cnot")
    return build_two_transmon_cnot(parse_double(prob, "c5_weight", 1.0),
                                   parse_double(prob, "c3_weight", 0.0),
                                   parse_double(prob, "c4_weight", 0.0),
                                   steps ? steps : 1000);
  if (name == "cat")
    return build_cat_state(parse_double(prob, "c5_weight", 1.0),
                           parse_double(prob, "c4_weight", 0.001), steps ? steps : 8000);
  if (name == "cat-reduced")
    return build_cat_state_reduced(parse_double(prob, "c5_weight", 0.01),
                                   steps ? steps : 1000);
  if (name == "spin-chain") {
    const std::string target = get_str(prob, "target", "hadamard");
    if (target != "hadamard" && target != "ghz")
      fail(prob.line, 1, "spin-chain target must be 'hadamard' or 'ghz'");
    return build_spin_chain(std::size_t(parse_uint(prob, "n_qubits", 2)),
                            target == "ghz" ? SpinChainTarget::Ghz
                                            : SpinChainTarget::Hadamard);
  }
  if (name == "random") {
    RandomProblem rp = make_random_problem(parse_uint(prob, "seed", 1));
    ProblemInstance inst;
    inst.problem = std::move(rp.problem);
    inst.subspace_dims = {inst.problem.dim()};
    for (std::size_t k = 0; k < inst.problem.h.num_controls(); ++k)
      inst.control_names.push_back("u" + std::to_string(k + 1));
    return inst;
  }
  fail(prob.line, 1, "unknown builtin problem '" + name + "'");
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        fail(lineno, raw.find('[') + 1, "unterminated section header");
      std::string inner = trim(line.substr(1, line.size() - 2));
      if (inner.empty()) fail(lineno, 1, "empty section header");
      Section s;
      s.line = lineno;
      const std::size_t sp = inner.find_first_of(" \t");
      if (sp == std::string::npos) {
        s.kind = inner;
      } else {
        s.kind = inner.substr(0, sp);
        s.label = trim(inner.substr(sp + 1));
      }
      sections.push_back(std::move(s));
      continue;
    }
    if (sections.empty()) fail(lineno, 1, "content before any [section] header");
    const std::size_t eq = line.find('=');
    // Heuristic: a '=' makes it a key/value pair; otherwise it is a data row.
    if (eq != std::string::npos) {
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) fail(lineno, 1, "empty key");
      if (value.empty()) fail(lineno, eq + 2, "empty value for '" + key + "'");
      sections.back().keys[key] = {value, lineno};
    } else {
      sections.back().rows.push_back({lineno, line});
    }
  }

  const Section* prob = nullptr;
  for (const auto& s : sections)
    if (s.kind == "problem") {
      if (prob) fail(s.line, 1, "duplicate [problem] section");
      prob = &s;
    }
  if (!prob) fail(lineno ? lineno : 1, 1, "missing [problem] section");

  RunConfig cfg;
  if (prob->keys.count("builtin")) {
    cfg.instance = build_builtin(*prob);
    const auto steps_override = parse_uint(*prob, "steps", 0);
    (void)steps_override;  // already honored inside build_builtin
  } else {
    // Explicit problem from matrices.
    const auto dim = std::size_t(parse_uint(*prob, "dim", 0));
    const auto steps = std::size_t(parse_uint(*prob, "steps", 0));
    const double dt = parse_double(*prob, "dt", 0.0);
    const std::string mode = get_str(*prob, "mode", "state");
    if (dim < 1) fail(prob->line, 1, "[problem] needs dim >= 1");
    if (steps < 1) fail(prob->line, 1, "[problem] needs steps >= 1");
    if (dt <= 0.0) fail(prob->line, 1, "[problem] needs dt > 0");
    if (mode != "state" && mode != "unitary")
      fail(prob->line, 1, "mode must be 'state' or 'unitary'");

    ControlProblem& p = cfg.instance.problem;
    p.name = get_str(*prob, "name", "custom");
    p.grid = {steps, dt};
    p.mode = mode == "state" ? EvolutionMode::State : EvolutionMode::Unitary;
    cfg.instance.subspace_dims = {dim};

    bool have_drift = false;
    for (const auto& s : sections) {
      if (s.kind == "drift") {
        p.h.drift = parse_matrix(s, dim);
        have_drift = true;
      } else if (s.kind == "control") {
        p.h.controls.push_back(parse_matrix(s, dim));
        cfg.instance.control_names.push_back(
            s.label.empty() ? "u" + std::to_string(p.h.controls.size()) : s.label);
        if (s.keys.count("bound"))
          p.bounds.push_back(parse_double(s, "bound", 0.0));
        else
          p.bounds.push_back(std::nullopt);
      } else if (s.kind == "initial") {
        p.initial_states.push_back(parse_vector(s.rows, dim, s.line));
      } else if (s.kind == "term") {
        CostTerm term;
        term.kind = parse_kind(s.label, s.line);
        term.weight = parse_double(s, "weight", 1.0);
        switch (term.kind) {
          case CostKind::GateInfidelity:
          case CostKind::TimeOptimalGate:
            term.target_gate = parse_matrix(s, dim);
            break;
          case CostKind::StateInfidelity:
          case CostKind::TimeOptimalState:
            term.target_state = parse_vector(s.rows, dim, s.line);
            break;
          case CostKind::ForbiddenOccupation: {
            // Rows are `index re im`; a blank index restart is not supported,
            // each forbidden state occupies one [term] section row group via
            // separate sections. Single-state payload here.
            term.forbidden.push_back(parse_vector(s.rows, dim, s.line));
            break;
          }
          case CostKind::CompositeStateInfidelity:
            fail(s.line, 1,
                 "composite_state_infidelity is only available via builtin problems");
          default:
            if (!s.rows.empty())
              fail(s.rows.front().number, 1, "this term kind takes no data rows");
            break;
        }
        p.terms.push_back(std::move(term));
      }
    }
    if (!have_drift) fail(prob->line, 1, "missing [drift] section");
    if (p.h.controls.empty()) fail(prob->line, 1, "need at least one [control] section");
    if (p.mode == EvolutionMode::State && p.initial_states.empty())
      fail(prob->line, 1, "state-mode problem needs an [initial] section");
    if (p.terms.empty()) fail(prob->line, 1, "need at least one [term] section");
  }

  for (const auto& s : sections) {
    if (s.kind == "optimizer") {
      cfg.optimizer.method = parse_optimizer_method(get_str(s, "method", "adam"));
      cfg.optimizer.learning_rate =
          parse_double(s, "learning_rate", cfg.optimizer.learning_rate);
      cfg.optimizer.max_iterations =
          std::size_t(parse_uint(s, "max_iterations", cfg.optimizer.max_iterations));
      cfg.optimizer.target_fidelity =
          parse_double(s, "target_fidelity", cfg.optimizer.target_fidelity);
      cfg.optimizer.gradient_norm_floor =
          parse_double(s, "gradient_norm_floor", cfg.optimizer.gradient_norm_floor);
      cfg.optimizer.seed = parse_uint(s, "seed", cfg.optimizer.seed);
      cfg.optimizer.init_scale = parse_double(s, "init_scale", cfg.optimizer.init_scale);
      cfg.optimizer.lbfgs_memory =
          std::size_t(parse_uint(s, "lbfgs_memory", cfg.optimizer.lbfgs_memory));
      const std::string path = get_str(s, "grad_path", "");
      if (!path.empty()) {
        if (path == "autograd-exact")
          cfg.optimizer.path = GradientPath::AutogradExact;
        else if (path == "autograd-approx")
          cfg.optimizer.path = GradientPath::AutogradApprox;
        else if (path == "analytic")
          cfg.optimizer.path = GradientPath::Analytic;
        else
          fail(s.keys.at("grad_path").second, 1, "unknown grad_path '" + path + "'");
      }
    } else if (s.kind == "output") {
      cfg.out_dir = get_str(s, "dir", cfg.out_dir);
    } else if (s.kind != "problem" && s.kind != "drift" && s.kind != "control" &&
               s.kind != "initial" && s.kind != "term") {
      fail(s.line, 1, "unknown section [" + s.kind + "]");
    }
  }
  try {
    cfg.instance.problem.validate();
  } catch (const std::exception& e) {
    fail(prob->line, 1, std::string("invalid problem: ") + e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

}  // namespace qoc
