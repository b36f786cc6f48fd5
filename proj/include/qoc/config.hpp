#ifndef QOC_CONFIG_HPP
#define QOC_CONFIG_HPP

#include <stdexcept>

#include "qoc/optimize.hpp"
#include "qoc/problems.hpp"

namespace qoc {

/// Parse failure with source position for diagnostics.
class config_error : public std::runtime_error {
public:
  config_error(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_, column_;
};

/// Everything a `run` or `grad-check` invocation needs. Config files are
/// INI-style sections of `key = value` lines; matrices are given as sparse
/// coordinate rows `row col re im`, vectors as `index re im`.
///
///   [problem]            builtin = qubit-transfer | cnot | cat | cat-reduced
///                                  | spin-chain | random   (+ builtin params)
///                        or: mode/steps/dt for an explicit problem
///   [drift]              coordinate rows
///   [control <name>]     optional `bound = x`, coordinate rows
///   [initial]            vector rows (repeatable for composite problems)
///   [term <kind>]        weight = x, plus `target`/`forbidden` payload rows
///   [optimizer]          method, learning_rate, max_iterations,
///                        target_fidelity, seed, grad_path, init_scale
///   [output]             dir = path
struct RunConfig {
  ProblemInstance instance;
  OptimizerConfig optimizer;
  std::string out_dir = "out";
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

}  // namespace qoc

#endif
