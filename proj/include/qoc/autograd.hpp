#ifndef QOC_AUTOGRAD_HPP
#define QOC_AUTOGRAD_HPP

#include <variant>

#include "qoc/cost.hpp"

namespace qoc {

/// How a propagation step's derivative is evaluated in backward passes:
/// ExactSeries backpropagates through the truncated Taylor polynomial and
/// every squaring; Approximate uses dU/du ~= (-i dt H_k) U, exact only when
/// the generators commute.
enum class GradientMode { ExactSeries, Approximate };

/// Reverse-mode tape over the propagation/cost computational graph.
/// One expm-apply node per time step keeps the tape at O(N) nodes.
/// Single-owner: record once, then backward() any number of times.
class Tape {
public:
  static Tape record_forward(const ControlProblem& problem, const PulseGrid& pulses,
                             const ExpmConfig& cfg);

  const CostReport& report() const { return report_; }

  /// dC/dv over the raw variables, including the bounded-map chain factor.
  RealGrid backward(GradientMode mode);

  std::size_t node_count() const;
  /// Per-node visit counts from the most recent backward() call.
  const std::vector<int>& visit_counts() const { return visits_; }

private:
  enum class Op {
    RawParam,
    BoundedParam,
    ConstVec,
    ConstMat,
    ExpmState,
    ExpmUnitary,
    Inner,
    TraceProd,
    Abs2,
    AffineScalar,
    ScalarSum,
    ComplexMean,
    AmplitudePenalty,
    VariationPenalty,
    WeightedSum,
  };
  using Value = std::variant<double, cplx, ComplexVector, ComplexMatrix>;
  struct Node {
    Op op;
    std::vector<std::uint32_t> parents;
    Value value;
    Value adjoint;
    double aux0 = 0.0, aux1 = 0.0;  // op-specific payload
    std::size_t step = 0;           // time-step index for expm nodes
  };

  Tape(const ControlProblem* problem, const PulseGrid* shape_ref, ExpmConfig cfg)
      : problem_(problem), cfg_(cfg) { (void)shape_ref; }

  std::uint32_t push(Node n);
  void backward_node(std::uint32_t id, GradientMode mode);
  void clear_adjoints();

  const ControlProblem* problem_;
  ExpmConfig cfg_;
  RealGrid u_;        // mapped pulses recorded at forward time
  RealGrid chain_;    // du/dv
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> raw_ids_;      // (k, j) -> raw param node
  std::vector<std::uint32_t> bounded_ids_;  // (k, j) -> bounded param node
  std::vector<std::uint32_t> term_ids_;
  std::uint32_t total_id_ = 0;
  CostReport report_;
  std::vector<int> visits_;
};

/// Per-step propagator VJP, exposed for direct testing. Recomputes the
/// forward action of exp(-i dt H_j) from `input`, then returns the pulse
/// gradient contributions and the adjoint to pass to the previous step.
struct StepVjp {
  std::vector<double> grad_u;   // one entry per control
  ComplexVector input_adjoint;
};
StepVjp expm_apply_vjp(const ComplexMatrix& h_j, const std::vector<ComplexMatrix>& h_controls,
                       double dt, const ExpmConfig& cfg, const ComplexVector& input,
                       const ComplexVector& output_adjoint, GradientMode mode);

}  // namespace qoc

#endif
