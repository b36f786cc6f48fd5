#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "qoc/autograd.hpp"
#include "qoc/gradcheck.hpp"
#include "test_helpers.hpp"

using namespace qoc;
using namespace qoc::test;

namespace {

PulseGrid random_pulses(std::size_t m, std::size_t n,
                        const std::vector<std::optional<double>>& bounds, double amp = 0.5) {
  PulseGrid p;
  p.raw = RealGrid(m, n);
  p.bounds = bounds;
  for (std::size_t i = 0; i < p.raw.size(); ++i) p.raw.data()[i] = uniform(-amp, amp);
  return p;
}

ControlProblem small_state_problem(CostKind kind) {
  ControlProblem p;
  p.h.drift = scale(0.7, pauli(PauliAxis::Z));
  p.h.controls = {pauli(PauliAxis::X), pauli(PauliAxis::Y)};
  p.bounds = {0.8, std::nullopt};
  p.grid = {6, 0.12};
  p.mode = EvolutionMode::State;
  p.initial_states = {basis_state(2, 0)};
  CostTerm t{kind, 1.0};
  switch (kind) {
    case CostKind::StateInfidelity:
    case CostKind::TimeOptimalState:
      t.target_state = basis_state(2, 1);
      break;
    case CostKind::ForbiddenOccupation:
      t.forbidden = {basis_state(2, 1)};
      break;
    case CostKind::CompositeStateInfidelity:
      t.target_set = {basis_state(2, 1)};
      t.projector = ComplexMatrix::identity(2);
      break;
    default:
      break;
  }
  p.terms = {t};
  return p;
}

ControlProblem small_gate_problem(CostKind kind) {
  ControlProblem p;
  p.h.drift = scale(0.5, pauli(PauliAxis::Z));
  p.h.controls = {pauli(PauliAxis::X)};
  p.bounds = {std::nullopt};
  p.grid = {5, 0.15};
  p.mode = EvolutionMode::Unitary;
  CostTerm t{kind, 1.0};
  t.target_gate = pauli(PauliAxis::X);
  p.terms = {t};
  return p;
}

ExpmConfig cfg_for(const ControlProblem& p, const PulseGrid& pulses) {
  return choose_pn_for(p.h, bounded_map(pulses), p.bounds, p.grid.dt);
}

double max_grid_diff(const RealGrid& a, const RealGrid& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace

TEST_CASE("tape forward value matches the cost module exactly") {
  rng(701);
  for (CostKind kind : {CostKind::StateInfidelity, CostKind::CompositeStateInfidelity,
                        CostKind::Amplitude, CostKind::Variation,
                        CostKind::ForbiddenOccupation, CostKind::TimeOptimalState}) {
    const ControlProblem p = small_state_problem(kind);
    const PulseGrid pulses = random_pulses(2, p.grid.steps, p.bounds);
    const ExpmConfig cfg = cfg_for(p, pulses);
    Tape tape = Tape::record_forward(p, pulses, cfg);
    const CostReport direct = evaluate_problem(p, bounded_map(pulses), cfg);
    CHECK(std::abs(tape.report().total - direct.total) < 1e-12);
    REQUIRE(tape.report().term_values.size() == 1);
    CHECK(std::abs(tape.report().term_values[0] - direct.term_values[0]) < 1e-12);
  }
  for (CostKind kind : {CostKind::GateInfidelity, CostKind::TimeOptimalGate}) {
    const ControlProblem p = small_gate_problem(kind);
    const PulseGrid pulses = random_pulses(1, p.grid.steps, p.bounds);
    const ExpmConfig cfg = cfg_for(p, pulses);
    Tape tape = Tape::record_forward(p, pulses, cfg);
    const CostReport direct = evaluate_problem(p, bounded_map(pulses), cfg);
    CHECK(std::abs(tape.report().total - direct.total) < 1e-12);
  }
}

TEST_CASE("zero-weight terms contribute nothing to total or gradient") {
  rng(702);
  ControlProblem p = small_state_problem(CostKind::StateInfidelity);
  CostTerm dead{CostKind::Amplitude, 0.0};
  p.terms.push_back(dead);
  const PulseGrid pulses = random_pulses(2, p.grid.steps, p.bounds);
  const ExpmConfig cfg = cfg_for(p, pulses);

  Tape tape = Tape::record_forward(p, pulses, cfg);
  ControlProblem p1 = p;
  p1.terms.pop_back();
  Tape tape1 = Tape::record_forward(p1, pulses, cfg);
  CHECK(std::abs(tape.report().total - tape1.report().total) < 1e-15);
  CHECK(max_grid_diff(tape.backward(GradientMode::ExactSeries),
                      tape1.backward(GradientMode::ExactSeries)) < 1e-15);
}

TEST_CASE("backward visits each reachable node exactly once") {
  rng(703);
  ControlProblem p = small_state_problem(CostKind::StateInfidelity);
  p.terms.push_back(CostTerm{CostKind::Amplitude, 0.3});
  const PulseGrid pulses = random_pulses(2, p.grid.steps, p.bounds);
  Tape tape = Tape::record_forward(p, pulses, cfg_for(p, pulses));
  (void)tape.backward(GradientMode::ExactSeries);
  int visited = 0;
  for (int c : tape.visit_counts()) {
    CHECK(c <= 1);
    visited += c;
  }
  CHECK(visited > 0);
  CHECK(std::size_t(visited) <= tape.node_count());
}

TEST_CASE("exact-series gradient matches central finite differences per term") {
  rng(704);
  for (CostKind kind : {CostKind::StateInfidelity, CostKind::CompositeStateInfidelity,
                        CostKind::Amplitude, CostKind::Variation,
                        CostKind::ForbiddenOccupation, CostKind::TimeOptimalState}) {
    CAPTURE(cost_kind_name(kind));
    const ControlProblem p = small_state_problem(kind);
    const PulseGrid pulses = random_pulses(2, p.grid.steps, p.bounds);
    const ExpmConfig cfg = cfg_for(p, pulses);
    Tape tape = Tape::record_forward(p, pulses, cfg);
    const RealGrid g = tape.backward(GradientMode::ExactSeries);
    const RealGrid fd = finite_difference_gradient(p, pulses, cfg);
    CHECK(max_grid_diff(g, fd) < 1e-7);
  }
  for (CostKind kind : {CostKind::GateInfidelity, CostKind::TimeOptimalGate}) {
    CAPTURE(cost_kind_name(kind));
    const ControlProblem p = small_gate_problem(kind);
    const PulseGrid pulses = random_pulses(1, p.grid.steps, p.bounds);
    const ExpmConfig cfg = cfg_for(p, pulses);
    Tape tape = Tape::record_forward(p, pulses, cfg);
    const RealGrid g = tape.backward(GradientMode::ExactSeries);
    const RealGrid fd = finite_difference_gradient(p, pulses, cfg);
    CHECK(max_grid_diff(g, fd) < 1e-7);
  }
}

TEST_CASE("commuting generators: exact and approximate modes agree") {
  // Drift and the single control are both sz, so every step commutes and
  // the approximate derivative (-i dt H_k) U is exact.
  rng(705);
  ControlProblem p;
  p.h.drift = scale(0.4, pauli(PauliAxis::Z));
  p.h.controls = {pauli(PauliAxis::Z)};
  p.bounds = {std::nullopt};
  p.grid = {8, 0.2};
  p.mode = EvolutionMode::State;
  ComplexVector plus(2);
  plus[0] = plus[1] = 1.0 / std::sqrt(2.0);
  p.initial_states = {plus};
  CostTerm t{CostKind::StateInfidelity, 1.0};
  ComplexVector target(2);
  target[0] = 1.0 / std::sqrt(2.0);
  target[1] = cplx(0.0, 1.0) / std::sqrt(2.0);
  t.target_state = target;
  p.terms = {t};

  const PulseGrid pulses = random_pulses(1, p.grid.steps, p.bounds);
  const ExpmConfig cfg = cfg_for(p, pulses);
  Tape tape = Tape::record_forward(p, pulses, cfg);
  const RealGrid ge = tape.backward(GradientMode::ExactSeries);
  const RealGrid ga = tape.backward(GradientMode::Approximate);
  CHECK(max_grid_diff(ge, ga) < 1e-10);
}

TEST_CASE("non-commuting: approximate error shrinks ~linearly as dt halves") {
  rng(706);
  auto gap_for = [](std::size_t steps, double dt) {
    ControlProblem p = small_state_problem(CostKind::StateInfidelity);
    p.grid = {steps, dt};
    PulseGrid pulses;
    pulses.raw = RealGrid(2, steps);
    pulses.bounds = p.bounds;
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t j = 0; j < steps; ++j)
        pulses.raw(k, j) = 0.4 * std::sin(0.7 * (k + 1) * j * dt + 0.3);
    const ExpmConfig cfg = choose_pn_for(p.h, bounded_map(pulses), p.bounds, dt);
    Tape tape = Tape::record_forward(p, pulses, cfg);
    const RealGrid ge = tape.backward(GradientMode::ExactSeries);
    const RealGrid ga = tape.backward(GradientMode::Approximate);
    double m = 0.0;
    for (std::size_t i = 0; i < ge.size(); ++i)
      m = std::max(m, std::abs(ge.data()[i] - ga.data()[i]));
    return m;
  };
  const double gap1 = gap_for(8, 0.3);
  const double gap2 = gap_for(16, 0.15);
  CHECK(gap1 > 1e-8);             // genuinely non-commuting
  CHECK(gap2 < 0.75 * gap1);      // shrinks roughly linearly in dt
}

TEST_CASE("expm_apply_vjp: gradient entries scale linearly with dt") {
  rng(707);
  const ComplexMatrix hj = random_hermitian(3);
  const std::vector<ComplexMatrix> hk = {random_hermitian(3)};
  const ComplexVector x = random_state(3), adj = random_vector(3);
  const double dt = 1e-3;
  const ExpmConfig cfg = choose_pn(frobenius_norm(hj), dt);
  const StepVjp v1 = expm_apply_vjp(hj, hk, dt, cfg, x, adj, GradientMode::Approximate);
  const StepVjp v2 = expm_apply_vjp(hj, hk, 2.0 * dt, cfg, x, adj, GradientMode::Approximate);
  REQUIRE(v1.grad_u.size() == 1);
  // At small dt the step derivative is dominated by the linear term in dt.
  CHECK(v2.grad_u[0] == doctest::Approx(2.0 * v1.grad_u[0]).epsilon(1e-2));
}

TEST_CASE("global-phase shift of the drift leaves the gradient unchanged") {
  rng(708);
  ControlProblem p = small_state_problem(CostKind::StateInfidelity);
  const PulseGrid pulses = random_pulses(2, p.grid.steps, p.bounds);
  const ExpmConfig cfg = cfg_for(p, pulses);
  Tape t0 = Tape::record_forward(p, pulses, cfg);
  const RealGrid g0 = t0.backward(GradientMode::ExactSeries);

  ControlProblem shifted = p;
  shifted.h.drift += scale(1.7, ComplexMatrix::identity(2));
  const ExpmConfig cfg2 = choose_pn_for(shifted.h, bounded_map(pulses), p.bounds, p.grid.dt);
  Tape t1 = Tape::record_forward(shifted, pulses, cfg2);
  const RealGrid g1 = t1.backward(GradientMode::ExactSeries);
  CHECK(std::abs(t0.report().total - t1.report().total) < 1e-11);
  CHECK(max_grid_diff(g0, g1) < 1e-10);
}

TEST_CASE("gradient of a weighted sum is the weighted sum of gradients") {
  rng(709);
  ControlProblem pa = small_state_problem(CostKind::StateInfidelity);
  ControlProblem pb = small_state_problem(CostKind::ForbiddenOccupation);
  ControlProblem pc = pa;
  pc.terms.push_back(pb.terms[0]);
  pc.terms[0].weight = 2.0;
  pc.terms[1].weight = 0.5;

  const PulseGrid pulses = random_pulses(2, pa.grid.steps, pa.bounds);
  const ExpmConfig cfg = cfg_for(pa, pulses);
  Tape ta = Tape::record_forward(pa, pulses, cfg);
  Tape tb = Tape::record_forward(pb, pulses, cfg);
  Tape tc = Tape::record_forward(pc, pulses, cfg);
  const RealGrid ga = ta.backward(GradientMode::ExactSeries);
  const RealGrid gb = tb.backward(GradientMode::ExactSeries);
  const RealGrid gc = tc.backward(GradientMode::ExactSeries);
  double m = 0.0;
  for (std::size_t i = 0; i < gc.size(); ++i)
    m = std::max(m, std::abs(gc.data()[i] - (2.0 * ga.data()[i] + 0.5 * gb.data()[i])));
  CHECK(m < 1e-12);
}

TEST_CASE("node count grows linearly with N") {
  rng(710);
  auto nodes_for = [](std::size_t steps) {
    ControlProblem p = small_state_problem(CostKind::StateInfidelity);
    p.grid.steps = steps;
    PulseGrid pulses;
    pulses.raw = RealGrid(2, steps);
    pulses.bounds = p.bounds;
    Tape tape = Tape::record_forward(p, pulses, ExpmConfig{});
    return tape.node_count();
  };
  const std::size_t n10 = nodes_for(10), n20 = nodes_for(20);
  // One expm node (plus per-step params) per step: affine in N, so the
  // 20-step gap costs exactly twice the 10-step gap.
  const std::size_t n40 = nodes_for(40);
  CHECK(n40 - n20 == 2 * (n20 - n10));
}
