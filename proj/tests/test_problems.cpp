#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "qoc/problems.hpp"
#include "test_helpers.hpp"

using namespace qoc;
using namespace qoc::test;

TEST_CASE("qubit transfer: shapes, units, validation") {
  const ProblemInstance inst = build_qubit_transfer();
  const ControlProblem& p = inst.problem;
  p.validate();
  CHECK(p.dim() == 2);
  CHECK(p.num_controls() == 1);
  CHECK(p.grid.steps == 300);
  CHECK(p.grid.duration() == doctest::Approx(3.0));
  REQUIRE(p.bounds[0].has_value());
  CHECK(*p.bounds[0] == doctest::Approx(kTwoPi * 0.3));
  // Drift (w/2) sz with w = 2 pi 3.9 rad/ns.
  CHECK(p.h.drift(0, 0).real() == doctest::Approx(kTwoPi * 3.9 / 2.0));
  CHECK(p.h.drift(1, 1).real() == doctest::Approx(-kTwoPi * 3.9 / 2.0));
  REQUIRE(p.terms.size() == 1);
  CHECK(p.terms[0].kind == CostKind::StateInfidelity);

  const ProblemInstance with_c7 = build_qubit_transfer(1.0);
  REQUIRE(with_c7.problem.terms.size() == 2);
  CHECK(with_c7.problem.terms[1].kind == CostKind::TimeOptimalState);
  CHECK(with_c7.problem.terms[1].weight == 1.0);
  with_c7.problem.validate();
}

TEST_CASE("qubit transfer: zero drive keeps the population in |0>") {
  const ProblemInstance inst = build_qubit_transfer();
  const ControlProblem& p = inst.problem;
  RealGrid u(1, p.grid.steps);  // all-zero drive: only sz acts
  const ExpmConfig cfg = choose_pn_for(p.h, u, p.bounds, p.grid.dt);
  const CostReport r = evaluate_problem(p, u, cfg);
  CHECK(r.fidelity < 1e-12);  // no transfer at all
}

TEST_CASE("two-transmon CNOT: structure and targets") {
  const ProblemInstance inst = build_two_transmon_cnot();
  const ControlProblem& p = inst.problem;
  p.validate();
  CHECK(p.dim() == 25);
  CHECK(p.num_controls() == 3);
  CHECK(p.grid.steps == 1000);
  CHECK(p.initial_states.size() == 4);
  CHECK(inst.subspace_dims == std::vector<std::size_t>{5, 5});

  // Drift is traceless (centered) and Hermitian.
  CHECK(std::abs(trace(p.h.drift)) < 1e-9);

  const CostTerm* comp = nullptr;
  const CostTerm* forb = nullptr;
  for (const auto& t : p.terms) {
    if (t.kind == CostKind::CompositeStateInfidelity) comp = &t;
    if (t.kind == CostKind::ForbiddenOccupation) forb = &t;
  }
  REQUIRE(comp != nullptr);
  REQUIRE(forb != nullptr);

  // Projector onto the computational subspace has rank 4: tr P = 4 and P^2 = P.
  CHECK(trace(comp->projector).real() == doctest::Approx(4.0));
  CHECK(max_abs_diff(matmul(comp->projector, comp->projector), comp->projector) < 1e-12);

  // CNOT map on indices q1*5 + q2: 10 <-> 11, 00/01 fixed.
  REQUIRE(comp->target_set.size() == 4);
  CHECK(std::abs(inner(comp->target_set[0], basis_state(25, 0)) - 1.0) < 1e-12);
  CHECK(std::abs(inner(comp->target_set[1], basis_state(25, 1)) - 1.0) < 1e-12);
  CHECK(std::abs(inner(comp->target_set[2], basis_state(25, 6)) - 1.0) < 1e-12);
  CHECK(std::abs(inner(comp->target_set[3], basis_state(25, 5)) - 1.0) < 1e-12);

  // Forbidden set: all product states with either transmon level >= 3.
  CHECK(forb->forbidden.size() == 16);
  for (const auto& f : comp->target_set) CHECK(std::abs(norm(f) - 1.0) < 1e-12);
}

TEST_CASE("cat target: norm deviation is e^{-2 lambda^2}") {
  const CatTarget t = cat_state_target(22, 2.0);
  CHECK(std::abs(norm(t.state) - 1.0) < 1e-12);
  // [DERIVED] Re<l|-l> = e^{-8} ~ 3.355e-4 at lambda = 2.
  CHECK(std::abs(t.norm_deviation - std::exp(-8.0)) < 1e-6);

  // Even cat: odd Fock amplitudes vanish identically.
  for (std::size_t n = 1; n < 22; n += 2) CHECK(std::abs(t.state[n]) < 1e-14);
  // Even amplitudes are strictly positive for real lambda.
  CHECK(t.state[0].real() > 0.0);
  CHECK(t.state[2].real() > 0.0);
}

TEST_CASE("cat-state problems: shapes and term kinds") {
  const ProblemInstance full = build_cat_state();
  full.problem.validate();
  CHECK(full.problem.dim() == 7 * 22);
  CHECK(full.problem.grid.steps == 8000);
  CHECK(full.problem.grid.duration() == doctest::Approx(40.0));
  CHECK(full.subspace_dims == std::vector<std::size_t>{7, 22});

  const ProblemInstance red = build_cat_state_reduced();
  red.problem.validate();
  CHECK(red.problem.dim() == 4 * 10);
  CHECK(red.problem.grid.steps == 1000);
  CHECK(red.problem.grid.duration() == doctest::Approx(10.0));

  bool has_c2 = false, has_c5 = false;
  for (const auto& t : red.problem.terms) {
    has_c2 |= t.kind == CostKind::StateInfidelity;
    has_c5 |= t.kind == CostKind::ForbiddenOccupation;
  }
  CHECK(has_c2);
  CHECK(has_c5);
}

TEST_CASE("spin chain: couplings, targets, bounds") {
  const ProblemInstance inst = build_spin_chain(2);
  const ControlProblem& p = inst.problem;
  p.validate();
  CHECK(p.dim() == 4);
  CHECK(p.num_controls() == 4);  // sx, sy per spin
  CHECK(p.grid.steps == 20);
  CHECK(p.grid.duration() == doctest::Approx(4.0));
  for (const auto& b : p.bounds) {
    REQUIRE(b.has_value());
    CHECK(*b == doctest::Approx(kTwoPi * 0.5));
  }
  // Two-qubit drift is exactly J sz x sz.
  const ComplexMatrix want = scale(kTwoPi * 0.1, kron(pauli(PauliAxis::Z), pauli(PauliAxis::Z)));
  CHECK(max_abs_diff(p.h.drift, want) < 1e-12);

  CHECK(p.mode == EvolutionMode::Unitary);
  CHECK(p.terms[0].kind == CostKind::GateInfidelity);

  const ProblemInstance ghz = build_spin_chain(3, SpinChainTarget::Ghz);
  ghz.problem.validate();
  CHECK(ghz.problem.mode == EvolutionMode::State);
  CHECK(ghz.problem.dim() == 8);

  CHECK_THROWS(build_spin_chain(0));
  CHECK_THROWS(build_spin_chain(13));
}

TEST_CASE("hadamard and ghz targets") {
  const ComplexMatrix h1 = hadamard_target(1);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(h1(0, 0).real() == doctest::Approx(s));
  CHECK(h1(0, 1).real() == doctest::Approx(s));
  CHECK(h1(1, 0).real() == doctest::Approx(s));
  CHECK(h1(1, 1).real() == doctest::Approx(-s));
  CHECK(unitarity_defect(hadamard_target(3)) < 1e-12);

  const ComplexVector g = ghz_target(3);
  CHECK(std::abs(g[0] - s) < 1e-14);
  CHECK(std::abs(g[7] - s) < 1e-14);
  double middle = 0.0;
  for (std::size_t i = 1; i < 7; ++i) middle += std::abs(g[i]);
  CHECK(middle == 0.0);
}

TEST_CASE("random problems validate and cover every cost kind across seeds") {
  bool seen[8] = {};
  for (std::uint64_t seed = 1; seed <= 24; ++seed) {
    const RandomProblem rp = make_random_problem(seed);
    rp.problem.validate();
    CHECK(rp.pulses.raw.controls() == rp.problem.num_controls());
    CHECK(rp.pulses.raw.steps() == rp.problem.grid.steps);
    CHECK(rp.problem.dim() >= 2);
    CHECK(rp.problem.dim() <= 5);
    for (const auto& t : rp.problem.terms) seen[int(t.kind)] = true;
  }
  for (int k = 0; k < 8; ++k) {
    CAPTURE(k);
    CHECK(seen[k]);
  }
  // Determinism: the same seed reproduces the same instance.
  const RandomProblem a = make_random_problem(5), b = make_random_problem(5);
  CHECK(a.problem.dim() == b.problem.dim());
  CHECK(a.problem.terms.size() == b.problem.terms.size());
  for (std::size_t i = 0; i < a.pulses.raw.size(); ++i)
    CHECK(a.pulses.raw.data()[i] == b.pulses.raw.data()[i]);
}

TEST_CASE("builders fill CLI metadata") {
  for (const ProblemInstance& inst :
       {build_qubit_transfer(), build_two_transmon_cnot(), build_cat_state_reduced()}) {
    CHECK(!inst.problem.name.empty());
    CHECK(inst.control_names.size() == inst.problem.num_controls());
    CHECK(!inst.parameters.empty());
  }
}
