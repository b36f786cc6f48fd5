#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "qoc/propagation.hpp"
#include "test_helpers.hpp"

using namespace qoc;
using namespace qoc::test;

namespace {

ControlHamiltonian rabi_hamiltonian() {
  ControlHamiltonian h;
  h.drift = ComplexMatrix::zeros(2, 2);
  h.controls = {pauli(PauliAxis::X)};
  return h;
}

}  // namespace

TEST_CASE("trivial propagation: H = 0 leaves everything fixed") {
  ControlHamiltonian h;
  h.drift = ComplexMatrix::zeros(3, 3);
  RealGrid u(0, 4);
  const TimeGrid grid{4, 0.5};
  const ExpmConfig cfg = choose_pn(0.0, grid.dt);

  const Trajectory tu = propagate_unitary(h, u, grid, cfg);
  CHECK(tu.is_unitary());
  CHECK(tu.num_steps() == 4);
  CHECK(max_abs_diff(tu.unitaries.front(), ComplexMatrix::identity(3)) == 0.0);  // K_0 = I
  CHECK(max_abs_diff(tu.unitaries.back(), ComplexMatrix::identity(3)) < 1e-15);

  const ComplexVector psi0 = basis_state(3, 1);
  const Trajectory ts = propagate_state(psi0, h, u, grid, cfg);
  CHECK(!ts.is_unitary());
  CHECK(ts.states.size() == 5);  // Psi_0..Psi_N
  CHECK(max_abs_diff(ts.states.back(), psi0) < 1e-15);
}

TEST_CASE("Rabi oscillation: |<1|Psi_N>|^2 = sin^2(theta) with theta = Omega T") {
  // H = Omega sx, so Psi(T) = cos(theta)|0> - i sin(theta)|1>.
  const ControlHamiltonian h = rabi_hamiltonian();
  const TimeGrid grid{50, 0.02};
  const double omega = 1.3;
  RealGrid u(1, grid.steps);
  for (std::size_t j = 0; j < grid.steps; ++j) u(0, j) = omega;
  const ExpmConfig cfg = choose_pn_for(h, u, {std::nullopt}, grid.dt);

  const Trajectory t = propagate_state(basis_state(2, 0), h, u, grid, cfg);
  const double theta = omega * grid.duration();
  const double pop1 = std::norm(t.states.back()[1]);
  CHECK(pop1 == doctest::Approx(std::sin(theta) * std::sin(theta)).epsilon(1e-10));
  // Intermediate step too.
  const double theta25 = omega * 25 * grid.dt;
  CHECK(std::norm(t.states[25][1]) ==
        doctest::Approx(std::sin(theta25) * std::sin(theta25)).epsilon(1e-10));
}

TEST_CASE("constant H: N steps of dt equal one step of N dt (semigroup)") {
  rng(501);
  ControlHamiltonian h;
  h.drift = random_hermitian(4);
  RealGrid u(0, 8);
  const TimeGrid grid{8, 0.11};
  const ExpmConfig cfg = choose_pn(frobenius_norm(h.drift), grid.duration());
  const Trajectory t = propagate_unitary(h, u, grid, cfg);
  const ComplexMatrix direct =
      expm_apply(h.drift, grid.duration(), cfg, ComplexMatrix::identity(4));
  CHECK(max_abs_diff(t.unitaries.back(), direct) < 1e-10);
}

TEST_CASE("state propagation agrees with applying the unitary trajectory") {
  rng(502);
  ControlHamiltonian h;
  h.drift = random_hermitian(4);
  h.controls = {random_hermitian(4), random_hermitian(4)};
  const TimeGrid grid{10, 0.07};
  RealGrid u(2, grid.steps);
  for (std::size_t i = 0; i < u.size(); ++i) u.data()[i] = uniform();
  const ExpmConfig cfg = choose_pn_for(h, u, {std::nullopt, std::nullopt}, grid.dt);

  const ComplexVector psi0 = random_state(4);
  const Trajectory ts = propagate_state(psi0, h, u, grid, cfg);
  const Trajectory tu = propagate_unitary(h, u, grid, cfg);
  for (std::size_t j = 0; j <= grid.steps; ++j)
    CHECK(max_abs_diff(ts.states[j], matvec(tu.unitaries[j], psi0)) < 1e-10);
}

TEST_CASE("norm preservation along the whole trajectory") {
  rng(503);
  ControlHamiltonian h;
  h.drift = random_hermitian(5);
  h.controls = {random_hermitian(5)};
  const TimeGrid grid{30, 0.09};
  RealGrid u(1, grid.steps);
  for (std::size_t j = 0; j < grid.steps; ++j) u(0, j) = uniform();
  const ExpmConfig cfg = choose_pn_for(h, u, {std::nullopt}, grid.dt);

  const Trajectory t = propagate_state(random_state(5), h, u, grid, cfg);
  for (const auto& psi : t.states) CHECK(std::abs(norm(psi) - 1.0) < 1e-11);

  const Trajectory tu = propagate_unitary(h, u, grid, cfg);
  for (const auto& k : tu.unitaries) CHECK(unitarity_defect(k) < 1e-9);
}

TEST_CASE("propagate_states handles several initial states consistently") {
  rng(504);
  ControlHamiltonian h;
  h.drift = random_hermitian(3);
  h.controls = {random_hermitian(3)};
  const TimeGrid grid{6, 0.1};
  RealGrid u(1, grid.steps);
  for (std::size_t j = 0; j < grid.steps; ++j) u(0, j) = uniform();
  const ExpmConfig cfg = choose_pn_for(h, u, {std::nullopt}, grid.dt);

  const std::vector<ComplexVector> inits = {random_state(3), random_state(3)};
  const std::vector<Trajectory> trajs = propagate_states(inits, h, u, grid, cfg);
  REQUIRE(trajs.size() == 2);
  for (std::size_t s = 0; s < 2; ++s) {
    const Trajectory single = propagate_state(inits[s], h, u, grid, cfg);
    for (std::size_t j = 0; j <= grid.steps; ++j)
      CHECK(max_abs_diff(trajs[s].states[j], single.states[j]) == 0.0);
  }
}

TEST_CASE("unnormalized initial state is rejected") {
  ControlHamiltonian h;
  h.drift = ComplexMatrix::zeros(2, 2);
  RealGrid u(0, 2);
  const TimeGrid grid{2, 0.1};
  ComplexVector bad(2);
  bad[0] = 2.0;
  CHECK_THROWS(propagate_state(bad, h, u, grid, ExpmConfig{}));
}
