#include <cmath>
#include <random>
#include <stdexcept>

#include "qoc/linalg.hpp"
#include "qoc/model.hpp"
#include "qoc/problems.hpp"

namespace qoc {
namespace {

// Remove the trace part of a Hermitian operator. This only shifts the global
// phase of the evolution (every cost here is phase-invariant) but shrinks the
// Taylor radius bound considerably for oscillator drifts.
ComplexMatrix center(ComplexMatrix h) {
  const cplx mean = trace(h) / double(h.rows());
  for (std::size_t i = 0; i < h.rows(); ++i) h(i, i) -= mean;
  return h;
}

std::string ghz_str(double v, const char* unit) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g %s", v, unit);
  return buf;
}

ComplexVector basis_product(const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& levels) {
  std::size_t idx = 0;
  for (std::size_t s = 0; s < dims.size(); ++s) idx = idx * dims[s] + levels[s];
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  return basis_state(total, idx);
}

}  // namespace

ProblemInstance build_qubit_transfer(double c7_weight, std::size_t steps) {
  const double omega = kTwoPi * 3.9;      // rad/ns
  const double omega_max = kTwoPi * 0.3;  // rad/ns
  ProblemInstance inst;
  inst.subspace_dims = {2};
  inst.control_names = {"Omega_x"};
  inst.parameters = {{"omega/2pi", ghz_str(3.9, "GHz")},
                     {"Omega_max/2pi", ghz_str(300.0, "MHz")},
                     {"duration", ghz_str(3.0, "ns")}};

  ControlProblem& p = inst.problem;
  p.name = "qubit-transfer";
  p.h.drift = scale(omega / 2.0, pauli(PauliAxis::Z));
  p.h.controls = {pauli(PauliAxis::X)};
  p.bounds = {omega_max};
  p.grid = {steps, 3.0 / double(steps)};
  p.mode = EvolutionMode::State;
  p.initial_states = {basis_state(2, 0)};

  CostTerm fid;
  fid.kind = CostKind::StateInfidelity;
  fid.weight = 1.0;
  fid.target_state = basis_state(2, 1);
  p.terms.push_back(fid);
  if (c7_weight > 0.0) {
    CostTerm c7;
    c7.kind = CostKind::TimeOptimalState;
    c7.weight = c7_weight;
    c7.target_state = basis_state(2, 1);
    p.terms.push_back(c7);
  }
  return inst;
}

ProblemInstance build_two_transmon_cnot(double c5_weight, double c3_weight,
                                        double c4_weight, std::size_t steps) {
  const std::vector<std::size_t> dims = {5, 5};
  const double w1 = kTwoPi * 3.5, w2 = kTwoPi * 3.9;
  const double alpha = kTwoPi * -0.225;
  const double coupling = kTwoPi * 0.1;

  const ComplexMatrix b1 = embed(ladder(5), 0, dims);
  const ComplexMatrix b2 = embed(ladder(5), 1, dims);
  const ComplexMatrix x1 = add(b1, adjoint(b1));
  const ComplexMatrix x2 = add(b2, adjoint(b2));
  const ComplexMatrix n1 = embed(number_op(5), 0, dims);
  const ComplexMatrix n2 = embed(number_op(5), 1, dims);

  ProblemInstance inst;
  inst.subspace_dims = dims;
  inst.control_names = {"Omega_x1", "Omega_x2", "Omega_z2"};
  inst.parameters = {{"omega_1/2pi", ghz_str(3.5, "GHz")},
                     {"omega_2/2pi", ghz_str(3.9, "GHz")},
                     {"alpha/2pi", ghz_str(-225.0, "MHz")},
                     {"J/2pi", ghz_str(100.0, "MHz")},
                     {"duration", ghz_str(10.0, "ns")}};

  ControlProblem& p = inst.problem;
  p.name = "cnot";
  ComplexMatrix drift = scale(w1, n1);
  drift = add(drift, scale(w2, n2));
  drift = add(drift, embed(anharmonic_term(5, alpha), 0, dims));
  drift = add(drift, embed(anharmonic_term(5, alpha), 1, dims));
  drift = add(drift, scale(coupling, matmul(x1, x2)));
  p.h.drift = center(std::move(drift));
  p.h.controls = {x1, x2, n2};
  p.bounds = {std::nullopt, std::nullopt, std::nullopt};
  p.grid = {steps, 10.0 / double(steps)};
  p.mode = EvolutionMode::State;

  // Computational basis |q1 q2> with transmon 1 as control qubit.
  const std::size_t comp[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  const std::size_t cnot_out[4][2] = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
  CostTerm fid;
  fid.kind = CostKind::CompositeStateInfidelity;
  fid.weight = 1.0;
  fid.projector = ComplexMatrix::zeros(25, 25);
  for (std::size_t s = 0; s < 4; ++s) {
    p.initial_states.push_back(basis_product(dims, {comp[s][0], comp[s][1]}));
    fid.target_set.push_back(basis_product(dims, {cnot_out[s][0], cnot_out[s][1]}));
    const std::size_t idx = comp[s][0] * 5 + comp[s][1];
    fid.projector(idx, idx) = 1.0;
  }
  p.terms.push_back(std::move(fid));

  if (c5_weight > 0.0) {
    CostTerm forb;
    forb.kind = CostKind::ForbiddenOccupation;
    forb.weight = c5_weight;
    for (std::size_t i1 = 0; i1 < 5; ++i1)
      for (std::size_t i2 = 0; i2 < 5; ++i2)
        if (i1 >= 3 || i2 >= 3) forb.forbidden.push_back(basis_product(dims, {i1, i2}));
    p.terms.push_back(std::move(forb));
  }
  if (c3_weight > 0.0) {
    CostTerm amp;
    amp.kind = CostKind::Amplitude;
    amp.weight = c3_weight;
    p.terms.push_back(std::move(amp));
  }
  if (c4_weight > 0.0) {
    CostTerm var;
    var.kind = CostKind::Variation;
    var.weight = c4_weight;
    p.terms.push_back(std::move(var));
  }
  return inst;
}

namespace {

ProblemInstance build_cat_impl(std::size_t nq, std::size_t nr, double lambda,
                               double duration, std::size_t steps, double c5_weight,
                               double c4_weight, std::size_t forb_q_from,
                               std::size_t forb_r_from, const char* name) {
  const std::vector<std::size_t> dims = {nq, nr};
  const double wq = kTwoPi * 3.5, wr = kTwoPi * 3.9;
  const double alpha = kTwoPi * -0.225;
  const double g = kTwoPi * 0.1;

  const ComplexMatrix b = embed(ladder(nq), 0, dims);
  const ComplexMatrix a = embed(ladder(nr), 1, dims);
  const ComplexMatrix xq = add(b, adjoint(b));
  const ComplexMatrix xr = add(a, adjoint(a));
  const ComplexMatrix nb = embed(number_op(nq), 0, dims);
  const ComplexMatrix na = embed(number_op(nr), 1, dims);

  ProblemInstance inst;
  inst.subspace_dims = dims;
  inst.control_names = {"Omega_x", "Omega_z"};
  inst.parameters = {{"omega_q/2pi", ghz_str(3.5, "GHz")},
                     {"omega_r/2pi", ghz_str(3.9, "GHz")},
                     {"alpha/2pi", ghz_str(-225.0, "MHz")},
                     {"g/2pi", ghz_str(100.0, "MHz")},
                     {"lambda", ghz_str(lambda, "")},
                     {"duration", ghz_str(duration, "ns")}};

  ControlProblem& p = inst.problem;
  p.name = name;
  ComplexMatrix drift = scale(wq, nb);
  drift = add(drift, embed(anharmonic_term(nq, alpha), 0, dims));
  drift = add(drift, scale(wr, na));
  drift = add(drift, scale(g, matmul(xr, xq)));
  p.h.drift = center(std::move(drift));
  p.h.controls = {xq, nb};
  p.bounds = {std::nullopt, std::nullopt};
  p.grid = {steps, duration / double(steps)};
  p.mode = EvolutionMode::State;
  p.initial_states = {basis_state(nq * nr, 0)};

  const CatTarget cat = cat_state_target(nr, lambda);
  CostTerm fid;
  fid.kind = CostKind::StateInfidelity;
  fid.weight = 1.0;
  fid.target_state = kron(basis_state(nq, 0), cat.state);
  p.terms.push_back(std::move(fid));

  if (c5_weight > 0.0) {
    CostTerm forb;
    forb.kind = CostKind::ForbiddenOccupation;
    forb.weight = c5_weight;
    for (std::size_t iq = 0; iq < nq; ++iq)
      for (std::size_t ir = 0; ir < nr; ++ir)
        if (iq >= forb_q_from || ir >= forb_r_from)
          forb.forbidden.push_back(basis_product(dims, {iq, ir}));
    p.terms.push_back(std::move(forb));
  }
  if (c4_weight > 0.0) {
    CostTerm var;
    var.kind = CostKind::Variation;
    var.weight = c4_weight;
    p.terms.push_back(std::move(var));
  }
  return inst;
}

}  // namespace

CatTarget cat_state_target(std::size_t dim, double lambda) {
  const ComplexVector plus = coherent_state(dim, lambda).state;
  const ComplexVector minus = coherent_state(dim, -lambda).state;
  ComplexVector unnorm(dim);
  for (std::size_t i = 0; i < dim; ++i)
    unnorm[i] = (plus[i] + minus[i]) / std::sqrt(2.0);
  CatTarget out;
  const double n2 = norm(unnorm) * norm(unnorm);
  out.norm_deviation = n2 - 1.0;
  out.state = scale(1.0 / std::sqrt(n2), unnorm);
  return out;
}

ProblemInstance build_cat_state(double c5_weight, double c4_weight, std::size_t steps) {
  return build_cat_impl(7, 22, 2.0, 40.0, steps, c5_weight, c4_weight, 3, 20, "cat");
}

ProblemInstance build_cat_state_reduced(double c5_weight, std::size_t steps) {
  return build_cat_impl(4, 10, 1.0, 10.0, steps, c5_weight, 0.0, 3, 8, "cat-reduced");
}

ComplexMatrix hadamard_target(std::size_t n_qubits) {
  ComplexMatrix h1(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h1(0, 0) = s;
  h1(0, 1) = s;
  h1(1, 0) = s;
  h1(1, 1) = -s;
  ComplexMatrix out = h1;
  for (std::size_t q = 1; q < n_qubits; ++q) out = kron(out, h1);
  return out;
}

ComplexVector ghz_target(std::size_t n_qubits) {
  const std::size_t d = std::size_t(1) << n_qubits;
  ComplexVector v(d);
  v[0] = 1.0 / std::sqrt(2.0);
  v[d - 1] = 1.0 / std::sqrt(2.0);
  return v;
}

ProblemInstance build_spin_chain(std::size_t n_qubits, SpinChainTarget target) {
  if (n_qubits < 1 || n_qubits > 12)
    throw std::runtime_error("spin-chain: N_qubits must be in [1, 12]");
  const std::vector<std::size_t> dims(n_qubits, 2);
  const double coupling = kTwoPi * 0.1;
  const double omega_max = kTwoPi * 0.5;

  ProblemInstance inst;
  inst.subspace_dims = dims;
  inst.parameters = {{"J/2pi", ghz_str(100.0, "MHz")},
                     {"Omega_max/2pi", ghz_str(500.0, "MHz")},
                     {"duration", ghz_str(2.0 * double(n_qubits), "ns")}};

  ControlProblem& p = inst.problem;
  p.name = target == SpinChainTarget::Hadamard ? "spin-chain" : "spin-chain-ghz";
  const std::size_t d = std::size_t(1) << n_qubits;
  p.h.drift = ComplexMatrix::zeros(d, d);
  for (std::size_t n = 0; n + 1 < n_qubits; ++n) {
    const ComplexMatrix zz =
        matmul(embed(pauli(PauliAxis::Z), n, dims), embed(pauli(PauliAxis::Z), n + 1, dims));
    p.h.drift = add(p.h.drift, scale(coupling, zz));
  }
  for (std::size_t n = 0; n < n_qubits; ++n) {
    p.h.controls.push_back(embed(pauli(PauliAxis::X), n, dims));
    inst.control_names.push_back("Omega_x" + std::to_string(n + 1));
  }
  for (std::size_t n = 0; n < n_qubits; ++n) {
    p.h.controls.push_back(embed(pauli(PauliAxis::Y), n, dims));
    inst.control_names.push_back("Omega_y" + std::to_string(n + 1));
  }
  p.bounds.assign(2 * n_qubits, omega_max);
  p.grid = {10 * n_qubits, 0.2};

  if (target == SpinChainTarget::Hadamard) {
    p.mode = EvolutionMode::Unitary;
    CostTerm fid;
    fid.kind = CostKind::GateInfidelity;
    fid.weight = 1.0;
    fid.target_gate = hadamard_target(n_qubits);
    p.terms.push_back(std::move(fid));
  } else {
    p.mode = EvolutionMode::State;
    p.initial_states = {basis_state(d, 0)};
    CostTerm fid;
    fid.kind = CostKind::StateInfidelity;
    fid.weight = 1.0;
    fid.target_state = ghz_target(n_qubits);
    p.terms.push_back(std::move(fid));
  }
  return inst;
}

RandomProblem make_random_problem(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.3, 1.5);

  const auto random_hermitian = [&](std::size_t d) {
    ComplexMatrix h(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      h(i, i) = unit(rng);
      for (std::size_t j = i + 1; j < d; ++j) {
        const cplx z(unit(rng), unit(rng));
        h(i, j) = z;
        h(j, i) = std::conj(z);
      }
    }
    return h;
  };
  const auto random_state = [&](std::size_t d) {
    ComplexVector v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = cplx(unit(rng), unit(rng));
    return scale(1.0 / norm(v), v);
  };

  const auto make_random_unitary = [&](const ComplexMatrix& h) {
    const ExpmConfig cfg = choose_pn(frobenius_norm(h), 1.0);
    return expm_apply(h, 1.0, cfg, ComplexMatrix::identity(h.rows()));
  };

  const std::size_t dim = 2 + rng() % 4;       // 2..5
  const std::size_t controls = 1 + rng() % 3;  // 1..3
  const std::size_t steps = 8 + rng() % 7;     // 8..14

  RandomProblem rp;
  ControlProblem& p = rp.problem;
  p.name = "random-" + std::to_string(seed);
  p.h.drift = random_hermitian(dim);
  for (std::size_t k = 0; k < controls; ++k) p.h.controls.push_back(random_hermitian(dim));
  for (std::size_t k = 0; k < controls; ++k) {
    if (rng() % 2)
      p.bounds.push_back(0.8 + 1.2 * pos(rng));
    else
      p.bounds.push_back(std::nullopt);
  }
  // dt spanning sub- and super-radius regimes so squarings get exercised.
  p.grid = {steps, 0.05 + 0.25 * pos(rng)};

  const bool unitary_mode = (seed % 2) == 0;
  if (unitary_mode) {
    p.mode = EvolutionMode::Unitary;
    CostTerm fid;
    fid.kind = CostKind::GateInfidelity;
    fid.weight = pos(rng);
    fid.target_gate = make_random_unitary(random_hermitian(dim));
    p.terms.push_back(std::move(fid));
    if (seed % 4 == 0) {
      CostTerm c6;
      c6.kind = CostKind::TimeOptimalGate;
      c6.weight = pos(rng);
      c6.target_gate = make_random_unitary(random_hermitian(dim));
      p.terms.push_back(std::move(c6));
    }
  } else {
    p.mode = EvolutionMode::State;
    const bool composite = (seed % 4) == 1;
    if (composite) {
      const std::size_t s_count = 2;
      CostTerm fid;
      fid.kind = CostKind::CompositeStateInfidelity;
      fid.weight = pos(rng);
      fid.projector = ComplexMatrix::zeros(dim, dim);
      for (std::size_t i = 0; i < dim; ++i)
        if (rng() % 2 || i == 0) fid.projector(i, i) = 1.0;
      // Orthonormal initial states: two distinct basis vectors.
      p.initial_states = {basis_state(dim, 0), basis_state(dim, 1)};
      for (std::size_t s = 0; s < s_count; ++s) fid.target_set.push_back(random_state(dim));
      p.terms.push_back(std::move(fid));
    } else {
      p.initial_states = {random_state(dim)};
      CostTerm fid;
      fid.kind = CostKind::StateInfidelity;
      fid.weight = pos(rng);
      fid.target_state = random_state(dim);
      p.terms.push_back(std::move(fid));
      if (seed % 8 == 3) {
        CostTerm c7;
        c7.kind = CostKind::TimeOptimalState;
        c7.weight = pos(rng);
        c7.target_state = random_state(dim);
        p.terms.push_back(std::move(c7));
      }
    }
    if (seed % 3 == 0) {
      CostTerm forb;
      forb.kind = CostKind::ForbiddenOccupation;
      forb.weight = pos(rng);
      forb.forbidden.push_back(random_state(dim));
      if (rng() % 2) forb.forbidden.push_back(random_state(dim));
      p.terms.push_back(std::move(forb));
    }
  }
  if (seed % 5 == 0) {
    CostTerm amp;
    amp.kind = CostKind::Amplitude;
    amp.weight = 0.1 * pos(rng);
    p.terms.push_back(std::move(amp));
  }
  if (seed % 5 == 1) {
    CostTerm var;
    var.kind = CostKind::Variation;
    var.weight = 0.1 * pos(rng);
    p.terms.push_back(std::move(var));
  }
  if (seed % 7 == 2) {  // zero-weight term must contribute nothing
    CostTerm zero;
    zero.kind = CostKind::Amplitude;
    zero.weight = 0.0;
    p.terms.push_back(std::move(zero));
  }

  rp.pulses.raw = RealGrid(controls, steps);
  rp.pulses.bounds = p.bounds;
  for (std::size_t i = 0; i < rp.pulses.raw.size(); ++i)
    rp.pulses.raw.data()[i] = 0.7 * unit(rng);
  return rp;
}

}  // namespace qoc
