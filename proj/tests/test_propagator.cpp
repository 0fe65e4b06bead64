#include <doctest.h>

#include <cmath>

#include "ddmem/model.hpp"
#include "ddmem/propagator.hpp"
#include "ddmem/tolerances.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace ddmem;
using ddmem::testing::rng;

namespace {

ModelBundle small_rabi(double g, double gamma, double nbar, int n_max = 8,
                       CouplingKind kind = CouplingKind::rabi) {
  RabiParams p;
  p.omega_s = 1.0;
  p.omega_e = 1.0;
  p.g = g;
  p.gamma = gamma;
  p.nbar = nbar;
  p.n_max = n_max;
  p.override_truncation_floor = true;
  return build_model(p, kind);
}

}  // namespace

TEST_CASE("SegmentPlan: step rule") {
  const SegmentPlan p = SegmentPlan::for_span(1.0, 2.0);
  CHECK(p.steps == 100);  // ceil(1.0 * 2.0 / 0.02)
  CHECK_NOTHROW(p.validate());

  SegmentPlan bad;
  bad.tau = 1.0;
  bad.steps = 10;
  bad.omega_max = 2.0;
  CHECK_THROWS_AS(bad.validate(), config_error);

  // short segments collapse to one step but h <= tau still holds
  const SegmentPlan tiny = SegmentPlan::for_span(0.001, 2.0);
  CHECK(tiny.steps == 1);
  CHECK_NOTHROW(tiny.validate());
}

TEST_CASE("propagate_segment: trivial generator is the identity evolution") {
  auto r = rng(81);
  LindbladGenerator gen;
  gen.hamiltonian = TensorOperator({2, 3});
  const TensorOperator rho = ddmem::testing::random_density({2, 3}, r);
  SegmentPlan plan;
  plan.tau = 0.7;
  plan.steps = 7;
  const TensorOperator out = propagate_segment(rho, gen, plan);
  CHECK((out - rho).max_norm() < 1e-15);
}

TEST_CASE("propagate_segment: closed dynamics matches unitary conjugation") {
  const ModelBundle b = small_rabi(0.0, 0.0, 0.0);
  auto r = rng(82);
  const TensorOperator rho = ddmem::testing::random_density({2, 9}, r);
  const double tau = 2.0;
  const TensorOperator u = unitary_exp(b.h_s + b.h_e, tau);
  const TensorOperator want = conjugate_by(u, rho);

  // default step rule: the random state populates every Fock level, so the
  // fastest beat frequency (~2 n_max omega_e) sets the error scale
  const SegmentPlan plan = SegmentPlan::for_span(tau, omega_max(b.params));
  const TensorOperator got = propagate_segment(rho, b.generator, plan);
  CHECK((got - want).max_norm() < 1e-6);

  SegmentPlan fine = plan;
  fine.steps *= 50;
  const TensorOperator refined = propagate_segment(rho, b.generator, fine);
  CHECK((refined - want).max_norm() < 1e-10);
}

TEST_CASE("propagate_segment: oscillator population decays as exp(-gamma tau)") {
  const double gamma = 0.25;
  const int n_max = 5;
  LindbladGenerator gen;
  const TensorOperator a = annihilation(n_max);
  gen.hamiltonian = (a.adjoint() * a) * cxd(1.0);
  gen.jumps = {{gamma, a}, {0.0, a.adjoint()}};
  TensorOperator rho({n_max + 1});
  rho(1, 1) = 1.0;

  const double tau = 1.7;
  const double om = 1.0 + gamma * n_max;
  const TensorOperator out =
      propagate_segment(rho, gen, SegmentPlan::for_span(tau, om));
  CHECK(std::abs(out(1, 1).real() - std::exp(-gamma * tau)) < 1e-7);
  CHECK(std::abs(out.trace() - 1.0) < tol::segment_trace_drift);
}

TEST_CASE("propagate_segment: rejects plans that break the step rule") {
  const ModelBundle b = small_rabi(0.01, 0.001, 0.1, 9);
  SegmentPlan plan;
  plan.tau = 10.0;
  plan.steps = 3;
  plan.omega_max = omega_max(b.params);
  auto r = rng(83);
  const TensorOperator rho = ddmem::testing::random_density({2, 10}, r);
  CHECK_THROWS_AS(propagate_segment(rho, b.generator, plan), config_error);
}

TEST_CASE("CompiledGenerator: matches the dense lindblad_rhs") {
  const ModelBundle b = small_rabi(0.4, 0.3, 0.6, 4);
  const CompiledGenerator cg(b.generator);
  auto r = rng(84);
  for (int rep = 0; rep < 5; ++rep) {
    const TensorOperator rho = ddmem::testing::random_density({2, 5}, r);
    const TensorOperator want = lindblad_rhs(b.generator, rho);
    TensorOperator got(rho.dims());
    std::vector<cxd> scratch(rho.data().size());
    cg.rhs(rho.data().data(), got.data().data(), scratch.data());
    CHECK((got - want).max_norm() < 1e-12);
  }
}

TEST_CASE("apply_kick: identity leaves the state alone") {
  auto r = rng(85);
  const TensorOperator rho = ddmem::testing::random_density({2, 3}, r);
  CHECK((apply_kick(rho, qubit_identity(), 0) - rho).max_norm() == 0.0);
}

TEST_CASE("apply_kick: sigma_z flips |+> to |->") {
  TensorOperator plus({2});
  plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
  const TensorOperator out = apply_kick(plus, pauli_z(), 0);
  TensorOperator minus({2});
  minus(0, 0) = minus(1, 1) = 0.5;
  minus(0, 1) = minus(1, 0) = -0.5;
  CHECK((out - minus).max_norm() < 1e-15);
}

TEST_CASE("apply_kick: double sigma_z kick restores the state, spectrum intact") {
  auto r = rng(86);
  const TensorOperator rho = ddmem::testing::random_density({3, 2, 2}, r);
  const TensorOperator once = apply_kick(rho, pauli_z(), 1);
  const TensorOperator twice = apply_kick(once, pauli_z(), 1);
  CHECK((twice - rho).max_norm() < tol::kick_involution);
  CHECK(std::abs(once.trace() - rho.trace()) < 1e-14);
  const auto s0 = hermitian_eig(rho).eigenvalues;
  const auto s1 = hermitian_eig(once).eigenvalues;
  for (size_t i = 0; i < s0.size(); ++i) CHECK(std::abs(s0[i] - s1[i]) < 1e-12);
}

TEST_CASE("apply_kick: dimension errors") {
  auto r = rng(87);
  const TensorOperator rho = ddmem::testing::random_density({2, 3}, r);
  CHECK_THROWS_AS(apply_kick(rho, pauli_z(), 1), std::invalid_argument);
  CHECK_THROWS_AS(apply_kick(rho, pauli_z(), 2), std::invalid_argument);
}

TEST_CASE("run_schedule: empty schedule equals a single segment") {
  const ModelBundle b = small_rabi(0.02, 0.01, 0.2, 6);
  auto r = rng(88);
  const TensorOperator rho = ddmem::testing::random_density({2, 7}, r);
  const SegmentPlan plan = SegmentPlan::for_span(1.5, omega_max(b.params));
  KickSchedule empty;
  empty.tau = 1.5;
  const Trajectory traj = run_schedule(rho, b.generator, empty, plan);
  const TensorOperator direct = propagate_segment(rho, b.generator, plan);
  REQUIRE(traj.states.size() == 2);
  CHECK((traj.states.back() - direct).max_norm() < 1e-15);
}

TEST_CASE("run_schedule: decoupled limit, kicks only flip phases") {
  // g = 0: sigma_z kicks commute with the full generator, so the reduced
  // system state matches the uncontrolled one at cycle end
  const ModelBundle b = small_rabi(0.0, 0.005, 0.3, 6);
  TensorOperator plus({2});
  plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
  const TensorOperator rho0 = kron(plus, thermal_state(0.3, 6));

  const double tau = 1.0;
  const SegmentPlan plan = SegmentPlan::for_span(tau, omega_max(b.params));
  const Trajectory traj =
      run_schedule(rho0, b.generator, parity_cycle_schedule(tau, 1), plan);

  SegmentPlan full;
  full.tau = 2 * tau;
  full.steps = 2 * plan.steps;
  full.omega_max = plan.omega_max;
  const TensorOperator free_run = propagate_segment(rho0, b.generator, full);
  const TensorOperator red_kicked = partial_trace(traj.states.back(), {0});
  const TensorOperator red_free = partial_trace(free_run, {0});
  CHECK(trace_distance(red_kicked, red_free) < 1e-10);
}

TEST_CASE("run_schedule: trajectory bookkeeping and state health") {
  const ModelBundle b = small_rabi(0.05, 0.002, 0.1, 9);
  TensorOperator exc({2});
  exc(0, 0) = 1.0;
  const TensorOperator rho0 = kron(exc, thermal_state(0.1, 9));
  const double tau = 0.8;
  const SegmentPlan plan = SegmentPlan::for_span(tau, omega_max(b.params));
  const Trajectory traj =
      run_schedule(rho0, b.generator, parity_cycle_schedule(tau, 3), plan);
  REQUIRE(traj.times.size() == 7);
  CHECK(traj.times.back() == doctest::Approx(6 * tau).epsilon(1e-12));
  CHECK(traj.max_trace_drift <= tol::segment_trace_drift);
  for (const auto& st : traj.states) {
    CHECK(std::abs(st.trace() - 1.0) <= tol::trajectory_trace);
    CHECK(hermitian_eig(st).eigenvalues.front() >= tol::trajectory_eig_floor);
  }
  // misordered / inconsistent plan spacing
  SegmentPlan wrong = plan;
  wrong.tau = tau * 0.5;
  wrong.steps = std::max(1, plan.steps / 2);
  CHECK_THROWS_AS(
      run_schedule(rho0, b.generator, parity_cycle_schedule(tau, 1), wrong),
      config_error);
}

TEST_CASE("run_schedule: step-halving moves distances by less than 1e-6") {
  const ModelBundle b = small_rabi(0.01, 0.001, 0.1, 9);
  TensorOperator plus({2});
  plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
  const TensorOperator rho0 = kron(plus, thermal_state(0.1, 9));
  const double tau = 10.0;  // g tau = 0.1

  const SegmentPlan p1 = SegmentPlan::for_span(tau, omega_max(b.params));
  SegmentPlan p2 = p1;
  p2.steps *= 2;
  const Trajectory t1 = run_schedule(rho0, b.generator, parity_cycle_schedule(tau, 1), p1);
  const Trajectory t2 = run_schedule(rho0, b.generator, parity_cycle_schedule(tau, 1), p2);
  const double d = trace_distance(partial_trace(t1.states.back(), {0}),
                                  partial_trace(t2.states.back(), {0}));
  CHECK(d < 1e-6);
}

TEST_CASE("propagate_segment: matches the dense-Liouvillian exponential oracle") {
  // small cutoff keeps the superoperator cheap; independent route end to end
  const ModelBundle b = small_rabi(0.05, 0.01, 0.2, 4);
  auto r = rng(89);
  const TensorOperator rho = ddmem::testing::random_density({2, 5}, r);
  const double tau = 3.0;
  const SegmentPlan plan = SegmentPlan::for_span(tau, omega_max(b.params));
  const TensorOperator got = propagate_segment(rho, b.generator, plan);

  const TensorOperator sop = oracle::liouvillian_matrix(b.generator);
  const TensorOperator esop = oracle::expm_taylor(sop * cxd(tau));
  const TensorOperator want = oracle::superop_apply(esop, rho);
  CHECK((got - want).max_norm() < 1e-8);
}
