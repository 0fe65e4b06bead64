#include "ddmem/choi.hpp"

#include <cmath>
#include <stdexcept>

#include "ddmem/tolerances.hpp"

namespace ddmem {

bool ChoiCheck::ok() const {
  return hermiticity <= tol::choi_hermiticity && trace_deviation <= tol::choi_trace &&
         min_eigenvalue >= tol::choi_psd_floor && tp_residual <= tol::choi_tp;
}

ChoiCheck choi_check(const ChoiMatrix& c) {
  ChoiCheck r;
  r.hermiticity = c.data.hermiticity_residual();
  r.trace_deviation = std::abs(c.data.trace() - 1.0);
  r.min_eigenvalue = hermitian_eig(c.data.hermitized()).eigenvalues.front();
  TensorOperator anc = partial_trace(c.data, {0});  // trace out the system output
  anc -= TensorOperator::identity({2}) * cxd(0.5);
  r.tp_residual = anc.max_norm();
  return r;
}

TensorOperator max_entangled_pair() {
  TensorOperator psi({2, 2});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) psi(2 * i + i, 2 * j + j) = 0.5;
  return psi;
}

QubitSuperop QubitSuperop::identity_op() {
  QubitSuperop s;
  for (int i = 0; i < 4; ++i) s.m[i * 4 + i] = 1.0;
  return s;
}

QubitSuperop QubitSuperop::from_choi(const ChoiMatrix& c) {
  QubitSuperop s;
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          s.m[(k * 2 + l) * 4 + (i * 2 + j)] = 2.0 * c.data(2 * i + k, 2 * j + l);
  return s;
}

QubitSuperop QubitSuperop::kick_conjugation(const TensorOperator& k) {
  QubitSuperop s;
  // vec(K rho K') = (K kron conj(K)) vec(rho)
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          s.m[(a * 2 + b) * 4 + (i * 2 + j)] = k(a, i) * std::conj(k(b, j));
  return s;
}

ChoiMatrix QubitSuperop::to_choi(double span, std::string desc) const {
  ChoiMatrix c;
  c.data = TensorOperator({2, 2});
  c.span = span;
  c.schedule_desc = std::move(desc);
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          c.data(2 * i + k, 2 * j + l) = 0.5 * m[(k * 2 + l) * 4 + (i * 2 + j)];
  return c;
}

QubitSuperop QubitSuperop::compose(const QubitSuperop& inner) const {
  QubitSuperop r;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      const cxd v = m[i * 4 + k];
      if (v == cxd(0.0, 0.0)) continue;
      for (int j = 0; j < 4; ++j) r.m[i * 4 + j] += v * inner.m[k * 4 + j];
    }
  return r;
}

TensorOperator QubitSuperop::apply(const TensorOperator& rho) const {
  if (rho.side() != 2) throw std::invalid_argument("QubitSuperop::apply: qubit state expected");
  TensorOperator out({2});
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) {
      cxd s = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          s += m[(k * 2 + l) * 4 + (i * 2 + j)] * rho(i, j);
      out(k, l) = s;
    }
  return out;
}

ChoiPropagator::ChoiPropagator(const ModelBundle& bundle)
    : gen_(bundle.generator), de_(bundle.params.n_max + 1) {
  const TensorOperator rth = thermal_state(bundle.params.nbar, bundle.params.n_max);
  auto block = [&](int i, int j) {
    TensorOperator sys({2});
    sys(i, j) = 0.5;
    return kron(sys, rth);
  };
  b00_ = block(0, 0);
  b01_ = block(0, 1);
  b11_ = block(1, 1);
}

void ChoiPropagator::integrate(double tau, int steps) {
  if (tau == 0.0) return;
  drift_ = std::max(drift_, gen_.integrate(b00_.data().data(), tau, steps, work_));
  gen_.integrate(b01_.data().data(), tau, steps, work_);
  drift_ = std::max(drift_, gen_.integrate(b11_.data().data(), tau, steps, work_));
  t_ += tau;
}

void ChoiPropagator::kick(const TensorOperator& k) {
  b00_ = apply_kick(b00_, k, 0);
  b01_ = apply_kick(b01_, k, 0);
  b11_ = apply_kick(b11_, k, 0);
}

void ChoiPropagator::hermitize() {
  b00_ = b00_.hermitized();
  b11_ = b11_.hermitized();
  // b01 carries the off-diagonal ancilla block; its adjoint block is implicit
}

ChoiMatrix ChoiPropagator::snapshot(double span, std::string desc) const {
  ChoiMatrix c;
  c.data = TensorOperator({2, 2});
  c.span = span;
  c.schedule_desc = std::move(desc);
  auto put = [&](int i, int j, const TensorOperator& blk) {
    const TensorOperator red = partial_trace(blk, {0});
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) c.data(2 * i + k, 2 * j + l) = red(k, l);
  };
  put(0, 0, b00_);
  put(0, 1, b01_);
  put(1, 0, b01_.adjoint());
  put(1, 1, b11_);
  return c;
}

ChoiMatrix choi_uncontrolled(const ModelBundle& bundle, double span, const SegmentPlan& plan) {
  if (span < 0.0) throw std::invalid_argument("choi_uncontrolled: negative span");
  if (span == 0.0) {
    ChoiMatrix c;
    c.data = max_entangled_pair();
    c.span = 0.0;
    c.schedule_desc = "identity";
    return c;
  }
  if (std::abs(plan.tau - span) > 1e-9 * std::max(1.0, span))
    throw config_error("choi_uncontrolled: plan tau must equal span");
  plan.validate();
  ChoiPropagator p(bundle);
  p.integrate(span, plan.steps);
  p.hermitize();
  return p.snapshot(span, "uncontrolled");
}

ChoiMatrix choi_controlled(const ModelBundle& bundle, const KickSchedule& schedule,
                           const SegmentPlan& plan) {
  const ScheduleReport rep = validate_schedule(schedule);
  if (schedule.kicks.empty() || !(schedule.tau > 0.0))
    throw config_error("choi_controlled: empty or zero-spacing schedule");
  if (std::abs(plan.tau - schedule.tau) > 1e-9 * std::max(1.0, schedule.tau))
    throw config_error("choi_controlled: plan tau must equal schedule spacing");
  plan.validate();
  (void)rep;  // non-conforming schedules still run; the measures record it

  ChoiPropagator p(bundle);
  for (const auto& k : schedule.kicks) {
    p.integrate(schedule.tau, plan.steps);
    p.hermitize();
    p.kick(k);
  }
  return p.snapshot(schedule.final_time(), "controlled");
}

std::vector<ChoiMatrix> choi_trajectory(const ModelBundle& bundle,
                                        const std::vector<double>& times) {
  const double om = omega_max(bundle.params);
  std::vector<ChoiMatrix> out;
  out.reserve(times.size());
  ChoiPropagator p(bundle);
  double t = 0.0;
  for (double target : times) {
    if (target < t - 1e-12) throw std::invalid_argument("choi_trajectory: times must ascend");
    const double dt = target - t;
    if (dt > 1e-12) {
      const SegmentPlan plan = SegmentPlan::for_span(dt, om);
      p.integrate(dt, plan.steps);
      p.hermitize();
      t = target;
    }
    out.push_back(p.snapshot(t, "uncontrolled"));
  }
  return out;
}

QubitSuperop segment_superoperator(const ChoiMatrix& c) { return QubitSuperop::from_choi(c); }

ChoiMatrix compose_erased(const ChoiMatrix& segment, int n) {
  if (n < 1) throw std::invalid_argument("compose_erased: n must be >= 1");
  const QubitSuperop s = QubitSuperop::from_choi(segment);
  QubitSuperop acc = s;
  for (int j = 1; j < n; ++j) acc = s.compose(acc);
  return acc.to_choi(segment.span * n, "erased composition");
}

ChoiMatrix compose_erased_controlled(const ChoiMatrix& segment, const KickSchedule& schedule) {
  if (schedule.kicks.empty())
    throw std::invalid_argument("compose_erased_controlled: empty schedule");
  const QubitSuperop s = QubitSuperop::from_choi(segment);
  QubitSuperop acc = QubitSuperop::identity_op();
  for (const auto& k : schedule.kicks)
    acc = QubitSuperop::kick_conjugation(k).compose(s.compose(acc));
  return acc.to_choi(segment.span * schedule.total_kicks(), "erased controlled composition");
}

TensorOperator apply_choi(const ChoiMatrix& c, const TensorOperator& rho) {
  if (rho.side() != 2) throw std::invalid_argument("apply_choi: qubit state expected");
  const TensorOperator m = kron(rho.transpose(), TensorOperator::identity({2})) * c.data;
  TensorOperator out({2});
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      out(k, l) = 2.0 * (m(0 * 2 + k, 0 * 2 + l) + m(1 * 2 + k, 1 * 2 + l));
  return out;
}

ChoiMatrix target_choi(const ModelBundle& bundle, double t_f) {
  const TensorOperator u = unitary_exp(pauli_z() * cxd(0.5 * bundle.params.omega_s), t_f);
  const TensorOperator iu = kron(qubit_identity(), u);
  ChoiMatrix c;
  TensorOperator d = iu * max_entangled_pair() * iu.adjoint();
  c.data = TensorOperator({2, 2}, std::move(d.data()));
  c.span = t_f;
  c.schedule_desc = "target";
  return c;
}

TensorOperator target_state(const ModelBundle& bundle, double t_f, const TensorOperator& rho0) {
  const TensorOperator u = unitary_exp(pauli_z() * cxd(0.5 * bundle.params.omega_s), t_f);
  return conjugate_by(u, rho0);
}

}  // namespace ddmem
