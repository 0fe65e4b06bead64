#include "ddmem/propagator.hpp"

#include <cmath>
#include <cstring>

#include "ddmem/tolerances.hpp"

namespace ddmem {

SegmentPlan SegmentPlan::for_span(double tau, double omega_max) {
  if (tau < 0.0) throw config_error("SegmentPlan: negative tau");
  SegmentPlan p;
  p.tau = tau;
  p.omega_max = omega_max;
  if (tau == 0.0 || omega_max <= 0.0) {
    p.steps = 1;
    return p;
  }
  p.steps = std::max(1, static_cast<int>(std::ceil(tau * omega_max / tol::step_factor)));
  return p;
}

void SegmentPlan::validate() const {
  if (steps < 1) throw config_error("SegmentPlan: steps must be >= 1");
  if (tau < 0.0) throw config_error("SegmentPlan: negative tau");
  if (omega_max > 0.0 && tau > 0.0) {
    const double h = tau / steps;
    if (h > tol::step_factor / omega_max * (1.0 + 1e-12))
      throw config_error("SegmentPlan: step size exceeds 0.02/omega_max rule");
  }
}

CompiledGenerator::CompiledGenerator(const LindbladGenerator& gen) {
  n_ = gen.hamiltonian.side();
  dims_ = gen.hamiltonian.dims();

  // A = -iH - 1/2 sum_k rate_k L_k' L_k
  TensorOperator a = gen.hamiltonian * cxd(0.0, -1.0);
  for (const auto& [rate, L] : gen.jumps) {
    if (rate == 0.0) continue;
    a -= (L.adjoint() * L) * cxd(0.5 * rate);
  }
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (a(i, j) != cxd(0.0, 0.0)) a_.push_back({i, j, a(i, j)});

  for (const auto& [rate, L] : gen.jumps) {
    if (rate == 0.0) continue;
    std::vector<Entry> b;
    const double s = std::sqrt(rate);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (L(i, j) != cxd(0.0, 0.0)) b.push_back({i, j, s * L(i, j)});
    jumps_.push_back(std::move(b));
  }
}

void CompiledGenerator::rhs(const cxd* rho, cxd* out, cxd* scratch) const {
  const int n = n_;
  std::memset(out, 0, sizeof(cxd) * n * n);
  // A rho: row_r(out) += v * row_c(rho)
  for (const auto& e : a_) {
    const cxd v = e.v;
    const cxd* src = rho + static_cast<size_t>(e.c) * n;
    cxd* dst = out + static_cast<size_t>(e.r) * n;
    for (int j = 0; j < n; ++j) dst[j] += v * src[j];
  }
  // rho A': out[i][r] += conj(v) * rho[i][c]
  for (int i = 0; i < n; ++i) {
    const cxd* ri = rho + static_cast<size_t>(i) * n;
    cxd* oi = out + static_cast<size_t>(i) * n;
    for (const auto& e : a_) oi[e.r] += std::conj(e.v) * ri[e.c];
  }
  // jump sandwiches
  for (const auto& b : jumps_) {
    std::memset(scratch, 0, sizeof(cxd) * n * n);
    for (const auto& e : b) {
      const cxd v = e.v;
      const cxd* src = rho + static_cast<size_t>(e.c) * n;
      cxd* dst = scratch + static_cast<size_t>(e.r) * n;
      for (int j = 0; j < n; ++j) dst[j] += v * src[j];
    }
    for (int i = 0; i < n; ++i) {
      const cxd* ti = scratch + static_cast<size_t>(i) * n;
      cxd* oi = out + static_cast<size_t>(i) * n;
      for (const auto& e : b) oi[e.r] += std::conj(e.v) * ti[e.c];
    }
  }
}

void CompiledGenerator::rk4_step(cxd* rho, double h, std::vector<cxd>& work) const {
  const size_t m = static_cast<size_t>(n_) * n_;
  work.resize(6 * m);
  cxd* k1 = work.data();
  cxd* k2 = k1 + m;
  cxd* k3 = k2 + m;
  cxd* k4 = k3 + m;
  cxd* tmp = k4 + m;
  cxd* scratch = tmp + m;

  rhs(rho, k1, scratch);
  for (size_t i = 0; i < m; ++i) tmp[i] = rho[i] + 0.5 * h * k1[i];
  rhs(tmp, k2, scratch);
  for (size_t i = 0; i < m; ++i) tmp[i] = rho[i] + 0.5 * h * k2[i];
  rhs(tmp, k3, scratch);
  for (size_t i = 0; i < m; ++i) tmp[i] = rho[i] + h * k3[i];
  rhs(tmp, k4, scratch);
  const double h6 = h / 6.0;
  for (size_t i = 0; i < m; ++i)
    rho[i] += h6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

double CompiledGenerator::integrate(cxd* rho, double tau, int steps,
                                    std::vector<cxd>& work) const {
  if (tau == 0.0) return 0.0;
  const double h = tau / steps;
  double tr0 = 0.0;
  for (int i = 0; i < n_; ++i) tr0 += rho[static_cast<size_t>(i) * n_ + i].real();
  for (int s = 0; s < steps; ++s) rk4_step(rho, h, work);
  double tr1 = 0.0;
  for (int i = 0; i < n_; ++i) tr1 += rho[static_cast<size_t>(i) * n_ + i].real();
  return std::abs(tr1 - tr0);
}

TensorOperator apply_kick(const TensorOperator& rho, const TensorOperator& kick, int factor) {
  const auto& dims = rho.dims();
  if (factor < 0 || factor >= static_cast<int>(dims.size()))
    throw std::invalid_argument("apply_kick: factor index out of range");
  if (kick.side() != dims[factor])
    throw std::invalid_argument("apply_kick: kick dimension mismatch");

  TensorOperator full = kick;
  if (factor > 0) {
    std::vector<int> left(dims.begin(), dims.begin() + factor);
    full = kron(TensorOperator::identity(left), full);
  }
  if (factor + 1 < static_cast<int>(dims.size())) {
    std::vector<int> right(dims.begin() + factor + 1, dims.end());
    full = kron(full, TensorOperator::identity(right));
  }
  TensorOperator out = full * rho * full.adjoint();
  return TensorOperator(dims, std::move(out.data()));
}

TensorOperator propagate_segment(const TensorOperator& rho, const LindbladGenerator& gen,
                                 const SegmentPlan& plan) {
  if (rho.dims() != gen.hamiltonian.dims())
    throw std::invalid_argument("propagate_segment: dimension mismatch");
  plan.validate();
  if (plan.tau == 0.0) return rho;

  CompiledGenerator cg(gen);
  TensorOperator out = rho;
  std::vector<cxd> work;
  cg.integrate(out.data().data(), plan.tau, plan.steps, work);
  return out.hermitized();
}

Trajectory run_schedule(const TensorOperator& rho0, const LindbladGenerator& gen,
                        const KickSchedule& schedule, const SegmentPlan& plan,
                        int system_factor) {
  if (rho0.dims() != gen.hamiltonian.dims())
    throw std::invalid_argument("run_schedule: dimension mismatch");
  if (schedule.tau < 0.0) throw config_error("run_schedule: negative schedule tau");
  if (!schedule.kicks.empty() && schedule.tau == 0.0)
    throw config_error("run_schedule: zero spacing with nonempty kick list");
  if (std::abs(plan.tau - schedule.tau) > 1e-12 * std::max(1.0, schedule.tau) &&
      !schedule.kicks.empty())
    throw config_error("run_schedule: plan tau does not match schedule spacing");
  plan.validate();

  CompiledGenerator cg(gen);
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(rho0);

  TensorOperator state = rho0;
  std::vector<cxd> work;

  if (schedule.kicks.empty()) {
    const double drift = cg.integrate(state.data().data(), plan.tau, plan.steps, work);
    traj.max_trace_drift = drift;
    state = state.hermitized();
    traj.times.push_back(plan.tau);
    traj.states.push_back(state);
    return traj;
  }

  for (int j = 0; j < schedule.total_kicks(); ++j) {
    const double drift = cg.integrate(state.data().data(), schedule.tau, plan.steps, work);
    traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
    state = state.hermitized();
    state = apply_kick(state, schedule.kicks[j], system_factor);
    traj.times.push_back(schedule.tau * (j + 1));
    traj.states.push_back(state);
  }
  return traj;
}

}  // namespace ddmem
