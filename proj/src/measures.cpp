#include "ddmem/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "ddmem/tolerances.hpp"

namespace ddmem {

PointMaps compute_point_maps(const ModelBundle& bundle, const KickSchedule& schedule,
                             const SegmentPlan& plan) {
  if (schedule.kicks.empty())
    throw std::invalid_argument("compute_point_maps: schedule must contain kicks");
  PointMaps pm;
  pm.schedule_conforming = validate_schedule(schedule).conforming;
  pm.controlled = choi_controlled(bundle, schedule, plan);

  const int n = schedule.total_kicks();
  // single long propagation at the same step size as the segment plan
  SegmentPlan full;
  full.tau = schedule.tau * n;
  full.steps = plan.steps * n;
  full.omega_max = plan.omega_max;
  pm.uncontrolled = choi_uncontrolled(bundle, full.tau, full);

  pm.segment = choi_uncontrolled(bundle, schedule.tau, plan);
  pm.erased_uncontrolled = compose_erased(pm.segment, n);
  pm.erased_controlled = compose_erased_controlled(pm.segment, schedule);
  return pm;
}

MemoryStrengths memory_strength_map(const PointMaps& pm) {
  MemoryStrengths m;
  m.n_tilde = trace_distance(pm.controlled.data, pm.erased_controlled.data);
  m.n_bar = trace_distance(pm.uncontrolled.data, pm.erased_uncontrolled.data);
  m.erased_coincidence =
      trace_distance(pm.erased_controlled.data.hermitized(), pm.erased_uncontrolled.data.hermitized());
  return m;
}

MemoryStrengths memory_strength_map(const ModelBundle& bundle, const KickSchedule& schedule,
                                    const SegmentPlan& plan) {
  return memory_strength_map(compute_point_maps(bundle, schedule, plan));
}

std::pair<double, double> memory_strength_state(const PointMaps& pm, const TensorOperator& rho0) {
  const TensorOperator rc = apply_choi(pm.controlled, rho0);
  const TensorOperator rcp = apply_choi(pm.erased_controlled, rho0);
  const TensorOperator ru = apply_choi(pm.uncontrolled, rho0);
  const TensorOperator rup = apply_choi(pm.erased_uncontrolled, rho0);
  return {trace_distance(rc, rcp), trace_distance(ru, rup)};
}

std::pair<double, double> memory_strength_state(const ModelBundle& bundle,
                                                const KickSchedule& schedule,
                                                const SegmentPlan& plan,
                                                const TensorOperator& rho0) {
  return memory_strength_state(compute_point_maps(bundle, schedule, plan), rho0);
}

ControlEffect effect_of_control(const ModelBundle& bundle, const KickSchedule& schedule,
                                const SegmentPlan& plan,
                                const std::optional<TensorOperator>& rho0) {
  const PointMaps pm = compute_point_maps(bundle, schedule, plan);
  ControlEffect e;
  e.e_map = trace_distance(pm.controlled.data, pm.uncontrolled.data);
  if (rho0)
    e.e_state = trace_distance(apply_choi(pm.controlled, *rho0), apply_choi(pm.uncontrolled, *rho0));
  return e;
}

MeasureReport bounds_report(const MeasureInputs& in) {
  MeasureReport r;
  r.n_tilde = in.n_tilde;
  r.n_bar = in.n_bar;
  r.effect = in.effect;
  r.p_bar = in.p_bar;
  r.p_tilde = in.p_tilde;
  r.e_lb = std::abs(in.n_tilde - in.n_bar);
  r.e_ub = in.n_tilde + in.n_bar;
  r.commutation_residual = in.commutation_residual;
  r.bound_violation =
      in.effect > r.e_ub + tol::bound_slack || in.effect < r.e_lb - tol::bound_slack;
  return r;
}

double commutation_residual(const ChoiMatrix& segment, const TensorOperator& kick) {
  const QubitSuperop s = segment_superoperator(segment);
  const QubitSuperop k = QubitSuperop::kick_conjugation(kick);
  const ChoiMatrix ks = k.compose(s).to_choi(segment.span);
  const ChoiMatrix sk = s.compose(k).to_choi(segment.span);
  return trace_distance(ks.data.hermitized(), sk.data.hermitized());
}

double commutation_residual(const ModelBundle& bundle, double span, const SegmentPlan& plan,
                            const TensorOperator& kick) {
  return commutation_residual(choi_uncontrolled(bundle, span, plan), kick);
}

double commutation_residual(const ModelBundle& bundle, double span, const SegmentPlan& plan) {
  return commutation_residual(bundle, span, plan, bundle.kick);
}

double performance(const ChoiMatrix& map, const ChoiMatrix& target) {
  return 1.0 - trace_distance(map.data, target.data);
}

double performance(const TensorOperator& state, const TensorOperator& target) {
  return 1.0 - trace_distance(state, target);
}

double max_memory_over_grid(const ModelBundle& bundle, const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("max_memory_over_grid: empty grid");
  for (size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] < 0.0) throw std::invalid_argument("max_memory_over_grid: negative time");
    if (i > 0 && t_grid[i] < t_grid[i - 1])
      throw std::invalid_argument("max_memory_over_grid: grid must ascend");
  }

  // Chois needed at all grid times and all pairwise gaps (stationarity turns
  // T(t2,t1) into T(t2-t1,0)).
  std::vector<double> needed;
  for (double t : t_grid) needed.push_back(t);
  for (size_t i = 0; i < t_grid.size(); ++i)
    for (size_t j = i; j < t_grid.size(); ++j) needed.push_back(t_grid[j] - t_grid[i]);
  std::sort(needed.begin(), needed.end());
  needed.erase(std::unique(needed.begin(), needed.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               needed.end());

  const std::vector<ChoiMatrix> snaps = choi_trajectory(bundle, needed);
  auto lookup = [&](double t) -> const ChoiMatrix& {
    const auto it = std::lower_bound(needed.begin(), needed.end(), t - 1e-12);
    return snaps[static_cast<size_t>(it - needed.begin())];
  };

  double best = 0.0;
  for (size_t i = 0; i < t_grid.size(); ++i) {
    const double t1 = t_grid[i];
    const QubitSuperop s1 = segment_superoperator(lookup(t1));
    for (size_t j = i; j < t_grid.size(); ++j) {
      const double t2 = t_grid[j];
      const QubitSuperop s21 = segment_superoperator(lookup(t2 - t1));
      const ChoiMatrix split = s21.compose(s1).to_choi(t2);
      const double d = trace_distance(lookup(t2).data, split.data.hermitized());
      best = std::max(best, d);
    }
  }
  return best;
}

}  // namespace ddmem
