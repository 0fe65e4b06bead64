#pragma once

#include <optional>
#include <utility>

#include "ddmem/choi.hpp"
#include "ddmem/model.hpp"
#include "ddmem/propagator.hpp"
#include "ddmem/schedule.hpp"

// Memory-effect strengths, effect of control, performance, bound checks and
// the kick/map commutation residual, all at the Choi-matrix level.

namespace ddmem {

// All four maps of one decoupling experiment: the full controlled and
// uncontrolled maps over [0, n tau] and the two erased compositions built
// from the single-segment map.
struct PointMaps {
  ChoiMatrix controlled;        // T~(n tau, 0)
  ChoiMatrix uncontrolled;      // T-(n tau, 0), single long propagation
  ChoiMatrix segment;           // T-(tau, 0)
  ChoiMatrix erased_controlled;
  ChoiMatrix erased_uncontrolled;
  bool schedule_conforming = false;
};

PointMaps compute_point_maps(const ModelBundle& bundle, const KickSchedule& schedule,
                             const SegmentPlan& plan);

struct MemoryStrengths {
  double n_tilde;
  double n_bar;
  double erased_coincidence;  // distance between the two erased compositions
};

MemoryStrengths memory_strength_map(const ModelBundle& bundle, const KickSchedule& schedule,
                                    const SegmentPlan& plan);
MemoryStrengths memory_strength_map(const PointMaps& maps);

std::pair<double, double> memory_strength_state(const ModelBundle& bundle,
                                                const KickSchedule& schedule,
                                                const SegmentPlan& plan,
                                                const TensorOperator& rho0);
std::pair<double, double> memory_strength_state(const PointMaps& maps,
                                                const TensorOperator& rho0);

struct ControlEffect {
  double e_map;
  std::optional<double> e_state;
};

ControlEffect effect_of_control(const ModelBundle& bundle, const KickSchedule& schedule,
                                const SegmentPlan& plan,
                                const std::optional<TensorOperator>& rho0 = std::nullopt);

struct MeasureInputs {
  double n_tilde = 0.0;
  double n_bar = 0.0;
  double effect = 0.0;
  double p_bar = 0.0;
  double p_tilde = 0.0;
  double commutation_residual = 0.0;
};

struct MeasureReport {
  double n_tilde, n_bar, effect, e_ub, e_lb, p_bar, p_tilde;
  double commutation_residual;
  bool bound_violation;  // diagnostic, not an error
};

MeasureReport bounds_report(const MeasureInputs& in);

// D between the Chois of K T-(span) and T-(span) K; kick defaults to the
// bundle's parity kick.
double commutation_residual(const ModelBundle& bundle, double span, const SegmentPlan& plan);
double commutation_residual(const ModelBundle& bundle, double span, const SegmentPlan& plan,
                            const TensorOperator& kick);
double commutation_residual(const ChoiMatrix& segment, const TensorOperator& kick);

// P = 1 - D(map, target)
double performance(const ChoiMatrix& map, const ChoiMatrix& target);
double performance(const TensorOperator& state, const TensorOperator& target);

// max over ordered grid pairs (t1 <= t2) of the two-time measure
// D[rho_T(t2,0), rho_T(t2,t1)T(t1,0)] for the uncontrolled dynamics.
double max_memory_over_grid(const ModelBundle& bundle, const std::vector<double>& t_grid);

}  // namespace ddmem
