#pragma once

#include <array>
#include <string>
#include <vector>

#include "ddmem/model.hpp"
#include "ddmem/propagator.hpp"
#include "ddmem/schedule.hpp"
#include "ddmem/tensor.hpp"

// Choi-Jamiolkowski matrices of the controlled/uncontrolled qubit dynamical
// maps. Convention: |psi_AS> is the normalized maximally entangled pair, so
// every Choi matrix has unit trace and all distances land in [0,1]. Index
// ordering is ancilla (x) system: entry (2i+k, 2j+l).

namespace ddmem {

struct ChoiMatrix {
  TensorOperator data;  // dims [2,2]
  double span = 0.0;
  std::string schedule_desc;
};

struct ChoiCheck {
  double hermiticity;
  double trace_deviation;
  double min_eigenvalue;
  double tp_residual;  // ancilla reduction vs I/2
  bool ok() const;
};

ChoiCheck choi_check(const ChoiMatrix& c);

// |psi_AS><psi_AS| on dims [2,2]
TensorOperator max_entangled_pair();

// 4x4 linear action on row-major vectorized qubit density matrices.
struct QubitSuperop {
  std::array<cxd, 16> m{};  // [(k*2+l)*4 + (i*2+j)]

  static QubitSuperop identity_op();
  static QubitSuperop from_choi(const ChoiMatrix& c);
  static QubitSuperop kick_conjugation(const TensorOperator& k);  // rho -> K rho K'
  ChoiMatrix to_choi(double span = 0.0, std::string desc = {}) const;
  QubitSuperop compose(const QubitSuperop& inner) const;  // this after inner
  TensorOperator apply(const TensorOperator& rho) const;
};

// Evolves the ancilla (x) system (x) environment state
// |psi_AS><psi_AS| (x) rho_th blockwise; the generator acts trivially on the
// ancilla so the three independent ancilla blocks are propagated on the
// system (x) environment space.
class ChoiPropagator {
 public:
  explicit ChoiPropagator(const ModelBundle& bundle);

  void integrate(double tau, int steps);      // one uncontrolled segment
  void kick(const TensorOperator& k);         // instantaneous system unitary
  void hermitize();                           // segment-end cleanup
  ChoiMatrix snapshot(double span, std::string desc = {}) const;
  double elapsed() const { return t_; }
  double max_trace_drift() const { return drift_; }

 private:
  CompiledGenerator gen_;
  int de_;
  TensorOperator b00_, b01_, b11_;  // ancilla blocks, dims [2, n_max+1]
  std::vector<cxd> work_;
  double t_ = 0.0;
  double drift_ = 0.0;
};

// Choi of the uncontrolled map over [0, span]; plan.tau must equal span.
ChoiMatrix choi_uncontrolled(const ModelBundle& bundle, double span, const SegmentPlan& plan);

// Choi of the controlled map: kicks interleaved after each segment.
ChoiMatrix choi_controlled(const ModelBundle& bundle, const KickSchedule& schedule,
                           const SegmentPlan& plan);

// Uncontrolled Chois at the given ascending times from a single trajectory.
std::vector<ChoiMatrix> choi_trajectory(const ModelBundle& bundle,
                                        const std::vector<double>& times);

QubitSuperop segment_superoperator(const ChoiMatrix& c);

// Choi of the erased composition: the segment map applied n times with the
// environment refreshed at every boundary.
ChoiMatrix compose_erased(const ChoiMatrix& segment, int n);

// Same with the schedule's kicks interleaved.
ChoiMatrix compose_erased_controlled(const ChoiMatrix& segment, const KickSchedule& schedule);

// Lambda(rho) = d (Tr x I)[(rho^T x I) rho_Lambda], d = 2.
TensorOperator apply_choi(const ChoiMatrix& c, const TensorOperator& rho);

// Unitary target generated by H_S alone.
ChoiMatrix target_choi(const ModelBundle& bundle, double t_f);
TensorOperator target_state(const ModelBundle& bundle, double t_f, const TensorOperator& rho0);

}  // namespace ddmem
