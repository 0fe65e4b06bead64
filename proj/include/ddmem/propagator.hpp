#pragma once

#include <stdexcept>
#include <vector>

#include "ddmem/model.hpp"
#include "ddmem/schedule.hpp"
#include "ddmem/tensor.hpp"

// Fixed-step RK4 integration of the Lindblad equation over timed segments,
// with instantaneous kicks applied between segments.

namespace ddmem {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SegmentPlan {
  double tau = 0.0;
  int steps = 1;
  double omega_max = 0.0;  // 0 = unchecked

  double step_size() const { return steps > 0 ? tau / steps : 0.0; }
  // steps = ceil(tau * omega_max / step_factor), at least 1
  static SegmentPlan for_span(double tau, double omega_max);
  void validate() const;  // throws config_error when h exceeds the rule
};

struct Trajectory {
  std::vector<double> times;            // ascending, starts at 0
  std::vector<TensorOperator> states;   // boundary states, post-kick
  double max_trace_drift = 0.0;
};

// Lindblad generator compressed to nonzero-entry lists for the RK4 hot loop.
// Storage stays dense everywhere else; this is an application-speed detail.
class CompiledGenerator {
 public:
  explicit CompiledGenerator(const LindbladGenerator& gen);

  int side() const { return n_; }
  const std::vector<int>& dims() const { return dims_; }

  // out = A rho + rho A' + sum_k B_k rho B_k'  (A = -iH - 1/2 sum B'B)
  void rhs(const cxd* rho, cxd* out, cxd* scratch) const;

  // one classical RK4 step of size h, in place
  void rk4_step(cxd* rho, double h, std::vector<cxd>& work) const;

  // integrate a full segment in place; returns trace drift
  double integrate(cxd* rho, double tau, int steps, std::vector<cxd>& work) const;

 private:
  struct Entry {
    int r, c;
    cxd v;
  };
  int n_ = 0;
  std::vector<int> dims_;
  std::vector<Entry> a_;                      // effective Hamiltonian part
  std::vector<std::vector<Entry>> jumps_;     // sqrt(rate) * L per jump
};

// Unitary conjugation on one tensor factor, rho -> (..I x K x I..) rho (...)'.
TensorOperator apply_kick(const TensorOperator& rho, const TensorOperator& kick, int factor);

// RK4 over [0, tau]; result Hermitized at segment end.
TensorOperator propagate_segment(const TensorOperator& rho, const LindbladGenerator& gen,
                                 const SegmentPlan& plan);

// Alternates segments and kicks; kicks act on `system_factor` of rho0's dims.
Trajectory run_schedule(const TensorOperator& rho0, const LindbladGenerator& gen,
                        const KickSchedule& schedule, const SegmentPlan& plan,
                        int system_factor = 0);

}  // namespace ddmem
