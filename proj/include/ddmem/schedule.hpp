#pragma once

#include <vector>

#include "ddmem/tensor.hpp"

// Dynamical-decoupling kick schedules: parity cycles and group-based
// constructions. Kicks are instantaneous system unitaries at times j*tau.

namespace ddmem {

struct KickSchedule {
  double tau = 0.0;                    // inter-kick spacing
  std::vector<TensorOperator> kicks;   // K_1 ... K_n (system unitaries)
  int cycles = 1;                      // k
  int kicks_per_cycle = 0;             // n_g; kicks.size() == cycles * kicks_per_cycle

  int total_kicks() const { return static_cast<int>(kicks.size()); }
  double final_time() const { return tau * total_kicks(); }
};

struct DecouplingGroup {
  std::vector<TensorOperator> elements;  // g_1 ... g_{n_g}, g_1 = identity
};

// Two sigma_z kicks per cycle at spacing tau, repeated k times.
KickSchedule parity_cycle_schedule(double tau, int k);

// K_j = g_{j+1} g_j' for j < n_g, K_{n_g} = g_{n_g}'; repeated k times.
KickSchedule group_schedule(const DecouplingGroup& group, double tau, int k);

// (1/n_g) sum_j (g_j' x I) h0 (g_j x I), group acting on the system factor.
TensorOperator average_hamiltonian(const DecouplingGroup& group, const TensorOperator& h0);

struct ScheduleReport {
  double product_residual;      // cumulative kick product vs identity (phase-free)
  double periodicity_residual;  // max ||K_{j+n_g} - K_j||_max
  bool conforming;              // both within tolerance
};

ScheduleReport validate_schedule(const KickSchedule& s);

}  // namespace ddmem
