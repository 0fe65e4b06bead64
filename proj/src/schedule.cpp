#include "ddmem/schedule.hpp"

#include <cmath>
#include <stdexcept>

#include "ddmem/model.hpp"
#include "ddmem/tolerances.hpp"

namespace ddmem {

KickSchedule parity_cycle_schedule(double tau, int k) {
  if (!(tau > 0.0)) throw std::invalid_argument("parity_cycle_schedule: tau must be positive");
  if (k < 1) throw std::invalid_argument("parity_cycle_schedule: k must be >= 1");
  KickSchedule s;
  s.tau = tau;
  s.cycles = k;
  s.kicks_per_cycle = 2;
  s.kicks.assign(static_cast<size_t>(2 * k), pauli_z());
  return s;
}

KickSchedule group_schedule(const DecouplingGroup& group, double tau, int k) {
  if (!(tau > 0.0)) throw std::invalid_argument("group_schedule: tau must be positive");
  if (k < 1) throw std::invalid_argument("group_schedule: k must be >= 1");
  if (group.elements.empty()) throw std::invalid_argument("group_schedule: empty group");
  const int ng = static_cast<int>(group.elements.size());
  const TensorOperator id = TensorOperator::identity(group.elements[0].dims());
  if ((group.elements[0] - id).max_norm() > tol::kick_involution)
    throw std::invalid_argument("group_schedule: g_1 must be the identity");

  KickSchedule s;
  s.tau = tau;
  s.cycles = k;
  s.kicks_per_cycle = ng;
  s.kicks.reserve(static_cast<size_t>(ng) * k);
  std::vector<TensorOperator> cycle;
  for (int j = 0; j < ng; ++j) {
    if (j + 1 < ng)
      cycle.push_back(group.elements[j + 1] * group.elements[j].adjoint());
    else
      cycle.push_back(group.elements[ng - 1].adjoint());
  }
  for (int c = 0; c < k; ++c)
    for (const auto& kk : cycle) s.kicks.push_back(kk);
  return s;
}

TensorOperator average_hamiltonian(const DecouplingGroup& group, const TensorOperator& h0) {
  if (group.elements.empty())
    throw std::invalid_argument("average_hamiltonian: empty group");
  if (h0.dims().size() < 1 || h0.dims()[0] != group.elements[0].side())
    throw std::invalid_argument("average_hamiltonian: system factor dimension mismatch");
  // identity on the non-system factors
  std::vector<int> rest(h0.dims().begin() + 1, h0.dims().end());
  TensorOperator acc(h0.dims());
  for (const auto& gj : group.elements) {
    TensorOperator gf = rest.empty() ? gj : kron(gj, TensorOperator::identity(rest));
    acc += gf.adjoint() * h0 * gf;
  }
  return acc * cxd(1.0 / static_cast<double>(group.elements.size()));
}

ScheduleReport validate_schedule(const KickSchedule& s) {
  ScheduleReport r{0.0, 0.0, false};
  if (s.kicks.empty()) {
    r.conforming = false;
    return r;
  }
  TensorOperator prod = TensorOperator::identity(s.kicks[0].dims());
  for (const auto& k : s.kicks) prod = k * prod;  // K_n ... K_1
  // compare to identity up to a global phase
  const cxd tr = prod.trace();
  const cxd phase = (std::abs(tr) > 1e-14) ? tr / std::abs(tr) : cxd(1.0, 0.0);
  r.product_residual = (prod - TensorOperator::identity(prod.dims()) * phase).max_norm();

  if (s.cycles > 1 && s.kicks_per_cycle > 0) {
    const int ng = s.kicks_per_cycle;
    for (size_t j = 0; j + ng < s.kicks.size(); ++j) {
      const double d = (s.kicks[j + ng] - s.kicks[j]).max_norm();
      if (d > r.periodicity_residual) r.periodicity_residual = d;
    }
  }
  r.conforming = r.product_residual <= tol::schedule_product &&
                 r.periodicity_residual <= tol::schedule_periodicity;
  return r;
}

}  // namespace ddmem
