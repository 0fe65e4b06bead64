#include "ddmem/model.hpp"

#include <cmath>
#include <stdexcept>

#include "ddmem/tolerances.hpp"

namespace ddmem {

TensorOperator pauli_x() {
  TensorOperator t({2});
  t(0, 1) = 1.0;
  t(1, 0) = 1.0;
  return t;
}

TensorOperator pauli_y() {
  TensorOperator t({2});
  t(0, 1) = cxd(0.0, -1.0);
  t(1, 0) = cxd(0.0, 1.0);
  return t;
}

TensorOperator pauli_z() {
  TensorOperator t({2});
  t(0, 0) = 1.0;
  t(1, 1) = -1.0;
  return t;
}

TensorOperator sigma_plus() {
  TensorOperator t({2});
  t(0, 1) = 1.0;
  return t;
}

TensorOperator sigma_minus() {
  TensorOperator t({2});
  t(1, 0) = 1.0;
  return t;
}

TensorOperator qubit_identity() { return TensorOperator::identity({2}); }

TensorOperator annihilation(int n_max) {
  if (n_max < 1) throw std::invalid_argument("annihilation: n_max must be >= 1");
  TensorOperator a({n_max + 1});
  for (int n = 0; n < n_max; ++n) a(n, n + 1) = std::sqrt(static_cast<double>(n + 1));
  return a;
}

int truncation_floor(double nbar) {
  return static_cast<int>(std::ceil(4.0 * nbar + 8.0));
}

double omega_max(const RabiParams& p) {
  return p.omega_s + p.omega_e + p.gamma * (p.nbar + 1.0) * p.n_max;
}

void validate(const RabiParams& p) {
  if (!(p.omega_s > 0.0)) throw std::invalid_argument("RabiParams: omega_s must be positive");
  if (!(p.omega_e > 0.0)) throw std::invalid_argument("RabiParams: omega_e must be positive");
  if (p.g < 0.0) throw std::invalid_argument("RabiParams: g must be nonnegative");
  if (p.gamma < 0.0) throw std::invalid_argument("RabiParams: gamma must be nonnegative");
  if (p.nbar < 0.0) throw std::invalid_argument("RabiParams: nbar must be nonnegative");
  if (p.n_max < 1) throw std::invalid_argument("RabiParams: n_max must be >= 1");
  if (p.n_max < truncation_floor(p.nbar) && !p.override_truncation_floor)
    throw std::invalid_argument("RabiParams: n_max below truncation floor (set override to force)");
}

ModelBundle build_model(const RabiParams& p, CouplingKind kind) {
  validate(p);
  const int de = p.n_max + 1;
  const TensorOperator ie = TensorOperator::identity({de});
  const TensorOperator a = annihilation(p.n_max);
  const TensorOperator ad = a.adjoint();

  ModelBundle b;
  b.params = p;
  b.h_s = kron(pauli_z() * cxd(0.5 * p.omega_s), ie);
  b.h_e = kron(qubit_identity(), (ad * a) * cxd(p.omega_e));
  if (kind == CouplingKind::rabi) {
    b.h_se = kron(pauli_x(), (a + ad)) * cxd(p.g);
  } else {
    b.h_se = (kron(sigma_plus(), a) + kron(sigma_minus(), ad)) * cxd(p.g);
  }
  b.h_0 = b.h_s + b.h_e + b.h_se;
  b.generator.hamiltonian = b.h_0;
  b.generator.jumps = {{p.gamma * (p.nbar + 1.0), kron(qubit_identity(), a)},
                       {p.gamma * p.nbar, kron(qubit_identity(), ad)}};
  b.kick = pauli_z();
  return b;
}

TensorOperator thermal_state(double nbar, int n_max) {
  if (nbar < 0.0) throw std::invalid_argument("thermal_state: nbar must be nonnegative");
  if (n_max < 1) throw std::invalid_argument("thermal_state: n_max must be >= 1");
  TensorOperator rho({n_max + 1});
  if (nbar == 0.0) {
    rho(0, 0) = 1.0;
    return rho;
  }
  double total = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const double p = std::pow(nbar, n) / std::pow(1.0 + nbar, n + 1);
    rho(n, n) = p;
    total += p;
  }
  for (int n = 0; n <= n_max; ++n) rho(n, n) /= total;
  return rho;
}

TensorOperator lindblad_rhs(const LindbladGenerator& gen, const TensorOperator& rho) {
  if (rho.dims() != gen.hamiltonian.dims())
    throw std::invalid_argument("lindblad_rhs: dimension mismatch");
  const cxd mi(0.0, -1.0);
  TensorOperator out = (gen.hamiltonian * rho - rho * gen.hamiltonian) * mi;
  for (const auto& [rate, L] : gen.jumps) {
    if (rate == 0.0) continue;
    const TensorOperator Ld = L.adjoint();
    const TensorOperator LdL = Ld * L;
    out += (L * rho * Ld - (LdL * rho + rho * LdL) * cxd(0.5)) * cxd(rate);
  }
  return out;
}

ParityReport check_parity_conditions(const ModelBundle& b) {
  const int de = b.params.n_max + 1;
  const TensorOperator kf = kron(b.kick, TensorOperator::identity({de}));
  ParityReport r;
  r.h_s_residual = (kf * b.h_s * kf - b.h_s).max_norm();
  r.h_se_residual = (kf * b.h_se * kf + b.h_se).max_norm();
  return r;
}

}  // namespace ddmem
