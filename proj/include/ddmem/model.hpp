#pragma once

#include <utility>
#include <vector>

#include "ddmem/tensor.hpp"

// Dissipative quantum Rabi model: qubit (factor 0, basis {|e>, |g>}) coupled
// to a Fock-truncated oscillator (factor 1), oscillator damped by a thermal
// reservoir. Units: the qubit frequency sets the time scale (omega_s = 1 by
// convention in the presets).

namespace ddmem {

struct RabiParams {
  double omega_s = 1.0;  // qubit frequency
  double omega_e = 1.0;  // oscillator frequency
  double g = 0.0;        // coupling
  double gamma = 0.0;    // oscillator dissipation rate
  double nbar = 0.0;     // mean thermal occupation
  int n_max = 8;         // Fock cutoff (oscillator dim = n_max + 1)
  bool override_truncation_floor = false;
};

// smallest admissible n_max for a given nbar unless explicitly overridden
int truncation_floor(double nbar);

// largest relevant frequency for the RK4 step rule:
// omega_s + omega_e + gamma (nbar+1) n_max
double omega_max(const RabiParams& p);

void validate(const RabiParams& p);

struct LindbladGenerator {
  TensorOperator hamiltonian;
  std::vector<std::pair<double, TensorOperator>> jumps;  // (rate, operator)
};

struct ModelBundle {
  RabiParams params;
  TensorOperator h_s, h_e, h_se, h_0;  // on dims [2, n_max+1]
  LindbladGenerator generator;
  TensorOperator kick;  // system unitary, dims [2]
};

enum class CouplingKind { rabi, jaynes_cummings };

ModelBundle build_model(const RabiParams& p, CouplingKind kind = CouplingKind::rabi);

// Bose-Einstein occupation p_n = nbar^n / (1+nbar)^{n+1}, truncated at n_max
// and renormalized to unit trace.
TensorOperator thermal_state(double nbar, int n_max);

// -i[H, rho] + sum_k r_k (L rho L' - 1/2 {L'L, rho}); textbook dense evaluation.
TensorOperator lindblad_rhs(const LindbladGenerator& gen, const TensorOperator& rho);

struct ParityReport {
  double h_s_residual;   // ||K H_S K - H_S||_max
  double h_se_residual;  // ||K H_SE K + H_SE||_max
};

ParityReport check_parity_conditions(const ModelBundle& bundle);

// qubit operators, basis index 0 = |e>, 1 = |g>
TensorOperator pauli_x();
TensorOperator pauli_y();
TensorOperator pauli_z();
TensorOperator sigma_plus();   // |e><g|
TensorOperator sigma_minus();  // |g><e|
TensorOperator qubit_identity();

// truncated annihilation operator, <n|a|n+1> = sqrt(n+1); dims [n_max+1]
TensorOperator annihilation(int n_max);

}  // namespace ddmem
