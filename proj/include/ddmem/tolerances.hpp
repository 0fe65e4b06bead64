#pragma once

// Central tolerance table. Every numerical threshold used by the library
// lives here; tests reference the same constants.

namespace ddmem::tol {

// tensor-core
inline constexpr double hermiticity = 1e-10;        // density-matrix Hermiticity residual
inline constexpr double unit_trace = 1e-10;         // |Tr(rho) - 1|
inline constexpr double density_eig_floor = -1e-9;  // smallest admissible eigenvalue
inline constexpr double eig_reconstruct = 1e-9;     // ||H - V L V'||_max / ||H||_max
inline constexpr double eig_orthonormal = 1e-9;     // ||V'V - I||_max
inline constexpr double jacobi_offdiag = 1e-12;     // off-diag Frobenius stop, relative
inline constexpr double eig_input_herm = 1e-8;      // hermitian_eig input residual
inline constexpr double unitarity = 1e-9;           // ||U'U - I||_max for unitary_exp
inline constexpr double partial_trace_trace = 1e-12;
inline constexpr double metric_axioms = 1e-10;

// model-rabi
inline constexpr double kick_involution = 1e-12;    // ||K K - I||_max
inline constexpr double rhs_trace = 1e-12;          // |Tr(Lindblad RHS)|
inline constexpr double parity_residual = 1e-12;

// dd-schedule
inline constexpr double schedule_product = 1e-10;   // cumulative kick product vs identity
inline constexpr double schedule_periodicity = 1e-10;

// propagator
inline constexpr double step_factor = 0.02;         // h <= step_factor / omega_max
inline constexpr double segment_trace_drift = 1e-8;
inline constexpr double trajectory_eig_floor = -1e-7;
inline constexpr double trajectory_trace = 1e-8;

// maps-measures
inline constexpr double choi_hermiticity = 1e-9;
inline constexpr double choi_psd_floor = -1e-8;
inline constexpr double choi_trace = 1e-8;
inline constexpr double choi_tp = 1e-8;             // system-output partial trace vs I/2
inline constexpr double erased_coincidence = 1e-9;
inline constexpr double bound_slack = 1e-7;
inline constexpr double commutation_pass = 1e-8;
inline constexpr double state_vs_map_slack = 1e-9;

// experiment-cli
inline constexpr double convergence_audit = 1e-5;
inline constexpr double thermal_tail = 1e-6;

}  // namespace ddmem::tol
