#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ddmem/measures.hpp"
#include "ddmem/model.hpp"

// Configuration-driven sweeps over the figure regimes: per-point memory
// strengths, effect of control, bounds and performances, persisted as CSV.

namespace ddmem {

enum class KickKind { parity, identity, pauli_group };

struct ExperimentConfig {
  std::string name = "sweep";

  // model, ratio conventions; omega_s = 1 fixes the time unit
  double omega_e_over_omega_s = 1.0;
  double g_over_omega_s = 0.01;
  double gamma_over_g = 0.1;
  double nbar = 0.1;

  // control
  int cycles = 1;
  KickKind kick = KickKind::parity;

  // sweep grid, final times in units of 1/g, strictly increasing
  std::vector<double> grid_gtf;

  // initial state for the state-level quantities (Bloch vector)
  std::array<double, 3> bloch = {1.0, 0.0, 0.0};  // "plus"

  // numerics; -1 = auto
  int n_max = -1;
  int steps_per_segment = -1;
  int steps_multiplier = 1;     // audit knob (halved step = x2)
  double thermal_tail = 0.0;    // 0 = default tolerance
};

struct ExperimentRecord {
  double t_f, t_c;
  double p_bar, p_tilde, delta_p;
  double e, e_ub, e_lb, n_tilde, n_bar;
  double n_tilde_state, n_bar_state, e_state, e_ub_state, e_lb_state;
  double commutation_residual;
  int n_max_used, steps_used;
};

// aggregated Choi sanity extrema over every map a sweep produced
struct SweepDiagnostics {
  double max_choi_hermiticity = 0.0;
  double max_choi_trace_dev = 0.0;
  double min_choi_eigenvalue = 1.0;
  double max_choi_tp_residual = 0.0;
  double max_erased_coincidence = 0.0;
  double max_trace_drift = 0.0;
};

struct SweepResult {
  std::vector<ExperimentRecord> records;
  SweepDiagnostics diagnostics;
  double wall_seconds = 0.0;
};

// grid helpers
std::vector<double> uniform_grid(double gtf_min, double gtf_max, int points);

ExperimentConfig figure_preset(const std::string& name);

ModelBundle resolve_bundle(const ExperimentConfig& cfg);
TensorOperator bloch_state(const std::array<double, 3>& r);

SweepResult run_sweep(const ExperimentConfig& cfg);
std::vector<ExperimentRecord> run_sweep_records(const ExperimentConfig& cfg);

struct AuditPoint {
  double t_f;
  double max_delta;
};

struct AuditReport {
  std::vector<AuditPoint> points;
  double max_delta = 0.0;
  int n_max_base = 0, n_max_refined = 0;
  bool passed = false;
};

// re-runs a subsample at n_max+5 and halved step; passes when every reported
// distance moves by <= 1e-5
AuditReport convergence_audit(const ExperimentConfig& cfg, int subsample = 5);

void emit_csv(const std::vector<ExperimentRecord>& records, const std::string& path);
std::string csv_string(const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> parse_csv(const std::string& text);

// flat key-value config text, dotted section prefixes, unknown keys rejected
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

int worker_count();  // DDMEM_WORKERS override, default hardware concurrency

}  // namespace ddmem
