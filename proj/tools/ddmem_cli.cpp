// Command-line runner for the parity-kick memory-effect experiments.
//
//   ddmem figure fig2 --out fig2.csv
//   ddmem sweep --config my.cfg --out out.csv
//   ddmem audit --config my.cfg
//   ddmem check-commute --config my.cfg
//   ddmem validate-schedule --config my.cfg

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "ddmem/experiment.hpp"
#include "ddmem/tolerances.hpp"

namespace {

int run_figure(const std::string& name, const std::string& out) {
  const ddmem::ExperimentConfig cfg = ddmem::figure_preset(name);
  const ddmem::SweepResult res = ddmem::run_sweep(cfg);
  ddmem::emit_csv(res.records, out);
  std::printf("%s: %zu points, n_max=%d, wall %.1fs -> %s\n", name.c_str(),
              res.records.size(), res.records.front().n_max_used, res.wall_seconds,
              out.c_str());
  return 0;
}

int run_sweep_cmd(const std::string& cfg_path, const std::string& out) {
  const ddmem::ExperimentConfig cfg = ddmem::parse_config_file(cfg_path);
  const ddmem::SweepResult res = ddmem::run_sweep(cfg);
  ddmem::emit_csv(res.records, out);
  std::printf("%s: %zu points, n_max=%d, wall %.1fs -> %s\n", cfg.name.c_str(),
              res.records.size(), res.records.front().n_max_used, res.wall_seconds,
              out.c_str());
  return 0;
}

int run_audit(const std::string& cfg_path) {
  const ddmem::ExperimentConfig cfg = ddmem::parse_config_file(cfg_path);
  const ddmem::AuditReport rep = ddmem::convergence_audit(cfg);
  for (const auto& p : rep.points)
    std::printf("t_f=%.6g max_delta=%.3e\n", p.t_f, p.max_delta);
  std::printf("audit %s: n_max %d -> %d, max delta %.3e (tolerance %.0e)\n",
              rep.passed ? "PASS" : "FAIL", rep.n_max_base, rep.n_max_refined,
              rep.max_delta, ddmem::tol::convergence_audit);
  return rep.passed ? 0 : 1;
}

int run_check_commute(const std::string& cfg_path) {
  const ddmem::ExperimentConfig cfg = ddmem::parse_config_file(cfg_path);
  const ddmem::ModelBundle bundle = ddmem::resolve_bundle(cfg);
  const double g = bundle.params.g;
  const int n_seg = cfg.cycles * 2;

  // spans: segment and final time of the first, middle and last grid points
  std::vector<double> spans;
  for (int idx : {0, static_cast<int>(cfg.grid_gtf.size()) / 2,
                  static_cast<int>(cfg.grid_gtf.size()) - 1}) {
    const double tf = cfg.grid_gtf[idx] / g;
    spans.push_back(tf / n_seg);
    spans.push_back(tf);
  }
  std::sort(spans.begin(), spans.end());
  spans.erase(std::unique(spans.begin(), spans.end()), spans.end());

  double worst = 0.0;
  for (double s : spans) {
    const ddmem::SegmentPlan plan =
        ddmem::SegmentPlan::for_span(s, ddmem::omega_max(bundle.params));
    const double r = ddmem::commutation_residual(bundle, s, plan);
    worst = std::max(worst, r);
    std::printf("g_span=%.6g residual=%.3e\n", s * g, r);
  }
  std::printf("check-commute %s: max residual %.3e (tolerance %.0e)\n",
              worst <= ddmem::tol::commutation_pass ? "PASS" : "FAIL", worst,
              ddmem::tol::commutation_pass);
  return worst <= ddmem::tol::commutation_pass ? 0 : 1;
}

int run_validate_schedule(const std::string& cfg_path) {
  const ddmem::ExperimentConfig cfg = ddmem::parse_config_file(cfg_path);
  const ddmem::ModelBundle bundle = ddmem::resolve_bundle(cfg);
  const double tf_mid = cfg.grid_gtf[cfg.grid_gtf.size() / 2] / bundle.params.g;

  ddmem::KickSchedule s;
  switch (cfg.kick) {
    case ddmem::KickKind::parity:
      s = ddmem::parity_cycle_schedule(tf_mid / (2 * cfg.cycles), cfg.cycles);
      break;
    case ddmem::KickKind::identity: {
      s = ddmem::parity_cycle_schedule(tf_mid / (2 * cfg.cycles), cfg.cycles);
      for (auto& k : s.kicks) k = ddmem::qubit_identity();
      break;
    }
    case ddmem::KickKind::pauli_group: {
      ddmem::DecouplingGroup grp;
      grp.elements = {ddmem::qubit_identity(), ddmem::pauli_x(), ddmem::pauli_y(),
                      ddmem::pauli_z()};
      s = ddmem::group_schedule(grp, tf_mid / (4 * cfg.cycles), cfg.cycles);
      break;
    }
  }
  const ddmem::ScheduleReport rep = ddmem::validate_schedule(s);
  std::printf("kicks=%d cycles=%d product_residual=%.3e periodicity_residual=%.3e\n",
              s.total_kicks(), s.cycles, rep.product_residual, rep.periodicity_residual);
  std::printf("validate-schedule %s\n", rep.conforming ? "PASS" : "FAIL");
  return rep.conforming ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dissipative-Rabi parity-kick memory-effect experiments"};
  app.require_subcommand(1);

  std::string fig_name, cfg_path, out_path = "sweep.csv";

  auto* fig = app.add_subcommand("figure", "run a named figure preset");
  fig->add_option("name", fig_name, "fig2|fig3|fig4|fig5|fig6|fig7|fig_heat")->required();
  fig->add_option("--out", out_path, "output CSV path");

  auto* sweep = app.add_subcommand("sweep", "run a sweep from a config file");
  sweep->add_option("--config", cfg_path, "config file")->required();
  sweep->add_option("--out", out_path, "output CSV path");

  auto* audit = app.add_subcommand("audit", "convergence audit of a config");
  audit->add_option("--config", cfg_path, "config file")->required();

  auto* commute = app.add_subcommand("check-commute", "kick/map commutation residuals");
  commute->add_option("--config", cfg_path, "config file")->required();

  auto* vsched = app.add_subcommand("validate-schedule", "kick schedule validity report");
  vsched->add_option("--config", cfg_path, "config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (fig->parsed()) return run_figure(fig_name, out_path);
    if (sweep->parsed()) return run_sweep_cmd(cfg_path, out_path);
    if (audit->parsed()) return run_audit(cfg_path);
    if (commute->parsed()) return run_check_commute(cfg_path);
    if (vsched->parsed()) return run_validate_schedule(cfg_path);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
  return 0;
}
