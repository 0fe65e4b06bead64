#include "ddmem/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ddmem/tolerances.hpp"

namespace ddmem {

namespace {

double thermal_tail_mass(double nbar, int n_max) {
  if (nbar <= 0.0) return 0.0;
  return std::pow(nbar / (1.0 + nbar), n_max + 1);
}

int auto_n_max(double nbar, double tail_tol) {
  int n = truncation_floor(nbar);
  while (thermal_tail_mass(nbar, n) >= tail_tol) {
    ++n;
    if (n > 4096) throw std::runtime_error("auto n_max selection diverged (knob: numerics.n_max)");
  }
  return n;
}

KickSchedule make_schedule(KickKind kind, double tau, int cycles) {
  switch (kind) {
    case KickKind::parity:
      return parity_cycle_schedule(tau, cycles);
    case KickKind::identity: {
      KickSchedule s = parity_cycle_schedule(tau, cycles);
      for (auto& k : s.kicks) k = qubit_identity();
      return s;
    }
    case KickKind::pauli_group: {
      DecouplingGroup grp;
      grp.elements = {qubit_identity(), pauli_x(), pauli_y(), pauli_z()};
      return group_schedule(grp, tau, cycles);
    }
  }
  throw std::invalid_argument("make_schedule: unknown kick kind");
}

int kicks_per_cycle(KickKind kind) { return kind == KickKind::pauli_group ? 4 : 2; }

void fold_choi(SweepDiagnostics& d, const ChoiMatrix& c, std::mutex& mu) {
  const ChoiCheck chk = choi_check(c);
  std::lock_guard<std::mutex> lock(mu);
  d.max_choi_hermiticity = std::max(d.max_choi_hermiticity, chk.hermiticity);
  d.max_choi_trace_dev = std::max(d.max_choi_trace_dev, chk.trace_deviation);
  d.min_choi_eigenvalue = std::min(d.min_choi_eigenvalue, chk.min_eigenvalue);
  d.max_choi_tp_residual = std::max(d.max_choi_tp_residual, chk.tp_residual);
}

}  // namespace

std::vector<double> uniform_grid(double gtf_min, double gtf_max, int points) {
  if (points < 1 || !(gtf_min > 0.0) || !(gtf_max >= gtf_min))
    throw std::invalid_argument("uniform_grid: bad grid spec");
  std::vector<double> g(points);
  if (points == 1) {
    g[0] = gtf_min;
    return g;
  }
  const double step = (gtf_max - gtf_min) / (points - 1);
  for (int i = 0; i < points; ++i) g[i] = gtf_min + step * i;
  return g;
}

ExperimentConfig figure_preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.omega_e_over_omega_s = 1.0;
  c.g_over_omega_s = 0.01;
  c.gamma_over_g = 0.1;
  c.nbar = 0.1;
  c.cycles = 1;
  c.kick = KickKind::parity;
  c.grid_gtf = uniform_grid(0.025, 3.0, 120);
  c.bloch = {1.0, 0.0, 0.0};  // (|g>+|e>)/sqrt(2)

  if (name == "fig2") {
    return c;
  } else if (name == "fig3") {
    c.gamma_over_g = 100.0;
    return c;
  } else if (name == "fig4") {
    c.g_over_omega_s = 1.0;
    c.gamma_over_g = 0.01;
    return c;
  } else if (name == "fig5") {
    c.g_over_omega_s = 1.0;
    c.gamma_over_g = 0.01;
    c.omega_e_over_omega_s = 10.0;
    return c;
  } else if (name == "fig6") {
    c.cycles = 500;
    c.grid_gtf = uniform_grid(0.075, 3.0, 40);
    return c;
  } else if (name == "fig7") {
    c.cycles = 50;
    // dips at t_c = pi/(100g), 3pi/(100g), 5pi/(100g) land on-grid with both
    // neighbors: t_f = 50 t_c -> g t_f = j pi/40, j = 20, 60, 100
    c.grid_gtf.clear();
    for (int j = 1; j <= 120; ++j) c.grid_gtf.push_back(j * std::numbers::pi / 40.0);
    return c;
  } else if (name == "fig_heat") {
    c.nbar = 5.0;
    return c;
  }
  throw std::invalid_argument("figure_preset: unknown figure name '" + name + "'");
}

TensorOperator bloch_state(const std::array<double, 3>& r) {
  const double len = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
  if (len > 1.0 + 1e-12) throw std::invalid_argument("bloch_state: vector outside the ball");
  TensorOperator rho({2});
  rho(0, 0) = 0.5 * (1.0 + r[2]);
  rho(1, 1) = 0.5 * (1.0 - r[2]);
  rho(0, 1) = 0.5 * cxd(r[0], -r[1]);
  rho(1, 0) = 0.5 * cxd(r[0], r[1]);
  return rho;
}

ModelBundle resolve_bundle(const ExperimentConfig& cfg) {
  RabiParams p;
  p.omega_s = 1.0;
  p.omega_e = cfg.omega_e_over_omega_s;
  p.g = cfg.g_over_omega_s;
  p.gamma = cfg.gamma_over_g * p.g;
  p.nbar = cfg.nbar;
  const double tail = cfg.thermal_tail > 0.0 ? cfg.thermal_tail : tol::thermal_tail;
  if (cfg.n_max > 0) {
    p.n_max = cfg.n_max;
    p.override_truncation_floor = true;  // explicit choice wins over the floor
  } else {
    p.n_max = auto_n_max(cfg.nbar, tail);
  }
  return build_model(p);
}

int worker_count() {
  if (const char* env = std::getenv("DDMEM_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  if (cfg.grid_gtf.empty()) throw std::invalid_argument("run_sweep: empty grid");
  for (size_t i = 1; i < cfg.grid_gtf.size(); ++i)
    if (cfg.grid_gtf[i] <= cfg.grid_gtf[i - 1])
      throw std::invalid_argument("run_sweep: grid must be strictly increasing");
  if (cfg.cycles < 1) throw std::invalid_argument("run_sweep: cycles must be >= 1");

  const ModelBundle bundle = resolve_bundle(cfg);
  const double g = bundle.params.g;
  const double om = omega_max(bundle.params);
  const int n_seg = cfg.cycles * kicks_per_cycle(cfg.kick);
  const TensorOperator rho0 = bloch_state(cfg.bloch);

  // grids are in units of 1/g; a decoupled run (g = 0) reads them as
  // absolute times in units of 1/omega_s
  const double time_scale = g > 0.0 ? 1.0 / g : 1.0;
  const int npts = static_cast<int>(cfg.grid_gtf.size());
  std::vector<double> tf(npts), tau(npts);
  for (int i = 0; i < npts; ++i) {
    tf[i] = cfg.grid_gtf[i] * time_scale;
    tau[i] = tf[i] / n_seg;
  }

  // one shared uncontrolled trajectory: snapshots at every tau_j and t_f_j
  std::vector<double> snap_times;
  snap_times.insert(snap_times.end(), tau.begin(), tau.end());
  snap_times.insert(snap_times.end(), tf.begin(), tf.end());
  std::sort(snap_times.begin(), snap_times.end());
  snap_times.erase(std::unique(snap_times.begin(), snap_times.end()), snap_times.end());
  const std::vector<ChoiMatrix> snaps = choi_trajectory(bundle, snap_times);
  auto snapshot_at = [&](double t) -> const ChoiMatrix& {
    const auto it = std::lower_bound(snap_times.begin(), snap_times.end(), t - 1e-12);
    return snaps[static_cast<size_t>(it - snap_times.begin())];
  };

  SweepResult result;
  result.records.resize(npts);
  std::mutex diag_mu;

  std::atomic<int> next{0};
  auto worker = [&]() {
    while (true) {
      const int j = next.fetch_add(1);
      if (j >= npts) break;

      const KickSchedule schedule = make_schedule(cfg.kick, tau[j], cfg.cycles);
      SegmentPlan plan;
      if (cfg.steps_per_segment > 0) {
        plan.tau = tau[j];
        plan.steps = cfg.steps_per_segment;
        plan.omega_max = om;
      } else {
        plan = SegmentPlan::for_span(tau[j], om);
      }
      plan.steps *= cfg.steps_multiplier;
      plan.validate();

      const ChoiMatrix cc = choi_controlled(bundle, schedule, plan);
      const ChoiMatrix& cu = snapshot_at(tf[j]);
      const ChoiMatrix& cs = snapshot_at(tau[j]);
      const ChoiMatrix erased_u = compose_erased(cs, n_seg);
      const ChoiMatrix erased_c = compose_erased_controlled(cs, schedule);
      const ChoiMatrix tgt = target_choi(bundle, tf[j]);

      ExperimentRecord r;
      r.t_f = tf[j];
      r.t_c = tf[j] / cfg.cycles;
      r.n_tilde = trace_distance(cc.data, erased_c.data);
      r.n_bar = trace_distance(cu.data, erased_u.data);
      r.e = trace_distance(cc.data, cu.data);
      r.e_ub = r.n_tilde + r.n_bar;
      r.e_lb = std::abs(r.n_tilde - r.n_bar);
      r.p_tilde = performance(cc, tgt);
      r.p_bar = performance(cu, tgt);
      r.delta_p = r.p_tilde - r.p_bar;
      r.commutation_residual = commutation_residual(cs, bundle.kick);

      const TensorOperator sc = apply_choi(cc, rho0);
      const TensorOperator su = apply_choi(cu, rho0);
      const TensorOperator scp = apply_choi(erased_c, rho0);
      const TensorOperator sup = apply_choi(erased_u, rho0);
      r.n_tilde_state = trace_distance(sc, scp);
      r.n_bar_state = trace_distance(su, sup);
      r.e_state = trace_distance(sc, su);
      r.e_ub_state = r.n_tilde_state + r.n_bar_state;
      r.e_lb_state = std::abs(r.n_tilde_state - r.n_bar_state);

      r.n_max_used = bundle.params.n_max;
      r.steps_used = plan.steps;
      result.records[j] = r;

      fold_choi(result.diagnostics, cc, diag_mu);
      fold_choi(result.diagnostics, cu, diag_mu);
      fold_choi(result.diagnostics, cs, diag_mu);
      {
        const double co = trace_distance(erased_c.data.hermitized(), erased_u.data.hermitized());
        std::lock_guard<std::mutex> lock(diag_mu);
        result.diagnostics.max_erased_coincidence =
            std::max(result.diagnostics.max_erased_coincidence, co);
      }
    }
  };

  const int nw = std::min(worker_count(), npts);
  std::vector<std::thread> pool;
  for (int w = 1; w < nw; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

std::vector<ExperimentRecord> run_sweep_records(const ExperimentConfig& cfg) {
  return run_sweep(cfg).records;
}

AuditReport convergence_audit(const ExperimentConfig& cfg, int subsample) {
  AuditReport rep;
  const ModelBundle base_bundle = resolve_bundle(cfg);
  rep.n_max_base = base_bundle.params.n_max;
  rep.n_max_refined = rep.n_max_base + 5;

  const int npts = static_cast<int>(cfg.grid_gtf.size());
  const int ns = std::max(1, std::min(subsample, npts));
  std::vector<int> picks;
  for (int s = 0; s < ns; ++s) picks.push_back(s * (npts - 1) / std::max(1, ns - 1));
  picks.erase(std::unique(picks.begin(), picks.end()), picks.end());

  ExperimentConfig sub = cfg;
  sub.grid_gtf.clear();
  for (int i : picks) sub.grid_gtf.push_back(cfg.grid_gtf[i]);

  ExperimentConfig refined = sub;
  refined.n_max = rep.n_max_refined;
  refined.steps_multiplier = cfg.steps_multiplier * 2;

  const auto base = run_sweep_records(sub);
  const auto fine = run_sweep_records(refined);

  for (size_t i = 0; i < base.size(); ++i) {
    const ExperimentRecord& a = base[i];
    const ExperimentRecord& b = fine[i];
    double d = 0.0;
    for (double v : {a.p_bar - b.p_bar, a.p_tilde - b.p_tilde, a.e - b.e,
                     a.e_ub - b.e_ub, a.e_lb - b.e_lb, a.n_tilde - b.n_tilde,
                     a.n_bar - b.n_bar, a.n_tilde_state - b.n_tilde_state,
                     a.n_bar_state - b.n_bar_state, a.e_state - b.e_state})
      d = std::max(d, std::abs(v));
    rep.points.push_back({a.t_f, d});
    rep.max_delta = std::max(rep.max_delta, d);
  }
  rep.passed = rep.max_delta <= tol::convergence_audit;
  return rep;
}

namespace {

const char* kCsvHeader =
    "t_f,t_c,p_bar,p_tilde,delta_p,e,e_ub,e_lb,n_tilde,n_bar,"
    "n_tilde_state,n_bar_state,e_state,e_ub_state,e_lb_state,"
    "commutation_residual,n_max_used,steps_used";

void append_num(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17e", v);
  out += buf;
}

}  // namespace

std::string csv_string(const std::vector<ExperimentRecord>& records) {
  if (records.empty()) throw std::invalid_argument("emit_csv: no records");
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    append_num(out, r.t_f); out += ',';
    append_num(out, r.t_c); out += ',';
    append_num(out, r.p_bar); out += ',';
    append_num(out, r.p_tilde); out += ',';
    append_num(out, r.delta_p); out += ',';
    append_num(out, r.e); out += ',';
    append_num(out, r.e_ub); out += ',';
    append_num(out, r.e_lb); out += ',';
    append_num(out, r.n_tilde); out += ',';
    append_num(out, r.n_bar); out += ',';
    append_num(out, r.n_tilde_state); out += ',';
    append_num(out, r.n_bar_state); out += ',';
    append_num(out, r.e_state); out += ',';
    append_num(out, r.e_ub_state); out += ',';
    append_num(out, r.e_lb_state); out += ',';
    append_num(out, r.commutation_residual); out += ',';
    out += std::to_string(r.n_max_used); out += ',';
    out += std::to_string(r.steps_used);
    out += '\n';
  }
  return out;
}

void emit_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
  const std::string text = csv_string(records);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("emit_csv: cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("emit_csv: write failed for '" + path + "'");
}

std::vector<ExperimentRecord> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::runtime_error("parse_csv: bad header");
  std::vector<ExperimentRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 18) throw std::runtime_error("parse_csv: bad row");
    ExperimentRecord r;
    int c = 0;
    auto d = [&]() { return std::strtod(cells[c++].c_str(), nullptr); };
    r.t_f = d(); r.t_c = d(); r.p_bar = d(); r.p_tilde = d(); r.delta_p = d();
    r.e = d(); r.e_ub = d(); r.e_lb = d(); r.n_tilde = d(); r.n_bar = d();
    r.n_tilde_state = d(); r.n_bar_state = d(); r.e_state = d();
    r.e_ub_state = d(); r.e_lb_state = d(); r.commutation_residual = d();
    r.n_max_used = std::atoi(cells[c++].c_str());
    r.steps_used = std::atoi(cells[c++].c_str());
    out.push_back(r);
  }
  return out;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  double gtf_min = 0.0, gtf_max = 0.0;
  int points = 0;
  bool explicit_grid = false;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    auto num = [&]() { return std::strtod(val.c_str(), nullptr); };
    auto integer_or_auto = [&]() { return val == "auto" ? -1 : std::atoi(val.c_str()); };

    if (key == "name") cfg.name = val;
    else if (key == "model.omega_e_over_omega_s") cfg.omega_e_over_omega_s = num();
    else if (key == "model.g_over_omega_s") cfg.g_over_omega_s = num();
    else if (key == "model.gamma_over_g") cfg.gamma_over_g = num();
    else if (key == "model.nbar") cfg.nbar = num();
    else if (key == "control.cycles") cfg.cycles = std::atoi(val.c_str());
    else if (key == "control.kick") {
      if (val == "parity") cfg.kick = KickKind::parity;
      else if (val == "identity") cfg.kick = KickKind::identity;
      else if (val == "pauli") cfg.kick = KickKind::pauli_group;
      else throw std::runtime_error("config: unknown kick kind '" + val + "'");
    } else if (key == "sweep.gtf_min") gtf_min = num();
    else if (key == "sweep.gtf_max") gtf_max = num();
    else if (key == "sweep.points") points = std::atoi(val.c_str());
    else if (key == "sweep.grid") {
      explicit_grid = true;
      cfg.grid_gtf.clear();
      std::istringstream gs(val);
      std::string tok;
      while (std::getline(gs, tok, ';')) cfg.grid_gtf.push_back(std::strtod(tok.c_str(), nullptr));
    } else if (key == "initial_state") {
      if (val == "plus") cfg.bloch = {1.0, 0.0, 0.0};
      else if (val == "minus") cfg.bloch = {-1.0, 0.0, 0.0};
      else if (val == "excited") cfg.bloch = {0.0, 0.0, 1.0};
      else if (val == "ground") cfg.bloch = {0.0, 0.0, -1.0};
      else if (val == "mixed") cfg.bloch = {0.0, 0.0, 0.0};
      else {
        std::istringstream bs(val);
        std::string tok;
        std::vector<double> comps;
        while (std::getline(bs, tok, ';')) comps.push_back(std::strtod(tok.c_str(), nullptr));
        if (comps.size() != 3)
          throw std::runtime_error("config: initial_state must be a preset name or x;y;z");
        cfg.bloch = {comps[0], comps[1], comps[2]};
      }
    } else if (key == "numerics.n_max") cfg.n_max = integer_or_auto();
    else if (key == "numerics.steps_per_segment") cfg.steps_per_segment = integer_or_auto();
    else if (key == "numerics.thermal_tail") cfg.thermal_tail = num();
    else throw std::runtime_error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }

  if (!explicit_grid) {
    if (points <= 0)
      throw std::runtime_error("config: sweep.points (with gtf_min/gtf_max) or sweep.grid required");
    cfg.grid_gtf = uniform_grid(gtf_min, gtf_max, points);
  }
  for (size_t i = 1; i < cfg.grid_gtf.size(); ++i)
    if (cfg.grid_gtf[i] <= cfg.grid_gtf[i - 1])
      throw std::runtime_error("config: sweep grid must be strictly increasing");
  if (cfg.cycles < 1) throw std::runtime_error("config: control.cycles must be >= 1");
  try {
    (void)bloch_state(cfg.bloch);
  } catch (const std::exception& ex) {
    throw std::runtime_error(std::string("config: ") + ex.what());
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace ddmem
