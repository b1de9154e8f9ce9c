#include "slitflow/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "slitflow/csv.hpp"
#include "slitflow/error.hpp"
#include "slitflow/stencil.hpp"

namespace slitflow {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Half-width of the window around the quasinode at y = 0.
constexpr double kNodeWindow = 0.2;
constexpr double kFarWindow = 0.5;

}  // namespace

FieldError field_error(const ComplexField& numeric, const ExactField& exact, double t) {
  FieldError e;
  const std::size_t n = numeric.grid.size();
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = std::abs(numeric.value(k) - exact.psi(numeric.grid.point(k), t));
    e.max = std::max(e.max, d);
    sum += d * d;
  }
  e.rms = std::sqrt(sum / static_cast<double>(n));
  return e;
}

FdRun run_fd(const ScenarioConfig& config,
             const std::function<void(std::size_t, const FdState&)>& observer) {
  const ExactField exact = config.exact_field();
  const double dt = config.dt();
  FdState initial(sample_field(exact, config.grid, 0.0), 0.0);
  const double norm0 = norm(initial.field);
  TrajectoryIntegrator integrator(config.trajectory_starts, initial.field, 0.0, Provenance::fd);

  FdRun run;
  std::size_t step = 0;
  run.snapshots = propagate(std::move(initial), dt, config.n_steps, config.snapshot_times,
                            [&](const FdState& s) {
                              ++step;
                              integrator.advance(s.field, s.t);
                              if (observer) observer(step, s);
                            });
  for (const auto& snap : run.snapshots) {
    run.max_norm_drift = std::max(run.max_norm_drift, std::abs(norm(snap.field) - norm0));
  }
  run.trajectories = integrator.trajectories();
  run.failures = integrator.failures();
  return run;
}

HydroDiagnostics fd_diagnostics(const ComplexField& field, const ExactField& exact, double t) {
  const UniformGrid& grid = field.grid;
  if (grid.dim() != 1) throw InvalidArgument("fd diagnostics are one-dimensional");
  const VelocityField vf = velocity_field(field);
  std::vector<double> g(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    g[k] = 0.5 * std::log(probability_density(field, k));
  }
  const ScalarDerivatives d = StencilEngine(grid).derivatives(g);
  std::vector<Coord> positions(grid.size());
  std::vector<Coord> velocities(grid.size());
  std::vector<double> q(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    positions[k] = grid.point(k);
    velocities[k] = vf.masked[k] ? Coord{kNaN, kNaN} : vf.velocity[k];
    q[k] = -0.5 * (d.gradient[k][0] * d.gradient[k][0] + d.laplacian[k]);
  }
  return diagnose(exact, t, positions, velocities, q, RunStatus::valid);
}

std::vector<InitialQStudy> initial_q_study(const ScenarioConfig& config) {
  const ExactField exact = config.exact_field();
  const FluidEnsemble ens = init_from_exact(exact, initial_points(config));
  std::vector<InitialQStudy> out;
  for (int order : config.study_orders) {
    MwlsConfig mwls = config.mwls;
    mwls.order = order;
    InitialQStudy s;
    s.order = order;
    s.q_num = quantum_potential(ens, mwls);
    for (std::size_t k = 0; k < ens.size(); ++k) {
      const double y = ens.positions[k][0];
      const double qe = exact_quantum_potential(exact, ens.positions[k], 0.0, 0.0);
      s.position.push_back(y);
      s.q_exact.push_back(qe);
      const double err = std::abs(s.q_num[k] - qe);
      if (std::abs(y) <= kNodeWindow) s.near_node_max_error = std::max(s.near_node_max_error, err);
      if (std::abs(y) >= kFarWindow) {
        s.far_max_relative_error = std::max(s.far_max_relative_error, err / std::abs(qe));
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

int RunOutcome::exit_code() const noexcept {
  switch (status) {
    case RunOutcomeStatus::valid:
      return 0;
    case RunOutcomeStatus::degraded:
      return 2;
    case RunOutcomeStatus::failed:
      return 1;
  }
  return 1;
}

fs::path output_root(const ScenarioConfig& config) {
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
  return config.out_dir;
}

namespace {

std::string_view outcome_name(RunOutcomeStatus s) {
  switch (s) {
    case RunOutcomeStatus::valid:
      return "Valid";
    case RunOutcomeStatus::degraded:
      return "Degraded";
    case RunOutcomeStatus::failed:
      return "Failed";
  }
  return "Failed";
}

std::string time_tag(double t) { return format_double(t); }

json coord_json(const Coord& r, int dim) {
  return dim == 1 ? json::array({r[0]}) : json::array({r[0], r[1]});
}

// Collects written files and the error summary while a run proceeds.
class RunWriter {
 public:
  explicit RunWriter(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  const fs::path& dir() const { return dir_; }
  json& errors() { return errors_; }
  json& files() { return files_; }

  void field_snapshot(const FieldSnapshot& snap) {
    const std::string name = "field_t" + time_tag(snap.t) + ".csv";
    const UniformGrid& g = snap.field.grid;
    std::vector<std::string> header = g.dim() == 1 ? std::vector<std::string>{"y", "re", "im"}
                                                   : std::vector<std::string>{"y1", "y2", "re",
                                                                              "im"};
    CsvWriter w(dir_ / name, header);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const Coord p = g.point(k);
      w.cell(p[0]);
      if (g.dim() == 2) w.cell(p[1]);
      w.cell(snap.field.re[k]).cell(snap.field.im[k]).end_row();
    }
    files_.push_back({{"path", name}, {"kind", "field_snapshot"}, {"t", snap.t}});
  }

  std::string trajectory(const Trajectory& tr, std::size_t index, const Coord& start) {
    const std::string name = "traj_" + two_digits(index) + "_" +
                             std::string(to_string(tr.provenance)) + ".csv";
    std::vector<std::string> header{"t", tr.dim == 1 ? "y" : "y1"};
    if (tr.dim == 2) header.emplace_back("y2");
    header.emplace_back("provenance");
    CsvWriter w(dir_ / name, header);
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      w.cell(tr.times[k]).cell(tr.positions[k][0]);
      if (tr.dim == 2) w.cell(tr.positions[k][1]);
      w.cell(to_string(tr.provenance)).end_row();
    }
    files_.push_back({{"path", name},
                      {"kind", "trajectory"},
                      {"provenance", std::string(to_string(tr.provenance))},
                      {"index", index},
                      {"start", coord_json(start, tr.dim)}});
    return name;
  }

  std::string diagnostics(const HydroDiagnostics& d, const std::string& source) {
    const std::string name = "diag_" + source + "_t" + time_tag(d.t) + ".csv";
    CsvWriter w(dir_ / name, {"t", "y", "v_num", "v_exact", "Q_num", "Q_exact", "status"});
    for (std::size_t k = 0; k < d.position.size(); ++k) {
      w.cell(d.t)
          .cell(d.position[k])
          .cell(d.v_num[k])
          .cell(d.v_exact[k])
          .cell(d.q_num[k])
          .cell(d.q_exact[k])
          .cell(to_string(d.status))
          .end_row();
    }
    files_.push_back({{"path", name}, {"kind", "diagnostics"}, {"source", source}, {"t", d.t}});
    return name;
  }

  void study(const std::vector<InitialQStudy>& studies) {
    const std::string name = "study_initial_q.csv";
    std::vector<std::string> header{"y", "Q_exact"};
    for (const auto& s : studies) header.push_back("Q_order_" + std::to_string(s.order));
    CsvWriter w(dir_ / name, header);
    const std::size_t n = studies.empty() ? 0 : studies.front().position.size();
    for (std::size_t k = 0; k < n; ++k) {
      w.cell(studies.front().position[k]).cell(studies.front().q_exact[k]);
      for (const auto& s : studies) w.cell(s.q_num[k]);
      w.end_row();
    }
    files_.push_back({{"path", name}, {"kind", "study"}});
  }

  void plot_script(const std::string& text) {
    const std::string name = "plot.gp";
    std::ofstream out(dir_ / name);
    out << text;
    files_.push_back({{"path", name}, {"kind", "plot_script"}});
  }

 private:
  static std::string two_digits(std::size_t k) {
    return (k < 10 ? "0" : "") + std::to_string(k);
  }

  fs::path dir_;
  json errors_ = json::object();
  json files_ = json::array();
};

double max_deviation(const Trajectory& a, const Trajectory& b) {
  double worst = 0.0;
  const std::size_t n = std::min(a.positions.size(), b.positions.size());
  for (std::size_t k = 0; k < n; ++k) {
    for (int d = 0; d < a.dim; ++d) {
      worst = std::max(worst, std::abs(a.positions[k][d] - b.positions[k][d]));
    }
  }
  return worst;
}

std::optional<Trajectory> exact_companion(const ExactField& exact, const Trajectory& numeric) {
  try {
    return exact_trajectory(exact, numeric.positions.front(), numeric.times);
  } catch (const NodeError&) {
    return std::nullopt;
  }
}

std::vector<double> lattice(double dt, std::size_t n) {
  std::vector<double> t(n + 1);
  for (std::size_t k = 0; k <= n; ++k) t[k] = static_cast<double>(k) * dt;
  return t;
}

struct Verdict {
  RunOutcomeStatus status = RunOutcomeStatus::valid;
  std::string reason;
  void degrade(std::string why) {
    if (status != RunOutcomeStatus::valid) return;
    status = RunOutcomeStatus::degraded;
    reason = std::move(why);
  }
};

void run_schrodinger(const ScenarioConfig& config, RunWriter& out, Verdict& verdict,
                     std::ostringstream& summary) {
  const ExactField exact = config.exact_field();
  const FdRun fd = run_fd(config);
  json field_errors = json::array();
  for (const auto& snap : fd.snapshots) {
    out.field_snapshot(snap);
    const FieldError e = field_error(snap.field, exact, snap.t);
    field_errors.push_back({{"t", snap.t}, {"max", e.max}, {"rms", e.rms}});
    summary << "t = " << snap.t << ": max |psi - psi_exact| = " << e.max << ", rms = " << e.rms
            << '\n';
  }
  out.errors()["field"] = field_errors;
  out.errors()["norm_drift"] = fd.max_norm_drift;
  summary << "norm drift " << fd.max_norm_drift << '\n';

  json traj = json::array();
  std::vector<Trajectory> finished;
  for (std::size_t k = 0; k < fd.trajectories.size(); ++k) {
    const Trajectory& tr = fd.trajectories[k];
    const Coord start = config.trajectory_starts[k];
    out.trajectory(tr, k, start);
    json entry{{"index", k}, {"start", coord_json(start, tr.dim)}};
    if (const auto& f = fd.failures[k]) {
      entry["failure"] = {{"t", f->time}, {"reason", f->reason}};
      verdict.degrade("trajectory " + std::to_string(k) + " stopped: " + f->reason);
    } else {
      finished.push_back(tr);
    }
    const auto ex = exact_companion(
        exact, Trajectory{tr.dim, Provenance::exact, lattice(config.dt(), config.n_steps),
                          {start}});
    if (ex) {
      out.trajectory(*ex, k, start);
      entry["max_deviation"] = max_deviation(tr, *ex);
      entry["endpoint_error"] = max_deviation(
          Trajectory{tr.dim, tr.provenance, {tr.times.back()}, {tr.positions.back()}},
          Trajectory{ex->dim, ex->provenance, {ex->times[tr.times.size() - 1]},
                     {ex->positions[tr.times.size() - 1]}});
      summary << "trajectory " << k << ": max deviation from exact "
              << entry["max_deviation"].get<double>() << '\n';
    } else {
      entry["exact"] = "exact path enters a node region";
    }
    traj.push_back(entry);
  }
  out.errors()["trajectories"] = traj;
  const double radius = config.grid.spacing() / 10.0;
  const CrossingReport crossings = crossing_report(finished, radius);
  out.errors()["crossing_violations"] = crossings.violations.size();
  if (!crossings.ok()) verdict.degrade("numerical trajectories cross");
}

void write_hydro_diagnostics(const HydroRun& run, RunWriter& out, std::ostringstream& summary,
                             const std::string& source) {
  json diag = json::array();
  for (const auto& d : run.diagnostics) {
    out.diagnostics(d, source);
    const double near = d.max_velocity_error_within(kNodeWindow);
    const double far = d.max_velocity_error_outside(kFarWindow);
    diag.push_back({{"t", d.t},
                    {"max_velocity_error", d.max_velocity_error},
                    {"node_velocity_error", near},
                    {"far_velocity_error", far},
                    {"max_q_error", d.max_q_error}});
    summary << source << " t = " << d.t << ": velocity error near y=0 " << near
            << ", |y|>=0.5 " << far << '\n';
  }
  out.errors()[source] = diag;
}

void run_hydro(const ScenarioConfig& config, RunWriter& out, Verdict& verdict,
               std::ostringstream& summary) {
  const ExactField exact = config.exact_field();
  if (config.study == Study::initial_q) {
    const auto studies = initial_q_study(config);
    out.study(studies);
    json s = json::array();
    for (const auto& st : studies) {
      s.push_back({{"order", st.order},
                   {"near_node_max_error", st.near_node_max_error},
                   {"far_max_relative_error", st.far_max_relative_error}});
      summary << "order " << st.order << ": Q error near node " << st.near_node_max_error
              << ", far relative " << st.far_max_relative_error << '\n';
    }
    out.errors()["initial_q"] = s;
    return;
  }

  const HydroRun run = propagate_hydro(config);
  if (run.status == RunStatus::degraded) {
    verdict.degrade(run.reason);
    out.errors()["degraded_at"] = run.degraded_at.value_or(kNaN);
  }
  write_hydro_diagnostics(run, out, summary, "hydro");

  json traj = json::array();
  for (std::size_t k = 0; k < run.trajectories.size(); ++k) {
    const Trajectory& tr = run.trajectories[k];
    const Coord start = tr.positions.front();
    out.trajectory(tr, k, start);
    json entry{{"index", k}, {"start", coord_json(start, 1)}};
    if (const auto ex = exact_companion(exact, tr)) {
      out.trajectory(*ex, k, start);
      entry["max_deviation"] = max_deviation(tr, *ex);
    }
    traj.push_back(entry);
  }
  out.errors()["trajectories"] = traj;

  if (config.fd_baseline) {
    const FdRun fd = run_fd(config);
    json base = json::array();
    for (const auto& snap : fd.snapshots) {
      const HydroDiagnostics d = fd_diagnostics(snap.field, exact, snap.t);
      out.diagnostics(d, "fd");
      const double near = d.max_velocity_error_within(kNodeWindow);
      base.push_back({{"t", d.t}, {"node_velocity_error", near}});
      summary << "fd t = " << d.t << ": velocity error near y=0 " << near << '\n';
    }
    out.errors()["fd"] = base;
  }
}

std::string plot_script(const ScenarioConfig& config, const json& files) {
  std::ostringstream gp;
  gp << "# gnuplot script for scenario " << config.scenario << "\n"
     << "set datafile separator ','\nset key autotitle columnhead\n"
     << "set terminal pngcairo size 900,600\n";
  int figure = 0;
  auto next_output = [&](const std::string& what) {
    gp << "set output '" << config.scenario << "_" << what << ".png'\n";
    ++figure;
  };
  std::vector<std::string> traj;
  for (const auto& f : files) {
    const std::string path = f["path"];
    const std::string kind = f["kind"];
    if (kind == "field_snapshot" && config.dim() == 1) {
      next_output("field_" + std::to_string(figure));
      gp << "set xlabel 'y'\nplot '" << path << "' using 1:2 with lines title 'Re psi', '"
         << path << "' using 1:3 with lines title 'Im psi'\n";
    } else if (kind == "diagnostics") {
      next_output("velocity_" + std::to_string(figure));
      gp << "set xlabel 'y'\nplot '" << path << "' using 2:3 with lines title 'v numerical', '"
         << path << "' using 2:4 with lines dashtype 2 title 'v exact'\n";
    } else if (kind == "study") {
      next_output("quantum_potential");
      gp << "set xlabel 'y'\nset logscale y\nplot for [c=3:*] '" << path
         << "' using 1:(abs(column(c)-$2)) with lines title columnhead(c)\nunset logscale y\n";
    } else if (kind == "trajectory") {
      traj.push_back(path);
    }
  }
  if (!traj.empty()) {
    next_output("trajectories");
    gp << "set xlabel " << (config.dim() == 1 ? "'t'\nset ylabel 'y'\n" : "'y1'\nset ylabel 'y2'\n")
       << "plot ";
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const bool exact = traj[k].find("_exact") != std::string::npos;
      gp << (k > 0 ? ", " : "") << "'" << traj[k] << "' using "
         << (config.dim() == 1 ? "1:2" : "2:3") << " with lines "
         << (exact ? "lc 'black'" : "dashtype 3 lc 'red'") << " notitle";
    }
    gp << '\n';
  }
  return gp.str();
}

}  // namespace

RunOutcome run(const ScenarioConfig& config, const fs::path& directory) {
  RunWriter out(directory);
  Verdict verdict;
  std::ostringstream summary;
  summary << "scenario " << config.scenario << " (" << to_string(config.solver) << ")\n";
  const auto started = std::chrono::steady_clock::now();
  try {
    if (config.solver == SolverKind::schrodinger_fd) {
      run_schrodinger(config, out, verdict, summary);
    } else {
      run_hydro(config, out, verdict, summary);
    }
  } catch (const Error& e) {
    verdict.status = RunOutcomeStatus::failed;
    verdict.reason = e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  out.plot_script(plot_script(config, out.files()));

  RunOutcome outcome;
  outcome.status = verdict.status;
  outcome.reason = verdict.reason;
  outcome.directory = directory;
  outcome.manifest = directory / "manifest.json";
  summary << "status " << outcome_name(verdict.status);
  if (!verdict.reason.empty()) summary << ": " << verdict.reason;
  summary << "\nwall time " << seconds << " s\n";
  outcome.summary = summary.str();

  json manifest{{"scenario", config.scenario},
                {"config_text", config.to_text()},
                {"solver", std::string(to_string(config.solver))},
                {"status", std::string(outcome_name(verdict.status))},
                {"reason", verdict.reason},
                {"exit_code", outcome.exit_code()},
                {"wall_seconds", seconds},
                {"trajectory_time_interpolation",
                 "RK4 stages use velocities linearly interpolated in time between the fields "
                 "of adjacent solver steps"},
                {"errors", out.errors()},
                {"files", out.files()}};
  std::ofstream(outcome.manifest) << manifest.dump(2) << '\n';
  return outcome;
}

RunOutcome run(const ScenarioConfig& config) {
  return run(config, output_root(config) / config.scenario);
}

CompareOutcome compare(const fs::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw Error("cannot open manifest " + manifest_path.string());
  const json manifest = json::parse(in);
  const ScenarioConfig config = parse_config_text(manifest.at("config_text").get<std::string>());
  const ExactField exact = config.exact_field();
  const fs::path dir = manifest_path.parent_path();

  CompareOutcome outcome;
  outcome.csv = dir / "compare_exact.csv";
  outcome.summary_path = dir / "compare_exact.txt";
  CsvWriter csv(outcome.csv, {"file", "kind", "t", "max_error", "rms_error"});
  std::ostringstream summary;
  summary << "comparison of " << config.scenario << " against the exact solution\n";

  for (const auto& f : manifest.at("files")) {
    const std::string path = f.at("path");
    const std::string kind = f.at("kind");
    if (kind == "field_snapshot") {
      const CsvTable table = read_csv(dir / path);
      const double t = f.at("t");
      double worst = 0.0;
      double sum = 0.0;
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        Coord p{table.number(r, config.dim() == 1 ? "y" : "y1"), 0.0};
        if (config.dim() == 2) p[1] = table.number(r, "y2");
        const Complex num(table.number(r, "re"), table.number(r, "im"));
        const double d = std::abs(num - exact.psi(p, t));
        worst = std::max(worst, d);
        sum += d * d;
      }
      const double rms = std::sqrt(sum / static_cast<double>(std::max<std::size_t>(1, table.rows.size())));
      csv.cell(path).cell(kind).cell(t).cell(worst).cell(rms).end_row();
      outcome.max_field_error = std::max(outcome.max_field_error, worst);
      summary << path << ": max field error " << worst << ", rms " << rms << '\n';
    } else if (kind == "trajectory") {
      const CsvTable table = read_csv(dir / path);
      Trajectory tr;
      tr.dim = config.dim();
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        tr.times.push_back(table.number(r, "t"));
        Coord p{table.number(r, tr.dim == 1 ? "y" : "y1"), 0.0};
        if (tr.dim == 2) p[1] = table.number(r, "y2");
        tr.positions.push_back(p);
      }
      double dev = kNaN;
      if (!tr.times.empty()) {
        if (const auto ex = exact_companion(exact, tr)) dev = max_deviation(tr, *ex);
      }
      csv.cell(path).cell(kind).cell(tr.times.empty() ? kNaN : tr.times.back()).cell(dev).cell(kNaN)
          .end_row();
      if (std::isfinite(dev)) {
        outcome.max_trajectory_deviation = std::max(outcome.max_trajectory_deviation, dev);
      }
      summary << path << ": max deviation from exact trajectory " << dev << '\n';
    } else if (kind == "diagnostics") {
      const CsvTable table = read_csv(dir / path);
      const double t = f.at("t");
      double worst = 0.0;
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const double v = table.number(r, "v_num");
        try {
          const double ve = exact_velocity(exact, {table.number(r, "y"), 0.0}, t, 0.0)[0];
          if (std::isfinite(v - ve)) worst = std::max(worst, std::abs(v - ve));
        } catch (const NodeError&) {
        }
      }
      csv.cell(path).cell(kind).cell(t).cell(worst).cell(kNaN).end_row();
      outcome.max_velocity_error = std::max(outcome.max_velocity_error, worst);
      summary << path << ": max velocity error " << worst << '\n';
    }
  }
  outcome.summary = summary.str();
  std::ofstream(outcome.summary_path) << outcome.summary;
  return outcome;
}

}  // namespace slitflow
