#include "slitflow/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <sstream>

#include "slitflow/csv.hpp"
#include "slitflow/error.hpp"

namespace slitflow {

std::string_view to_string(SolverKind s) {
  switch (s) {
    case SolverKind::schrodinger_fd:
      return "schrodinger_fd";
    case SolverKind::hydro_lagrange:
      return "hydro_lagrange";
    case SolverKind::hydro_euler:
      return "hydro_euler";
  }
  return "unknown";
}

namespace {

using LineMap = std::map<std::string, int, std::less<>>;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] void fail(const LineMap& lines, std::string_view key, const std::string& msg) {
  const auto it = lines.find(key);
  const int line = it == lines.end() ? 0 : it->second;
  throw ConfigError(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg, line);
}

void validate_config(const ScenarioConfig& c, const LineMap& lines) {
  try {
    c.packet.validate();
  } catch (const InvalidArgument& e) {
    const std::string_view key = c.packet.particles != 1 && c.packet.particles != 2
                                     ? "particles"
                                     : (c.packet.exchange_sign != 1 && c.packet.exchange_sign != -1
                                            ? "exchange_sign"
                                            : "packet.sigma0");
    fail(lines, key, e.what());
  }
  const int want_dim = c.packet.particles == 2 ? 2 : 1;
  if (c.grid.dim() != want_dim) fail(lines, "particles", "grid dimension must equal particle count");
  if (!(c.t_final > 0.0) || !std::isfinite(c.t_final)) fail(lines, "t_final", "t_final must be positive");
  if (c.n_steps < 1) fail(lines, "n_steps", "n_steps must be at least 1");
  for (const auto& s : c.trajectory_starts) {
    if (!c.grid.contains_strictly(s)) {
      fail(lines, "trajectory.starts", "trajectory start lies outside the grid interior");
    }
  }
  for (double t : c.snapshot_times) {
    if (t < 0.0 || t > c.t_final * (1.0 + 1e-12)) {
      fail(lines, "snapshots", "snapshot times must lie in [0, t_final]");
    }
  }
  if (c.initial == FieldKind::single_slit && c.packet.particles != 1) {
    fail(lines, "initial", "single_slit initial state is one-particle only");
  }
  if (c.initial == FieldKind::two_particle && c.packet.particles != 2) {
    fail(lines, "particles", "two-particle state requires particles = 2");
  }
  if (c.solver != SolverKind::schrodinger_fd) {
    if (c.packet.particles != 1) {
      fail(lines, "solver", "hydrodynamic solvers support one-particle runs only");
    }
    try {
      c.mwls.validate(1);
    } catch (const InvalidArgument& e) {
      fail(lines, "mwls.order", e.what());
    }
    if (c.solver == SolverKind::hydro_euler && c.euler_integrator == TimeIntegrator::rk4 &&
        c.euler_engine != EulerEngine::stencil) {
      fail(lines, "euler.integrator", "rk4 time stepping requires euler.engine = stencil");
    }
    if (c.layout == HydroLayout::slits && !(c.slit_halfwidth > 0.0)) {
      fail(lines, "hydro.slit_halfwidth", "slit half-width must be positive");
    }
    if (c.layout == HydroLayout::slits && c.solver != SolverKind::hydro_lagrange) {
      fail(lines, "hydro.layout", "the slits layout needs moving points (hydro_lagrange)");
    }
  }
  if (c.study == Study::initial_q) {
    if (c.solver == SolverKind::schrodinger_fd) {
      fail(lines, "study", "initial_q study requires a hydrodynamic solver");
    }
    if (c.study_orders.empty()) fail(lines, "study.orders", "initial_q study needs study.orders");
    for (int order : c.study_orders) {
      MwlsConfig m = c.mwls;
      m.order = order;
      try {
        m.validate(1);
      } catch (const InvalidArgument& e) {
        fail(lines, "study.orders", e.what());
      }
    }
  }
}

Coord parse_tuple(const std::string& text, int dim) {
  std::string body = trim(text);
  if (!body.empty() && body.front() == '(') {
    if (body.back() != ')') throw InvalidArgument("unbalanced parenthesis in '" + body + "'");
    body = body.substr(1, body.size() - 2);
  }
  const auto parts = split(body, ',');
  if (static_cast<int>(parts.size()) != dim) {
    throw InvalidArgument("expected " + std::to_string(dim) + " coordinate(s) in '" + text + "'");
  }
  Coord c{0.0, 0.0};
  for (int k = 0; k < dim; ++k) c[k] = parse_double(parts[k]);
  return c;
}

template <class E>
E parse_enum(const std::string& value, std::initializer_list<std::pair<std::string_view, E>> opts) {
  for (const auto& [name, e] : opts) {
    if (value == name) return e;
  }
  std::string names;
  for (const auto& [name, e] : opts) names += (names.empty() ? "" : ", ") + std::string(name);
  throw InvalidArgument("unknown value '" + value + "' (expected one of: " + names + ")");
}

long parse_integer(const std::string& value) {
  const double d = parse_double(value);
  if (d != std::floor(d) || std::abs(d) > 1e15) {
    throw InvalidArgument("expected an integer, got '" + value + "'");
  }
  return static_cast<long>(d);
}

}  // namespace

void ScenarioConfig::validate() const { validate_config(*this, {}); }

ScenarioConfig parse_config(std::istream& in) {
  std::map<std::string, std::pair<std::string, int>, std::less<>> entries;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'", line_no);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key", line_no);
    if (entries.contains(key)) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'",
                        line_no);
    }
    entries.emplace(key, std::make_pair(value, line_no));
  }

  LineMap lines;
  for (const auto& [k, v] : entries) lines.emplace(k, v.second);

  ScenarioConfig c;
  double lo = -13.0;
  double hi = 13.0;
  long n = 261;
  std::string starts_text;
  bool initial_set = false;

  for (const auto& [key, entry] : entries) {
    const std::string& v = entry.first;
    try {
      if (key == "scenario") {
        c.scenario = v;
      } else if (key == "particles") {
        c.packet.particles = static_cast<int>(parse_integer(v));
      } else if (key == "exchange_sign") {
        c.packet.exchange_sign = static_cast<int>(parse_integer(v));
      } else if (key == "packet.Y") {
        c.packet.slit_offset = parse_double(v);
      } else if (key == "packet.sigma0") {
        c.packet.sigma0 = parse_double(v);
      } else if (key == "packet.kx") {
        c.packet.kx = parse_double(v);
      } else if (key == "grid.lo") {
        lo = parse_double(v);
      } else if (key == "grid.hi") {
        hi = parse_double(v);
      } else if (key == "grid.n") {
        n = parse_integer(v);
      } else if (key == "t_final") {
        c.t_final = parse_double(v);
      } else if (key == "n_steps") {
        const long steps = parse_integer(v);
        if (steps < 1) throw InvalidArgument("n_steps must be at least 1");
        c.n_steps = static_cast<std::size_t>(steps);
      } else if (key == "solver") {
        c.solver = parse_enum<SolverKind>(v, {{"schrodinger_fd", SolverKind::schrodinger_fd},
                                              {"hydro_lagrange", SolverKind::hydro_lagrange},
                                              {"hydro_euler", SolverKind::hydro_euler}});
      } else if (key == "mwls.neighbors") {
        const long nb = parse_integer(v);
        if (nb < 1) throw InvalidArgument("mwls.neighbors must be positive");
        c.mwls.neighbors = static_cast<std::size_t>(nb);
      } else if (key == "mwls.order") {
        c.mwls.order = static_cast<int>(parse_integer(v));
      } else if (key == "mwls.width") {
        if (v == "auto") {
          c.mwls.weight_width.reset();
        } else {
          c.mwls.weight_width = parse_double(v);
        }
      } else if (key == "trajectory.starts") {
        starts_text = v;
      } else if (key == "snapshots") {
        if (!v.empty()) {
          for (const auto& part : split(v, ',')) c.snapshot_times.push_back(parse_double(part));
        }
      } else if (key == "out.dir") {
        c.out_dir = v;
      } else if (key == "initial") {
        c.initial = parse_enum<FieldKind>(v, {{"interference", FieldKind::one_particle},
                                              {"single_slit", FieldKind::single_slit}});
        initial_set = true;
      } else if (key == "hydro.layout") {
        c.layout = parse_enum<HydroLayout>(v, {{"uniform", HydroLayout::uniform},
                                               {"slits", HydroLayout::slits}});
      } else if (key == "hydro.slit_halfwidth") {
        c.slit_halfwidth = parse_double(v);
      } else if (key == "euler.engine") {
        c.euler_engine = parse_enum<EulerEngine>(v, {{"mwls", EulerEngine::mwls},
                                                     {"stencil", EulerEngine::stencil}});
      } else if (key == "euler.integrator") {
        c.euler_integrator = parse_enum<TimeIntegrator>(v, {{"euler", TimeIntegrator::euler},
                                                            {"rk4", TimeIntegrator::rk4}});
      } else if (key == "study") {
        c.study = parse_enum<Study>(v, {{"none", Study::none}, {"initial_q", Study::initial_q}});
      } else if (key == "study.orders") {
        for (const auto& part : split(v, ',')) {
          c.study_orders.push_back(static_cast<int>(parse_integer(part)));
        }
      } else if (key == "baseline") {
        c.fd_baseline = parse_enum<bool>(v, {{"none", false}, {"schrodinger_fd", true}});
      } else {
        fail(lines, key, "unknown key '" + key + "'");
      }
    } catch (const InvalidArgument& e) {
      fail(lines, key, key + ": " + e.what());
    }
  }

  if (!initial_set && c.packet.particles == 2) c.initial = FieldKind::two_particle;
  if (initial_set && c.packet.particles == 2) {
    fail(lines, "initial", "'initial' applies to one-particle runs only");
  }

  const int dim = c.packet.particles == 2 ? 2 : 1;
  if (n < 0) fail(lines, "grid.n", "grid.n must be positive");
  try {
    c.grid = UniformGrid(dim, lo, hi, static_cast<std::size_t>(n));
  } catch (const Error& e) {
    fail(lines, lines.contains("grid.n") ? "grid.n" : "grid.lo", e.what());
  }
  if (!starts_text.empty()) {
    try {
      for (const auto& part : split(starts_text, ';')) {
        if (!part.empty()) c.trajectory_starts.push_back(parse_tuple(part, dim));
      }
    } catch (const InvalidArgument& e) {
      fail(lines, "trajectory.starts", std::string("trajectory.starts: ") + e.what());
    }
  }
  validate_config(c, lines);
  return c;
}

ScenarioConfig parse_config_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_config(in);
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string(), 0);
  return parse_config(in);
}

std::string ScenarioConfig::to_text() const {
  std::ostringstream out;
  auto num = [](double v) { return format_double(v); };
  out << "scenario = " << scenario << '\n'
      << "particles = " << packet.particles << '\n'
      << "exchange_sign = " << packet.exchange_sign << '\n'
      << "packet.Y = " << num(packet.slit_offset) << '\n'
      << "packet.sigma0 = " << num(packet.sigma0) << '\n'
      << "packet.kx = " << num(packet.kx) << '\n'
      << "grid.lo = " << num(grid.lo()) << '\n'
      << "grid.hi = " << num(grid.hi()) << '\n'
      << "grid.n = " << grid.points_per_axis() << '\n'
      << "t_final = " << num(t_final) << '\n'
      << "n_steps = " << n_steps << '\n'
      << "solver = " << to_string(solver) << '\n'
      << "mwls.neighbors = " << mwls.neighbors << '\n'
      << "mwls.order = " << mwls.order << '\n'
      << "mwls.width = " << (mwls.weight_width ? num(*mwls.weight_width) : "auto") << '\n';
  out << "trajectory.starts = ";
  for (std::size_t k = 0; k < trajectory_starts.size(); ++k) {
    if (k > 0) out << "; ";
    out << '(' << num(trajectory_starts[k][0]);
    if (grid.dim() == 2) out << ", " << num(trajectory_starts[k][1]);
    out << ')';
  }
  out << '\n' << "snapshots = ";
  for (std::size_t k = 0; k < snapshot_times.size(); ++k) {
    out << (k > 0 ? ", " : "") << num(snapshot_times[k]);
  }
  out << '\n' << "out.dir = " << out_dir << '\n';
  if (packet.particles == 1) {
    out << "initial = " << (initial == FieldKind::single_slit ? "single_slit" : "interference")
        << '\n';
  }
  out << "hydro.layout = " << (layout == HydroLayout::slits ? "slits" : "uniform") << '\n'
      << "hydro.slit_halfwidth = " << num(slit_halfwidth) << '\n'
      << "euler.engine = " << (euler_engine == EulerEngine::stencil ? "stencil" : "mwls") << '\n'
      << "euler.integrator = " << (euler_integrator == TimeIntegrator::rk4 ? "rk4" : "euler")
      << '\n'
      << "study = " << (study == Study::initial_q ? "initial_q" : "none") << '\n';
  if (!study_orders.empty()) {
    out << "study.orders = ";
    for (std::size_t k = 0; k < study_orders.size(); ++k) {
      out << (k > 0 ? ", " : "") << study_orders[k];
    }
    out << '\n';
  }
  out << "baseline = " << (fd_baseline ? "schrodinger_fd" : "none") << '\n';
  return out.str();
}

}  // namespace slitflow
