#include "poromech/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <system_error>

namespace poromech {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Splits on commas and whitespace.
std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct ParseContext {
  int line;
  std::string key;
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key + "': " + what, line, key);
  }
};

double to_double(const std::string& s, const ParseContext& ctx) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) ctx.fail("expected a number, got '" + s + "'");
  return v;
}

long long to_integer(const std::string& s, const ParseContext& ctx) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) ctx.fail("expected an integer, got '" + s + "'");
  return v;
}

std::uint64_t to_unsigned(const std::string& s, const ParseContext& ctx) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) ctx.fail("expected an unsigned integer, got '" + s + "'");
  return v;
}

const std::string& single(const std::vector<std::string>& t, const ParseContext& ctx) {
  if (t.size() != 1) ctx.fail("expected exactly one value");
  return t[0];
}

struct Key {
  std::string section;
  std::string name;
  std::function<void(RunConfig&, const std::vector<std::string>&, const ParseContext&)> set;
  std::function<std::string(const RunConfig&)> get;
  bool empty_ok = false;
};

Key real(std::string section, std::string name, std::function<double&(RunConfig&)> ref) {
  return {std::move(section), std::move(name),
          [ref](RunConfig& c, const std::vector<std::string>& t, const ParseContext& ctx) {
            ref(c) = to_double(single(t, ctx), ctx);
          },
          [ref](const RunConfig& c) { return fmt(ref(const_cast<RunConfig&>(c))); }};
}

Key integer(std::string section, std::string name, std::function<int&(RunConfig&)> ref) {
  return {std::move(section), std::move(name),
          [ref](RunConfig& c, const std::vector<std::string>& t, const ParseContext& ctx) {
            const long long v = to_integer(single(t, ctx), ctx);
            if (v < -2147483647LL || v > 2147483647LL) ctx.fail("integer out of range");
            ref(c) = static_cast<int>(v);
          },
          [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); }};
}

Key list(std::string section, std::string name, std::function<std::vector<double>&(RunConfig&)> ref) {
  return {std::move(section), std::move(name),
          [ref](RunConfig& c, const std::vector<std::string>& t, const ParseContext& ctx) {
            std::vector<double> v;
            for (const auto& s : t) v.push_back(to_double(s, ctx));
            ref(c) = std::move(v);
          },
          [ref](const RunConfig& c) {
            std::string out;
            for (double v : ref(const_cast<RunConfig&>(c))) out += (out.empty() ? "" : ", ") + fmt(v);
            return out;
          },
          true};
}

/// Either one number (times the identity) or four numbers, row-major.
Key tensor(std::string section, std::string name, std::function<Eigen::Matrix2d&(RunConfig&)> ref,
           std::function<void(RunConfig&)> on_set = {}) {
  return {std::move(section), std::move(name),
          [ref, on_set](RunConfig& c, const std::vector<std::string>& t, const ParseContext& ctx) {
            Eigen::Matrix2d m;
            if (t.size() == 1) {
              m = to_double(t[0], ctx) * Eigen::Matrix2d::Identity();
            } else if (t.size() == 4) {
              m << to_double(t[0], ctx), to_double(t[1], ctx), to_double(t[2], ctx), to_double(t[3], ctx);
            } else {
              ctx.fail("expected 1 or 4 numbers");
            }
            ref(c) = m;
            if (on_set) on_set(c);
          },
          [ref](const RunConfig& c) {
            const Eigen::Matrix2d& m = ref(const_cast<RunConfig&>(c));
            return fmt(m(0, 0)) + " " + fmt(m(0, 1)) + " " + fmt(m(1, 0)) + " " + fmt(m(1, 1));
          }};
}

Key vec2(std::string section, std::string name, std::function<Eigen::Vector2d&(RunConfig&)> ref) {
  return {std::move(section), std::move(name),
          [ref](RunConfig& c, const std::vector<std::string>& t, const ParseContext& ctx) {
            if (t.size() != 2) ctx.fail("expected 2 numbers");
            ref(c) = Eigen::Vector2d(to_double(t[0], ctx), to_double(t[1], ctx));
          },
          [ref](const RunConfig& c) {
            const Eigen::Vector2d& v = ref(const_cast<RunConfig&>(c));
            return fmt(v(0)) + " " + fmt(v(1));
          }};
}

/// Tracks whether D2 was given explicitly while parsing.
struct ParseState {
  bool d2_set = false;
};
thread_local ParseState* g_parse_state = nullptr;

const std::vector<Key>& registry() {
  static const std::vector<Key> keys = [] {
    std::vector<Key> k;
    k.push_back({"", "experiment",
                 [](RunConfig& c, const std::vector<std::string>& t, const ParseContext& ctx) {
                   try {
                     c.experiment = parse_experiment(single(t, ctx));
                   } catch (const InvalidArgument& e) {
                     ctx.fail(e.what());
                   }
                 },
                 [](const RunConfig& c) { return to_string(c.experiment); }});
    k.push_back({"", "output",
                 [](RunConfig& c, const std::vector<std::string>& t, const ParseContext& ctx) {
                   c.output = single(t, ctx);
                 },
                 [](const RunConfig& c) { return c.output; }});
    k.push_back({"", "seed",
                 [](RunConfig& c, const std::vector<std::string>& t, const ParseContext& ctx) {
                   c.seed = to_unsigned(single(t, ctx), ctx);
                 },
                 [](const RunConfig& c) { return std::to_string(c.seed); }});

    const std::string P = "params";
    k.push_back(real(P, "mu", [](RunConfig& c) -> double& { return c.params.mu; }));
    k.push_back(real(P, "lambda", [](RunConfig& c) -> double& { return c.params.lambda; }));
    k.push_back(real(P, "alpha", [](RunConfig& c) -> double& { return c.params.alpha; }));
    k.push_back(real(P, "c0", [](RunConfig& c) -> double& { return c.params.c0; }));
    k.push_back(real(P, "eta", [](RunConfig& c) -> double& { return c.params.eta; }));
    k.push_back(tensor(P, "kappa", [](RunConfig& c) -> Eigen::Matrix2d& { return c.params.kappa; }));
    k.push_back(real(P, "rho", [](RunConfig& c) -> double& { return c.params.rho; }));
    k.push_back(real(P, "tau", [](RunConfig& c) -> double& { return c.params.tau; }));
    k.push_back(real(P, "gamma", [](RunConfig& c) -> double& { return c.params.gamma; }));
    k.push_back(real(P, "beta1", [](RunConfig& c) -> double& { return c.params.beta1; }));
    k.push_back(real(P, "beta2", [](RunConfig& c) -> double& { return c.params.beta2; }));
    k.push_back(real(P, "beta3", [](RunConfig& c) -> double& { return c.params.beta3; }));
    k.push_back(tensor(P, "D1", [](RunConfig& c) -> Eigen::Matrix2d& { return c.params.D1; }));
    k.push_back(tensor(P, "D2", [](RunConfig& c) -> Eigen::Matrix2d& { return c.params.D2; },
                       [](RunConfig&) {
                         if (g_parse_state) g_parse_state->d2_set = true;
                       }));
    k.push_back(vec2(P, "k_dir", [](RunConfig& c) -> Eigen::Vector2d& { return c.params.k_dir; }));
    k.push_back(real(P, "u_inf", [](RunConfig& c) -> double& { return c.params.u_inf; }));

    k.push_back(integer("mesh", "cells", [](RunConfig& c) -> int& { return c.cells; }));
    k.push_back(integer("mesh", "refinements", [](RunConfig& c) -> int& { return c.refinements; }));
    k.push_back(real("time", "dt", [](RunConfig& c) -> double& { return c.dt; }));
    k.push_back(real("time", "t_final", [](RunConfig& c) -> double& { return c.t_final; }));
    k.push_back(integer("temporal", "cells", [](RunConfig& c) -> int& { return c.temporal_cells; }));
    k.push_back(list("temporal", "dt_list", [](RunConfig& c) -> std::vector<double>& { return c.dt_list; }));
    k.push_back(real("temporal", "t_final", [](RunConfig& c) -> double& { return c.temporal_t_final; }));

    const std::string T = "pattern";
    k.push_back(real(T, "tau", [](RunConfig& c) -> double& { return c.pattern_tau; }));
    k.push_back(list(T, "gammas", [](RunConfig& c) -> std::vector<double>& { return c.pattern_gammas; }));
    k.push_back(real(T, "width", [](RunConfig& c) -> double& { return c.pattern.width; }));
    k.push_back(real(T, "height", [](RunConfig& c) -> double& { return c.pattern.height; }));
    k.push_back(integer(T, "nx", [](RunConfig& c) -> int& { return c.pattern.nx; }));
    k.push_back(integer(T, "ny", [](RunConfig& c) -> int& { return c.pattern.ny; }));
    k.push_back(real(T, "dt", [](RunConfig& c) -> double& { return c.pattern.dt; }));
    k.push_back(real(T, "t_final", [](RunConfig& c) -> double& { return c.pattern.t_final; }));
    k.push_back(vec2(T, "amplitude", [](RunConfig& c) -> Eigen::Vector2d& { return c.pattern.amplitude; }));
    k.push_back(real(T, "omega", [](RunConfig& c) -> double& { return c.pattern.omega; }));
    k.push_back(real(T, "perturbation", [](RunConfig& c) -> double& { return c.pattern.perturbation; }));
    k.push_back(real(T, "threshold_factor", [](RunConfig& c) -> double& { return c.pattern.threshold_factor; }));
    k.push_back(integer(T, "persistence", [](RunConfig& c) -> int& { return c.pattern.persistence; }));
    k.push_back(list(T, "snapshot_times",
                     [](RunConfig& c) -> std::vector<double>& { return c.pattern.snapshot_times; }));

    const std::string S = "solver";
    k.push_back(real(S, "newton_tol", [](RunConfig& c) -> double& { return c.solver.newton_tol; }));
    k.push_back(integer(S, "max_newton", [](RunConfig& c) -> int& { return c.solver.max_newton; }));
    k.push_back(integer(S, "max_halvings", [](RunConfig& c) -> int& { return c.solver.max_halvings; }));
    k.push_back({S, "linear_solver",
                 [](RunConfig& c, const std::vector<std::string>& t, const ParseContext& ctx) {
                   try {
                     c.solver.linear_solver = parse_linear_solver(single(t, ctx));
                   } catch (const InvalidArgument& e) {
                     ctx.fail(e.what());
                   }
                 },
                 [](const RunConfig& c) { return to_string(c.solver.linear_solver); }});
    k.push_back(real(S, "gmres_tol", [](RunConfig& c) -> double& { return c.solver.gmres.tol; }));
    k.push_back(integer(S, "gmres_restart", [](RunConfig& c) -> int& { return c.solver.gmres.restart; }));
    k.push_back(integer(S, "gmres_max_iterations",
                        [](RunConfig& c) -> int& { return c.solver.gmres.max_iterations; }));
    k.push_back(integer(S, "refactor_iterations",
                        [](RunConfig& c) -> int& { return c.solver.refactor_iterations; }));
    k.push_back(integer(S, "continuation_levels",
                        [](RunConfig& c) -> int& { return c.solver.continuation_levels; }));
    return k;
  }();
  return keys;
}

void validate_config(const RunConfig& c) {
  validate(c.params);
  const auto require = [](bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw InvalidArgument("invalid parameter '" + key + "': " + what);
  };
  require(c.cells >= 1, "mesh.cells", "must be at least 1");
  require(c.refinements >= 2, "mesh.refinements", "must be at least 2");
  require(c.dt > 0.0, "time.dt", "must be positive");
  require(c.t_final >= c.dt, "time.t_final", "must be at least dt");
  require(c.temporal_cells >= 1, "temporal.cells", "must be at least 1");
  require(!c.dt_list.empty(), "temporal.dt_list", "must not be empty");
  for (std::size_t i = 0; i < c.dt_list.size(); ++i) {
    require(c.dt_list[i] > 0.0 && (i == 0 || c.dt_list[i] < c.dt_list[i - 1]), "temporal.dt_list",
            "must be positive and decreasing");
  }
  require(c.temporal_t_final >= c.dt_list.front(), "temporal.t_final", "must be at least the largest dt");
  require(c.pattern_tau >= 0.0, "pattern.tau", "must be nonnegative");
  require(!c.pattern_gammas.empty(), "pattern.gammas", "must not be empty");
  for (double g : c.pattern_gammas) require(g >= 0.0, "pattern.gammas", "must be nonnegative");
  PatternRunSpec probe = c.pattern;
  probe.params = c.params;
  probe.params.tau = c.pattern_tau;
  validate(probe);
  require(c.solver.newton_tol > 0.0, "solver.newton_tol", "must be positive");
  require(c.solver.max_newton >= 1, "solver.max_newton", "must be at least 1");
  require(c.solver.max_halvings >= 0, "solver.max_halvings", "must be nonnegative");
  require(c.solver.gmres.tol > 0.0, "solver.gmres_tol", "must be positive");
  require(c.solver.gmres.restart >= 1, "solver.gmres_restart", "must be at least 1");
  require(c.solver.gmres.max_iterations >= 1, "solver.gmres_max_iterations", "must be at least 1");
  require(c.solver.continuation_levels >= 0, "solver.continuation_levels", "must be nonnegative");
}

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::ConvergeSpace: return "converge-space";
    case Experiment::ConvergeTime: return "converge-time";
    case Experiment::Pattern: return "pattern";
    case Experiment::SingleRun: return "single-run";
  }
  return "?";
}

Experiment parse_experiment(const std::string& name) {
  for (Experiment e : {Experiment::ConvergeSpace, Experiment::ConvergeTime, Experiment::Pattern,
                       Experiment::SingleRun}) {
    if (to_string(e) == name) return e;
  }
  throw InvalidArgument("unknown experiment '" + name + "'");
}

std::string to_string(LinearSolverKind k) {
  switch (k) {
    case LinearSolverKind::GmresLu: return "gmres-lu";
    case LinearSolverKind::GmresIlu0: return "gmres-ilu0";
    case LinearSolverKind::Direct: return "direct";
  }
  return "?";
}

LinearSolverKind parse_linear_solver(const std::string& name) {
  for (auto k : {LinearSolverKind::GmresLu, LinearSolverKind::GmresIlu0, LinearSolverKind::Direct}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown linear solver '" + name + "'");
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  ParseState state;
  g_parse_state = &state;
  struct Reset {
    ~Reset() { g_parse_state = nullptr; }
  } reset;

  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("line " + std::to_string(line) + ": malformed section header", line);
      section = trim(s.substr(1, s.size() - 2));
      bool known = false;
      for (const auto& k : registry()) known = known || k.section == section;
      if (!known) {
        throw ConfigError("line " + std::to_string(line) + ": unknown section '" + section + "'", line, section);
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line) + ": expected key = value", line);
    }
    const std::string key = trim(s.substr(0, eq));
    const ParseContext ctx{line, section.empty() ? key : section + "." + key};
    const auto value = tokens(trim(s.substr(eq + 1)));
    const Key* match = nullptr;
    for (const auto& k : registry()) {
      if (k.section == section && k.name == key) match = &k;
    }
    if (!match) ctx.fail("unknown key");
    if (value.empty() && !match->empty_ok) ctx.fail("missing value");
    match->set(c, value, ctx);
  }
  if (!state.d2_set) c.params.D2 = c.params.rho * Eigen::Matrix2d::Identity();
  c.pattern.seed = c.seed;
  validate_config(c);
  return c;
}

std::string serialize_config(const RunConfig& config) {
  std::string out, section;
  for (const auto& k : registry()) {
    if (k.section != section) {
      section = k.section;
      out += "\n[" + section + "]\n";
    }
    out += k.name + " = " + k.get(config) + "\n";
  }
  return out;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  f.flush();
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

void write_vtk(const Mesh& mesh, const State& state, const std::string& path) {
  const int nv = mesh.num_vertices();
  const int nt = mesh.num_triangles();
  if (state.p.size() != nv || state.psi.size() != nv || state.w1.size() != nv || state.w2.size() != nv ||
      state.u.size() < 2 * nv) {
    throw InvalidArgument("write_vtk: state does not match the mesh");
  }
  std::string s;
  s.reserve(static_cast<std::size_t>(nv) * 200);
  s += "# vtk DataFile Version 3.0\nporomech state t=" + fmt(state.t) + "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  s += "POINTS " + std::to_string(nv) + " double\n";
  for (const auto& x : mesh.vertices()) s += fmt(x(0)) + " " + fmt(x(1)) + " 0\n";
  s += "CELLS " + std::to_string(nt) + " " + std::to_string(4 * nt) + "\n";
  for (const auto& t : mesh.triangles()) {
    s += "3 " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]) + "\n";
  }
  s += "CELL_TYPES " + std::to_string(nt) + "\n";
  for (int t = 0; t < nt; ++t) s += "5\n";
  s += "POINT_DATA " + std::to_string(nv) + "\n";
  s += "VECTORS u double\n";
  for (int v = 0; v < nv; ++v) s += fmt(state.u[2 * v]) + " " + fmt(state.u[2 * v + 1]) + " 0\n";
  const auto scalar = [&](const char* name, const Vector& f) {
    s += std::string("SCALARS ") + name + " double 1\nLOOKUP_TABLE default\n";
    for (int v = 0; v < nv; ++v) s += fmt(f[v]) + "\n";
  };
  scalar("p", state.p);
  scalar("psi", state.psi);
  scalar("w1", state.w1);
  scalar("w2", state.w2);
  write_file(path, s);
}

std::string format_csv_table(const ErrorTable& table) {
  std::string s = table.size_label;
  for (const auto& c : table.columns) s += "," + c;
  for (const auto& c : table.columns) s += ",rate_" + c;
  s += "\n";
  for (const auto& row : table.rows) {
    s += fmt(row.size);
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      s += "," + (i < row.errors.size() ? fmt(row.errors[i]) : std::string());
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      s += "," + (i < row.rates.size() ? fmt(row.rates[i]) : std::string());
    }
    s += "\n";
  }
  return s;
}

std::string format_csv_series(const VariationSeries& series) {
  if (series.times.size() != series.values.size()) throw InvalidArgument("format_csv_series: size mismatch");
  std::string s = "t,variation\n";
  for (std::size_t i = 0; i < series.times.size(); ++i) s += fmt(series.times[i]) + "," + fmt(series.values[i]) + "\n";
  return s;
}

void write_csv_table(const ErrorTable& table, const std::string& path) { write_file(path, format_csv_table(table)); }

void write_csv_series(const VariationSeries& series, const std::string& path) {
  write_file(path, format_csv_series(series));
}

}  // namespace poromech
