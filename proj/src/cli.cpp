#include "qs2l/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "qs2l/contour.hpp"
#include "qs2l/dynamics.hpp"
#include "qs2l/errors.hpp"
#include "qs2l/io.hpp"
#include "qs2l/spectrum.hpp"
#include "qs2l/verify.hpp"

namespace qs2l::cli {
namespace {

namespace fs = std::filesystem;
using io::json;

struct RunConfig {
  std::string command;
  double delta = 1.0;
  double lambda = 1.0;
  double b1 = 1.0;
  double b2 = 1.0;
  int n_max = 0;  // 0 picks a per-command default
  int m = 2;
  std::string sign = "-";
  std::vector<double> s_grid = {1e-3};
  double t_end = 1.0;
  double dt = 0.0;  // 0 picks the stable default
  int nodes = 256;
  int modes = 32;
  int grid = 400;
  int snapshot_every = 0;
  int redistribute_every = 50;
  std::string init = "discs";
  std::string out = ".";
  std::vector<std::string> suites;
  double inject_gamma = 0.0;
  bool check_rotation = false;
  bool equal_radii = false;
  bool first_free = false;
};

struct Validated {
  LayerParams params;
  spectrum::Branch sign = spectrum::Branch::minus;
};

Validated validate(const RunConfig& c) {
  Validated v;
  try {
    v.params = LayerParams::make(c.delta, c.lambda, c.b1, c.b2);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (c.sign == "-" || c.sign == "minus") {
    v.sign = spectrum::Branch::minus;
  } else if (c.sign == "+" || c.sign == "plus") {
    v.sign = spectrum::Branch::plus;
  } else {
    throw ConfigError("--sign must be +, -, plus or minus");
  }
  if (c.n_max < 0) throw ConfigError("--nmax must be positive");
  if (c.m < 1) throw ConfigError("--m must be >= 1");
  if (c.grid < 16) throw ConfigError("--grid must be >= 16");
  if (c.modes < 1) throw ConfigError("--modes must be >= 1");
  if (c.snapshot_every < 0 || c.redistribute_every < 0) throw ConfigError("step counts must be >= 0");
  if (!(c.t_end > 0.0) || !std::isfinite(c.t_end)) throw ConfigError("--t-end must be positive");
  if (!(c.dt >= 0.0) || !std::isfinite(c.dt)) throw ConfigError("--dt must be >= 0");
  if (c.command == "vstate") {
    if (c.nodes < 64 || (c.nodes & (c.nodes - 1)) != 0) throw ConfigError("--nodes must be a power of two >= 64");
    if (c.modes * c.m >= c.nodes / 2) throw ConfigError("--modes * --m must be below nodes / 2");
    if (c.s_grid.empty()) throw ConfigError("--s-grid is empty");
    for (double s : c.s_grid) {
      if (!std::isfinite(s)) throw ConfigError("--s-grid entries must be finite");
    }
  }
  if (c.command == "evolve" && (c.nodes < 64 || c.nodes % 2 != 0)) throw ConfigError("--nodes must be even and >= 64");
  return v;
}

json header(const LayerParams& p) {
  return {{"schema_version", io::kSchemaVersion}, {"params", io::params_json(p)}, {"proven_regime", p.proven_regime()}};
}

void prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
}

int cmd_spectrum(const RunConfig& c, const Validated& v, std::ostream& out) {
  const int n_max = c.n_max > 0 ? c.n_max : 16;
  const auto rows = spectrum::spectrum_table(v.params, n_max);
  json doc = header(v.params);
  doc["rows"] = io::spectrum_json(rows);
  int free_m = -1;
  if (c.first_free) {
    free_m = spectrum::first_collision_free_m(v.params, 4096);
    doc["first_collision_free_m"] = free_m;
  }
  prepare_out(c.out);
  io::write_file(fs::path(c.out) / "spectrum.csv", io::spectrum_csv(rows));
  io::write_file(fs::path(c.out) / "spectrum.json", io::dump(doc));
  out << "spectrum: " << rows.size() << " rows written to " << (fs::path(c.out) / "spectrum.csv").string() << "\n";
  if (!v.params.proven_regime()) out << "note: delta < b^2, outside the proven regime\n";
  if (c.first_free) {
    if (free_m > 0) {
      out << "first collision-free m: " << free_m << "\n";
    } else {
      out << "no collision-free m <= 4096\n";
    }
  }
  return kExitOk;
}

int cmd_collide(const RunConfig& c, const Validated& v, std::ostream& out) {
  json doc = header(v.params);
  if (c.equal_radii) {
    const int n_max = c.n_max > 0 ? c.n_max : 3;
    if (n_max < 2) throw ConfigError("--equal-radii needs --nmax >= 2");
    json roots = json::array();
    for (int n = 2; n <= n_max; ++n) {
      const spectrum::EqualRadiiCollision r = spectrum::equal_radii_collision(n, v.params.b1, v.params.delta);
      roots.push_back({{"n", n},
                       {"x0", r.x0},
                       {"residual", r.residual},
                       {"mu", r.mu},
                       {"lambda", r.lambda},
                       {"omega_gap", r.omega_gap}});
    }
    doc["mode"] = "equal_radii";
    doc["roots"] = roots;
    prepare_out(c.out);
    io::write_file(fs::path(c.out) / "collisions.json", io::dump(doc));
    out << "equal-radii collisions: " << roots.size() << " roots written\n";
    return kExitOk;
  }
  const int n_max = c.n_max > 0 ? c.n_max : std::max(32, 2 * c.m);
  if (n_max < c.m + 1) throw ConfigError("--nmax must exceed --m");
  const auto records = spectrum::collision_scan(v.params, c.m, n_max, c.grid);
  std::vector<int> endpoint = spectrum::endpoint_collisions(v.params, c.m, n_max, 1e-9);
  doc["mode"] = "scan";
  doc["m"] = c.m;
  doc["n_max"] = n_max;
  doc["grid"] = c.grid;
  doc["records"] = io::collisions_json(records);
  doc["endpoint_collisions"] = endpoint;
  prepare_out(c.out);
  io::write_file(fs::path(c.out) / "collisions.csv", io::collisions_csv(records));
  io::write_file(fs::path(c.out) / "collisions.json", io::dump(doc));
  out << "collisions for m = " << c.m << ": " << records.size() << " in (0, b1), " << endpoint.size()
      << " at b2 = b1; proven_regime = " << (v.params.proven_regime() ? "true" : "false") << "\n";
  return kExitOk;
}

contour::SolverOptions solver_options(const RunConfig& c) {
  contour::SolverOptions o;
  o.nodes = c.nodes;
  o.modes = c.modes;
  o.scan_grid = c.grid;
  return o;
}

int refuse(const RunConfig& c, const Validated& v, const std::string& reason, std::ostream& out) {
  json doc = header(v.params);
  doc["status"] = "refused";
  doc["reason"] = reason;
  doc["m"] = c.m;
  doc["sign"] = io::sign_name(v.sign);
  prepare_out(c.out);
  io::write_file(fs::path(c.out) / "refusal.json", io::dump(doc));
  json line = {{"status", "refused"}, {"reason", reason}};
  out << line.dump() << "\n";
  return kExitRefused;
}

int cmd_vstate(const RunConfig& c, const Validated& v, std::ostream& out) {
  const contour::SolverOptions opts = solver_options(c);
  if (const auto why = contour::collision_reason(v.params, c.m, v.sign, opts)) return refuse(c, v, *why, out);
  contour::BranchResult branch;
  try {
    branch = contour::branch_continue(v.params, c.m, v.sign, c.s_grid, opts);
  } catch (const CollisionError& e) {
    return refuse(c, v, e.what(), out);
  }
  json doc = header(v.params);
  doc["m"] = c.m;
  doc["sign"] = io::sign_name(v.sign);
  doc["omega_linear"] = spectrum::omega_pm(v.params, c.m).get(v.sign);
  doc["complete"] = branch.complete;
  doc["last_good_amplitude"] = branch.last_good_amplitude;
  doc["diagnostic"] = branch.diagnostic;
  json sols = json::array();
  json files = json::array();
  for (std::size_t i = 0; i < branch.solutions.size(); ++i) {
    sols.push_back(io::vstate_json(branch.solutions[i]));
    char name[32];
    std::snprintf(name, sizeof name, "boundary_%03zu.csv", i);
    files.push_back(name);
  }
  doc["solutions"] = sols;
  doc["boundary_files"] = files;
  prepare_out(c.out);
  for (std::size_t i = 0; i < branch.solutions.size(); ++i) {
    io::write_file(fs::path(c.out) / files[i].get<std::string>(), io::boundary_csv(branch.solutions[i]));
  }
  io::write_file(fs::path(c.out) / "vstate.json", io::dump(doc));
  for (const auto& s : branch.solutions) {
    out << "s = " << io::format_double(s.amplitude) << "  omega = " << io::format_double(s.omega)
        << "  residual = " << io::format_double(s.residual_norm) << "\n";
  }
  if (!branch.complete) {
    out << "branch stopped: " << branch.diagnostic << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

struct InitialData {
  dynamics::EvolutionState state;
  bool has_omega = false;
  double omega = 0.0;
};

InitialData load_initial(const RunConfig& c, const LayerParams& params) {
  InitialData d;
  if (c.init == "discs") {
    d.state = dynamics::disc_state(params, c.nodes);
    return d;
  }
  const fs::path path(c.init);
  if (path.extension() == ".csv") {
    d.state = io::snapshot_from_csv(io::read_file(path));
  } else if (path.extension() == ".json") {
    json j;
    try {
      j = json::parse(io::read_file(path));
    } catch (const json::exception& e) {
      throw ConfigError(std::string("--init: ") + e.what());
    }
    if (j.contains("solutions")) {
      if (!j["solutions"].is_array() || j["solutions"].empty()) throw ConfigError("--init: no stored solutions");
      j = j["solutions"].back();
    }
    const contour::VStateSolution sol = io::vstate_from_json(j);
    const LayerParams& sp = sol.params;
    if (sp.delta != params.delta || sp.lambda != params.lambda || sp.b1 != params.b1 || sp.b2 != params.b2) {
      throw ConfigError("--init: stored V-state parameters differ from --delta/--lambda/--b1/--b2");
    }
    try {
      d.state = dynamics::vstate_state(params, sol.deformation);
    } catch (const RadiusCollapseError& e) {
      throw ConfigError(std::string("--init: ") + e.what());
    }
    d.has_omega = true;
    d.omega = sol.omega;
  } else {
    throw ConfigError("--init must be 'discs', a .json V-state or a .csv boundary file");
  }
  const std::size_t n = d.state.boundaries[0].nodes.size();
  if (n < 64 || n != d.state.boundaries[1].nodes.size()) {
    throw ConfigError("--init: both boundaries need the same node count >= 64");
  }
  for (const auto& b : d.state.boundaries) {
    if (!(dynamics::patch_area(b) > 0.0) || !dynamics::is_simple(b)) {
      throw ConfigError("--init: boundaries must be simple and counter-clockwise");
    }
  }
  return d;
}

int cmd_evolve(const RunConfig& c, const Validated& v, std::ostream& out) {
  const InitialData init = load_initial(c, v.params);
  if (c.check_rotation && !init.has_omega) throw ConfigError("--check-rotation needs a V-state --init file");
  const double dt = c.dt > 0.0 ? c.dt : dynamics::default_dt(v.params, init.state);
  dynamics::EvolveOptions opts;
  opts.snapshot_every = c.snapshot_every;
  opts.redistribute_every = c.redistribute_every;
  const dynamics::EvolveResult r = dynamics::evolve(v.params, init.state, c.t_end, dt, opts);

  const dynamics::EvolutionState& last = r.snapshots.back();
  json doc = header(v.params);
  doc["dt"] = dt;
  doc["t_end"] = c.t_end;
  doc["nodes"] = init.state.boundaries[0].nodes.size();
  doc["steps"] = r.steps;
  doc["completed"] = r.completed;
  doc["diagnostic"] = r.diagnostic;
  json times = json::array();
  json files = json::array();
  for (std::size_t i = 0; i < r.snapshots.size(); ++i) {
    times.push_back(r.snapshots[i].time);
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%04zu.csv", i);
    files.push_back(name);
  }
  doc["times"] = times;
  doc["snapshot_files"] = files;
  std::array<double, 2> drift{};
  for (int k = 0; k < 2; ++k) {
    drift[k] = dynamics::hausdorff_distance(last.boundaries[k].points(), init.state.boundaries[k].points()) /
               v.params.b1;
  }
  doc["diagnostics"] = {{"area_drift", r.diagnostics.area_drift},
                        {"min_boundary_distance", r.diagnostics.min_boundary_distance},
                        {"layer_difference", r.diagnostics.layer_difference},
                        {"max_radial_drift", r.diagnostics.max_radial_drift},
                        {"hausdorff_drift", drift}};
  if (c.check_rotation) {
    doc["omega"] = init.omega;
    doc["rigid_rotation_residual"] = dynamics::rigid_rotation_residual(r.snapshots, init.omega, v.params.b1);
  }
  prepare_out(c.out);
  for (std::size_t i = 0; i < r.snapshots.size(); ++i) {
    io::write_file(fs::path(c.out) / files[i].get<std::string>(), io::snapshot_csv(r.snapshots[i]));
  }
  io::write_file(fs::path(c.out) / "manifest.json", io::dump(doc));
  out << "evolve: " << r.steps << " steps, t = " << io::format_double(last.time)
      << ", hausdorff drift = " << io::format_double(std::max(drift[0], drift[1]))
      << ", layer difference = " << io::format_double(r.diagnostics.layer_difference) << "\n";
  if (c.check_rotation) {
    out << "rigid rotation residual = " << io::format_double(doc["rigid_rotation_residual"].get<double>()) << "\n";
  }
  if (!r.completed) {
    out << "aborted: " << r.diagnostic << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  verify::VerifyOptions opts;
  opts.suites = c.suites;
  opts.gamma_shift = c.inject_gamma;
  const auto results = verify::run(opts);
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    char line[512];
    if (r.tolerance > 0.0 || !std::isfinite(r.error)) {
      std::snprintf(line, sizeof line, "%-4s  %-10s  %-62s  err %.3e  tol %.1e\n", r.passed ? "PASS" : "FAIL",
                    r.suite.c_str(), r.name.c_str(), r.error, r.tolerance);
    } else {
      std::snprintf(line, sizeof line, "%-4s  %-10s  %s\n", r.passed ? "PASS" : "FAIL", r.suite.c_str(),
                    r.name.c_str());
    }
    out << line;
  }
  out << (all ? "all checks passed" : "some checks failed") << " (" << results.size() << " checks)\n";
  return all ? kExitOk : kExitNumeric;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Two-layer quasi-geostrophic vortex patch toolkit"};
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.add_option("command", c.command, "spectrum | collide | vstate | evolve | verify")
      ->required()
      ->check(CLI::IsMember({"spectrum", "collide", "vstate", "evolve", "verify"}));
  app.add_option("--delta", c.delta, "layer thickness ratio");
  app.add_option("--lambda", c.lambda, "interface rigidity");
  app.add_option("--b1", c.b1, "layer-1 disc radius");
  app.add_option("--b2", c.b2, "layer-2 disc radius (<= b1)");
  app.add_option("--nmax", c.n_max, "largest mode index");
  app.add_option("--m", c.m, "symmetry index of the V-state or scan");
  app.add_option("--sign", c.sign, "branch: + or -");
  app.add_option("--s-grid", c.s_grid, "comma-separated amplitudes")->delimiter(',');
  app.add_option("--t-end", c.t_end, "final time");
  app.add_option("--dt", c.dt, "time step (0 = stable default)");
  app.add_option("--nodes", c.nodes, "boundary nodes per layer");
  app.add_option("--modes", c.modes, "Fourier modes per layer");
  app.add_option("--grid", c.grid, "b2 intervals of the collision scan");
  app.add_option("--snapshot-every", c.snapshot_every, "steps between snapshots (0 = first and last only)");
  app.add_option("--redistribute-every", c.redistribute_every, "steps between arclength resamplings (0 = never)");
  app.add_option("--init", c.init, "discs, a V-state .json or a boundary .csv");
  app.add_option("--out", c.out, "output directory");
  app.add_option("--suite", c.suites, "verify suites to run")->delimiter(',');
  app.add_option("--inject-gamma", c.inject_gamma, "perturb gamma_n in the spectral checks");
  app.add_flag("--check-rotation", c.check_rotation, "report the rigid rotation residual");
  app.add_flag("--equal-radii", c.equal_radii, "collide: equal-radii roots of I_1 K_1 = 1/(2n)");
  app.add_flag("--first-free", c.first_free, "spectrum: report p0, the first m with Omega_n^+ > Omega_m^- for all n, m >= p0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    const Validated v = validate(c);
    if (c.command == "spectrum") return cmd_spectrum(c, v, out);
    if (c.command == "collide") return cmd_collide(c, v, out);
    if (c.command == "vstate") return cmd_vstate(c, v, out);
    if (c.command == "evolve") return cmd_evolve(c, v, out);
    return cmd_verify(c, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CollisionError& e) {
    err << "refused: " << e.what() << "\n";
    return kExitRefused;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace qs2l::cli
