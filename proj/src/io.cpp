#include "qs2l/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qs2l/errors.hpp"

namespace qs2l::io {
namespace {

void dump_string(std::string& out, const std::string& s) {
  out += json(s).dump();
}

void dump_value(std::string& out, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        dump_string(out, it.key());
        out += ": ";
        dump_value(out, it.value(), indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // arrays of scalars stay on one line
      bool scalars = true;
      for (const json& e : j) scalars = scalars && e.is_primitive();
      if (scalars) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump_value(out, j[i], indent + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        dump_value(out, j[i], indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump(const json& j) {
  std::string out;
  dump_value(out, j, 0);
  out += "\n";
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string sign_name(spectrum::Branch b) { return b == spectrum::Branch::minus ? "-" : "+"; }

json params_json(const LayerParams& p) {
  return {{"delta", p.delta}, {"lambda", p.lambda}, {"b1", p.b1}, {"b2", p.b2}, {"mu", p.mu}, {"b", p.b}};
}

LayerParams params_from_json(const json& j) {
  try {
    return LayerParams::make(j.at("delta").get<double>(), j.at("lambda").get<double>(), j.at("b1").get<double>(),
                             j.at("b2").get<double>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("params: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

std::string spectrum_csv(const std::vector<spectrum::SpectrumRow>& rows) {
  std::string out = "n,a_n,b_n,gamma_n,omega_minus,omega_plus\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + "," + format_double(r.a_n) + "," + format_double(r.b_n) + "," +
           format_double(r.gamma_n) + "," + format_double(r.omega_minus) + "," + format_double(r.omega_plus) + "\n";
  }
  return out;
}

json spectrum_json(const std::vector<spectrum::SpectrumRow>& rows) {
  json a = json::array();
  for (const auto& r : rows) {
    a.push_back({{"n", r.n},
                 {"a_n", r.a_n},
                 {"b_n", r.b_n},
                 {"gamma_n", r.gamma_n},
                 {"omega_minus", r.omega_minus},
                 {"omega_plus", r.omega_plus}});
  }
  return a;
}

std::string collisions_csv(const std::vector<spectrum::CollisionRecord>& records) {
  std::string out = "m,n,b2_root,residual,tangency\n";
  for (const auto& r : records) {
    out += std::to_string(r.m) + "," + std::to_string(r.n) + "," + format_double(r.b2_root) + "," +
           format_double(r.residual) + "," + (r.tangency ? "true" : "false") + "\n";
  }
  return out;
}

json collisions_json(const std::vector<spectrum::CollisionRecord>& records) {
  json a = json::array();
  for (const auto& r : records) {
    a.push_back({{"m", r.m}, {"n", r.n}, {"b2_root", r.b2_root}, {"residual", r.residual}, {"tangency", r.tangency}});
  }
  return a;
}

json vstate_json(const contour::VStateSolution& sol) {
  const contour::RadialDeformation& d = sol.deformation;
  return {{"params", params_json(sol.params)},
          {"m", sol.m},
          {"sign", sign_name(sol.sign)},
          {"amplitude", sol.amplitude},
          {"omega", sol.omega},
          {"nodes", d.nodes},
          {"modes", d.modes},
          {"coeffs", {{"layer1", d.coeffs[0]}, {"layer2", d.coeffs[1]}}},
          {"residual", sol.residual_norm},
          {"iterations", sol.iterations}};
}

contour::VStateSolution vstate_from_json(const json& j) {
  contour::VStateSolution sol;
  try {
    sol.params = params_from_json(j.at("params"));
    sol.m = j.at("m").get<int>();
    const std::string sign = j.at("sign").get<std::string>();
    if (sign != "+" && sign != "-") throw ConfigError("vstate: sign must be '+' or '-'");
    sol.sign = sign == "+" ? spectrum::Branch::plus : spectrum::Branch::minus;
    sol.amplitude = j.at("amplitude").get<double>();
    sol.omega = j.at("omega").get<double>();
    sol.residual_norm = j.value("residual", 0.0);
    sol.iterations = j.value("iterations", 0);
    const int nodes = j.at("nodes").get<int>();
    sol.deformation = contour::RadialDeformation::from_coeffs(sol.m, nodes,
                                                              j.at("coeffs").at("layer1").get<std::vector<double>>(),
                                                              j.at("coeffs").at("layer2").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("vstate: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("vstate: ") + e.what());
  }
  return sol;
}

std::string boundary_csv(const contour::VStateSolution& sol) {
  const bie::CurvePair curves = contour::deformation_curves(sol.params, sol.deformation);
  const int nodes = sol.deformation.nodes;
  std::string out = "theta,R1,R2,x1,y1,x2,y2\n";
  for (int i = 0; i < nodes; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / nodes;
    const auto z1 = curves[0].z[i];
    const auto z2 = curves[1].z[i];
    out += format_double(theta) + "," + format_double(std::abs(z1)) + "," + format_double(std::abs(z2)) + "," +
           format_double(z1.real()) + "," + format_double(z1.imag()) + "," + format_double(z2.real()) + "," +
           format_double(z2.imag()) + "\n";
  }
  return out;
}

std::string snapshot_csv(const dynamics::EvolutionState& state) {
  std::string out = "layer,node_index,x,y\n";
  for (int k = 0; k < 2; ++k) {
    const auto& nodes = state.boundaries[k].nodes;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      out += std::to_string(k + 1) + "," + std::to_string(i) + "," + format_double(nodes[i].x) + "," +
             format_double(nodes[i].y) + "\n";
    }
  }
  return out;
}

dynamics::EvolutionState snapshot_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("layer,node_index,x,y", 0) != 0) {
    throw ConfigError("boundary csv: expected header layer,node_index,x,y");
  }
  dynamics::EvolutionState state;
  std::array<std::vector<PlanePoint>, 2> pts;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 4) throw ConfigError("boundary csv: line " + std::to_string(lineno) + " needs 4 fields");
    const double layer = parse_double(f[0]);
    const double index = parse_double(f[1]);
    if (layer != 1.0 && layer != 2.0) throw ConfigError("boundary csv: layer must be 1 or 2");
    auto& dst = pts[static_cast<int>(layer) - 1];
    if (index != static_cast<double>(dst.size())) {
      throw ConfigError("boundary csv: node indices must be consecutive from 0 (line " + std::to_string(lineno) + ")");
    }
    dst.push_back({parse_double(f[2]), parse_double(f[3])});
  }
  if (pts[0].empty() || pts[0].size() != pts[1].size()) {
    throw ConfigError("boundary csv: both layers need the same nonzero node count");
  }
  for (int k = 0; k < 2; ++k) {
    state.boundaries[k].nodes = std::move(pts[k]);
    state.boundaries[k].layer = k + 1;
  }
  return state;
}

}  // namespace qs2l::io
