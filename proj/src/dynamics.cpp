#include "qs2l/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qs2l/errors.hpp"
#include "qs2l/quadrature.hpp"

namespace qs2l::dynamics {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Trigonometric interpolant of equispaced samples of a closed curve.
class TrigCurve {
 public:
  explicit TrigCurve(std::span<const cplx> z) : n_(static_cast<int>(z.size())), coef_(z.size()) {
    for (int q = 0; q < n_; ++q) {
      cplx acc = 0.0;
      for (int j = 0; j < n_; ++j) {
        const double phase = kTwoPi * static_cast<double>((static_cast<long>(q) * j) % n_) / n_;
        acc += z[j] * std::polar(1.0, -phase);
      }
      coef_[q] = acc / static_cast<double>(n_);
    }
  }

  // d-th derivative at eta, d in {0, 1, 2}.
  [[nodiscard]] cplx eval(double eta, int d = 0) const {
    cplx acc = 0.0;
    const int half = n_ / 2;
    for (int q = 0; q < n_; ++q) {
      const int k = (q < half) ? q : q - n_;
      if (q == half) {
        // Nyquist mode carried as cos(half * eta)
        const double c = std::cos(half * eta);
        const double s = std::sin(half * eta);
        const double v = (d == 0) ? c : (d == 1) ? -half * s : -static_cast<double>(half) * half * c;
        acc += coef_[q] * v;
        continue;
      }
      const cplx e = std::polar(1.0, k * eta);
      const cplx factor = (d == 0) ? cplx(1.0) : (d == 1) ? cplx(0.0, k) : cplx(-static_cast<double>(k) * k, 0.0);
      acc += coef_[q] * factor * e;
    }
    return acc;
  }

  [[nodiscard]] int size() const { return n_; }

 private:
  int n_;
  std::vector<cplx> coef_;
};

double distance_to_curve(const TrigCurve& curve, std::span<const cplx> nodes, cplx p) {
  const int n = static_cast<int>(nodes.size());
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    const double d = std::norm(nodes[j] - p);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  const double h = kTwoPi / n;
  const double eta0 = h * best;
  double eta = eta0;
  double result = std::sqrt(best_d);
  // Newton on g(eta) = Re(conj(z - p) z') = 0, kept inside the neighbouring cells
  for (int it = 0; it < 30; ++it) {
    const cplx z = curve.eval(eta);
    const cplx dz = curve.eval(eta, 1);
    const cplx d2z = curve.eval(eta, 2);
    const double g = std::real(std::conj(z - p) * dz);
    const double dg = std::norm(dz) + std::real(std::conj(z - p) * d2z);
    if (!(dg > 0.0)) break;
    const double next = std::clamp(eta - g / dg, eta0 - h, eta0 + h);
    const bool done = std::abs(next - eta) < 1e-15;
    eta = next;
    if (done) break;
  }
  return std::min(result, std::abs(curve.eval(eta) - p));
}

bool segments_cross(cplx a, cplx b, cplx c, cplx d) {
  auto orient = [](cplx p, cplx q, cplx r) { return std::imag(std::conj(q - p) * (r - p)); };
  const double o1 = orient(a, b, c);
  const double o2 = orient(a, b, d);
  const double o3 = orient(c, d, a);
  const double o4 = orient(c, d, b);
  return ((o1 > 0.0) != (o2 > 0.0)) && ((o3 > 0.0) != (o4 > 0.0)) && o1 != 0.0 && o2 != 0.0 && o3 != 0.0 &&
         o4 != 0.0;
}

std::array<std::vector<cplx>, 2> state_points(const EvolutionState& s) {
  return {s.boundaries[0].points(), s.boundaries[1].points()};
}

EvolutionState with_points(const EvolutionState& s, const std::array<std::vector<cplx>, 2>& pts) {
  EvolutionState out = s;
  for (int k = 0; k < 2; ++k) out.boundaries[k] = PatchBoundary::from_points(pts[k], k + 1);
  return out;
}

void check_state(const EvolutionState& s) {
  const std::size_t n = s.boundaries[0].nodes.size();
  if (n < 64 || s.boundaries[1].nodes.size() != n) {
    throw DomainError("dynamics: both boundaries need the same node count (>= 64)");
  }
}

void check_boundary(const PatchBoundary& b) {
  if (!(patch_area(b) > 0.0)) throw SimplicityError("dynamics: boundary lost positive orientation");
  if (!is_simple(b)) throw SimplicityError("dynamics: boundary self-intersects");
}

double min_layer_distance(const EvolutionState& s) {
  double best = std::numeric_limits<double>::infinity();
  for (const PlanePoint& a : s.boundaries[0].nodes) {
    for (const PlanePoint& b : s.boundaries[1].nodes) best = std::min(best, std::hypot(a.x - b.x, a.y - b.y));
  }
  return best;
}

double layer_difference(const EvolutionState& s) {
  double worst = 0.0;
  for (std::size_t i = 0; i < s.boundaries[0].nodes.size(); ++i) {
    const PlanePoint& a = s.boundaries[0].nodes[i];
    const PlanePoint& b = s.boundaries[1].nodes[i];
    worst = std::max(worst, std::hypot(a.x - b.x, a.y - b.y));
  }
  return worst;
}

}  // namespace

std::vector<cplx> PatchBoundary::points() const {
  std::vector<cplx> z(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) z[i] = nodes[i].complex();
  return z;
}

PatchBoundary PatchBoundary::from_points(std::span<const cplx> z, int layer) {
  PatchBoundary b;
  b.layer = layer;
  b.nodes.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) b.nodes[i] = PlanePoint::from_complex(z[i]);
  return b;
}

PlusMinusFields<double> transform_pm(double delta, double f1, double f2) {
  if (!(delta > 0.0)) throw DomainError("transform_pm: delta must be positive");
  return {f1 + f2 / delta, f1 - f2};
}

std::array<double, 2> inverse_pm(double delta, const PlusMinusFields<double>& f) {
  const double c = delta / (1.0 + delta);
  return {c * (f.f_plus + f.f_minus / delta), c * (f.f_plus - f.f_minus)};
}

PlusMinusFields<cplx> transform_pm(double delta, cplx f1, cplx f2) {
  if (!(delta > 0.0)) throw DomainError("transform_pm: delta must be positive");
  return {f1 + f2 / delta, f1 - f2};
}

std::array<cplx, 2> inverse_pm(double delta, const PlusMinusFields<cplx>& f) {
  const double c = delta / (1.0 + delta);
  return {c * (f.f_plus + f.f_minus / delta), c * (f.f_plus - f.f_minus)};
}

PatchBoundary disc_boundary(double radius, int nodes, int layer) {
  std::vector<cplx> z(nodes);
  for (int i = 0; i < nodes; ++i) z[i] = std::polar(radius, kTwoPi * i / nodes);
  return PatchBoundary::from_points(z, layer);
}

EvolutionState disc_state(const LayerParams& params, int nodes) {
  EvolutionState s;
  s.boundaries = {disc_boundary(params.b1, nodes, 1), disc_boundary(params.b2, nodes, 2)};
  return s;
}

EvolutionState vstate_state(const LayerParams& params, const contour::RadialDeformation& r) {
  const bie::CurvePair curves = contour::deformation_curves(params, r);
  EvolutionState s;
  s.boundaries = {PatchBoundary::from_points(curves[0].z, 1), PatchBoundary::from_points(curves[1].z, 2)};
  return s;
}

bie::CurvePair state_curves(const EvolutionState& state) {
  bie::CurvePair curves;
  for (int k = 0; k < 2; ++k) {
    curves[k].z = state.boundaries[k].points();
    curves[k].dz = quadrature::spectral_derivative(std::span<const cplx>(curves[k].z));
  }
  return curves;
}

PlanePoint boundary_velocity(const LayerParams& params, const EvolutionState& state, int k, PlanePoint query) {
  check_state(state);
  const bie::VelocityOperator op(params, static_cast<int>(state.boundaries[0].nodes.size()));
  return PlanePoint::from_complex(op.at_point(state_curves(state), k, query.complex()));
}

std::array<std::vector<cplx>, 2> node_velocities(const bie::VelocityOperator& op, const EvolutionState& state,
                                                 bie::Execution exec) {
  const bie::CurvePair curves = state_curves(state);
  return {op.on_nodes(curves, 1, exec), op.on_nodes(curves, 2, exec)};
}

std::array<std::vector<cplx>, 2> node_velocities_pm(const bie::VelocityOperator& op, const EvolutionState& state,
                                                    bie::Execution exec) {
  const bie::CurvePair curves = state_curves(state);
  const double delta = op.params().delta;
  // (+, -) strengths of the unit patches D_1 and D_2
  const PlusMinusFields<double> s1 = transform_pm(delta, 1.0, 0.0);
  const PlusMinusFields<double> s2 = transform_pm(delta, 0.0, 1.0);
  std::array<std::vector<cplx>, 2> out;
  for (int k = 1; k <= 2; ++k) {
    const bie::ChannelIntegrals ch = op.channels_on_nodes(curves, k, exec);
    const std::size_t n = ch.log_part[0].size();
    out[k - 1].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const cplx u_plus = -(s1.f_plus * ch.log_part[0][i] + s2.f_plus * ch.log_part[1][i]) / kTwoPi;
      const cplx u_minus = (s1.f_minus * ch.screened_part[0][i] + s2.f_minus * ch.screened_part[1][i]) / kTwoPi;
      out[k - 1][i] = inverse_pm(delta, PlusMinusFields<cplx>{u_plus, u_minus})[k - 1];
    }
  }
  return out;
}

EvolutionState step_rk4(const bie::VelocityOperator& op, const EvolutionState& state, bie::Execution exec) {
  check_state(state);
  if (!(state.dt != 0.0) || !std::isfinite(state.dt)) throw DomainError("step_rk4: dt must be nonzero and finite");
  const double dt = state.dt;
  const auto z0 = state_points(state);
  auto advance = [&](const std::array<std::vector<cplx>, 2>& k, double h) {
    std::array<std::vector<cplx>, 2> z = z0;
    for (int l = 0; l < 2; ++l) {
      for (std::size_t i = 0; i < z[l].size(); ++i) z[l][i] += h * k[l][i];
    }
    return z;
  };
  const auto k1 = node_velocities(op, state, exec);
  const auto k2 = node_velocities(op, with_points(state, advance(k1, 0.5 * dt)), exec);
  const auto k3 = node_velocities(op, with_points(state, advance(k2, 0.5 * dt)), exec);
  const auto k4 = node_velocities(op, with_points(state, advance(k3, dt)), exec);
  std::array<std::vector<cplx>, 2> z = z0;
  for (int l = 0; l < 2; ++l) {
    for (std::size_t i = 0; i < z[l].size(); ++i) {
      z[l][i] += dt / 6.0 * (k1[l][i] + 2.0 * k2[l][i] + 2.0 * k3[l][i] + k4[l][i]);
    }
  }
  EvolutionState next = with_points(state, z);
  next.time = state.time + dt;
  for (const PatchBoundary& b : next.boundaries) check_boundary(b);
  return next;
}

PatchBoundary redistribute(const PatchBoundary& boundary) {
  const std::vector<cplx> z = boundary.points();
  const int n = static_cast<int>(z.size());
  const TrigCurve curve(z);
  const std::vector<cplx> dz = quadrature::spectral_derivative(std::span<const cplx>(z));
  std::vector<cplx> speed(n);
  for (int i = 0; i < n; ++i) speed[i] = std::abs(dz[i]);
  // arclength s(eta) = mean * eta + periodic part, from the Fourier series of the speed
  const TrigCurve speed_series(speed);
  std::vector<cplx> sc(n);
  for (int q = 0; q < n; ++q) {
    cplx acc = 0.0;
    for (int j = 0; j < n; ++j) {
      acc += speed[j] * std::polar(1.0, -kTwoPi * static_cast<double>((static_cast<long>(q) * j) % n) / n);
    }
    sc[q] = acc / static_cast<double>(n);
  }
  const double mean = sc[0].real();
  auto arclength = [&](double eta) {
    double s = mean * eta;
    for (int q = 1; q < n / 2; ++q) {
      // paired +-q terms: 2 Re( c_q (e^{i q eta} - 1) / (i q) )
      s += 2.0 * std::real(sc[q] * (std::polar(1.0, q * eta) - 1.0) / cplx(0.0, q));
    }
    return s;
  };
  const double total = mean * kTwoPi;
  std::vector<cplx> out(n);
  out[0] = z[0];
  double eta = 0.0;
  for (int j = 1; j < n; ++j) {
    const double target = total * j / n;
    eta = std::max(eta, kTwoPi * j / n - 0.5);
    for (int it = 0; it < 50; ++it) {
      const double g = arclength(eta) - target;
      const double sp = std::real(speed_series.eval(eta));
      const double step = g / std::max(sp, 1e-3 * mean);
      eta -= step;
      if (std::abs(step) < 1e-15) break;
    }
    out[j] = curve.eval(eta);
  }
  return PatchBoundary::from_points(out, boundary.layer);
}

double patch_area(const PatchBoundary& boundary) {
  const std::size_t n = boundary.nodes.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const PlanePoint& a = boundary.nodes[i];
    const PlanePoint& b = boundary.nodes[(i + 1) % n];
    twice += a.x * b.y - a.y * b.x;
  }
  return 0.5 * twice;
}

bool is_simple(const PatchBoundary& boundary) {
  const std::vector<cplx> z = boundary.points();
  const std::size_t n = z.size();
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = z[i];
    const cplx b = z[(i + 1) % n];
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the wrap
      if (segments_cross(a, b, z[j], z[(j + 1) % n])) return false;
    }
  }
  return true;
}

double hausdorff_distance(std::span<const cplx> a, std::span<const cplx> b) {
  const TrigCurve ca(a);
  const TrigCurve cb(b);
  double worst = 0.0;
  for (const cplx p : a) worst = std::max(worst, distance_to_curve(cb, b, p));
  for (const cplx p : b) worst = std::max(worst, distance_to_curve(ca, a, p));
  return worst;
}

double rigid_rotation_residual(std::span<const EvolutionState> traj, double omega, double b1) {
  if (traj.empty()) throw DomainError("rigid_rotation_residual: empty trajectory");
  if (!(b1 > 0.0)) throw DomainError("rigid_rotation_residual: b1 must be positive");
  const EvolutionState& first = traj.front();
  double worst = 0.0;
  for (const EvolutionState& s : traj) {
    const cplx rot = std::polar(1.0, omega * (s.time - first.time));
    for (int k = 0; k < 2; ++k) {
      std::vector<cplx> ref = first.boundaries[k].points();
      for (cplx& z : ref) z *= rot;
      const std::vector<cplx> cur = s.boundaries[k].points();
      worst = std::max(worst, hausdorff_distance(cur, ref) / b1);
    }
  }
  return worst;
}

double default_dt(const LayerParams& params, const EvolutionState& state) {
  check_state(state);
  const bie::VelocityOperator op(params, static_cast<int>(state.boundaries[0].nodes.size()));
  const auto u = node_velocities(op, state);
  double speed = 0.0;
  double spacing = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 2; ++k) {
    const std::vector<cplx> z = state.boundaries[k].points();
    for (std::size_t i = 0; i < z.size(); ++i) {
      speed = std::max(speed, std::abs(u[k][i]));
      spacing = std::min(spacing, std::abs(z[(i + 1) % z.size()] - z[i]));
    }
  }
  if (!(speed > 0.0)) return 0.01;
  return std::min(0.01, 0.25 * spacing / speed);
}

EvolveResult evolve(const LayerParams& params, const EvolutionState& state0, double t_end, double dt,
                    const EvolveOptions& opts) {
  check_state(state0);
  if (!(t_end > 0.0)) throw DomainError("evolve: t_end must be positive");
  if (!(dt > 0.0)) throw DomainError("evolve: dt must be positive");
  for (const PatchBoundary& b : state0.boundaries) check_boundary(b);

  const bie::VelocityOperator op(params, static_cast<int>(state0.boundaries[0].nodes.size()));
  EvolveResult result;
  EvolutionState state = state0;
  state.dt = dt;
  result.snapshots.push_back(state);

  const std::array<double, 2> area0 = {patch_area(state0.boundaries[0]), patch_area(state0.boundaries[1])};
  const std::array<std::vector<cplx>, 2> z0 = state_points(state0);
  Diagnostics& diag = result.diagnostics;
  diag.min_boundary_distance = min_layer_distance(state0);
  diag.layer_difference = layer_difference(state0);

  const long steps = std::max(1L, static_cast<long>(std::ceil(t_end / dt - 1e-9)));
  for (long s = 1; s <= steps; ++s) {
    state.dt = (s == steps) ? t_end - state.time : dt;
    try {
      state = step_rk4(op, state, opts.exec);
    } catch (const std::exception& e) {
      result.completed = false;
      std::ostringstream msg;
      msg << "aborted at t = " << state.time << ": " << e.what();
      result.diagnostic = msg.str();
      break;
    }
    if (s == steps) state.time = t_end;
    if (opts.redistribute_every > 0 && s % opts.redistribute_every == 0 && s != steps) {
      for (PatchBoundary& b : state.boundaries) b = redistribute(b);
    }
    result.steps = static_cast<int>(s);
    for (int k = 0; k < 2; ++k) {
      diag.area_drift[k] = std::max(diag.area_drift[k], std::abs(patch_area(state.boundaries[k]) - area0[k]) / area0[k]);
      const std::vector<cplx> z = state.boundaries[k].points();
      for (std::size_t i = 0; i < z.size(); ++i) {
        diag.max_radial_drift = std::max(diag.max_radial_drift, std::abs(std::abs(z[i]) - std::abs(z0[k][i])));
      }
    }
    diag.min_boundary_distance = std::min(diag.min_boundary_distance, min_layer_distance(state));
    diag.layer_difference = std::max(diag.layer_difference, layer_difference(state));
    if (opts.snapshot_every > 0 && s % opts.snapshot_every == 0 && s != steps) result.snapshots.push_back(state);
  }
  state.dt = dt;
  result.snapshots.push_back(state);
  return result;
}

}  // namespace qs2l::dynamics
