#include "qs2l/contour.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qs2l/errors.hpp"

namespace qs2l::contour {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
using cplx = std::complex<double>;

double grid_cos(long q, int i, int nodes) { return std::cos(kTwoPi * static_cast<double>((q * i) % nodes) / nodes); }
double grid_sin(long q, int i, int nodes) { return std::sin(kTwoPi * static_cast<double>((q * i) % nodes) / nodes); }

void check_nodes(int nodes) {
  if (nodes < 64 || (nodes & (nodes - 1)) != 0) throw DomainError("contour: node count must be a power of two >= 64");
}

// Samples of r_k and r_k' for both layers.
struct Profile {
  std::array<std::vector<double>, 2> r;
  std::array<std::vector<double>, 2> dr;
};

Profile profile_of(const RadialDeformation& d) {
  return {{d.nodal[0], d.nodal[1]}, {d.derivative(1), d.derivative(2)}};
}

bie::CurvePair curves_of(const LayerParams& params, const Profile& p) {
  bie::CurvePair curves;
  const int nodes = static_cast<int>(p.r[0].size());
  for (int k = 0; k < 2; ++k) {
    const std::vector<double> radius = radius_profile(params.radius(k + 1), p.r[k]);
    curves[k].z.resize(nodes);
    curves[k].dz.resize(nodes);
    for (int i = 0; i < nodes; ++i) {
      const cplx e(grid_cos(1, i, nodes), grid_sin(1, i, nodes));
      const double dradius = p.dr[k][i] / radius[i];
      curves[k].z[i] = radius[i] * e;
      curves[k].dz[i] = cplx(dradius, radius[i]) * e;
    }
  }
  return curves;
}

// F_k at nodes 0..count-1.
std::array<std::vector<double>, 2> evaluate(const bie::VelocityOperator& op, double omega, const Profile& p,
                                            bie::Execution exec, int count) {
  const bie::CurvePair curves = curves_of(op.params(), p);
  std::array<std::vector<double>, 2> f;
  for (int k = 1; k <= 2; ++k) {
    const std::vector<cplx> u = op.on_nodes(curves, k, exec, count);
    f[k - 1].resize(count);
    for (int i = 0; i < count; ++i) {
      f[k - 1][i] = omega * p.dr[k - 1][i] - std::imag(std::conj(curves[k - 1].dz[i]) * u[i]);
    }
  }
  return f;
}

// Sine coefficient of an odd grid function known on nodes 0..N/2.
double sine_projection(const std::vector<double>& half, long q, int nodes) {
  double sum = 0.0;
  for (int i = 1; i < nodes / 2; ++i) sum += half[i] * grid_sin(q, i, nodes);
  return 4.0 * sum / nodes;
}

double sup_abs(const std::array<std::vector<double>, 2>& f) {
  double s = 0.0;
  for (const auto& v : f) {
    for (double x : v) s = std::max(s, std::abs(x));
  }
  return s;
}

spectrum::Branch opposite(spectrum::Branch b) {
  return b == spectrum::Branch::minus ? spectrum::Branch::plus : spectrum::Branch::minus;
}

const char* branch_name(spectrum::Branch b) { return b == spectrum::Branch::minus ? "-" : "+"; }

}  // namespace

RadialDeformation RadialDeformation::zero(int m, int modes, int nodes) {
  return from_coeffs(m, nodes, std::vector<double>(modes, 0.0), std::vector<double>(modes, 0.0));
}

RadialDeformation RadialDeformation::from_coeffs(int m, int nodes, std::vector<double> c1, std::vector<double> c2) {
  if (m < 1) throw DomainError("RadialDeformation: m must be >= 1");
  if (c1.size() != c2.size()) throw DomainError("RadialDeformation: coefficient arrays differ in length");
  if (nodes < 4 || nodes % 2 != 0) throw DomainError("RadialDeformation: node count must be even");
  RadialDeformation d;
  d.m = m;
  d.modes = static_cast<int>(c1.size());
  d.nodes = nodes;
  d.coeffs = {std::move(c1), std::move(c2)};
  d.refresh();
  return d;
}

void RadialDeformation::refresh() {
  for (int k = 0; k < 2; ++k) {
    nodal[k].assign(nodes, 0.0);
    for (int i = 0; i < nodes; ++i) {
      double acc = 0.0;
      for (int n = 1; n <= modes; ++n) acc += coeffs[k][n - 1] * grid_cos(static_cast<long>(n) * m, i, nodes);
      nodal[k][i] = acc;
    }
  }
}

std::vector<double> RadialDeformation::derivative(int k) const {
  std::vector<double> out(nodes, 0.0);
  for (int i = 0; i < nodes; ++i) {
    double acc = 0.0;
    for (int n = 1; n <= modes; ++n) {
      const long q = static_cast<long>(n) * m;
      acc -= static_cast<double>(q) * coeffs[k - 1][n - 1] * grid_sin(q, i, nodes);
    }
    out[i] = acc;
  }
  return out;
}

std::vector<double> radius_profile(double b_k, std::span<const double> r_nodal) {
  std::vector<double> out(r_nodal.size());
  for (std::size_t i = 0; i < r_nodal.size(); ++i) {
    const double radicand = b_k * b_k + 2.0 * r_nodal[i];
    if (!(radicand > 0.0)) throw RadiusCollapseError("radius_profile: b_k^2 + 2 r_k <= 0");
    out[i] = std::sqrt(radicand);
  }
  return out;
}

double BoundaryFunctionPair::sup_norm() const { return sup_abs(values); }

bie::CurvePair deformation_curves(const LayerParams& params, const RadialDeformation& r) {
  return curves_of(params, profile_of(r));
}

BoundaryFunctionPair functional_f(const LayerParams& params, double omega, const RadialDeformation& r,
                                  bie::Execution exec) {
  check_nodes(r.nodes);
  const bie::VelocityOperator op(params, r.nodes);
  return {evaluate(op, omega, profile_of(r), exec, r.nodes)};
}

Eigen::Matrix2d linearized_multiplier(const LayerParams& params, double omega, int n) {
  return -static_cast<double>(n) * spectrum::matrix_m(params, n, omega);
}

FdJacobian jacobian_fd(const LayerParams& params, double omega, const RadialDeformation& r0, double h, int n_probe) {
  check_nodes(r0.nodes);
  if (!(h >= 1e-8 && h <= 1e-4)) throw DomainError("jacobian_fd: step must lie in [1e-8, 1e-4]");
  if (n_probe < 1 || n_probe >= r0.nodes / 2) throw DomainError("jacobian_fd: n_probe out of range");
  const int nodes = r0.nodes;
  const int half = nodes / 2 + 1;
  const bie::VelocityOperator op(params, nodes);
  const Profile base = profile_of(r0);

  FdJacobian jac;
  jac.n_probe = n_probe;
  jac.matrix = Eigen::MatrixXd::Zero(2 * n_probe, 2 * n_probe);
  for (int n = 1; n <= n_probe; ++n) {
    for (int j = 0; j < 2; ++j) {
      std::array<std::array<std::vector<double>, 2>, 2> f;
      for (int side = 0; side < 2; ++side) {
        const double sh = (side == 0) ? h : -h;
        Profile p = base;
        for (int i = 0; i < nodes; ++i) {
          p.r[j][i] += sh * grid_cos(n, i, nodes);
          p.dr[j][i] -= sh * n * grid_sin(n, i, nodes);
        }
        f[side] = evaluate(op, omega, p, bie::Execution::parallel, half);
      }
      for (int nr = 1; nr <= n_probe; ++nr) {
        for (int k = 0; k < 2; ++k) {
          const double plus = sine_projection(f[0][k], nr, nodes);
          const double minus = sine_projection(f[1][k], nr, nodes);
          jac.matrix(2 * (nr - 1) + k, 2 * (n - 1) + j) = (plus - minus) / (2.0 * h);
        }
      }
    }
  }
  return jac;
}

std::optional<std::string> collision_reason(const LayerParams& params, int m, spectrum::Branch sign,
                                            const SolverOptions& opts) {
  const spectrum::OmegaPair om_m = spectrum::omega_pm(params, m);
  const double om = om_m.get(sign);
  const double tol = 1e-9 * std::max(1.0, std::abs(om));
  std::ostringstream why;
  if (std::abs(om_m.get(opposite(sign)) - om) <= tol) {
    why << "double eigenvalue: Omega_" << m << "^- = Omega_" << m << "^+";
    return why.str();
  }
  for (int n = 2; n <= opts.modes; ++n) {
    const spectrum::OmegaPair other = spectrum::omega_pm(params, n * m);
    for (const spectrum::Branch b : {spectrum::Branch::minus, spectrum::Branch::plus}) {
      if (std::abs(other.get(b) - om) <= tol) {
        why << "spectral collision: Omega_" << m << "^" << branch_name(sign) << " = Omega_" << n * m << "^"
            << branch_name(b);
        return why.str();
      }
    }
  }
  if (opts.scan_collisions) {
    const int n_max = std::max(m + 1, m * opts.modes);
    if (params.b2 == params.b1) {
      const std::vector<int> hits = spectrum::endpoint_collisions(params, m, n_max);
      if (!hits.empty()) {
        why << "b2 = b1 is in the collision set (Omega_" << m << "^- = Omega_" << hits.front() << "^+)";
        return why.str();
      }
    } else {
      for (const spectrum::CollisionRecord& rec : spectrum::collision_scan(params, m, n_max, opts.scan_grid)) {
        if (std::abs(rec.b2_root - params.b2) <= 1e-9 * params.b1) {
          why << "b2 is in the collision set (Omega_" << m << "^- = Omega_" << rec.n << "^+ at b2 = " << rec.b2_root
              << ")";
          return why.str();
        }
      }
    }
  }
  return std::nullopt;
}

namespace {

// Newton unknowns: x[0] = Omega, x[1] = c_{1,2}, x[2(n-1)+k-1] = c_{n,k} for n >= 2.
struct NewtonSystem {
  const LayerParams& params;
  int m;
  int modes;
  int nodes;
  double pinned;
  bie::VelocityOperator op;

  [[nodiscard]] RadialDeformation deformation(const Eigen::VectorXd& x) const {
    std::vector<double> c1(modes), c2(modes);
    c1[0] = pinned;
    c2[0] = x[1];
    for (int n = 2; n <= modes; ++n) {
      c1[n - 1] = x[2 * (n - 1)];
      c2[n - 1] = x[2 * (n - 1) + 1];
    }
    return RadialDeformation::from_coeffs(m, nodes, std::move(c1), std::move(c2));
  }

  // Projected residual and sup norm of F.
  Eigen::VectorXd residual(const Eigen::VectorXd& x, double& sup) const {
    const RadialDeformation d = deformation(x);
    const auto f = evaluate(op, x[0], profile_of(d), bie::Execution::parallel, nodes / 2 + 1);
    sup = sup_abs(f);
    Eigen::VectorXd r(2 * modes);
    for (int n = 1; n <= modes; ++n) {
      for (int k = 0; k < 2; ++k) r[2 * (n - 1) + k] = sine_projection(f[k], static_cast<long>(n) * m, nodes);
    }
    return r;
  }

  [[nodiscard]] double coeff(const Eigen::VectorXd& x, int n, int k) const {
    if (n == 1) return k == 0 ? pinned : x[1];
    return x[2 * (n - 1) + k];
  }

  void fill_omega_column(Eigen::MatrixXd& j, const Eigen::VectorXd& x) const {
    for (int n = 1; n <= modes; ++n) {
      for (int k = 0; k < 2; ++k) j(2 * (n - 1) + k, 0) = -static_cast<double>(n * m) * coeff(x, n, k);
    }
  }

  // Fourier multiplier of the linearisation at r = 0.
  [[nodiscard]] Eigen::MatrixXd multiplier_jacobian(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    for (int n = 1; n <= modes; ++n) {
      const Eigen::Matrix2d blk = linearized_multiplier(params, x[0], n * m);
      for (int k = 0; k < 2; ++k) {
        for (int c = 0; c < 2; ++c) {
          if (n == 1 && c == 0) continue;
          j(2 * (n - 1) + k, 2 * (n - 1) + c) = blk(k, c);
        }
      }
    }
    fill_omega_column(j, x);
    return j;
  }

  [[nodiscard]] Eigen::MatrixXd fd_jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& r0) const {
    Eigen::MatrixXd j(2 * modes, 2 * modes);
    for (int c = 1; c < 2 * modes; ++c) {
      const double eps = 1e-7 * std::max(1.0, std::abs(x[c]));
      Eigen::VectorXd xp = x;
      xp[c] += eps;
      double sup = 0.0;
      j.col(c) = (residual(xp, sup) - r0) / eps;
    }
    fill_omega_column(j, x);
    return j;
  }
};

}  // namespace

VStateSolution vstate_solve(const LayerParams& params, int m, spectrum::Branch sign, double s,
                            const VStateSolution* init, const SolverOptions& opts) {
  check_nodes(opts.nodes);
  if (m < 1) throw DomainError("vstate_solve: m must be >= 1");
  if (opts.modes < 1 || opts.modes * m >= opts.nodes / 2) {
    throw DomainError("vstate_solve: modes * m must stay below nodes / 2");
  }
  if (!(std::abs(s) <= opts.s_max)) throw DomainError("vstate_solve: |s| exceeds s_max");
  if (const auto why = collision_reason(params, m, sign, opts)) throw CollisionError(*why);

  const Eigen::Vector2d v = spectrum::kernel_vector(params, m, sign);
  const double omega0 = spectrum::omega_pm(params, m).get(sign);
  NewtonSystem sys{params, m, opts.modes, opts.nodes, s * v[0], bie::VelocityOperator(params, opts.nodes)};

  Eigen::VectorXd x = Eigen::VectorXd::Zero(2 * opts.modes);
  if (init != nullptr && init->m == m && init->deformation.modes > 0 && init->deformation.coeffs[0][0] != 0.0) {
    x[0] = init->omega;
    const RadialDeformation& d = init->deformation;
    for (int n = 1; n <= std::min(opts.modes, d.modes); ++n) {
      if (n == 1) {
        // keep the direction of the previous solution, rescaled to the new amplitude
        x[1] = d.coeffs[1][0] * (s * v[0] / d.coeffs[0][0]);
      } else {
        x[2 * (n - 1)] = d.coeffs[0][n - 1];
        x[2 * (n - 1) + 1] = d.coeffs[1][n - 1];
      }
    }
  } else {
    x[0] = omega0;
    x[1] = s * v[1];
  }

  VStateSolution sol;
  sol.params = params;
  sol.m = m;
  sol.sign = sign;
  sol.amplitude = s;

  double sup = 0.0;
  Eigen::VectorXd r = sys.residual(x, sup);
  if (s == 0.0) {
    sol.omega = omega0;
    sol.deformation = RadialDeformation::zero(m, opts.modes, opts.nodes);
    sol.residual_norm = sup;
    return sol;
  }

  auto measure = [](const Eigen::VectorXd& res, double sup_f) { return std::max(res.lpNorm<Eigen::Infinity>(), sup_f); };
  double norm = measure(r, sup);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.multiplier_jacobian(x));
  bool exact_jacobian = false;

  for (int it = 1; it <= opts.max_iterations; ++it) {
    const Eigen::VectorXd dx = -lu.solve(r);
    double t = 1.0;
    bool accepted = false;
    Eigen::VectorXd x_try;
    Eigen::VectorXd r_try;
    double sup_try = 0.0;
    for (int halving = 0; halving <= opts.max_halvings; ++halving, t *= 0.5) {
      x_try = x + t * dx;
      try {
        r_try = sys.residual(x_try, sup_try);
      } catch (const RadiusCollapseError&) {
        continue;
      }
      const double trial = measure(r_try, sup_try);
      if (trial < norm || trial <= opts.tolerance) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!exact_jacobian) {
        lu.compute(sys.fd_jacobian(x, r));
        exact_jacobian = true;
        continue;
      }
      std::ostringstream msg;
      msg << "vstate_solve: line search failed at iteration " << it << " (residual " << norm << ")";
      throw NoConvergenceError(msg.str());
    }
    const double step = t * dx.lpNorm<Eigen::Infinity>();
    const double previous = norm;
    x = x_try;
    r = r_try;
    sup = sup_try;
    norm = measure(r, sup);
    sol.iterations = it;
    if (norm <= opts.tolerance && (step <= opts.step_tolerance || norm > 0.5 * previous)) break;
    if (!exact_jacobian && norm > 0.25 * previous && norm > opts.tolerance) {
      lu.compute(sys.fd_jacobian(x, r));
      exact_jacobian = true;
    }
    if (it == opts.max_iterations && norm > opts.tolerance) {
      std::ostringstream msg;
      msg << "vstate_solve: no convergence after " << it << " iterations (residual " << norm << ")";
      throw NoConvergenceError(msg.str());
    }
  }

  sol.omega = x[0];
  sol.deformation = sys.deformation(x);
  sol.residual_norm = sup;
  return sol;
}

BranchResult branch_continue(const LayerParams& params, int m, spectrum::Branch sign, std::span<const double> s_grid,
                             const SolverOptions& opts) {
  if (const auto why = collision_reason(params, m, sign, opts)) throw CollisionError(*why);
  SolverOptions inner = opts;
  inner.scan_collisions = false;
  BranchResult out;
  for (const double s : s_grid) {
    try {
      const VStateSolution* seed = out.solutions.empty() ? nullptr : &out.solutions.back();
      out.solutions.push_back(vstate_solve(params, m, sign, s, seed, inner));
      out.last_good_amplitude = s;
    } catch (const std::exception& e) {
      out.complete = false;
      std::ostringstream msg;
      msg << "stopped at s = " << s << ": " << e.what();
      out.diagnostic = msg.str();
      break;
    }
  }
  return out;
}

}  // namespace qs2l::contour
