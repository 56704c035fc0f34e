#include "qs2l/verify.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "qs2l/bessel.hpp"
#include "qs2l/contour.hpp"
#include "qs2l/dynamics.hpp"
#include "qs2l/errors.hpp"
#include "qs2l/kernels.hpp"
#include "qs2l/quadrature.hpp"
#include "qs2l/spectrum.hpp"

namespace qs2l::verify {
namespace {

using Results = std::vector<CheckResult>;

void add(Results& out, const std::string& suite, const std::string& name, double err, double tol) {
  out.push_back({suite, name, std::isfinite(err) && err <= tol, err, tol});
}

void add_bool(Results& out, const std::string& suite, const std::string& name, bool ok) {
  out.push_back({suite, name, ok, 0.0, 0.0});
}

// Runs body, turning an exception into a failed check.
void guarded(Results& out, const std::string& suite, const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    out.push_back({suite, name + " (" + e.what() + ")", false, INFINITY, 0.0});
  }
}

struct GridPoint {
  double delta, b, lambda;
};

// delta x b x lambda grid restricted to delta >= b^2.
std::vector<GridPoint> spectral_grid() {
  std::vector<GridPoint> g;
  for (double d : {0.5, 1.0, 2.0, 10.0}) {
    for (double b : {0.25, 0.5, 0.7, 1.0}) {
      if (d < b * b) continue;
      for (double l : {0.5, 1.0, 2.0, 4.0}) g.push_back({d, b, l});
    }
  }
  return g;
}

// Scale of the entries entering M_n(omega): |omega| on the diagonal plus M_n(0).
double data_norm(const LayerParams& p, int n, double omega) {
  return spectrum::matrix_m(p, n, 0.0).norm() + std::sqrt(2.0) * std::abs(omega);
}

void suite_bessel(Results& out) {
  const std::string s = "bessel";
  guarded(out, s, "wronskian I_n K_{n+1} + I_{n+1} K_n = 1/x", [&] {
    double worst = 0.0;
    for (double x : {0.05, 0.5, 1.0, 3.0, 10.0, 40.0}) {
      for (int n = 0; n <= 30; ++n) {
        const double w = bessel::bessel_i_scaled(n, x) * bessel::bessel_k_scaled(n + 1, x) +
                         bessel::bessel_i_scaled(n + 1, x) * bessel::bessel_k_scaled(n, x);
        worst = std::max(worst, std::abs(w * x - 1.0));
      }
    }
    add(out, s, "wronskian I_n K_{n+1} + I_{n+1} K_n = 1/x", worst, 1e-13);
  });
  guarded(out, s, "J recurrence J_{n-1} + J_{n+1} = (2n/x) J_n", [&] {
    double worst = 0.0;
    for (double x : {0.5, 2.0, 7.5, 30.0}) {
      for (int n = 1; n <= 20; ++n) {
        const double lhs = bessel::bessel_j(n - 1, x) + bessel::bessel_j(n + 1, x);
        const double rhs = 2.0 * n / x * bessel::bessel_j(n, x);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
    add(out, s, "J recurrence J_{n-1} + J_{n+1} = (2n/x) J_n", worst, 1e-13);
  });
  const std::vector<double> xs = {0.01, 0.1, 0.3, 0.7, 1.0, 1.5, 2.5, 4.0, 7.0, 12.0, 20.0};
  add_bool(out, s, "n -> I_n K_n strictly decreasing", bessel::ik_decreasing_in_order(xs, 64));
  add_bool(out, s, "x -> I_n K_n strictly decreasing", bessel::ik_decreasing_in_argument(xs, 64));
  add_bool(out, s, "0 < (x/y)^n/(2n) - I_n(x) K_n(y) <= 1/(2n)", bessel::ik_gap_bounded(xs, 64));
  add_bool(out, s, "x -> I_1(x)/x strictly increasing", bessel::i1_over_x_increasing(xs));
}

void suite_kernels(Results& out) {
  const std::string s = "kernels";
  guarded(out, s, "Q(r) = -K_0(mu r) - log r", [&] {
    const LayerParams p = LayerParams::make(2.0, 1.5, 1.0, 0.8);
    double worst = 0.0;
    for (double r : {1e-3, 0.1, 0.5, 1.0, 1.9, 3.0}) {
      const double direct = -bessel::bessel_k(0, p.mu * r) - std::log(r);
      worst = std::max(worst, std::abs(kernel_q(p, r) - direct));
    }
    add(out, s, "Q(r) = -K_0(mu r) - log r", worst, 1e-13);
  });
  guarded(out, s, "G_{2,1} = delta G_{1,2} and G_{1,2} = -Q / (2 pi (1 + delta))", [&] {
    const LayerParams p = LayerParams::make(3.0, 0.7, 1.0, 0.5);
    double worst = 0.0;
    for (double r : {1e-6, 0.01, 0.4, 2.0}) {
      const PlanePoint x{r * 0.6, r * 0.8};
      const double g12 = kernel_g(p, 1, 2, x);
      const double g21 = kernel_g(p, 2, 1, x);
      const double expect = -kernel_q(p, r) / (2.0 * std::numbers::pi * (1.0 + p.delta));
      worst = std::max({worst, std::abs(g21 - p.delta * g12), std::abs(g12 - expect)});
    }
    add(out, s, "G_{2,1} = delta G_{1,2} and G_{1,2} = -Q / (2 pi (1 + delta))", worst, 1e-13);
  });
  guarded(out, s, "Biot-Savart kernels orthogonal to position", [&] {
    double worst = 0.0;
    for (double r : {0.1, 1.0, 5.0}) {
      const PlanePoint x{r * 0.28, -r * 0.96};
      const PlanePoint kp = biot_savart_plus(x);
      const PlanePoint km = biot_savart_minus(x);
      worst = std::max({worst, std::abs(kp.x * x.x + kp.y * x.y), std::abs(km.x * x.x + km.y * x.y)});
      worst = std::max(worst, std::abs(kp.norm() - 1.0 / (2.0 * std::numbers::pi * r)));
    }
    add(out, s, "Biot-Savart kernels orthogonal to position", worst, 1e-14);
  });
}

void suite_quadrature(Results& out) {
  const std::string s = "quadrature";
  guarded(out, s, "log moment = -x^n/(2n)", [&] {
    double worst = 0.0;
    for (double x : {0.3, 0.7, 0.95}) {
      for (int n = 1; n <= 32; ++n) {
        worst = std::max(worst, std::abs(quadrature::log_cosine_moment(x, n, 1024) + std::pow(x, n) / (2.0 * n)));
      }
    }
    add(out, s, "log moment = -x^n/(2n)", worst, 1e-10);
  });
  guarded(out, s, "log-sine moment = -1/(2n)", [&] {
    double worst = 0.0;
    for (int n = 1; n <= 32; ++n) worst = std::max(worst, std::abs(quadrature::log_cosine_moment(1.0, n, 256) + 0.5 / n));
    add(out, s, "log-sine moment = -1/(2n)", worst, 1e-13);
  });
  guarded(out, s, "K_0 moment = I_n(lx) K_n(ly)", [&] {
    double worst = 0.0;
    const double pairs[3][2] = {{0.4, 1.0}, {0.9, 1.1}, {1.0, 1.0}};
    for (const auto& xy : pairs) {
      for (double l : {0.5, 2.0}) {
        for (int n = 1; n <= 32; ++n) {
          const double exact = bessel::bessel_ik_product(n, l * xy[0], l * xy[1]);
          const double q = quadrature::k0_cosine_moment(l, xy[0], xy[1], n, 1024);
          worst = std::max(worst, std::abs(q - exact) / std::abs(exact));
        }
      }
    }
    add(out, s, "K_0 moment = I_n(lx) K_n(ly)", worst, 1e-8);
  });
}

void suite_spectrum(Results& out, double shift) {
  const std::string s = "spectrum";
  guarded(out, s, "equal radii closed form", [&] {
    double worst = 0.0;
    for (double d : {0.5, 1.0, 2.0, 10.0}) {
      for (double b1 : {0.5, 1.0, 2.0}) {
        for (double l : {0.5, 1.0}) {
          const LayerParams p = LayerParams::make(d, l, b1, b1);
          for (int n = 1; n <= 32; ++n) {
            const spectrum::OmegaPair om = spectrum::omega_pm(p, n, shift);
            const double x = b1 * p.mu;
            worst = std::max({worst, std::abs(om.plus - (0.5 - bessel::bessel_ik_product(n, x, x))),
                              std::abs(om.minus - (0.5 - 0.5 / n))});
          }
        }
      }
    }
    add(out, s, "equal radii closed form", worst, 1e-12);
  });
  guarded(out, s, "det M_n(Omega) = 0 and M_n v = 0", [&] {
    double worst = 0.0;
    for (const GridPoint& g : spectral_grid()) {
      const LayerParams p = LayerParams::make(g.delta, g.lambda, 1.0, g.b);
      for (int n = 1; n <= 32; ++n) {
        const spectrum::OmegaPair om = spectrum::omega_pm(p, n, shift);
        for (spectrum::Branch br : {spectrum::Branch::minus, spectrum::Branch::plus}) {
          const Eigen::Matrix2d m = spectrum::matrix_m(p, n, om.get(br));
          const double norm = data_norm(p, n, om.get(br));
          const Eigen::Vector2d v = spectrum::kernel_vector(p, n, br).normalized();
          worst = std::max({worst, std::abs(m.determinant()) / (norm * norm), (m * v).norm() / norm});
        }
      }
    }
    add(out, s, "det M_n(Omega) = 0 and M_n v = 0", worst, 1e-12);
  });
  guarded(out, s, "trace M_m(Omega^pm) = +-(eigenvalue gap)", [&] {
    double worst = 0.0;
    for (const GridPoint& g : spectral_grid()) {
      const LayerParams p = LayerParams::make(g.delta, g.lambda, 1.0, g.b);
      for (int n = 1; n <= 32; ++n) {
        const spectrum::OmegaPair om = spectrum::omega_pm(p, n, shift);
        // gap from the entries of M: the root separation of its characteristic polynomial
        const Eigen::Matrix2d m0 = spectrum::matrix_m(p, n, 0.0);
        const double diff = m0(0, 0) - m0(1, 1);
        const double gap = std::sqrt(diff * diff + 4.0 * m0(0, 1) * m0(1, 0));
        worst = std::max({worst, std::abs(spectrum::matrix_m(p, n, om.plus).trace() - gap),
                          std::abs(spectrum::matrix_m(p, n, om.minus).trace() + gap)});
      }
    }
    add(out, s, "trace M_m(Omega^pm) = +-(eigenvalue gap)", worst, 1e-12);
  });
  guarded(out, s, "Omega_n^pm increasing, 0 < gamma_n <= 1/(2n)", [&] {
    bool ok = true;
    for (const GridPoint& g : spectral_grid()) {
      const LayerParams p = LayerParams::make(g.delta, g.lambda, 1.0, g.b);
      spectrum::OmegaPair prev = spectrum::omega_pm(p, 1, shift);
      for (int n = 1; n <= 64 && ok; ++n) {
        const double gam = spectrum::gamma_n(p, n);
        ok = gam > 0.0 && gam <= 0.5 / n;
        if (n > 1) {
          const spectrum::OmegaPair om = spectrum::omega_pm(p, n, shift);
          ok = ok && om.minus > prev.minus && om.plus > prev.plus;
          prev = om;
        }
      }
    }
    add_bool(out, s, "Omega_n^pm increasing, 0 < gamma_n <= 1/(2n)", ok);
  });
  guarded(out, s, "equal-radii collisions n = 2, 3", [&] {
    double residual = 0.0;
    double gap = 0.0;
    for (int n : {2, 3}) {
      const spectrum::EqualRadiiCollision c = spectrum::equal_radii_collision(n, 1.0, 1.0);
      const LayerParams p = LayerParams::make(1.0, c.lambda, 1.0, 1.0);
      residual = std::max(residual, std::abs(c.residual));
      gap = std::max(gap, std::abs(spectrum::omega_pm(p, 1, shift).plus - spectrum::omega_pm(p, n, shift).minus));
    }
    add(out, s, "I_1 K_1(x0) = 1/(2n) root residual, n = 2, 3", residual, 1e-12);
    add(out, s, "Omega_1^+ = Omega_n^- at the root, n = 2, 3", gap, 1e-10);
  });
}

void suite_contour(Results& out) {
  const std::string s = "contour";
  guarded(out, s, "discs are stationary: F(Omega, 0) = 0", [&] {
    const LayerParams p = LayerParams::make(1.0, 1.0, 1.0, 0.7);
    const contour::RadialDeformation zero = contour::RadialDeformation::zero(1, 4, 64);
    double worst = 0.0;
    for (double om : {-1.0, 0.0, 0.5}) worst = std::max(worst, contour::functional_f(p, om, zero).sup_norm());
    add(out, s, "discs are stationary: F(Omega, 0) = 0", worst, 1e-10);
  });
  guarded(out, s, "FD Jacobian at r = 0 equals -n M_n(Omega)", [&] {
    const LayerParams p = LayerParams::make(2.0, 1.0, 1.0, 0.8);
    const double om = 0.3;
    const int probe = 4;
    const contour::RadialDeformation zero = contour::RadialDeformation::zero(1, 4, 64);
    const contour::FdJacobian jac = contour::jacobian_fd(p, om, zero, 1e-6, probe);
    double worst = 0.0;
    for (int n = 1; n <= probe; ++n) {
      const Eigen::Matrix2d expect = contour::linearized_multiplier(p, om, n);
      worst = std::max(worst, (jac.block(n, n) - expect).norm() / expect.norm());
    }
    add(out, s, "FD Jacobian at r = 0 equals -n M_n(Omega)", worst, 1e-5);
  });
}

void suite_dynamics(Results& out) {
  const std::string s = "dynamics";
  guarded(out, s, "A_delta transform round trip", [&] {
    double worst = 0.0;
    for (double d : {0.3, 1.0, 7.0}) {
      const auto back = dynamics::inverse_pm(d, dynamics::transform_pm(d, 0.7, -1.3));
      worst = std::max({worst, std::abs(back[0] - 0.7), std::abs(back[1] + 1.3)});
    }
    add(out, s, "A_delta transform round trip", worst, 1e-15);
  });
  const int nodes = 64;
  std::vector<std::complex<double>> z(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double t = 2.0 * std::numbers::pi * i / nodes;
    z[i] = std::polar(1.0 + 0.05 * std::cos(3.0 * t), t);
  }
  guarded(out, s, "(+, -) velocities equal direct summation", [&] {
    const LayerParams p = LayerParams::make(2.0, 1.0, 1.0, 0.7);
    dynamics::EvolutionState st;
    std::vector<std::complex<double>> z2 = z;
    for (auto& w : z2) w *= 0.7;
    st.boundaries = {dynamics::PatchBoundary::from_points(z, 1), dynamics::PatchBoundary::from_points(z2, 2)};
    const bie::VelocityOperator op(p, nodes);
    const auto a = dynamics::node_velocities(op, st);
    const auto b = dynamics::node_velocities_pm(op, st);
    double worst = 0.0;
    for (int k = 0; k < 2; ++k) {
      for (int i = 0; i < nodes; ++i) worst = std::max(worst, std::abs(a[k][i] - b[k][i]));
    }
    add(out, s, "(+, -) velocities equal direct summation", worst, 1e-12);
  });
  guarded(out, s, "delta = 1 twin boundaries stay identical", [&] {
    const LayerParams p = LayerParams::make(1.0, 1.0, 1.0, 1.0);
    dynamics::EvolutionState st;
    st.boundaries = {dynamics::PatchBoundary::from_points(z, 1), dynamics::PatchBoundary::from_points(z, 2)};
    dynamics::EvolveOptions o;
    o.redistribute_every = 5;
    const dynamics::EvolveResult r = dynamics::evolve(p, st, 0.1, 0.01, o);
    add(out, s, "delta = 1 twin boundaries stay identical", r.completed ? r.diagnostics.layer_difference : INFINITY,
        1e-10);
  });
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"bessel", "kernels", "quadrature", "spectrum", "contour", "dynamics"};
  return names;
}

std::vector<CheckResult> run(const VerifyOptions& opts) {
  const std::vector<std::string>& all = suite_names();
  for (const std::string& s : opts.suites) {
    if (std::find(all.begin(), all.end(), s) == all.end()) throw ConfigError("unknown suite '" + s + "'");
  }
  auto wanted = [&](const std::string& s) {
    return opts.suites.empty() || std::find(opts.suites.begin(), opts.suites.end(), s) != opts.suites.end();
  };
  Results out;
  if (wanted("bessel")) suite_bessel(out);
  if (wanted("kernels")) suite_kernels(out);
  if (wanted("quadrature")) suite_quadrature(out);
  if (wanted("spectrum")) suite_spectrum(out, opts.gamma_shift);
  if (wanted("contour")) suite_contour(out);
  if (wanted("dynamics")) suite_dynamics(out);
  return out;
}

}  // namespace qs2l::verify
