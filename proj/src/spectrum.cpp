#include "qs2l/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qs2l/bessel.hpp"
#include "qs2l/errors.hpp"

namespace qs2l::spectrum {
namespace {

using bessel::bessel_ik_product;

void check_mode(int n) {
  if (n < 1) throw DomainError("spectrum: mode index must be >= 1");
}

LayerParams with_b2(const LayerParams& base, double b2) {
  return LayerParams::make(base.delta, base.lambda, base.b1, b2);
}

double collision_gap(const LayerParams& base, int m, int n, double b2) {
  const LayerParams p = with_b2(base, b2);
  return omega_pm(p, m).minus - omega_pm(p, n).plus;
}

}  // namespace

MeanFlowCoeffs mean_flow_coeffs(const LayerParams& p) {
  const double x1 = p.b1 * p.mu;
  const double x2 = p.b2 * p.mu;
  const double d1 = 1.0 + p.delta;
  const double cross = bessel_ik_product(1, x2, x1);
  const double v = -(p.delta + p.b * p.b) / (2.0 * d1) - (bessel_ik_product(1, x1, x1) - p.b * cross) / d1;
  const double w = -0.5 - p.delta * (bessel_ik_product(1, x2, x2) - cross / p.b) / d1;
  return {v, w};
}

ModeCoeffs coeffs_ab(const LayerParams& p, int n) {
  check_mode(n);
  const MeanFlowCoeffs vw = mean_flow_coeffs(p);
  const double d1 = p.delta + 1.0;
  const double a = d1 * vw.v + p.delta / (2.0 * n) + bessel_ik_product(n, p.b1 * p.mu, p.b1 * p.mu);
  const double b = d1 * vw.w + 1.0 / (2.0 * n) + p.delta * bessel_ik_product(n, p.b2 * p.mu, p.b2 * p.mu);
  return {a, b};
}

ModeCoeffs coeffs_ab_limit(const LayerParams& p) {
  const MeanFlowCoeffs vw = mean_flow_coeffs(p);
  return {(p.delta + 1.0) * vw.v, (p.delta + 1.0) * vw.w};
}

double gamma_n(const LayerParams& p, int n) {
  check_mode(n);
  return std::pow(p.b, n) / (2.0 * n) - bessel_ik_product(n, p.b2 * p.mu, p.b1 * p.mu);
}

Eigen::Matrix2d matrix_m(const LayerParams& p, int n, double omega) {
  const ModeCoeffs ab = coeffs_ab(p, n);
  const double g = gamma_n(p, n);
  const double d1 = p.delta + 1.0;
  Eigen::Matrix2d m;
  m << omega + ab.a / d1, g / d1, p.delta * g / d1, omega + ab.b / d1;
  return m;
}

OmegaPair omega_pm(const LayerParams& p, int n, double gamma_shift) {
  const ModeCoeffs ab = coeffs_ab(p, n);
  const double g = gamma_n(p, n) + gamma_shift;
  const double diff = ab.a - ab.b;
  const double s = std::sqrt(diff * diff + 4.0 * p.delta * g * g);
  const double d2 = 2.0 * (p.delta + 1.0);
  return {(-(ab.a + ab.b) - s) / d2, (-(ab.a + ab.b) + s) / d2};
}

Eigen::Vector2d kernel_vector(const LayerParams& p, int m, Branch sign) {
  const ModeCoeffs ab = coeffs_ab(p, m);
  const double g = gamma_n(p, m);
  const double d1 = p.delta + 1.0;
  const double diff = ab.b - ab.a;
  const double s = std::sqrt(diff * diff + 4.0 * p.delta * g * g);
  // Omega^sign + B/(delta+1) = (diff +- s) / (2(delta+1)), rationalised where it cancels.
  double first = 0.0;
  if (sign == Branch::plus) {
    first = (diff >= 0.0) ? diff + s : 4.0 * p.delta * g * g / (s - diff);
  } else {
    first = (diff <= 0.0) ? diff - s : -4.0 * p.delta * g * g / (s + diff);
  }
  Eigen::Vector2d v(first / (2.0 * d1), -p.delta * g / d1);
  if (v[0] == 0.0 && v[1] == 0.0) throw DomainError("kernel_vector: degenerate kernel direction");
  if (v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0)) v = -v;
  return v;
}

std::vector<SpectrumRow> spectrum_table(const LayerParams& p, int n_max) {
  if (n_max < 1) throw DomainError("spectrum_table: n_max must be >= 1");
  std::vector<SpectrumRow> rows;
  rows.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) {
    const ModeCoeffs ab = coeffs_ab(p, n);
    const OmegaPair om = omega_pm(p, n);
    rows.push_back({n, ab.a, ab.b, gamma_n(p, n), om.minus, om.plus});
  }
  return rows;
}

std::vector<CollisionRecord> collision_scan(const LayerParams& base, int m, int n_max, int grid) {
  if (m < 1) throw DomainError("collision_scan: m must be >= 1");
  if (n_max < m + 1) throw DomainError("collision_scan: n_max must be >= m + 1");
  if (grid < 16) throw DomainError("collision_scan: grid must be >= 16");

  const int points = grid - 1;  // interior nodes b2 = b1 i / grid
  std::vector<double> gaps(static_cast<std::size_t>(points) * n_max);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < points; ++i) {
    const LayerParams p = with_b2(base, base.b1 * (i + 1) / grid);
    const double om = omega_pm(p, m).minus;
    for (int n = 1; n <= n_max; ++n) gaps[static_cast<std::size_t>(i) * n_max + (n - 1)] = om - omega_pm(p, n).plus;
  }

  std::vector<CollisionRecord> records;
  for (int n = 1; n <= n_max; ++n) {
    if (n == m) continue;
    std::vector<CollisionRecord> roots;
    for (int i = 0; i + 1 < points; ++i) {
      const double f0 = gaps[static_cast<std::size_t>(i) * n_max + (n - 1)];
      const double f1 = gaps[static_cast<std::size_t>(i + 1) * n_max + (n - 1)];
      if (f0 == 0.0) {
        roots.push_back({m, n, base.b1 * (i + 1) / grid, 0.0, false});
        continue;
      }
      if ((f0 < 0.0) == (f1 < 0.0) || f1 == 0.0) continue;
      double lo = base.b1 * (i + 1) / grid;
      double hi = base.b1 * (i + 2) / grid;
      double flo = f0;
      double mid = 0.5 * (lo + hi);
      double fmid = collision_gap(base, m, n, mid);
      for (int it = 0; it < 200 && std::abs(fmid) > 1e-12; ++it) {
        if ((fmid < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fmid;
        } else {
          hi = mid;
        }
        const double next = 0.5 * (lo + hi);
        if (next == mid) break;
        mid = next;
        fmid = collision_gap(base, m, n, mid);
      }
      roots.push_back({m, n, mid, std::abs(fmid), false});
    }
    // A root on a grid node shows up twice; tangential touches produce close pairs.
    for (const CollisionRecord& r : roots) {
      if (!records.empty() && records.back().n == n && std::abs(records.back().b2_root - r.b2_root) <= 1e-9) {
        records.back().tangency = true;
        continue;
      }
      records.push_back(r);
    }
  }
  std::sort(records.begin(), records.end(), [](const CollisionRecord& a, const CollisionRecord& b) {
    return a.b2_root != b.b2_root ? a.b2_root < b.b2_root : a.n < b.n;
  });
  return records;
}

std::vector<int> endpoint_collisions(const LayerParams& base, int m, int n_max, double tol) {
  std::vector<int> out;
  const double x = base.b1 * base.mu;
  const double om_minus = 0.5 - 1.0 / (2.0 * m);
  for (int n = 1; n <= n_max; ++n) {
    if (n == m) continue;
    const double om_plus = 0.5 - bessel_ik_product(n, x, x);
    if (std::abs(om_minus - om_plus) <= tol) out.push_back(n);
  }
  return out;
}

int first_collision_free_m(const LayerParams& p, int m_max) {
  // Omega_n^+ >= Omega_p^+ > Omega_inf^- > Omega_m^- for all n, m >= p
  const ModeCoeffs lim = coeffs_ab_limit(p);
  const double omega_inf_minus = -std::max(lim.a, lim.b) / (p.delta + 1.0);
  for (int m = 1; m <= m_max; ++m) {
    if (omega_pm(p, m).plus > omega_inf_minus) return m;
  }
  return 0;
}

EqualRadiiCollision equal_radii_collision(int n, double b1, double delta) {
  if (n < 2) throw DomainError("equal_radii_collision: n must be >= 2");
  const double target = 1.0 / (2.0 * n);
  auto f = [&](double x) { return bessel_ik_product(1, x, x) - target; };
  // I_1 K_1 decreases from 1/2 at 0 to 0 at infinity.
  double lo = 1e-8;
  double hi = 1.0;
  while (f(hi) > 0.0) hi *= 2.0;
  double mid = 0.5 * (lo + hi);
  double fm = f(mid);
  for (int it = 0; it < 200 && std::abs(fm) > 1e-14; ++it) {
    if (fm > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    const double next = 0.5 * (lo + hi);
    if (next == mid) break;
    mid = next;
    fm = f(mid);
  }
  EqualRadiiCollision c{};
  c.n = n;
  c.x0 = mid;
  c.residual = fm;
  c.mu = mid / b1;
  c.lambda = c.mu / std::sqrt(1.0 + delta);
  const LayerParams p = LayerParams::make(delta, c.lambda, b1, b1);
  c.omega_gap = omega_pm(p, 1).plus - omega_pm(p, n).minus;
  return c;
}

}  // namespace qs2l::spectrum
