#pragma once

#include <Eigen/Core>
#include <vector>

#include "qs2l/kernels.hpp"

namespace qs2l::spectrum {

enum class Branch { minus, plus };

struct MeanFlowCoeffs {
  double v;
  double w;
};

struct ModeCoeffs {
  double a;
  double b;
};

struct OmegaPair {
  double minus;
  double plus;
  [[nodiscard]] double get(Branch br) const { return br == Branch::minus ? minus : plus; }
};

struct SpectrumRow {
  int n;
  double a_n;
  double b_n;
  double gamma_n;
  double omega_minus;
  double omega_plus;
};

struct CollisionRecord {
  int m;
  int n;
  double b2_root;
  double residual;
  bool tangency;
};

MeanFlowCoeffs mean_flow_coeffs(const LayerParams& p);
ModeCoeffs coeffs_ab(const LayerParams& p, int n);
double gamma_n(const LayerParams& p, int n);

/// Limits of A_n, B_n as n -> infinity: (delta + 1) V and (delta + 1) W.
ModeCoeffs coeffs_ab_limit(const LayerParams& p);

Eigen::Matrix2d matrix_m(const LayerParams& p, int n, double omega);

/// Roots of det M_n(Omega) = 0. gamma_shift perturbs gamma_n inside this formula only
/// (sensitivity hook for the identity checks); leave at 0 for real use.
OmegaPair omega_pm(const LayerParams& p, int n, double gamma_shift = 0.0);

/// Generator (Omega + B/(delta+1), -delta gamma/(delta+1)) of ker M_m(Omega_m^sign), with the
/// overall sign fixed so the first nonzero component is positive. Throws DomainError if both
/// components vanish.
Eigen::Vector2d kernel_vector(const LayerParams& p, int m, Branch sign);

std::vector<SpectrumRow> spectrum_table(const LayerParams& p, int n_max);

/// Roots b2 in (0, b1) of Omega_m^-(b2) - Omega_n^+(b2), n = 1..n_max (n != m), located on a
/// uniform grid of `grid` intervals and refined by bisection; sorted by b2, then n.
/// Only base.delta, base.lambda and base.b1 are used.
std::vector<CollisionRecord> collision_scan(const LayerParams& base, int m, int n_max, int grid);

/// Indices n != m with |Omega_m^-(b1) - Omega_n^+(b1)| <= tol at the endpoint b2 = b1,
/// evaluated through the equal-radii closed form.
std::vector<int> endpoint_collisions(const LayerParams& base, int m, int n_max, double tol = 1e-12);

/// Threshold p0 at the given b2: the smallest p <= m_max with Omega_p^+ > Omega_inf^-, so that
/// Omega_n^+ > Omega_m^- for all n, m >= p. 0 if none (always the case at b1 = b2).
int first_collision_free_m(const LayerParams& p, int m_max);

/// Equal-radii collision: x0 with I_1(x0) K_1(x0) = 1/(2n), n >= 2.
struct EqualRadiiCollision {
  int n;
  double x0;
  double residual;  // I_1 K_1(x0) - 1/(2n)
  double mu;        // x0 / b1
  double lambda;    // mu / sqrt(1 + delta)
  double omega_gap; // Omega_1^+ - Omega_n^- at the collision parameters
};
EqualRadiiCollision equal_radii_collision(int n, double b1, double delta);

}  // namespace qs2l::spectrum
