#pragma once

#include <complex>

namespace qs2l {

/// Model constants of the two-layer system. Construct with LayerParams::make,
/// which validates the ranges and fixes the derived quantities mu and b.
struct LayerParams {
  double delta = 1.0;   // layer thickness ratio
  double lambda = 1.0;  // interface rigidity
  double b1 = 1.0;      // layer-1 disc radius
  double b2 = 1.0;      // layer-2 disc radius
  double mu = 0.0;      // lambda * sqrt(1 + delta)
  double b = 0.0;       // b2 / b1

  /// Throws DomainError unless delta > 0, lambda > 0 and 0 < b2 <= b1.
  static LayerParams make(double delta, double lambda, double b1, double b2);

  /// delta >= b^2, the parameter range covered by the monotonicity theory.
  [[nodiscard]] bool proven_regime() const { return delta >= b * b; }
  [[nodiscard]] double radius(int layer) const { return layer == 1 ? b1 : b2; }
};

struct PlanePoint {
  double x = 0.0;
  double y = 0.0;

  [[nodiscard]] double norm() const;
  [[nodiscard]] std::complex<double> complex() const { return {x, y}; }
  static PlanePoint from_complex(std::complex<double> z) { return {z.real(), z.imag()}; }
};

/// -log|p| / (2 pi).
double green_log(PlanePoint p);

/// K_0(eps |p|) / (2 pi).
double green_screened(double eps, PlanePoint p);

/// Coefficients of G_{k,j}(x) = alpha log|x| + beta K_0(mu |x|).
struct GreenCoefficients {
  double alpha;
  double beta;
};
GreenCoefficients green_coefficients(const LayerParams& params, int k, int j);

/// G_{k,j}(p) for k, j in {1, 2}.
double kernel_g(const LayerParams& params, int k, int j, PlanePoint p);

/// Q(r) = -K_0(mu r) - log r, extended continuously to r = 0.
double kernel_q(const LayerParams& params, double r);

/// k_+(p) = -p_perp / (2 pi |p|^2), p_perp = (-y, x).
PlanePoint biot_savart_plus(PlanePoint p);

/// k_-(p) = -(p_perp / |p|) K_1(|p|).
PlanePoint biot_savart_minus(PlanePoint p);

/// 0 at 0, r log(e/r) on (0, 1], 1 beyond.
double log_lipschitz_ell(double r);

}  // namespace qs2l
