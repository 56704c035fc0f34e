#include "qs2l/kernels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qs2l/bessel.hpp"
#include "qs2l/errors.hpp"

namespace qs2l {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double nonzero_norm(PlanePoint p, const char* what) {
  const double r = p.norm();
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError(std::string(what) + ": point must be nonzero and finite");
  return r;
}

void check_layer(int k) {
  if (k != 1 && k != 2) throw DomainError("layer index must be 1 or 2");
}

}  // namespace

LayerParams LayerParams::make(double delta, double lambda, double b1, double b2) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("delta must be positive");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive");
  if (!(b1 > 0.0) || !std::isfinite(b1)) throw DomainError("b1 must be positive");
  if (!(b2 > 0.0) || !(b2 <= b1)) throw DomainError("b2 must satisfy 0 < b2 <= b1");
  LayerParams p;
  p.delta = delta;
  p.lambda = lambda;
  p.b1 = b1;
  p.b2 = b2;
  p.mu = lambda * std::sqrt(1.0 + delta);
  p.b = b2 / b1;
  return p;
}

double PlanePoint::norm() const { return std::hypot(x, y); }

double green_log(PlanePoint p) { return -std::log(nonzero_norm(p, "green_log")) / kTwoPi; }

double green_screened(double eps, PlanePoint p) {
  if (!(eps > 0.0)) throw DomainError("green_screened: eps must be positive");
  return bessel::bessel_k(0, eps * nonzero_norm(p, "green_screened")) / kTwoPi;
}

GreenCoefficients green_coefficients(const LayerParams& params, int k, int j) {
  check_layer(k);
  check_layer(j);
  const double scale = kTwoPi * (params.delta + 1.0);
  const double alpha = (j == 1 ? params.delta : 1.0) / scale;
  const double sign = ((k + j - 1) % 2 == 0) ? 1.0 : -1.0;
  const double beta = sign * (k == 2 ? params.delta : 1.0) / scale;
  return {alpha, beta};
}

double kernel_g(const LayerParams& params, int k, int j, PlanePoint p) {
  const double r = nonzero_norm(p, "kernel_g");
  const GreenCoefficients c = green_coefficients(params, k, j);
  return c.alpha * std::log(r) + c.beta * bessel::bessel_k(0, params.mu * r);
}

double kernel_q(const LayerParams& params, double r) {
  if (!(r >= 0.0)) throw DomainError("kernel_q: r must be >= 0");
  const double x = params.mu * r;
  if (x > 2.0) return -bessel::bessel_k(0, x) - std::log(r);
  // -K_0(x) - log r = log(mu/2) I_0 + (I_0 - 1) log r - regular
  const bessel::K0Split split = bessel::k0_split(x);
  const double tail = (r > 0.0) ? (split.i0 - 1.0) * std::log(r) : 0.0;
  return std::log(0.5 * params.mu) * split.i0 + tail - split.regular;
}

PlanePoint biot_savart_plus(PlanePoint p) {
  const double r = nonzero_norm(p, "biot_savart_plus");
  const double f = 1.0 / (kTwoPi * r * r);
  return {p.y * f, -p.x * f};
}

PlanePoint biot_savart_minus(PlanePoint p) {
  const double r = nonzero_norm(p, "biot_savart_minus");
  const double f = bessel::bessel_k(1, r) / r;
  return {p.y * f, -p.x * f};
}

double log_lipschitz_ell(double r) {
  if (!(r >= 0.0)) throw DomainError("log_lipschitz_ell: r must be >= 0");
  if (r == 0.0) return 0.0;
  if (r > 1.0) return 1.0;
  return r * (1.0 - std::log(r));
}

}  // namespace qs2l
