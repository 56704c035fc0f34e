#include "qs2l/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qs2l/bessel.hpp"
#include "qs2l/errors.hpp"

namespace qs2l::quadrature {
namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

void check_nodes(int nodes) {
  if (nodes < 4 || nodes % 2 != 0) throw DomainError("quadrature: node count must be even and >= 4");
}

// I_0 and the K_0 regular series as functions of w = (z/2)^2, for complex w.
void i0_and_regular(cplx w, cplx& i0, cplx& regular) {
  cplx term = 1.0;
  double phi = -bessel::kEulerGamma;
  i0 = term;
  regular = phi;
  for (int m = 1; m < 400; ++m) {
    term *= w / (static_cast<double>(m) * m);
    phi += 1.0 / m;
    i0 += term;
    regular += term * phi;
    if (std::abs(term) * std::max(1.0, phi) < 1e-18 * std::abs(i0)) break;
  }
}

}  // namespace

std::vector<double> log_sine_weights(int nodes) {
  check_nodes(nodes);
  const int half = nodes / 2;
  std::vector<double> w(nodes);
  for (int d = 0; d < nodes; ++d) {
    double sum = 0.0;
    for (int k = 1; k < half; ++k) {
      // cos(2 pi k d / N) with the argument reduced exactly
      const long phase = (static_cast<long>(k) * d) % nodes;
      sum += std::cos(2.0 * kPi * static_cast<double>(phase) / nodes) / k;
    }
    sum += ((d % 2 == 0) ? 1.0 : -1.0) / nodes;
    w[d] = -2.0 * kPi / nodes * sum;
  }
  return w;
}

std::vector<double> log_sine_table(int nodes) {
  check_nodes(nodes);
  std::vector<double> t(nodes, 0.0);
  for (int d = 1; d < nodes; ++d) t[d] = std::log(2.0 * std::sin(kPi * d / nodes));
  return t;
}

namespace {

std::vector<double> cot_row(int n) {
  // entry d: 0.5 (-1)^d cot(d h / 2), h = 2 pi / n
  std::vector<double> row(n, 0.0);
  for (int d = 1; d < n; ++d) {
    const double sign = (d % 2 == 0) ? 1.0 : -1.0;
    row[d] = 0.5 * sign / std::tan(kPi * d / n);
  }
  return row;
}

template <class T>
std::vector<T> apply_derivative(std::span<const T> v) {
  const int n = static_cast<int>(v.size());
  check_nodes(n);
  const std::vector<double> row = cot_row(n);
  std::vector<T> out(n, T{});
  for (int i = 0; i < n; ++i) {
    T acc{};
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      acc += row[(i - j + n) % n] * v[j];
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace

std::vector<cplx> spectral_derivative(std::span<const cplx> values) { return apply_derivative(values); }

std::vector<double> spectral_derivative(std::span<const double> values) { return apply_derivative(values); }

double log_cosine_moment(double x, int n, int nodes) {
  check_nodes(nodes);
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("log_cosine_moment: x must lie in [0, 1]");
  if (n < 1) throw DomainError("log_cosine_moment: n must be >= 1");
  double sum = 0.0;
  if (x < 1.0) {
    for (int j = 0; j < nodes; ++j) {
      const double t = 2.0 * kPi * j / nodes;
      const double mod2 = 1.0 - 2.0 * x * std::cos(t) + x * x;
      sum += 0.5 * std::log(mod2) * std::cos(n * t);
    }
    return sum / nodes;
  }
  const std::vector<double> w = log_sine_weights(nodes);
  for (int j = 0; j < nodes; ++j) sum += w[j] * std::cos(2.0 * kPi * static_cast<double>((static_cast<long>(n) * j) % nodes) / nodes);
  return sum / (2.0 * kPi);
}

double k0_cosine_moment(double lambda, double x, double y, int n, int nodes) {
  check_nodes(nodes);
  if (!(lambda > 0.0)) throw DomainError("k0_cosine_moment: lambda must be positive");
  if (!(x > 0.0) || !(x <= y)) throw DomainError("k0_cosine_moment: requires 0 < x <= y");
  if (n < 0) throw DomainError("k0_cosine_moment: n must be >= 0");

  if (x == y) {
    const std::vector<double> w = log_sine_weights(nodes);
    const double log_scale = std::log(0.5 * lambda * y);
    double singular = 0.0;
    double smooth = 0.0;
    for (int j = 0; j < nodes; ++j) {
      const double t = 2.0 * kPi * j / nodes;
      const double c = std::cos(2.0 * kPi * static_cast<double>((static_cast<long>(n) * j) % nodes) / nodes);
      const double d = 2.0 * y * std::abs(std::sin(0.5 * t));
      const bessel::K0Split s = bessel::k0_split(lambda * d);
      singular -= w[j] * s.i0 * c;
      smooth += (-log_scale * s.i0 + s.regular) * c;
    }
    return (singular + smooth * 2.0 * kPi / nodes) / (2.0 * kPi);
  }

  const double gap = std::log(y / x);
  const double tau = std::max(0.0, gap - 48.0 / nodes);
  const double xp = x * std::exp(tau);
  const double xm = x * std::exp(-tau);
  const double log_half_lambda = std::log(0.5 * lambda);
  cplx sum = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const double t = 2.0 * kPi * j / nodes;
    const cplx e = std::polar(1.0, t);
    const cplx f1 = y - xp * e;
    const cplx f2 = y - xm * std::conj(e);
    const cplx w = 0.25 * lambda * lambda * f1 * f2;
    cplx i0;
    cplx regular;
    i0_and_regular(w, i0, regular);
    const cplx k0 = -(log_half_lambda + 0.5 * (std::log(f1) + std::log(f2))) * i0 + regular;
    const double phase = 2.0 * kPi * static_cast<double>((static_cast<long>(n) * j) % nodes) / nodes;
    sum += k0 * std::polar(1.0, -phase);
  }
  return sum.real() * std::exp(-n * tau) / nodes;
}

}  // namespace qs2l::quadrature
