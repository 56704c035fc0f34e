#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qs2l/bessel.hpp"
#include "qs2l/quadrature.hpp"

using namespace qs2l;
using namespace qs2l::quadrature;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("log_sine_weights integrate cos(k eta) exactly") {
  // int_0^{2pi} log|2 sin((theta - eta)/2)| cos(k eta) d eta = -pi cos(k theta) / k, and 0 for k = 0
  const int n = 64;
  const auto w = log_sine_weights(n);
  REQUIRE(w.size() == static_cast<std::size_t>(n));
  for (int k = 0; k < n / 2; ++k) {
    for (int i : {0, 5, 37}) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += w[((i - j) % n + n) % n] * std::cos(k * 2.0 * kPi * j / n);
      const double expect = k == 0 ? 0.0 : -kPi * std::cos(k * 2.0 * kPi * i / n) / k;
      CHECK(std::abs(s - expect) <= 1e-13);
    }
  }
}

TEST_CASE("log_sine_table") {
  const auto t = log_sine_table(8);
  CHECK(t[0] == 0.0);
  CHECK(std::abs(t[4] - std::log(2.0)) <= 1e-16);
  CHECK(std::abs(t[1] - t[7]) <= 1e-15);
}

TEST_CASE("spectral_derivative of trigonometric polynomials") {
  const int n = 32;
  std::vector<double> f(n);
  std::vector<std::complex<double>> g(n);
  for (int j = 0; j < n; ++j) {
    const double t = 2.0 * kPi * j / n;
    f[j] = std::sin(3.0 * t) + 0.5 * std::cos(7.0 * t);
    g[j] = std::exp(std::complex<double>(0.0, 2.0 * t));
  }
  const auto df = spectral_derivative(std::span<const double>(f));
  const auto dg = spectral_derivative(std::span<const std::complex<double>>(g));
  for (int j = 0; j < n; ++j) {
    const double t = 2.0 * kPi * j / n;
    CHECK(std::abs(df[j] - (3.0 * std::cos(3.0 * t) - 3.5 * std::sin(7.0 * t))) <= 1e-12);
    CHECK(std::abs(dg[j] - std::complex<double>(0.0, 2.0) * g[j]) <= 1e-12);
  }
}

TEST_CASE("log moment identity -x^n/(2n)") {
  for (double x : {0.3, 0.7, 0.95, 1.0}) {
    for (int n = 1; n <= 32; ++n) {
      CHECK_MESSAGE(std::abs(log_cosine_moment(x, n, 1024) + std::pow(x, n) / (2.0 * n)) <= 1e-10,
                    "x=" << x << " n=" << n);
    }
  }
}

TEST_CASE("trapezoidal log moment equals the aliased coefficient sum") {
  // the rule picks up every Fourier mode m = +-n mod N: -sum x^m / (2m)
  const int nodes = 256;
  for (double x : {0.7, 0.95}) {
    for (int n : {1, 5, 32}) {
      double alias = 0.0;
      for (int m = 1; m < 40 * nodes; ++m) {
        const int r = m % nodes;
        const int hits = (r == n) + (r == nodes - n);
        if (hits) alias -= hits * std::pow(x, m) / (2.0 * m);
      }
      CHECK(std::abs(log_cosine_moment(x, n, nodes) - alias) <= 1e-15);
    }
  }
}

TEST_CASE("screened moment identity I_n(lambda x) K_n(lambda y)") {
  const double pairs[][2] = {{0.4, 1.0}, {0.9, 1.1}, {1.0, 1.0}};
  for (const auto& xy : pairs) {
    for (double lambda : {0.5, 2.0}) {
      for (int n = 0; n <= 32; ++n) {
        const double exact = bessel::bessel_ik_product(n, lambda * xy[0], lambda * xy[1]);
        const double q = k0_cosine_moment(lambda, xy[0], xy[1], n, 1024);
        CHECK_MESSAGE(std::abs(q - exact) <= 1e-8 * exact, "x=" << xy[0] << " y=" << xy[1] << " l=" << lambda << " n=" << n);
      }
    }
  }
}
