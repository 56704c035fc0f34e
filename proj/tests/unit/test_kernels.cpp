#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qs2l/bessel.hpp"
#include "qs2l/errors.hpp"
#include "qs2l/kernels.hpp"

using namespace qs2l;

namespace {

constexpr double kPi = std::numbers::pi;

PlanePoint rotate(PlanePoint p, double a) {
  return {p.x * std::cos(a) - p.y * std::sin(a), p.x * std::sin(a) + p.y * std::cos(a)};
}

double dist(PlanePoint a, PlanePoint b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

TEST_CASE("LayerParams validation and derived fields") {
  const LayerParams p = LayerParams::make(3.0, 0.5, 2.0, 1.0);
  CHECK(p.mu == 0.5 * std::sqrt(4.0));
  CHECK(p.b == 0.5);
  CHECK(p.proven_regime());
  CHECK_FALSE(LayerParams::make(0.1, 1.0, 1.0, 0.9).proven_regime());
  CHECK_THROWS_AS(LayerParams::make(0.0, 1.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(LayerParams::make(1.0, -1.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(LayerParams::make(1.0, 1.0, 1.0, 1.5), DomainError);
  CHECK_THROWS_AS(LayerParams::make(1.0, 1.0, 1.0, 0.0), DomainError);
}

TEST_CASE("green_log") {
  CHECK(green_log({1.0, 0.0}) == 0.0);
  CHECK(std::abs(green_log({std::numbers::e, 0.0}) + 1.0 / (2.0 * kPi)) <= 1e-16);
  CHECK_THROWS_AS(green_log({0.0, 0.0}), DomainError);
  const PlanePoint p{0.3, -1.2};
  for (double a : {0.4, 1.9, 4.4}) CHECK(std::abs(green_log(rotate(p, a)) - green_log(p)) <= 1e-15);
}

TEST_CASE("green_screened") {
  CHECK_THROWS_AS(green_screened(1.0, {0.0, 0.0}), DomainError);
  for (double r : {1e-5, 1e-7}) {
    const PlanePoint p{r, 0.0};
    const double v = green_screened(1.0, p) + std::log(r / 2.0) * bessel::bessel_i(0, r) / (2.0 * kPi);
    CHECK(std::abs(v - bessel::phi_harmonic(0) / (2.0 * kPi)) <= 1e-9);
  }
  CHECK(std::abs(green_screened(1.0, {30.0, 0.0})) < 1e-12);
  const PlanePoint p{0.3, -1.2};
  for (double a : {0.4, 1.9, 4.4}) CHECK(std::abs(green_screened(2.0, rotate(p, a)) - green_screened(2.0, p)) <= 1e-15);
}

TEST_CASE("kernel_g formula and symmetries") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const LayerParams one = LayerParams::make(1.0, 0.8, 1.0, 0.6);
  for (int i = 0; i < 200; ++i) {
    const PlanePoint p{u(rng), u(rng)};
    CHECK(kernel_g(one, 1, 2, p) == doctest::Approx(kernel_g(one, 2, 1, p)).epsilon(1e-14));
  }
  const LayerParams p = LayerParams::make(2.5, 1.3, 1.0, 0.6);
  const PlanePoint x{0.4, 0.9};
  const double r = x.norm();
  for (int k = 1; k <= 2; ++k) {
    for (int j = 1; j <= 2; ++j) {
      const double expect = (std::pow(p.delta, 2 - j) * std::log(r) +
                             ((k + j - 1) % 2 == 0 ? 1.0 : -1.0) * std::pow(p.delta, k - 1) *
                                 bessel::bessel_k(0, p.mu * r)) /
                            (2.0 * kPi * (p.delta + 1.0));
      CHECK(std::abs(kernel_g(p, k, j, x) - expect) <= 1e-15);
      CHECK(std::abs(kernel_g(p, k, j, rotate(x, 2.2)) - kernel_g(p, k, j, x)) <= 1e-15);
    }
  }
  // delta G_{1,2} - G_{2,1} = 0
  for (int i = 0; i < 50; ++i) {
    const PlanePoint q{u(rng), u(rng)};
    CHECK(std::abs(p.delta * kernel_g(p, 1, 2, q) - kernel_g(p, 2, 1, q)) <= 1e-14);
  }
  CHECK_THROWS_AS(kernel_g(p, 1, 1, {0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(kernel_g(p, 3, 1, x), DomainError);
}

TEST_CASE("off-diagonal kernel is bounded at the origin") {
  const LayerParams p = LayerParams::make(2.0, 1.0, 1.0, 0.5);
  const double at0 = -kernel_q(p, 0.0) / (2.0 * kPi * (1.0 + p.delta));
  for (int k = 1; k <= 8; ++k) {
    const double r = std::pow(10.0, -k);
    const double g = kernel_g(p, 1, 2, {r, 0.0});
    CHECK(std::abs(g + kernel_q(p, r) / (2.0 * kPi * (1.0 + p.delta))) <= 1e-14);
    CHECK(std::abs(g - at0) <= 0.2 * r);
  }
}

TEST_CASE("kernel_q") {
  const LayerParams p = LayerParams::make(1.0, 1.0, 1.0, 1.0);
  CHECK(std::abs(kernel_q(p, 1e-12) - kernel_q(p, 1e-10)) <= 1e-8);
  for (double r : {0.1, 1.0, 3.0}) CHECK(std::abs(-kernel_q(p, r) - std::log(r) - bessel::bessel_k(0, p.mu * r)) <= 1e-12);
  // Q(0) = log(mu/2) + gamma
  CHECK(std::abs(kernel_q(p, 0.0) - (std::log(p.mu / 2.0) + bessel::kEulerGamma)) <= 1e-15);
  // difference quotients stay bounded on (0, 1]: |Q'(r)| <= mu^2 r (|log r| + 1) for small r
  double worst = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double r = i * 1e-3;
    const double h = 1e-7;
    const double dq = (kernel_q(p, r + h) - kernel_q(p, r)) / h;
    worst = std::max(worst, std::abs(dq));
  }
  CHECK(worst < 1.0);
}

TEST_CASE("biot_savart_plus") {
  const PlanePoint k = biot_savart_plus({1.0, 0.0});
  CHECK(std::abs(k.x) <= 1e-17);
  CHECK(std::abs(k.y + 1.0 / (2.0 * kPi)) <= 1e-16);
  CHECK_THROWS_AS(biot_savart_plus({0.0, 0.0}), DomainError);
  const PlanePoint p{0.3, -0.7};
  const PlanePoint a = biot_savart_plus(p);
  const PlanePoint b = biot_savart_plus({-p.x, -p.y});
  CHECK(a.x == -b.x);
  CHECK(a.y == -b.y);
}

TEST_CASE("biot_savart_minus") {
  CHECK_THROWS_AS(biot_savart_minus({0.0, 0.0}), DomainError);
  double lo = 1e300, hi = 0.0;
  for (int i = 0; i <= 60; ++i) {
    const double r = std::pow(10.0, -6.0 + 0.1 * i);
    const double v = biot_savart_minus({r, 0.0}).norm() * r;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi <= 1.0 + 1e-12);
  CHECK(lo >= 0.6);
  CHECK(biot_savart_minus({30.0, 0.0}).norm() <= 1e-11);
  const PlanePoint p{0.3, -0.7};
  const PlanePoint a = biot_savart_minus(p);
  const PlanePoint b = biot_savart_minus({-p.x, -p.y});
  CHECK(a.x == -b.x);
  CHECK(a.y == -b.y);
  // direction: -p_perp / |p|
  CHECK(std::abs(a.x * p.x + a.y * p.y) <= 1e-16);
}

TEST_CASE("A1 and A2 bounds on random samples") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> logr(-6.0, 2.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  auto sample = [&] {
    const double r = std::pow(10.0, logr(rng));
    const double a = ang(rng);
    return PlanePoint{r * std::cos(a), r * std::sin(a)};
  };
  // A1: |k_pm(p)| <= C / |p|; frozen regression constants
  double c1 = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const PlanePoint p = sample();
    c1 = std::max({c1, biot_savart_plus(p).norm() * p.norm(), biot_savart_minus(p).norm() * p.norm()});
  }
  CHECK(c1 <= 1.0 + 1e-12);
  // A2: |k(p) - k(q)| <= C |p - q| / (|p| |q|) in the three regimes
  double c2 = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const PlanePoint q = sample();
    PlanePoint p;
    switch (i % 3) {
      case 0: {  // |q| <= |p| <= 2|q|
        const double s = 1.0 + std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        p = rotate({q.x * s, q.y * s}, ang(rng) * 0.1);
        break;
      }
      case 1: {  // |p| >= 2|q|
        const double s = 2.0 + 10.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        p = rotate({q.x * s, q.y * s}, ang(rng));
        break;
      }
      default: {  // |p| <= 1
        const double r = std::uniform_real_distribution<double>(1e-6, 1.0)(rng);
        const double a = ang(rng);
        p = {r * std::cos(a), r * std::sin(a)};
      }
    }
    const double scale = dist(p, q) / (p.norm() * q.norm());
    if (scale == 0.0) continue;
    const PlanePoint dp = biot_savart_plus(p), dq = biot_savart_plus(q);
    const PlanePoint mp = biot_savart_minus(p), mq = biot_savart_minus(q);
    c2 = std::max({c2, dist(dp, dq) / scale, dist(mp, mq) / scale});
  }
  CHECK(c2 <= 2.0);
}

TEST_CASE("log_lipschitz_ell") {
  CHECK(log_lipschitz_ell(0.0) == 0.0);
  CHECK(std::abs(log_lipschitz_ell(1.0) - 1.0) <= 1e-16);
  CHECK(std::abs(log_lipschitz_ell(0.5) - 0.5 * std::log(2.0 * std::numbers::e)) <= 1e-15);
  CHECK(log_lipschitz_ell(7.0) == 1.0);
  // concave, nondecreasing, continuous on a grid
  const double h = 1e-3;
  for (int i = 1; i < 1500; ++i) {
    const double r = i * h;
    const double a = log_lipschitz_ell(r - h), b = log_lipschitz_ell(r), c = log_lipschitz_ell(r + h);
    CHECK(b >= a);
    CHECK(a + c - 2.0 * b <= 1e-15);
    CHECK(std::abs(c - b) <= 0.02);
  }
}
