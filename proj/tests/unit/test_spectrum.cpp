#include <doctest.h>

#include <Eigen/LU>
#include <cmath>
#include <vector>

#include "qs2l/bessel.hpp"
#include "qs2l/errors.hpp"
#include "qs2l/spectrum.hpp"

using namespace qs2l;
using namespace qs2l::spectrum;
using bessel::bessel_ik_product;

namespace {

std::vector<LayerParams> grid() {
  std::vector<LayerParams> out;
  for (double delta : {0.5, 1.0, 2.0, 10.0}) {
    for (double b : {0.25, 0.5, 0.7, 1.0}) {
      for (double lambda : {0.5, 1.0, 2.0, 4.0}) {
        if (delta >= b * b) out.push_back(LayerParams::make(delta, lambda, 1.0, b));
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("mean_flow_coeffs") {
  for (double delta : {0.5, 1.0, 3.0}) {
    const auto vw = mean_flow_coeffs(LayerParams::make(delta, 1.3, 2.0, 2.0));
    CHECK(std::abs(vw.v + 0.5) <= 1e-15);
    CHECK(std::abs(vw.w + 0.5) <= 1e-15);
  }
  for (const auto& p : grid()) {
    const auto vw = mean_flow_coeffs(p);
    CHECK(vw.v < 0.0);
    CHECK(vw.w < 0.0);
  }
  // large delta limit of W
  const LayerParams p = LayerParams::make(1e6, 1.0, 1.0, 0.6);
  const double x1 = p.b1 * p.mu, x2 = p.b2 * p.mu;
  const double limit = -0.5 - (bessel_ik_product(1, x2, x2) - bessel_ik_product(1, x2, x1) / p.b);
  CHECK(std::abs(mean_flow_coeffs(p).w - limit) <= 1e-5);
}

TEST_CASE("A_n, B_n non-positive, non-increasing, with tail bound") {
  for (const auto& p : grid()) {
    double pa = 1.0, pb = 1.0;
    for (int n = 1; n <= 64; ++n) {
      const auto ab = coeffs_ab(p, n);
      CHECK(ab.a <= 0.0);
      CHECK(ab.b <= 0.0);
      CHECK(ab.a <= pa);
      CHECK(ab.b <= pb);
      pa = ab.a;
      pb = ab.b;
    }
    const auto lim = coeffs_ab_limit(p);
    const double x1 = p.b1 * p.mu, x2 = p.b2 * p.mu;
    CHECK(std::abs(pa - lim.a) <= p.delta / 128.0 + bessel_ik_product(64, x1, x1) + 1e-15);
    CHECK(std::abs(pb - lim.b) <= 1.0 / 128.0 + p.delta * bessel_ik_product(64, x2, x2) + 1e-15);
  }
  const LayerParams sym = LayerParams::make(1.0, 0.7, 1.5, 1.5);
  for (int n = 1; n <= 32; ++n) CHECK(coeffs_ab(sym, n).a == coeffs_ab(sym, n).b);
}

TEST_CASE("A_inf - B_inf is positive for b2 < b1 and zero at b1 = b2") {
  for (const auto& p : grid()) {
    const auto lim = coeffs_ab_limit(p);
    if (p.b < 1.0) {
      CHECK(lim.a - lim.b > 0.0);
    } else {
      CHECK(std::abs(lim.a - lim.b) <= 1e-14);
    }
  }
}

TEST_CASE("gamma_n") {
  for (const auto& p : grid()) {
    double prev = 1.0;
    for (int n = 1; n <= 64; ++n) {
      const double g = gamma_n(p, n);
      CHECK(g > 0.0);
      CHECK(g <= 0.5 / n);
      CHECK(g < prev);
      prev = g;
    }
    CHECK(gamma_n(p, 64) <= 1.0 / 128.0);
  }
}

TEST_CASE("matrix_m structure") {
  const LayerParams p = LayerParams::make(1.0, 1.0, 1.0, 1.0);
  for (int n = 1; n <= 8; ++n) {
    const auto m = matrix_m(p, n, 0.3);
    CHECK(m(0, 1) == m(1, 0));
  }
  const LayerParams q = LayerParams::make(2.0, 1.0, 1.0, 0.5);
  const auto m = matrix_m(q, 3, 0.1);
  CHECK(std::abs(m(1, 0) - q.delta * m(0, 1)) <= 1e-16);
  CHECK(std::abs(m(0, 0) - (0.1 + coeffs_ab(q, 3).a / 3.0)) <= 1e-15);
}

TEST_CASE("omega_pm: equal radii closed form") {
  for (double delta : {0.5, 1.0, 2.0, 10.0}) {
    for (double b1 : {0.5, 1.0, 2.0}) {
      for (double lambda : {0.5, 1.0}) {
        const LayerParams p = LayerParams::make(delta, lambda, b1, b1);
        for (int n = 1; n <= 32; ++n) {
          const auto om = omega_pm(p, n);
          CHECK(std::abs(om.plus - (0.5 - bessel_ik_product(n, b1 * p.mu, b1 * p.mu))) <= 1e-12);
          CHECK(std::abs(om.minus - (0.5 - 0.5 / n)) <= 1e-12);
        }
      }
    }
  }
  const LayerParams unit = LayerParams::make(1.0, 1.0 / std::sqrt(2.0), 1.0, 1.0);
  CHECK(std::abs(unit.mu - 1.0) <= 1e-15);
  CHECK(std::abs(omega_pm(unit, 1).minus) <= 1e-15);
  // 1/2 - I_1(1) K_1(1), I_1 K_1(1) from a 50-digit series evaluation
  CHECK(std::abs(omega_pm(unit, 1).plus - 0.15982664909513248) <= 1e-15);
}

TEST_CASE("determinant, defect and trace on the grid") {
  for (const auto& p : grid()) {
    for (int n = 1; n <= 32; ++n) {
      const auto om = omega_pm(p, n);
      const double gap = om.plus - om.minus;
      const double scale = matrix_m(p, n, 0.0).norm() + std::sqrt(2.0) * std::abs(om.plus);
      for (Branch br : {Branch::minus, Branch::plus}) {
        const auto m = matrix_m(p, n, om.get(br));
        CHECK(std::abs(m.determinant()) <= 1e-12 * scale * scale);
        const Eigen::Vector2d v = kernel_vector(p, n, br).normalized();
        CHECK((m * v).norm() <= 1e-12 * scale);
        CHECK(std::abs(m.trace() - (br == Branch::plus ? gap : -gap)) <= 1e-12);
        CHECK(kernel_vector(p, n, br)(0) > 0.0);
      }
    }
  }
}

TEST_CASE("monotone branches") {
  for (const auto& p : grid()) {
    const auto rows = spectrum_table(p, 64);
    REQUIRE(rows.size() == 64);
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
      CHECK(rows[i].n + 1 == rows[i + 1].n);
      CHECK(rows[i].omega_minus < rows[i + 1].omega_minus);
      CHECK(rows[i].omega_plus < rows[i + 1].omega_plus);
    }
  }
  const auto one = spectrum_table(LayerParams::make(1.0, 1.0, 1.0, 0.5), 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].n == 1);
}

TEST_CASE("kernel_vector at equal radii, minus branch, is along (1, 1)") {
  for (double delta : {0.5, 1.0, 3.0}) {
    const LayerParams p = LayerParams::make(delta, 1.2, 1.0, 1.0);
    for (int m = 1; m <= 6; ++m) {
      const auto v = kernel_vector(p, m, Branch::minus);
      CHECK(std::abs(v(0) - v(1)) <= 1e-15);
      const double lhs = omega_pm(p, m).minus + coeffs_ab(p, m).b / (delta + 1.0);
      CHECK(std::abs(lhs + delta * gamma_n(p, m) / (delta + 1.0)) <= 1e-14);
    }
  }
}

TEST_CASE("kernel_vector argument checks") {
  const LayerParams p = LayerParams::make(1.0, 1.0, 1.0, 0.5);
  CHECK_NOTHROW(kernel_vector(p, 4, Branch::plus));
  CHECK_THROWS_AS(kernel_vector(p, 0, Branch::plus), DomainError);
}

TEST_CASE("collision_scan") {
  const LayerParams base = LayerParams::make(1.0, 1.0, 1.0, 1.0);
  // frozen regression: one collision of the m = 3 minus branch, with n = 2
  const auto r3 = collision_scan(base, 3, 64, 400);
  REQUIRE(r3.size() == 1);
  CHECK(r3[0].n == 2);
  CHECK(std::abs(r3[0].b2_root - 0.777755) <= 1e-6);
  CHECK(collision_scan(base, 1, 64, 400).empty());
  CHECK(collision_scan(LayerParams::make(2.0, 4.0, 1.0, 1.0), 6, 64, 400).empty());
  for (int m = 2; m <= 6; ++m) {
    const auto recs = collision_scan(base, m, 64, 400);
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const auto& r = recs[i];
      CHECK(r.m == m);
      CHECK(std::abs(r.residual) <= 1e-12);
      CHECK(r.b2_root > 0.0);
      CHECK(r.b2_root < 1.0);
      const LayerParams at = LayerParams::make(base.delta, base.lambda, base.b1, r.b2_root);
      CHECK(std::abs(omega_pm(at, m).minus - omega_pm(at, r.n).plus) <= 1e-12);
      // the colliding pair sits below the threshold at that b2
      const int p0 = first_collision_free_m(at, 4096);
      CHECK((p0 == 0 || std::min(r.m, r.n) < p0));
      if (i > 0) CHECK(recs[i - 1].b2_root <= r.b2_root);
    }
  }
}

TEST_CASE("threshold p0") {
  const LayerParams p = LayerParams::make(1.0, 1.0, 1.0, 0.5);
  const int p0 = first_collision_free_m(p, 4096);
  REQUIRE(p0 > 0);
  for (int m = p0; m <= p0 + 40; ++m) {
    for (int n = p0; n <= p0 + 40; ++n) CHECK(omega_pm(p, n).plus > omega_pm(p, m).minus);
  }
  CHECK(first_collision_free_m(LayerParams::make(1.0, 1.0, 1.0, 1.0), 4096) == 0);
}

TEST_CASE("endpoint collisions and the equal-radii example") {
  for (int n : {2, 3}) {
    const auto c = equal_radii_collision(n, 1.0, 1.0);
    CHECK(std::abs(c.residual) <= 1e-12);
    CHECK(std::abs(bessel_ik_product(1, c.x0, c.x0) - 0.5 / n) <= 1e-12);
    CHECK(std::abs(c.omega_gap) <= 1e-10);
    const LayerParams at = LayerParams::make(1.0, c.lambda, 1.0, 1.0);
    const auto hits = endpoint_collisions(at, n, 8, 1e-9);
    CHECK(std::find(hits.begin(), hits.end(), 1) != hits.end());
  }
  CHECK_THROWS_AS(equal_radii_collision(1, 1.0, 1.0), DomainError);
}
