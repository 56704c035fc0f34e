#include "qs2l/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qs2l/errors.hpp"

namespace qs2l::bessel {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kMaxLog = 709.78;  // log(DBL_MAX)

constexpr double kSeriesLimitI = 25.0;
constexpr double kSeriesLimitK = 2.0;

// Product of many positive factors kept as mantissa * 2^exponent.
struct ScaledProduct {
  double mantissa = 1.0;
  long exponent = 0;

  void multiply(double factor) {
    int e = 0;
    mantissa = std::frexp(mantissa * factor, &e);
    exponent += e;
  }
  [[nodiscard]] double log() const { return std::log(mantissa) + static_cast<double>(exponent) * kLn2; }
};

// A positive value represented as exp(log_scale) * base * 2^exponent.
struct ScaledValue {
  double base = 1.0;
  long exponent = 0;
  double log_scale = 0.0;

  [[nodiscard]] double log() const {
    return std::log(base) + static_cast<double>(exponent) * kLn2 + log_scale;
  }
  [[nodiscard]] double value(const char* what) const {
    if (log() > kMaxLog) {
      throw OverflowError(std::string(what) + ": result exceeds double range");
    }
    // Split so neither ldexp nor exp overflows on its own.
    const double scaled = std::ldexp(base, static_cast<int>(std::clamp(exponent, -2200L, 2200L)));
    if (std::isfinite(scaled) && scaled > 0.0) {
      return scaled * std::exp(log_scale);
    }
    return std::exp(log());
  }
};

double i_small_series(int nu, double x) {
  const double half = 0.5 * x;
  const double q = half * half;
  double term = (nu == 0) ? 1.0 : half;
  double sum = term;
  for (int m = 1; m < 1000; ++m) {
    term *= q / (static_cast<double>(m) * static_cast<double>(m + nu));
    sum += term;
    if (term < sum * 0.25 * kEps) break;
  }
  return sum;
}

// exp(-x) I_nu(x) from the large-argument expansion; accurate to rounding for x > 25.
double i_asymptotic_scaled(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 0.25 * kEps * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * kPi * x);
}

// exp(-x) I_nu(x) for nu in {0, 1}.
double i01_scaled(int nu, double x) {
  if (x <= kSeriesLimitI) return i_small_series(nu, x) * std::exp(-x);
  return i_asymptotic_scaled(nu, x);
}

// Product rho_1 ... rho_n with rho_k = I_k(x)/I_{k-1}(x) from the backward ratio recurrence.
ScaledProduct i_ratio_product(int n, double x) {
  ScaledProduct product;
  const int start = std::max(n, static_cast<int>(std::ceil(x))) + 32;
  double ratio = 0.0;
  for (int k = start; k >= 1; --k) {
    ratio = 1.0 / (2.0 * k / x + ratio);
    if (k <= n) product.multiply(ratio);
  }
  return product;
}

ScaledValue i_scaled_value(int n, double x) {
  ScaledValue v;
  v.base = i01_scaled(0, x);
  v.log_scale = x;
  if (n > 0) {
    const ScaledProduct p = i_ratio_product(n, x);
    v.base *= p.mantissa;
    v.exponent = p.exponent;
  }
  return v;
}

struct KPair {
  double k0;
  double k1;
  bool scaled;  // values are exp(x) K_nu(x)
};

// Log series for K_0 and K_1 (small arguments).
KPair k01_series(double x) {
  const double half = 0.5 * x;
  const double q = half * half;
  const double log_half = std::log(half);

  // K_0 = -log(x/2) I_0 + sum q^m/(m!)^2 Phi(m+1)
  double term = 1.0;
  double phi = -kEulerGamma;
  double i0 = 1.0;
  double reg0 = phi;
  // K_1 = 1/x + log(x/2) I_1 - (x/4) sum (Phi(k+1)+Phi(k+2)) q^k/(k!(k+1)!)
  double term1 = 1.0;
  double phi_next = 1.0 - kEulerGamma;
  double i1 = half;
  double reg1 = phi + phi_next;
  for (int m = 1; m < 200; ++m) {
    term *= q / (static_cast<double>(m) * m);
    phi += 1.0 / m;
    i0 += term;
    reg0 += term * phi;
    term1 *= q / (static_cast<double>(m) * (m + 1));
    phi_next += 1.0 / (m + 1);
    i1 += half * term1;
    reg1 += term1 * (phi + phi_next);
    if (term < 0.25 * kEps * i0 && term1 < 0.25 * kEps) break;
  }
  const double k0 = -log_half * i0 + reg0;
  const double k1 = 1.0 / x + log_half * i1 - 0.5 * half * reg1;
  return {k0, k1, false};
}

// Steed's continued fraction CF2 (Temme's form) for exp(x) K_0 and exp(x) K_1, x >= 2.
KPair k01_steed_scaled(double x) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i < 100000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < 0.5 * kEps) break;
  }
  h = a1 * h;
  const double k0 = std::sqrt(kPi / (2.0 * x)) / s;
  const double k1 = k0 * (x + 0.5 - h) / x;
  return {k0, k1, true};
}

KPair k01(double x) { return x <= kSeriesLimitK ? k01_series(x) : k01_steed_scaled(x); }

ScaledValue k_scaled_value(int n, double x) {
  const KPair pair = k01(x);
  ScaledValue v;
  v.log_scale = pair.scaled ? -x : 0.0;
  if (n == 0) {
    v.base = pair.k0;
    return v;
  }
  v.base = pair.k1;
  ScaledProduct p;
  double sigma = pair.k1 / pair.k0;  // K_k / K_{k-1}
  for (int k = 1; k < n; ++k) {
    sigma = 2.0 * k / x + 1.0 / sigma;
    p.multiply(sigma);
  }
  v.base *= p.mantissa;
  v.exponent = p.exponent;
  return v;
}

void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(what) + ": argument must be finite and >= 0");
  }
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(what) + ": argument must be finite and > 0");
  }
}

constexpr double kSplitSeriesLimit = 8.0;
constexpr int kSplitTerms = 64;

struct SplitTables {
  double inv_square[kSplitTerms];
  double phi[kSplitTerms];  // Phi(m + 1)
};

constexpr SplitTables make_split_tables() {
  SplitTables t{};
  double h = 0.0;
  t.inv_square[0] = 1.0;
  t.phi[0] = -kEulerGamma;
  for (int m = 1; m < kSplitTerms; ++m) {
    h += 1.0 / m;
    t.inv_square[m] = 1.0 / (static_cast<double>(m) * m);
    t.phi[m] = h - kEulerGamma;
  }
  return t;
}

constexpr SplitTables kSplitTables = make_split_tables();

double j_trapezoid(int n, double x) {
  const int nodes = 2 * (n + static_cast<int>(std::ceil(std::abs(x))) + 48);
  double sum = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double theta = 2.0 * kPi * k / nodes;
    sum += std::cos(n * theta - x * std::sin(theta));
  }
  return sum / nodes;
}

double j_hankel(int n, double x) {
  const double mu = 4.0 * n * n;
  double term = 1.0;
  double p = 1.0;
  double q = 0.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(next) >= std::abs(term) && k > 1) break;
    term = next;
    // Signs follow k mod 4: +P, +Q, -P, -Q, ...
    switch (k % 4) {
      case 0: p += term; break;
      case 1: q += term; break;
      case 2: p -= term; break;
      default: q -= term; break;
    }
    if (std::abs(term) < 0.25 * kEps) break;
  }
  const double chi = x - (0.5 * n + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j(int n, double x) {
  if (!std::isfinite(x)) throw DomainError("bessel_j: argument must be finite");
  if (n < 0) return (n % 2 == 0 ? 1.0 : -1.0) * bessel_j(-n, x);
  if (x < 0.0) return (n % 2 == 0 ? 1.0 : -1.0) * bessel_j(n, -x);
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  // The Hankel expansion needs x well beyond n^2 / 2.
  if (x <= 25.0 || x <= 2.0 * n * n) return j_trapezoid(n, x);
  return j_hankel(n, x);
}

double bessel_i(int n, double x) {
  require_nonnegative(x, "bessel_i");
  n = std::abs(n);
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (n == 0 && x <= kSeriesLimitI) return i_small_series(0, x);
  if (n == 1 && x <= kSeriesLimitI) return i_small_series(1, x);
  return i_scaled_value(n, x).value("bessel_i");
}

double bessel_i_scaled(int n, double x) {
  require_nonnegative(x, "bessel_i_scaled");
  n = std::abs(n);
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  ScaledValue v = i_scaled_value(n, x);
  v.log_scale = 0.0;
  return v.value("bessel_i_scaled");
}

double bessel_k(int n, double x) {
  require_positive(x, "bessel_k");
  n = std::abs(n);
  if (n <= 1 && x < kMaxLog) {
    // Direct path for the orders used inside boundary integrals.
    if (x <= kSeriesLimitK) {
      if (n == 0) {
        const K0Split split = k0_split(x);
        return split.regular - std::log(0.5 * x) * split.i0;
      }
      return k01_series(x).k1;
    }
    const KPair pair = k01_steed_scaled(x);
    return (n == 0 ? pair.k0 : pair.k1) * std::exp(-x);
  }
  return k_scaled_value(n, x).value("bessel_k");
}

double bessel_k_scaled(int n, double x) {
  require_positive(x, "bessel_k_scaled");
  ScaledValue v = k_scaled_value(std::abs(n), x);
  v.log_scale += x;
  return v.value("bessel_k_scaled");
}

double bessel_ik_product(int n, double x, double y) {
  require_positive(x, "bessel_ik_product");
  require_positive(y, "bessel_ik_product");
  if (x > y) throw DomainError("bessel_ik_product: requires x <= y");
  n = std::abs(n);
  const ScaledValue i = i_scaled_value(n, x);
  const ScaledValue k = k_scaled_value(n, y);
  ScaledValue product;
  product.base = i.base * k.base;
  product.exponent = i.exponent + k.exponent;
  product.log_scale = i.log_scale + k.log_scale;
  return product.value("bessel_ik_product");
}

double phi_harmonic(int m) {
  if (m < 0) throw DomainError("phi_harmonic: m must be >= 0");
  double sum = 0.0;
  for (int k = m; k >= 1; --k) sum += 1.0 / k;
  return sum - kEulerGamma;
}

double k0_regular(double x) { return k0_split(x).regular; }

K0Split k0_split(double x) {
  require_nonnegative(x, "k0_split");
  if (x <= kSplitSeriesLimit) {
    // Both series have positive terms (after the first), so this stays accurate up to the limit.
    const double q = 0.25 * x * x;
    double term = 1.0;
    double i0 = 1.0;
    double reg = -kEulerGamma;
    for (int m = 1; m < kSplitTerms; ++m) {
      term *= q * kSplitTables.inv_square[m];
      i0 += term;
      reg += term * kSplitTables.phi[m];
      if (term < 0.25 * kEps * i0) break;
    }
    return {i0, reg};
  }
  const double i0 = bessel_i(0, x);
  return {i0, bessel_k(0, x) + std::log(0.5 * x) * i0};
}

bool ik_decreasing_in_order(std::span<const double> xs, int n_max) {
  for (const double x : xs) {
    double prev = bessel_ik_product(1, x, x);
    for (int n = 2; n <= n_max; ++n) {
      const double cur = bessel_ik_product(n, x, x);
      if (!(cur < prev) || !(cur > 0.0)) return false;
      prev = cur;
    }
  }
  return true;
}

bool ik_decreasing_in_argument(std::span<const double> xs, int n_max) {
  for (int n = 1; n <= n_max; ++n) {
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (!(bessel_ik_product(n, xs[i], xs[i]) < bessel_ik_product(n, xs[i - 1], xs[i - 1]))) return false;
    }
  }
  return true;
}

bool ik_gap_bounded(std::span<const double> xs, int n_max) {
  for (const double x : xs) {
    for (const double y : xs) {
      if (x > y) continue;
      for (int n = 1; n <= n_max; ++n) {
        const double gap = std::pow(x / y, n) / (2.0 * n) - bessel_ik_product(n, x, y);
        if (!(gap > 0.0) || gap > 1.0 / (2.0 * n)) return false;
      }
    }
  }
  return true;
}

bool i1_over_x_increasing(std::span<const double> xs) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(bessel_i(1, xs[i]) / xs[i] > bessel_i(1, xs[i - 1]) / xs[i - 1])) return false;
  }
  return true;
}

}  // namespace qs2l::bessel
