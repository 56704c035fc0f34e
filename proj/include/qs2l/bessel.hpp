#pragma once

// Integer-order Bessel functions J_n, I_n, K_n for real arguments.
//
// Evaluation paths:
//   I_0, I_1   power series for x <= 25, exponentially scaled asymptotic series beyond
//   I_n        backward (Miller) ratio recurrence normalised by I_0
//   K_0, K_1   log series for x <= 2, Steed's continued fraction (scaled) beyond
//   K_n        forward recurrence K_{n+1} = K_{n-1} + (2n/x) K_n
// Products of many ratios are accumulated as (mantissa, binary exponent) pairs so
// that I_n(x) K_n(y) stays finite for orders up to a few thousand.

#include <span>

namespace qs2l::bessel {

/// Euler's constant (17 significant digits).
inline constexpr double kEulerGamma = 0.57721566490153286;

/// J_n(x). Trapezoidal evaluation of the periodic integral for |x| <= max(25, 2n^2),
/// Hankel asymptotics beyond.
double bessel_j(int n, double x);

/// I_n(x), x >= 0. Throws OverflowError when I_n(x) exceeds double range.
double bessel_i(int n, double x);

/// exp(-x) I_n(x), x >= 0.
double bessel_i_scaled(int n, double x);

/// K_n(x), x > 0. Throws DomainError for x <= 0, OverflowError when K_n(x) is too large.
double bessel_k(int n, double x);

/// exp(x) K_n(x), x > 0.
double bessel_k_scaled(int n, double x);

/// I_n(x) K_n(y) for 0 < x <= y without intermediate overflow or underflow.
double bessel_ik_product(int n, double x, double y);

/// Harmonic-sum function: sum_{k=1..m} 1/k - gamma (the value Phi(m+1)); m = 0 gives -gamma.
double phi_harmonic(int m);

/// Regular part of K_0 in K_0(x) = -log(x/2) I_0(x) + k0_regular(x):
/// sum_{m>=0} (x/2)^{2m} / (m!)^2 * Phi(m+1). Entire in x; finite at 0 (= -gamma).
double k0_regular(double x);

/// I_0(x) and k0_regular(x) computed together (shared series for small x).
struct K0Split {
  double i0;
  double regular;
};
K0Split k0_split(double x);

// Predicates for the structural facts the spectral analysis relies on. Each one
// samples the claim on the given grid and returns false on the first violation.

/// n -> I_n(x) K_n(x) strictly decreasing for n = 1..n_max at every x in xs.
bool ik_decreasing_in_order(std::span<const double> xs, int n_max);

/// x -> I_n(x) K_n(x) strictly decreasing along the sorted grid xs, for every n = 1..n_max.
bool ik_decreasing_in_argument(std::span<const double> xs, int n_max);

/// 0 < (x/y)^n/(2n) - I_n(x)K_n(y) <= 1/(2n) for all pairs x <= y drawn from xs and n = 1..n_max.
bool ik_gap_bounded(std::span<const double> xs, int n_max);

/// x -> I_1(x)/x strictly increasing along the sorted grid xs.
bool i1_over_x_increasing(std::span<const double> xs);

}  // namespace qs2l::bessel
