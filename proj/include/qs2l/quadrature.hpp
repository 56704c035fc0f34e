#pragma once

// Periodic quadrature on the uniform grid theta_i = 2 pi i / N (N even).

#include <complex>
#include <span>
#include <vector>

namespace qs2l::quadrature {

/// Product-integration weights for the log|2 sin((theta - eta)/2)| kernel:
///   int_0^{2pi} log|2 sin((theta_i - eta)/2)| f(eta) d eta  ~  sum_j w[(i - j) mod N] f_j,
/// exact for trigonometric polynomials of degree < N/2.
std::vector<double> log_sine_weights(int nodes);

/// log|2 sin(pi d / N)| for d = 1..N-1; entry 0 is set to 0.
std::vector<double> log_sine_table(int nodes);

/// Derivative of the trigonometric interpolant of periodic samples (Nyquist mode dropped),
/// with respect to the grid parameter in [0, 2 pi).
std::vector<std::complex<double>> spectral_derivative(std::span<const std::complex<double>> values);
std::vector<double> spectral_derivative(std::span<const double> values);

/// (1/2pi) int log|1 - x e^{i theta}| cos(n theta) d theta for 0 <= x <= 1 and n >= 1.
/// Trapezoidal rule for x < 1, product integration at x = 1.
double log_cosine_moment(double x, int n, int nodes);

/// (1/2pi) int K_0(lambda |x - y e^{i theta}|) cos(n theta) d theta for 0 < x <= y, n >= 0.
/// For x < y the contour is shifted towards the nearest logarithmic branch point so
/// that the rule keeps relative accuracy on exponentially small moments; x = y uses
/// product integration against the log|2 sin| singularity.
double k0_cosine_moment(double lambda, double x, double y, int n, int nodes);

}  // namespace qs2l::quadrature
