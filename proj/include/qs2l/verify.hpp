#pragma once

// Built-in identity and property suites run by `qs2l verify`.

#include <string>
#include <vector>

namespace qs2l::verify {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double error = 0.0;      // observed worst-case error (0 for boolean checks)
  double tolerance = 0.0;
};

struct VerifyOptions {
  std::vector<std::string> suites;  // empty runs all
  double gamma_shift = 0.0;         // perturbation injected into gamma_n for the spectral checks
};

/// bessel, kernels, quadrature, spectrum, contour, dynamics.
const std::vector<std::string>& suite_names();

/// Throws ConfigError on an unknown suite name.
std::vector<CheckResult> run(const VerifyOptions& opts);

}  // namespace qs2l::verify
