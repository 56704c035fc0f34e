#pragma once

#include <stdexcept>
#include <string>

namespace qs2l {

/// Argument outside the mathematical domain of a function (x <= 0 for K_n, p = 0 for a kernel).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Result not representable in double precision even with exponent scaling.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// b_k^2 + 2 r_k(theta) <= 0 somewhere: the polar radius is undefined.
class RadiusCollapseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A boundary integral produced a non-finite value.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested V-state sits on a spectral collision; the kernel is not one-dimensional.
class CollisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A patch boundary self-intersects or lost its positive orientation.
class SimplicityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qs2l
