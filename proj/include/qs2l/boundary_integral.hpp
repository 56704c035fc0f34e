#pragma once

// Boundary-integral velocity of the two-layer patch system.
//
// For patches D_1, D_2 with positively oriented boundaries xi_j(eta), eta in [0, 2pi),
// the velocity of layer k written as a complex number u = u_x + i u_y is
//   u_k(z) = - sum_j  int G_{k,j}(z - xi_j(eta)) xi_j'(eta) d eta.
// Boundaries are sampled on the uniform grid eta_l = 2 pi l / N with the same N for
// both layers. When the target is a node of the source curve itself, or of a curve
// that passes through the same point at the same parameter (equal layers), the
// log|2 sin((theta - eta)/2)| part is integrated with product weights and the rest by
// the trapezoidal rule. All other pairs use the trapezoidal rule directly.

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "qs2l/kernels.hpp"

namespace qs2l::bie {

using cplx = std::complex<double>;

/// Nodes and parametric derivative d xi / d eta of one closed curve.
struct Curve {
  std::vector<cplx> z;
  std::vector<cplx> dz;
};
using CurvePair = std::array<Curve, 2>;

enum class Execution { serial, parallel };

/// Per-source-layer boundary integrals at a set of targets:
///   log_part[j](z)      = int log|z - xi_j| xi_j' d eta
///   screened_part[j](z) = int K_0(mu |z - xi_j|) xi_j' d eta
struct ChannelIntegrals {
  std::array<std::vector<cplx>, 2> log_part;
  std::array<std::vector<cplx>, 2> screened_part;
};

class VelocityOperator {
 public:
  VelocityOperator(const LayerParams& params, int nodes);

  [[nodiscard]] const LayerParams& params() const { return params_; }
  [[nodiscard]] int nodes() const { return nodes_; }

  /// Velocity of layer k (1 or 2) at nodes 0..count-1 of curve k; count < 0 means all.
  [[nodiscard]] std::vector<cplx> on_nodes(const CurvePair& curves, int k, Execution exec, int count = -1) const;

  /// Velocity of layer k at an arbitrary point (trapezoidal rule for every source).
  [[nodiscard]] cplx at_point(const CurvePair& curves, int k, cplx query) const;

  /// Channel integrals at nodes 0..count-1 of curve k, with the same singular handling.
  [[nodiscard]] ChannelIntegrals channels_on_nodes(const CurvePair& curves, int k, Execution exec,
                                                   int count = -1) const;

  /// Nodes of the two curves closer than this at equal index are treated as coincident.
  [[nodiscard]] double coincidence_tolerance() const { return 1e-4 * params_.b1; }

 private:
  cplx node_velocity(const CurvePair& curves, int k, int i) const;
  void node_channels(const CurvePair& curves, int k, int i, std::array<cplx, 2>& log_part,
                     std::array<cplx, 2>& screened_part) const;
  bool split_needed(const CurvePair& curves, int k, int j, int i) const;
  void check(const CurvePair& curves) const;

  LayerParams params_;
  int nodes_;
  double step_;
  double log_half_mu_;
  std::vector<double> weights_;
  std::vector<double> log_sine_;
};

}  // namespace qs2l::bie
