#pragma once

// Contour-dynamics functional for rotating patch pairs and the V-state solver.
//
// Boundaries are z_k(theta) = R_k(theta) e^{i theta} with R_k = sqrt(b_k^2 + 2 r_k) and
//   F_k(Omega, r)(theta) = Omega r_k'(theta) - Im( conj(z_k'(theta)) u_k(z_k(theta)) ),
// u_k being the boundary-integral velocity of layer k. F = 0 exactly when the pair
// rotates rigidly with angular velocity Omega.

#include <Eigen/Core>
#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qs2l/boundary_integral.hpp"
#include "qs2l/kernels.hpp"
#include "qs2l/spectrum.hpp"

namespace qs2l::contour {

/// m-fold even deformation r_k(theta) = sum_{n=1..modes} c_{n,k} cos(n m theta), with its
/// samples on theta_i = 2 pi i / nodes.
struct RadialDeformation {
  int m = 1;
  int modes = 0;
  int nodes = 0;
  std::array<std::vector<double>, 2> coeffs;  // coeffs[k-1][n-1] = c_{n,k}
  std::array<std::vector<double>, 2> nodal;   // nodal[k-1][i] = r_k(theta_i)

  static RadialDeformation zero(int m, int modes, int nodes);
  static RadialDeformation from_coeffs(int m, int nodes, std::vector<double> c1, std::vector<double> c2);

  /// d r_k / d theta at the nodes, computed from the coefficients.
  [[nodiscard]] std::vector<double> derivative(int k) const;
  /// Recompute nodal values from coeffs.
  void refresh();
};

/// R_k(theta_i) = sqrt(b_k^2 + 2 r_k(theta_i)); throws RadiusCollapseError if the radicand is <= 0.
std::vector<double> radius_profile(double b_k, std::span<const double> r_nodal);

struct BoundaryFunctionPair {
  std::array<std::vector<double>, 2> values;
  [[nodiscard]] double sup_norm() const;
};

/// F on all nodes.
BoundaryFunctionPair functional_f(const LayerParams& params, double omega, const RadialDeformation& r,
                                  bie::Execution exec = bie::Execution::parallel);

/// The two boundary curves of a deformation.
bie::CurvePair deformation_curves(const LayerParams& params, const RadialDeformation& r);

/// -n M_n(Omega): maps the mode-n cosine coefficients (layer 1, layer 2) to the mode-n sine
/// coefficients of F at r = 0.
Eigen::Matrix2d linearized_multiplier(const LayerParams& params, double omega, int n);

/// Central-difference Jacobian of F at r0 in the directions cos(n theta) e_j, n = 1..n_probe,
/// projected on sin(n' theta), n' = 1..n_probe. Entry (2(n'-1)+k-1, 2(n-1)+j-1).
struct FdJacobian {
  int n_probe = 0;
  Eigen::MatrixXd matrix;
  [[nodiscard]] Eigen::Matrix2d block(int n_row, int n_col) const {
    return matrix.block<2, 2>(2 * (n_row - 1), 2 * (n_col - 1));
  }
};
FdJacobian jacobian_fd(const LayerParams& params, double omega, const RadialDeformation& r0, double h, int n_probe);

struct SolverOptions {
  int nodes = 256;
  int modes = 32;
  double tolerance = 1e-10;       // residual (sup norm of F)
  double step_tolerance = 1e-12;  // Newton update (max norm)
  int max_iterations = 50;
  int max_halvings = 8;
  double s_max = 0.5;
  bool scan_collisions = true;
  int scan_grid = 400;
};

struct VStateSolution {
  LayerParams params;
  int m = 1;
  spectrum::Branch sign = spectrum::Branch::minus;
  double amplitude = 0.0;
  double omega = 0.0;
  RadialDeformation deformation;
  double residual_norm = 0.0;
  int iterations = 0;
};

/// Reason for refusing a V-state computation, or empty when the parameters are admissible.
std::optional<std::string> collision_reason(const LayerParams& params, int m, spectrum::Branch sign,
                                            const SolverOptions& opts);

/// Solve F(Omega, r) = 0 in the m-fold cosine subspace with the chart constraint
/// c_{1,1} = s v_1, v = kernel_vector(m, sign). Throws CollisionError, NoConvergenceError,
/// RadiusCollapseError.
VStateSolution vstate_solve(const LayerParams& params, int m, spectrum::Branch sign, double s,
                            const VStateSolution* init = nullptr, const SolverOptions& opts = {});

struct BranchResult {
  std::vector<VStateSolution> solutions;
  bool complete = true;
  double last_good_amplitude = 0.0;
  std::string diagnostic;
};

/// Warm-started solves along s_grid; stops at the first failure.
BranchResult branch_continue(const LayerParams& params, int m, spectrum::Branch sign, std::span<const double> s_grid,
                             const SolverOptions& opts = {});

}  // namespace qs2l::contour
