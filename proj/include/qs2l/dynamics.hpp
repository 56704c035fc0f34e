#pragma once

// Lagrangian evolution of the two patch boundaries.

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "qs2l/boundary_integral.hpp"
#include "qs2l/contour.hpp"
#include "qs2l/kernels.hpp"

namespace qs2l::dynamics {

using cplx = std::complex<double>;

struct PatchBoundary {
  std::vector<PlanePoint> nodes;
  int layer = 1;

  [[nodiscard]] std::vector<cplx> points() const;
  static PatchBoundary from_points(std::span<const cplx> z, int layer);
};

struct EvolutionState {
  std::array<PatchBoundary, 2> boundaries;
  double time = 0.0;
  double dt = 0.0;
};

/// (f_+, f_-) = (f1 + f2/delta, f1 - f2) and its inverse.
template <class T>
struct PlusMinusFields {
  T f_plus;
  T f_minus;
};
PlusMinusFields<double> transform_pm(double delta, double f1, double f2);
std::array<double, 2> inverse_pm(double delta, const PlusMinusFields<double>& f);
PlusMinusFields<cplx> transform_pm(double delta, cplx f1, cplx f2);
std::array<cplx, 2> inverse_pm(double delta, const PlusMinusFields<cplx>& f);

PatchBoundary disc_boundary(double radius, int nodes, int layer);
EvolutionState disc_state(const LayerParams& params, int nodes);
EvolutionState vstate_state(const LayerParams& params, const contour::RadialDeformation& r);

/// Boundary nodes with spectral parametric derivatives.
bie::CurvePair state_curves(const EvolutionState& state);

/// Velocity of layer k at an arbitrary point.
PlanePoint boundary_velocity(const LayerParams& params, const EvolutionState& state, int k, PlanePoint query);

/// Node velocities of both layers, summing G_{k,j} directly.
std::array<std::vector<cplx>, 2> node_velocities(const bie::VelocityOperator& op, const EvolutionState& state,
                                                 bie::Execution exec = bie::Execution::parallel);

/// Node velocities through the (+, -) decomposition: strengths transformed by A_delta, pure
/// Laplace and pure screened boundary integrals, transformed back.
std::array<std::vector<cplx>, 2> node_velocities_pm(const bie::VelocityOperator& op, const EvolutionState& state,
                                                    bie::Execution exec = bie::Execution::parallel);

/// One classical RK4 step of size state.dt. Throws SimplicityError if a boundary stops being simple.
EvolutionState step_rk4(const bie::VelocityOperator& op, const EvolutionState& state,
                        bie::Execution exec = bie::Execution::parallel);

/// Resample a boundary at equal arclength along its trigonometric interpolant.
PatchBoundary redistribute(const PatchBoundary& boundary);

struct EvolveOptions {
  int snapshot_every = 0;        // steps between snapshots; 0 keeps only the first and last
  int redistribute_every = 50;   // 0 disables
  bie::Execution exec = bie::Execution::parallel;
};

struct Diagnostics {
  std::array<double, 2> area_drift{};  // max relative area change over the run
  double min_boundary_distance = 0.0;  // smallest node distance between the layers
  double layer_difference = 0.0;       // max node distance between layer 1 and layer 2
  double max_radial_drift = 0.0;       // max | |z| - |z_0| | over nodes (meaningful for discs)
};

struct EvolveResult {
  std::vector<EvolutionState> snapshots;
  bool completed = true;
  std::string diagnostic;
  Diagnostics diagnostics;
  int steps = 0;
};

EvolveResult evolve(const LayerParams& params, const EvolutionState& state0, double t_end, double dt,
                    const EvolveOptions& opts = {});

/// Stable time step: min(0.01, 0.25 * min node spacing / max node speed).
double default_dt(const LayerParams& params, const EvolutionState& state);

/// Shoelace area, positive for counter-clockwise nodes.
double patch_area(const PatchBoundary& boundary);

/// True when no two non-adjacent edges intersect.
bool is_simple(const PatchBoundary& boundary);

/// Symmetric Hausdorff distance between two closed curves: nodes of each against the
/// trigonometric interpolant of the other.
double hausdorff_distance(std::span<const cplx> a, std::span<const cplx> b);

/// max over snapshots and both layers of hausdorff(boundary_k(t), e^{i omega t} boundary_k(0)) / b1.
double rigid_rotation_residual(std::span<const EvolutionState> traj, double omega, double b1);

}  // namespace qs2l::dynamics
