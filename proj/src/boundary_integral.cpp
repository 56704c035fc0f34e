#include "qs2l/boundary_integral.hpp"

#include <cmath>
#include <numbers>

#include "qs2l/bessel.hpp"
#include "qs2l/errors.hpp"
#include "qs2l/quadrature.hpp"

namespace qs2l::bie {
namespace {

inline double distance(cplx a, cplx b) {
  const double dx = a.real() - b.real();
  const double dy = a.imag() - b.imag();
  return std::sqrt(dx * dx + dy * dy);
}

// K_0 with absolute (not relative) accuracy, which is what the quadrature needs.
inline double k0_absolute(double x) {
  if (x <= 5.0) {
    const bessel::K0Split s = bessel::k0_split(x);
    return s.regular - std::log(0.5 * x) * s.i0;
  }
  return bessel::bessel_k(0, x);
}

}  // namespace

VelocityOperator::VelocityOperator(const LayerParams& params, int nodes)
    : params_(params),
      nodes_(nodes),
      step_(2.0 * std::numbers::pi / nodes),
      log_half_mu_(std::log(0.5 * params.mu)),
      weights_(quadrature::log_sine_weights(nodes)),
      log_sine_(quadrature::log_sine_table(nodes)) {}

void VelocityOperator::check(const CurvePair& curves) const {
  for (const Curve& c : curves) {
    if (static_cast<int>(c.z.size()) != nodes_ || static_cast<int>(c.dz.size()) != nodes_) {
      throw DomainError("velocity: curve node count does not match the operator");
    }
  }
}

bool VelocityOperator::split_needed(const CurvePair& curves, int k, int j, int i) const {
  if (j == k) return true;
  return std::abs(curves[k - 1].z[i] - curves[j - 1].z[i]) <= coincidence_tolerance();
}

cplx VelocityOperator::node_velocity(const CurvePair& curves, int k, int i) const {
  const cplx target = curves[k - 1].z[i];
  cplx total = 0.0;
  for (int j = 1; j <= 2; ++j) {
    const Curve& src = curves[j - 1];
    const GreenCoefficients c = green_coefficients(params_, k, j);
    cplx acc = 0.0;
    if (split_needed(curves, k, j, i)) {
      // G = A log|2 sin((theta-eta)/2)| + B with A = alpha - beta I_0(mu d)
      for (int l = 0; l < nodes_; ++l) {
        const int diff = (i - l + nodes_) % nodes_;
        const double dist = distance(target, src.z[l]);
        const bessel::K0Split s = bessel::k0_split(params_.mu * dist);
        const double a = c.alpha - c.beta * s.i0;
        const double reg_log = (l == i) ? std::log(std::abs(src.dz[l])) : std::log(dist) - log_sine_[diff];
        const double b = a * reg_log + c.beta * (s.regular - log_half_mu_ * s.i0);
        acc += (weights_[diff] * a + step_ * b) * src.dz[l];
      }
    } else {
      for (int l = 0; l < nodes_; ++l) {
        const double dist = distance(target, src.z[l]);
        const double g = c.alpha * std::log(dist) + c.beta * k0_absolute(params_.mu * dist);
        acc += (step_ * g) * src.dz[l];
      }
    }
    total -= acc;
  }
  if (!std::isfinite(total.real()) || !std::isfinite(total.imag())) {
    throw QuadratureError("velocity: non-finite boundary integral (touching boundaries?)");
  }
  return total;
}

std::vector<cplx> VelocityOperator::on_nodes(const CurvePair& curves, int k, Execution exec, int count) const {
  check(curves);
  const int n = (count < 0) ? nodes_ : count;
  std::vector<cplx> out(n);
  if (exec == Execution::serial) {
    for (int i = 0; i < n; ++i) out[i] = node_velocity(curves, k, i);
    return out;
  }
  // Exceptions may not cross the parallel region; record and rethrow.
  bool failed = false;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    try {
      out[i] = node_velocity(curves, k, i);
    } catch (const std::exception&) {
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) throw QuadratureError("velocity: non-finite boundary integral (touching boundaries?)");
  return out;
}

cplx VelocityOperator::at_point(const CurvePair& curves, int k, cplx query) const {
  check(curves);
  cplx total = 0.0;
  for (int j = 1; j <= 2; ++j) {
    const Curve& src = curves[j - 1];
    const GreenCoefficients c = green_coefficients(params_, k, j);
    cplx acc = 0.0;
    for (int l = 0; l < nodes_; ++l) {
      const double dist = distance(query, src.z[l]);
      if (dist == 0.0) throw QuadratureError("velocity: query point coincides with a boundary node");
      const double g = c.alpha * std::log(dist) + c.beta * k0_absolute(params_.mu * dist);
      acc += (step_ * g) * src.dz[l];
    }
    total -= acc;
  }
  if (!std::isfinite(total.real()) || !std::isfinite(total.imag())) {
    throw QuadratureError("velocity: non-finite boundary integral");
  }
  return total;
}

void VelocityOperator::node_channels(const CurvePair& curves, int k, int i, std::array<cplx, 2>& log_part,
                                     std::array<cplx, 2>& screened_part) const {
  const cplx target = curves[k - 1].z[i];
  for (int j = 1; j <= 2; ++j) {
    const Curve& src = curves[j - 1];
    cplx lp = 0.0;
    cplx sp = 0.0;
    if (split_needed(curves, k, j, i)) {
      for (int l = 0; l < nodes_; ++l) {
        const int diff = (i - l + nodes_) % nodes_;
        const double dist = distance(target, src.z[l]);
        const bessel::K0Split s = bessel::k0_split(params_.mu * dist);
        const double reg_log = (l == i) ? std::log(std::abs(src.dz[l])) : std::log(dist) - log_sine_[diff];
        lp += (weights_[diff] + step_ * reg_log) * src.dz[l];
        sp += (-weights_[diff] * s.i0 + step_ * (s.regular - (log_half_mu_ + reg_log) * s.i0)) * src.dz[l];
      }
    } else {
      for (int l = 0; l < nodes_; ++l) {
        const double dist = distance(target, src.z[l]);
        lp += (step_ * std::log(dist)) * src.dz[l];
        sp += (step_ * k0_absolute(params_.mu * dist)) * src.dz[l];
      }
    }
    log_part[j - 1] = lp;
    screened_part[j - 1] = sp;
  }
}

ChannelIntegrals VelocityOperator::channels_on_nodes(const CurvePair& curves, int k, Execution exec,
                                                     int count) const {
  check(curves);
  const int n = (count < 0) ? nodes_ : count;
  ChannelIntegrals out;
  for (int j = 0; j < 2; ++j) {
    out.log_part[j].resize(n);
    out.screened_part[j].resize(n);
  }
  auto one = [&](int i) {
    std::array<cplx, 2> lp{};
    std::array<cplx, 2> sp{};
    node_channels(curves, k, i, lp, sp);
    for (int j = 0; j < 2; ++j) {
      out.log_part[j][i] = lp[j];
      out.screened_part[j][i] = sp[j];
    }
  };
  if (exec == Execution::serial) {
    for (int i = 0; i < n; ++i) one(i);
  } else {
    bool failed = false;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      try {
        one(i);
      } catch (const std::exception&) {
#pragma omp atomic write
        failed = true;
      }
    }
    if (failed) throw QuadratureError("velocity: boundary integral failed (touching boundaries?)");
  }
  return out;
}

}  // namespace qs2l::bie
