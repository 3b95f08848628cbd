#pragma once

#include <cmath>

#include "spmrf/common.hpp"

namespace spmrf {

/// Scale parameters shared by the grid-aware marginal kernels: a global
/// scale gamma and the spacing-derived variance factor delta of the
/// increment being evaluated (1 on a regular unit grid).
struct ScaledDensityParams {
  double gamma = 1.0;
  double delta = 1.0;

  void validate() const {
    require(gamma > 0.0 && std::isfinite(gamma), "gamma must be positive");
    require(delta > 0.0 && std::isfinite(delta), "delta must be positive");
  }
};

inline double log_normal(double u, double mean, double sd) {
  require(sd > 0.0, "sd must be positive");
  const double z = (u - mean) / sd;
  return -half_log_2pi - std::log(sd) - 0.5 * z * z;
}

inline double d_log_normal_du(double u, double mean, double sd) {
  require(sd > 0.0, "sd must be positive");
  return -(u - mean) / (sd * sd);
}

inline double log_half_cauchy(double x, double scale) {
  require(x > 0.0, "half-Cauchy support is x > 0");
  require(scale > 0.0, "scale must be positive");
  const double r = x / scale;
  return std::log(2.0 / M_PI) - std::log(scale) - std::log1p(r * r);
}

inline double d_log_half_cauchy_dx(double x, double scale) {
  require(x > 0.0 && scale > 0.0, "domain violation");
  return -2.0 * x / (scale * scale + x * x);
}

/// CDF of the half-Cauchy; its median equals the scale parameter.
inline double half_cauchy_cdf(double x, double scale) {
  require(scale > 0.0, "scale must be positive");
  if (x <= 0.0) return 0.0;
  return 2.0 / M_PI * std::atan(x / scale);
}

inline double log_exponential(double x, double rate) {
  require(x > 0.0, "exponential support is x > 0");
  require(rate > 0.0, "rate must be positive");
  return std::log(rate) - rate * x;
}

inline double d_log_exponential_dx(double x, double rate) {
  require(x > 0.0 && rate > 0.0, "domain violation");
  return -rate;
}

inline double log_inv_gamma(double x, double shape, double scale) {
  require(x > 0.0, "inverse-gamma support is x > 0");
  require(shape > 0.0 && scale > 0.0, "shape and scale must be positive");
  return shape * std::log(scale) - std::lgamma(shape) -
         (shape + 1.0) * std::log(x) - scale / x;
}

inline double d_log_inv_gamma_dx(double x, double shape, double scale) {
  require(x > 0.0 && shape > 0.0 && scale > 0.0, "domain violation");
  return -(shape + 1.0) / x + scale / (x * x);
}

/// Log density of an order-k increment under the Laplace formulation with
/// the local scale integrated out: a Laplace kernel with scale
/// sqrt(delta) * gamma, i.e. variance 2 * delta * gamma^2.
inline double log_laplace_marginal(double u, const ScaledDensityParams& p) {
  p.validate();
  const double s = p.gamma * std::sqrt(p.delta);
  return -std::log(2.0 * s) - std::abs(u) / s;
}

inline double d_log_laplace_marginal_du(double u, const ScaledDensityParams& p) {
  p.validate();
  const double s = p.gamma * std::sqrt(p.delta);
  return (u > 0.0 ? -1.0 : 1.0) / s;
}

namespace detail {
// Blend weight for the horseshoe bound mixture, (sqrt(pi)-2)/(sqrt(2)-2).
inline double horseshoe_blend_weight() {
  static const double w = (std::sqrt(M_PI) - 2.0) / (std::sqrt(2.0) - 2.0);
  return w;
}
inline double horseshoe_norm(const ScaledDensityParams& p) {
  return 1.0 / std::sqrt(2.0 * M_PI * M_PI * M_PI * p.delta * p.gamma * p.gamma);
}
}  // namespace detail

/// Lower envelope B1 of the horseshoe increment density; integrates to
/// sqrt(2/pi).
inline double horseshoe_bound_lower(double u, const ScaledDensityParams& p) {
  p.validate();
  require(u != 0.0, "horseshoe bounds diverge at u = 0");
  const double a = p.delta * p.gamma * p.gamma;
  return 0.5 * detail::horseshoe_norm(p) * std::log1p(4.0 * a / (u * u));
}

/// Upper envelope B2 of the horseshoe increment density; integrates to
/// 2/sqrt(pi).
inline double horseshoe_bound_upper(double u, const ScaledDensityParams& p) {
  p.validate();
  require(u != 0.0, "horseshoe bounds diverge at u = 0");
  const double a = p.delta * p.gamma * p.gamma;
  return detail::horseshoe_norm(p) * std::log1p(2.0 * a / (u * u));
}

/// Closed-form approximation to the horseshoe increment density: the convex
/// combination w*B1 + (1-w)*B2 of the two envelopes, with w chosen so the
/// blend integrates to exactly 1.  The density has an integrable spike at
/// u = 0, which is outside the domain; callers seeing u = 0 must guard.
/// The hierarchical sampler never evaluates this kernel.
inline double log_horseshoe_approx(double u, const ScaledDensityParams& p) {
  p.validate();
  require(u != 0.0, "horseshoe approximation undefined at u = 0");
  const double w = detail::horseshoe_blend_weight();
  const double a = p.delta * p.gamma * p.gamma;
  const double u2 = u * u;
  const double val = detail::horseshoe_norm(p) *
                     (0.5 * w * std::log1p(4.0 * a / u2) +
                      (1.0 - w) * std::log1p(2.0 * a / u2));
  return std::log(val);
}

inline double d_log_horseshoe_approx_du(double u, const ScaledDensityParams& p) {
  p.validate();
  require(u != 0.0, "horseshoe approximation undefined at u = 0");
  const double w = detail::horseshoe_blend_weight();
  const double a = p.delta * p.gamma * p.gamma;
  const double u2 = u * u;
  // d/du log1p(c/u^2) = -2c / (u (u^2 + c))
  const double t1 = 0.5 * w * (-8.0 * a) / (u * (u2 + 4.0 * a));
  const double t2 = (1.0 - w) * (-4.0 * a) / (u * (u2 + 2.0 * a));
  const double num = 0.5 * w * std::log1p(4.0 * a / u2) +
                     (1.0 - w) * std::log1p(2.0 * a / u2);
  return (t1 + t2) / num;
}

}  // namespace spmrf
