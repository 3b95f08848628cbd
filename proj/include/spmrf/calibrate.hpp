#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "spmrf/common.hpp"
#include "spmrf/grid.hpp"
#include "spmrf/obs.hpp"

namespace spmrf {

/// Precision matrix of the proper order-k random-walk field on n nodes:
/// tridiagonal for k = 1, pentadiagonal for k = 2, with the prior variance
/// omega^2 of the first component folded into the (1,1) entry, all scaled
/// by 1/gamma^2.
inline Eigen::MatrixXd precision_matrix(DiffOrder k, Eigen::Index n,
                                        double omega2, double gamma) {
  require(n >= order_value(k) + 1, "precision matrix needs n >= k + 1");
  require(omega2 > 0.0 && gamma > 0.0, "omega2 and gamma must be positive");
  const double g2 = gamma * gamma;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  if (k == DiffOrder::first) {
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
      q(j, j) += 1.0;
      q(j + 1, j + 1) += 1.0;
      q(j, j + 1) -= 1.0;
      q(j + 1, j) -= 1.0;
    }
  } else {
    // second differences plus the first-difference term tying down theta_2
    q(0, 0) += 1.0;
    q(1, 1) += 1.0;
    q(0, 1) -= 1.0;
    q(1, 0) -= 1.0;
    for (Eigen::Index j = 0; j + 2 < n; ++j) {
      const double c[3] = {1.0, -2.0, 1.0};
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) q(j + a, j + b) += c[a] * c[b];
    }
  }
  q(0, 0) += g2 / omega2;
  return q / g2;
}

/// Marginal prior variance of theta_i (1-based index) at global scale gamma:
///   order 1:  omega^2 + (i-1) gamma^2
///   order 2:  omega^2 + i(i-1)(2i-1)/6 gamma^2
inline double marginal_variance(DiffOrder k, Eigen::Index i, double omega2,
                                double gamma) {
  require(i >= 1, "index is 1-based");
  const double g2 = gamma * gamma;
  const double di = static_cast<double>(i);
  if (k == DiffOrder::first) return omega2 + (di - 1.0) * g2;
  return omega2 + di * (di - 1.0) * (2.0 * di - 1.0) / 6.0 * g2;
}

/// Closed-form covariance matrix inverting precision_matrix.  For i <= j and
/// a = i-1, b = j-1:
///   order 1:  omega^2 + a gamma^2
///   order 2:  omega^2 + [a(a+1)(2a+1)/6 + (b-a) a(a+1)/2] gamma^2
inline Eigen::MatrixXd covariance_matrix(DiffOrder k, Eigen::Index n,
                                         double omega2, double gamma) {
  require(n >= order_value(k) + 1, "covariance matrix needs n >= k + 1");
  require(omega2 > 0.0 && gamma > 0.0, "omega2 and gamma must be positive");
  const double g2 = gamma * gamma;
  Eigen::MatrixXd s(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const double a = static_cast<double>(i);
      const double b = static_cast<double>(j);
      double v;
      if (k == DiffOrder::first) {
        v = omega2 + a * g2;
      } else {
        v = omega2 +
            (a * (a + 1.0) * (2.0 * a + 1.0) / 6.0 + (b - a) * a * (a + 1.0) / 2.0) * g2;
      }
      s(i, j) = v;
      s(j, i) = v;
    }
  return s;
}

/// Geometric mean of the marginal prior standard deviations at gamma = 1,
/// computed from the closed-form diagonal (no matrix inversion).
inline double marginal_sd_ref(DiffOrder k, Eigen::Index n, double omega2) {
  require(n >= 1, "need at least one node");
  require(omega2 > 0.0, "omega2 must be positive");
  double acc = 0.0;
  for (Eigen::Index i = 1; i <= n; ++i)
    acc += 0.5 * std::log(marginal_variance(k, i, omega2, 1.0));
  return std::exp(acc / static_cast<double>(n));
}

/// Half-Cauchy hyperparameter giving Pr(average marginal sd > U) = alpha:
///   zeta = U / (sigma_ref * tan(pi/2 * (1 - alpha))).
inline double zeta(double upper_bound, double sigma_ref, double alpha) {
  require(upper_bound > 0.0, "U must be positive");
  require(sigma_ref > 0.0, "sigma_ref must be positive");
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1)");
  return upper_bound / (sigma_ref * std::tan(0.5 * M_PI * (1.0 - alpha)));
}

/// Upper bound U for the calibration: the sample standard deviation of the
/// data transformed to the latent scale.
inline double estimate_upper_bound(const Eigen::VectorXd& y,
                                   const ObservationModel& obs) {
  require(y.size() >= 2, "need at least two observations");
  const Eigen::VectorXd t = transform_to_latent_scale(y, obs);
  const double sd = sample_sd(t);
  require(sd > 0.0, "degenerate data: zero variance on the latent scale");
  return sd;
}

/// Rescales zeta when a regular grid is densified by a factor m over the
/// same range: m^{-1/2} for order 1, m^{-3/2} for order 2.
inline double rescale_zeta(double zeta_old, DiffOrder k, double densify_factor) {
  require(densify_factor > 0.0, "densify factor must be positive");
  const double e = (k == DiffOrder::first) ? -0.5 : -1.5;
  return zeta_old * std::pow(densify_factor, e);
}

struct CalibrationReport {
  double upper_bound = 0.0;  // U
  double omega2 = 0.0;
  double sigma_ref = 0.0;
  double alpha = 0.05;
  double zeta = 0.0;
};

/// Full calibration pipeline: U and omega^2 from the transformed data,
/// sigma_ref from the closed-form marginal variances, then zeta.
inline CalibrationReport calibrate(const Eigen::VectorXd& y,
                                   const ObservationModel& obs, DiffOrder k,
                                   double alpha = 0.05) {
  CalibrationReport r;
  r.alpha = alpha;
  r.upper_bound = estimate_upper_bound(y, obs);
  r.omega2 = r.upper_bound * r.upper_bound;
  r.sigma_ref = marginal_sd_ref(k, y.size(), r.omega2);
  r.zeta = zeta(r.upper_bound, r.sigma_ref, alpha);
  return r;
}

}  // namespace spmrf
