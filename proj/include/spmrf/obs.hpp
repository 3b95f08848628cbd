#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "spmrf/common.hpp"

namespace spmrf {

enum class ObsFamily { normal, poisson, binomial };

/// Observation model attached to a fit: Gaussian with unknown noise sd,
/// Poisson with a log link, or binomial with a logistic link and per-point
/// trial counts (which may differ across points).
struct ObservationModel {
  ObsFamily family = ObsFamily::normal;
  Eigen::VectorXd trials;  // binomial only; one entry per observation

  static ObservationModel normal() { return {ObsFamily::normal, {}}; }
  static ObservationModel poisson() { return {ObsFamily::poisson, {}}; }
  static ObservationModel binomial(Eigen::VectorXd m) {
    return {ObsFamily::binomial, std::move(m)};
  }
  static ObservationModel binomial(Eigen::Index n, double m) {
    return {ObsFamily::binomial, Eigen::VectorXd::Constant(n, m)};
  }

  void validate_data(const Eigen::VectorXd& y) const {
    for (Eigen::Index i = 0; i < y.size(); ++i)
      require(std::isfinite(y[i]), "non-finite observation");
    switch (family) {
      case ObsFamily::normal:
        break;
      case ObsFamily::poisson:
        for (Eigen::Index i = 0; i < y.size(); ++i)
          require(y[i] >= 0.0 && y[i] == std::floor(y[i]),
                  "Poisson data must be nonnegative integers");
        break;
      case ObsFamily::binomial:
        require(trials.size() == y.size(),
                "binomial trial counts must match data length");
        for (Eigen::Index i = 0; i < y.size(); ++i) {
          require(trials[i] > 0.0, "binomial trials must be positive");
          require(y[i] >= 0.0 && y[i] <= trials[i] && y[i] == std::floor(y[i]),
                  "binomial data must be integers in [0, trials]");
        }
        break;
    }
  }
};

inline double logit(double p) { return std::log(p / (1.0 - p)); }
inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Maps observations onto the scale of the latent trend: identity for
/// normal data, ln(y + 0.5) for counts, and logit((y + q)/m) for binomial
/// data where q = +0.005 at y = 0 and -0.005 at y = m keeps the logit
/// finite at the boundaries.
inline Eigen::VectorXd transform_to_latent_scale(const Eigen::VectorXd& y,
                                                 const ObservationModel& obs) {
  obs.validate_data(y);
  Eigen::VectorXd t(y.size());
  switch (obs.family) {
    case ObsFamily::normal:
      t = y;
      break;
    case ObsFamily::poisson:
      for (Eigen::Index i = 0; i < y.size(); ++i) t[i] = std::log(y[i] + 0.5);
      break;
    case ObsFamily::binomial:
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double m = obs.trials[i];
        double q = 0.0;
        if (y[i] == 0.0) q = 0.005;
        else if (y[i] == m) q = -0.005;
        t[i] = logit((y[i] + q) / m);
      }
      break;
  }
  return t;
}

inline double sample_mean(const Eigen::VectorXd& v) {
  require(v.size() >= 1, "empty sample");
  return v.mean();
}

/// Sample standard deviation with the n-1 denominator.
inline double sample_sd(const Eigen::VectorXd& v) {
  require(v.size() >= 2, "need at least two values for a standard deviation");
  const double m = v.mean();
  return std::sqrt((v.array() - m).square().sum() / double(v.size() - 1));
}

}  // namespace spmrf
