#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "spmrf/common.hpp"

namespace spmrf {

/// Order of the difference penalty.  Only first- and second-order models are
/// supported; irregular spacing corrections for k >= 3 are an open problem.
enum class DiffOrder : int { first = 1, second = 2 };

inline int order_value(DiffOrder k) { return static_cast<int>(k); }

inline DiffOrder order_from_int(int k) {
  require(k == 1 || k == 2, "difference order must be 1 or 2");
  return static_cast<DiffOrder>(k);
}

/// Ordered observation locations.  Immutable after construction, so a Grid
/// can be shared freely across chains and threads.
///
/// Locations must be strictly increasing; duplicates are rejected and
/// replicate observations must be aggregated by the caller before building
/// the grid.  Integer time indices are represented as a regular unit grid.
class Grid {
 public:
  explicit Grid(Eigen::VectorXd locations) : locations_(std::move(locations)) {
    const Eigen::Index n = locations_.size();
    require(n >= 2, "grid needs at least two locations");
    spacings_.resize(n - 1);
    double max_spacing = 0.0;
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
      const double d = locations_[j + 1] - locations_[j];
      require(std::isfinite(d), "grid locations must be finite");
      require(d != 0.0, "duplicate grid locations; aggregate replicates first");
      require(d > 0.0, "grid locations must be strictly increasing");
      spacings_[j] = d;
      max_spacing = std::max(max_spacing, d);
    }
    regular_ = true;
    for (Eigen::Index j = 0; j + 1 < n; ++j)
      if (std::abs(spacings_[j] - spacings_[0]) > 1e-12 * max_spacing) {
        regular_ = false;
        break;
      }
  }

  static Grid regular_unit(Eigen::Index n) {
    Eigen::VectorXd s(n);
    for (Eigen::Index i = 0; i < n; ++i) s[i] = static_cast<double>(i + 1);
    return Grid(std::move(s));
  }

  Eigen::Index size() const { return locations_.size(); }
  double location(Eigen::Index i) const { return locations_[i]; }
  double spacing(Eigen::Index j) const { return spacings_[j]; }
  const Eigen::VectorXd& locations() const { return locations_; }
  const Eigen::VectorXd& spacings() const { return spacings_; }
  bool regular() const { return regular_; }

 private:
  Eigen::VectorXd locations_;
  Eigen::VectorXd spacings_;
  bool regular_ = true;
};

/// Forward difference of order k on the grid.  A single formula covers both
/// regular and irregular grids: for k = 2 the increment is
///   theta[j+2] - (1 + r_j) theta[j+1] + r_j theta[j],  r_j = delta[j+1]/delta[j],
/// which reduces to the usual second difference when spacings are equal.
inline Eigen::VectorXd difference(const Eigen::VectorXd& theta, DiffOrder k,
                                  const Grid& grid) {
  const Eigen::Index n = grid.size();
  require(theta.size() == n, "theta length does not match grid");
  const int kv = order_value(k);
  require(n >= kv + 1, "grid too short for this difference order");
  Eigen::VectorXd out(n - kv);
  if (k == DiffOrder::first) {
    for (Eigen::Index j = 0; j + 1 < n; ++j) out[j] = theta[j + 1] - theta[j];
  } else {
    for (Eigen::Index j = 0; j + 2 < n; ++j) {
      const double r = grid.spacing(j + 1) / grid.spacing(j);
      out[j] = theta[j + 2] - (1.0 + r) * theta[j + 1] + r * theta[j];
    }
  }
  return out;
}

/// Spacing-dependent variance scale factors d_j, so that an order-k
/// increment has conditional variance d_j * tau_j^2:
///   k = 1:  d_j = delta_j
///   k = 2:  d_j = delta_{j+1}^2 (delta_j + delta_{j+1}) / 2
/// Every factor is 1 on a regular unit grid.
inline Eigen::VectorXd scale_factors(DiffOrder k, const Grid& grid) {
  const Eigen::Index n = grid.size();
  const int kv = order_value(k);
  require(n >= kv + 1, "grid too short for this difference order");
  Eigen::VectorXd d(n - kv);
  if (k == DiffOrder::first) {
    for (Eigen::Index j = 0; j + 1 < n; ++j) d[j] = grid.spacing(j);
  } else {
    for (Eigen::Index j = 0; j + 2 < n; ++j) {
      const double a = grid.spacing(j);
      const double b = grid.spacing(j + 1);
      d[j] = b * b * (a + b) / 2.0;
    }
  }
  return d;
}

}  // namespace spmrf
