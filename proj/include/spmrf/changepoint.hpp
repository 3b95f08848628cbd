#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "spmrf/common.hpp"

namespace spmrf {

/// Change point of one trend draw: the location just after the maximum drop
/// between consecutive points, i.e. s[i*+1] with i* = argmax(theta_i -
/// theta_{i+1}).  Ties break to the smallest index, so a strictly increasing
/// draw lands on the least-negative drop nearest the start.
inline Eigen::Index change_point_index(const Eigen::VectorXd& theta) {
  require(theta.size() >= 2, "need at least two points");
  Eigen::Index best = 0;
  double best_drop = theta[0] - theta[1];
  for (Eigen::Index i = 1; i + 1 < theta.size(); ++i) {
    const double drop = theta[i] - theta[i + 1];
    if (drop > best_drop) {
      best_drop = drop;
      best = i;
    }
  }
  return best + 1;
}

struct ChangePointPosterior {
  std::vector<double> locations;  // one entry per draw
  std::map<double, long> counts;  // histogram over locations
  double mode = 0.0;
  double q25 = 0.0, median = 0.0, q75 = 0.0;
};

/// Posterior over change-point locations from a matrix of trend draws
/// (rows = draws, columns = grid points ordered by location).
inline ChangePointPosterior change_point_posterior(
    const Eigen::MatrixXd& theta_draws, const Eigen::VectorXd& locations) {
  require(theta_draws.cols() == locations.size(),
          "draw columns must match locations");
  require(theta_draws.rows() >= 1, "no draws");
  ChangePointPosterior out;
  out.locations.reserve(std::size_t(theta_draws.rows()));
  for (Eigen::Index r = 0; r < theta_draws.rows(); ++r) {
    const Eigen::Index idx = change_point_index(theta_draws.row(r).transpose());
    const double loc = locations[idx];
    out.locations.push_back(loc);
    ++out.counts[loc];
  }
  long best_count = -1;
  for (const auto& [loc, cnt] : out.counts)
    if (cnt > best_count) {  // ties break to the smallest location
      best_count = cnt;
      out.mode = loc;
    }
  std::vector<double> sorted = out.locations;
  std::sort(sorted.begin(), sorted.end());
  auto q = [&](double p) {
    const double h = (double(sorted.size()) - 1.0) * p;
    const std::size_t lo = std::size_t(h);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - double(lo)) * (sorted[hi] - sorted[lo]);
  };
  out.q25 = q(0.25);
  out.median = q(0.5);
  out.q75 = q(0.75);
  return out;
}

}  // namespace spmrf
