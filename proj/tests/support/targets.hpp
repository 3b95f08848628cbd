#pragma once

// Minimal targets for exercising the sampler on known distributions.

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

#include "spmrf/model.hpp"

namespace testsupport {

struct GaussianTarget {
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;

  Eigen::Index dim() const { return mean.size(); }
  spmrf::PosteriorEval eval(const Eigen::VectorXd& x) const {
    spmrf::PosteriorEval e;
    e.grad.resize(x.size());
    double lp = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double z = (x[i] - mean[i]) / sd[i];
      lp += -0.5 * z * z;
      e.grad[i] = -z / sd[i];
    }
    e.logp = lp;
    return e;
  }
  Eigen::VectorXd constrain(const Eigen::VectorXd& x) const { return x; }
  std::vector<std::string> names() const {
    std::vector<std::string> n;
    for (Eigen::Index i = 0; i < dim(); ++i)
      n.push_back("x." + std::to_string(i + 1));
    return n;
  }
};

inline GaussianTarget std_normal_target(Eigen::Index d) {
  return {Eigen::VectorXd::Zero(d), Eigen::VectorXd::Ones(d)};
}

struct NeverFiniteTarget {
  Eigen::Index dim() const { return 3; }
  spmrf::PosteriorEval eval(const Eigen::VectorXd& x) const {
    spmrf::PosteriorEval e;
    e.grad = Eigen::VectorXd::Zero(x.size());
    e.logp = -std::numeric_limits<double>::infinity();
    return e;
  }
  Eigen::VectorXd constrain(const Eigen::VectorXd& x) const { return x; }
  std::vector<std::string> names() const { return {"a", "b", "c"}; }
};

}  // namespace testsupport
