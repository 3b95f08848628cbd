#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "spmrf/common.hpp"
#include "spmrf/sampler.hpp"

namespace spmrf {

/// Type-7 quantile (linear interpolation between order statistics), the
/// convention fixed for all summaries so outputs are bit-stable.
inline double quantile_type7(Eigen::VectorXd draws, double p) {
  require(draws.size() >= 1, "empty draws");
  require(p >= 0.0 && p <= 1.0, "quantile probability in [0,1]");
  std::sort(draws.data(), draws.data() + draws.size());
  const double h = (double(draws.size()) - 1.0) * p;
  const Eigen::Index lo = Eigen::Index(std::floor(h));
  const Eigen::Index hi = std::min(lo + 1, draws.size() - 1);
  return draws[lo] + (h - double(lo)) * (draws[hi] - draws[lo]);
}

namespace detail {

inline void split_in_half(const Eigen::VectorXd& chain,
                          std::vector<Eigen::VectorXd>& out) {
  const Eigen::Index half = chain.size() / 2;
  out.push_back(chain.head(half));
  out.push_back(chain.tail(half));
}

struct ChainMoments {
  double w = 0.0;      // mean within-chain variance
  double vhat = 0.0;   // pooled variance estimate
  double mean_var_of_means = 0.0;
  bool degenerate = true;
};

inline ChainMoments chain_moments(const std::vector<Eigen::VectorXd>& chains) {
  ChainMoments mom;
  const std::size_t m = chains.size();
  const Eigen::Index len = chains.front().size();
  double w = 0.0;
  Eigen::VectorXd means{Eigen::Index(m)};
  for (std::size_t j = 0; j < m; ++j) {
    const double mu = chains[j].mean();
    means[Eigen::Index(j)] = mu;
    w += (chains[j].array() - mu).square().sum() / double(len - 1);
  }
  w /= double(m);
  const double mean_of_means = means.mean();
  const double var_means =
      (means.array() - mean_of_means).square().sum() / double(m - 1);
  mom.w = w;
  mom.vhat = double(len - 1) / double(len) * w + var_means;
  mom.mean_var_of_means = var_means;
  mom.degenerate = !(mom.vhat > 0.0);
  return mom;
}

}  // namespace detail

/// Split potential scale reduction factor.  Each chain is halved before the
/// between/within comparison so within-chain trends register as disagreement.
/// Degenerate zero-variance input reports 1 by convention.
inline double split_rhat(const std::vector<Eigen::VectorXd>& chains) {
  require(!chains.empty(), "no chains");
  std::vector<Eigen::VectorXd> split;
  for (const auto& c : chains) {
    require(c.size() >= 4, "chains must have at least 4 draws");
    require(c.size() == chains.front().size(), "chains must have equal length");
    detail::split_in_half(c, split);
  }
  const detail::ChainMoments mom = detail::chain_moments(split);
  if (mom.degenerate) return 1.0;
  return std::sqrt(mom.vhat / mom.w);  // +inf when W = 0 but B > 0
}

/// Effective sample size from pairwise-summed autocorrelations with Geyer's
/// initial-monotone truncation, combined across chains.  Capped at the total
/// number of draws (cap factor 1).  Returns NaN on degenerate input.
inline double ess(const std::vector<Eigen::VectorXd>& orig_chains) {
  require(!orig_chains.empty(), "no chains");
  for (const auto& c : orig_chains)
    require(c.size() == orig_chains.front().size() && c.size() >= 4,
            "chains must have equal length >= 4");
  std::vector<Eigen::VectorXd> chains;
  for (const auto& c : orig_chains) detail::split_in_half(c, chains);
  const std::size_t m = chains.size();
  const Eigen::Index len = chains.front().size();

  const detail::ChainMoments mom = detail::chain_moments(chains);
  if (mom.degenerate || !(mom.w > 0.0))
    return std::numeric_limits<double>::quiet_NaN();

  // Within-chain autocovariances (biased 1/len normalization).
  std::vector<Eigen::VectorXd> centered;
  centered.reserve(m);
  for (const auto& c : chains) centered.push_back(c.array() - c.mean());
  auto acov = [&](Eigen::Index lag) {
    double a = 0.0;
    for (const auto& c : centered)
      a += c.head(len - lag).dot(c.tail(len - lag)) / double(len);
    return a / double(m);
  };

  const double vhat = mom.vhat;
  const double rho0 = 1.0 - (mom.w - acov(0)) / vhat;
  double tau = -rho0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (Eigen::Index lag = 0; lag + 1 < len; lag += 2) {
    const double rho_even = lag == 0 ? rho0 : 1.0 - (mom.w - acov(lag)) / vhat;
    const double rho_odd = 1.0 - (mom.w - acov(lag + 1)) / vhat;
    double pair = rho_even + rho_odd;
    if (pair < 0.0) break;               // Geyer initial positive sequence
    pair = std::min(pair, prev_pair);    // initial monotone
    prev_pair = pair;
    tau += 2.0 * pair;
  }
  const double total = double(m) * double(len);
  const double e = total / std::max(tau, 1.0 / total);
  return std::min(e, total);
}

struct ParamSummary {
  std::string name;
  double median = 0.0;
  double q025 = 0.0;
  double q975 = 0.0;
  double ess = 0.0;
  double rhat = 0.0;
  bool degenerate = false;
};

struct FitSummary {
  std::vector<ParamSummary> params;
  double min_essps = 0.0;
  double mean_essps = 0.0;
  double total_cpu_seconds = 0.0;
  double sampling_cpu_seconds = 0.0;
};

/// Posterior medians, central 95% intervals, ESS, R-hat and ESS-per-second
/// for every retained parameter.  ESSps divides by sampling CPU seconds
/// (warmup excluded), summed across chains.
inline FitSummary summarize(const PosteriorSamples& samples) {
  require(!samples.chains.empty() && samples.retained_per_chain() >= 4,
          "summarize needs chains with at least 4 retained draws");
  FitSummary out;
  out.total_cpu_seconds = samples.total_cpu_seconds();
  out.sampling_cpu_seconds = samples.sampling_cpu_seconds();
  const Eigen::Index n_params = Eigen::Index(samples.names.size());
  const Eigen::Index rows = samples.retained_per_chain();
  const Eigen::Index total = rows * samples.n_chains();

  double min_essps = std::numeric_limits<double>::infinity();
  double sum_essps = 0.0;
  Eigen::Index n_essps = 0;

  for (Eigen::Index j = 0; j < n_params; ++j) {
    ParamSummary s;
    s.name = samples.names[std::size_t(j)];
    Eigen::VectorXd pooled(total);
    Eigen::Index at = 0;
    const std::vector<Eigen::VectorXd> per_chain = samples.parameter(j);
    for (const auto& c : per_chain) {
      pooled.segment(at, rows) = c;
      at += rows;
    }
    s.median = quantile_type7(pooled, 0.5);
    s.q025 = quantile_type7(pooled, 0.025);
    s.q975 = quantile_type7(pooled, 0.975);
    const double e = ess(per_chain);
    s.degenerate = !std::isfinite(e);
    s.ess = s.degenerate ? 0.0 : e;
    s.rhat = samples.n_chains() >= 1 ? split_rhat(per_chain) : 1.0;
    if (!s.degenerate && out.sampling_cpu_seconds > 0.0) {
      const double essps = s.ess / out.sampling_cpu_seconds;
      min_essps = std::min(min_essps, essps);
      sum_essps += essps;
      ++n_essps;
    }
    out.params.push_back(std::move(s));
  }
  out.min_essps = n_essps > 0 ? min_essps : 0.0;
  out.mean_essps = n_essps > 0 ? sum_essps / double(n_essps) : 0.0;
  return out;
}

}  // namespace spmrf
