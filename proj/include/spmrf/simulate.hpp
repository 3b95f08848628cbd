#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "spmrf/calibrate.hpp"
#include "spmrf/common.hpp"
#include "spmrf/diagnostics.hpp"
#include "spmrf/model.hpp"
#include "spmrf/obs.hpp"
#include "spmrf/rng.hpp"
#include "spmrf/sampler.hpp"

namespace spmrf {

enum class TrendKind { constant, piecewise_constant, smooth_gp, varying_smooth };

inline const char* trend_name(TrendKind k) {
  switch (k) {
    case TrendKind::constant: return "constant";
    case TrendKind::piecewise_constant: return "piecewise";
    case TrendKind::smooth_gp: return "smooth-gp";
    case TrendKind::varying_smooth: return "varying";
  }
  return "?";
}

/// Fixed seed for the Gaussian-process benchmark trend.  Chosen once so the
/// path stays strictly positive (the Poisson scenario evaluates it on the
/// log scale) and its sample standard deviation sits near 9, giving
/// signal-to-noise ratios of about 6 and 2 at noise sd 1.5 and 4.5.
inline constexpr std::uint64_t default_gp_seed = 47;

/// Benchmark scenario: one of four trend shapes crossed with an observation
/// family.  Binomial scenarios use 20 trials per point.
struct TrendScenario {
  TrendKind kind = TrendKind::piecewise_constant;
  ObsFamily obs = ObsFamily::normal;
  double sigma = 4.5;  // normal observations: 1.5 or 4.5
  Eigen::Index n = 100;
  std::uint64_t gp_seed = default_gp_seed;
  double binomial_trials = 20.0;

  std::string name() const {
    std::string s = trend_name(kind);
    switch (obs) {
      case ObsFamily::normal: {
        std::ostringstream os;
        os << s << "/normal-" << sigma;
        return os.str();
      }
      case ObsFamily::poisson: return s + "/poisson";
      case ObsFamily::binomial: return s + "/binomial";
    }
    return s;
  }

  /// First-order models for the flat trends, second-order for the smooth ones.
  DiffOrder model_order() const {
    return (kind == TrendKind::constant || kind == TrendKind::piecewise_constant)
               ? DiffOrder::first
               : DiffOrder::second;
  }
};

namespace detail {

inline Eigen::VectorXd gp_path(Eigen::Index n, double mean, double sf2,
                               double rho, std::uint64_t seed) {
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = double(i - j);
      cov(i, j) = sf2 * std::exp(-d * d / (2.0 * rho * rho));
    }
  cov.diagonal().array() += 1e-10 * sf2;
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  require(llt.info() == Eigen::Success, "GP covariance not positive definite");
  Rng rng(seed);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.normal();
  return Eigen::VectorXd::Constant(n, mean) + llt.matrixL() * z;
}

}  // namespace detail

/// True trend on the latent scale: the natural scale for normal data, log
/// scale for Poisson, logit scale for binomial.
inline Eigen::VectorXd trend_values(const TrendScenario& sc) {
  const Eigen::Index n = sc.n;
  require(n >= 4, "scenario grid too small");
  Eigen::VectorXd f(n);
  switch (sc.kind) {
    case TrendKind::constant: {
      const double v = sc.obs == ObsFamily::binomial ? logit(0.5) : 0.0;
      if (sc.obs == ObsFamily::binomial) f.setConstant(v);
      else if (sc.obs == ObsFamily::poisson) f.setConstant(std::log(20.0));
      else f.setConstant(20.0);
      break;
    }
    case TrendKind::piecewise_constant: {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double t = double(i + 1);
        int seg = t <= 20 ? 0 : (t <= 40 ? 1 : (t <= 60 ? 2 : 3));
        if (sc.obs == ObsFamily::binomial) {
          const double probs[4] = {0.65, 0.25, 0.85, 0.45};
          f[i] = logit(probs[seg]);
        } else {
          const double vals[4] = {25.0, 10.0, 35.0, 15.0};
          f[i] = sc.obs == ObsFamily::poisson ? std::log(vals[seg]) : vals[seg];
        }
      }
      break;
    }
    case TrendKind::smooth_gp: {
      if (sc.obs == ObsFamily::binomial) {
        f = detail::gp_path(n, -0.5, 3.0, 10.0, sc.gp_seed);
      } else {
        const Eigen::VectorXd path = detail::gp_path(n, 10.0, 430.0, 10.0, sc.gp_seed);
        if (sc.obs == ObsFamily::poisson) {
          require(path.minCoeff() > 0.0,
                  "GP path not positive; pick a different gp_seed for Poisson");
          f = path.array().log();
        } else {
          f = path;
        }
      }
      break;
    }
    case TrendKind::varying_smooth: {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double t = double(i + 1);
        const double a = 4.0 * t / double(n) - 2.0;
        const double g = std::sin(a) + 2.0 * std::exp(-30.0 * a * a);
        if (sc.obs == ObsFamily::binomial) f[i] = 1.25 * g;
        else if (sc.obs == ObsFamily::poisson) f[i] = std::log(20.0 + 10.0 * g);
        else f[i] = 20.0 + 10.0 * g;
      }
      break;
    }
  }
  return f;
}

/// Conditionally independent observations given the latent trend.
inline Eigen::VectorXd simulate_observations(const Eigen::VectorXd& theta,
                                             ObsFamily family, Rng& rng,
                                             double sigma = 0.0,
                                             double trials = 20.0) {
  Eigen::VectorXd y(theta.size());
  switch (family) {
    case ObsFamily::normal:
      require(sigma > 0.0, "normal observations need sigma > 0");
      for (Eigen::Index i = 0; i < y.size(); ++i)
        y[i] = theta[i] + sigma * rng.normal();
      break;
    case ObsFamily::poisson:
      for (Eigen::Index i = 0; i < y.size(); ++i)
        y[i] = double(rng.poisson(std::exp(theta[i])));
      break;
    case ObsFamily::binomial:
      require(trials >= 1.0, "binomial needs at least one trial");
      for (Eigen::Index i = 0; i < y.size(); ++i)
        y[i] = double(rng.binomial(long(trials), logistic(theta[i])));
      break;
  }
  return y;
}

struct TrendMetrics {
  double mad = 0.0;    // mean absolute deviation of the point estimate
  double mciw = 0.0;   // mean 95% credible interval width
  double masv = 0.0;   // mean absolute sequential variation of the estimate
  double tmasv = 0.0;  // the same variation computed on the true trend
};

inline double masv(const Eigen::VectorXd& v) {
  require(v.size() >= 2, "need at least two points");
  double s = 0.0;
  for (Eigen::Index i = 0; i + 1 < v.size(); ++i) s += std::abs(v[i + 1] - v[i]);
  return s / double(v.size() - 1);
}

inline TrendMetrics metrics(const Eigen::VectorXd& estimate,
                            const Eigen::VectorXd& ci_low,
                            const Eigen::VectorXd& ci_high,
                            const Eigen::VectorXd& truth) {
  const Eigen::Index n = truth.size();
  require(estimate.size() == n && ci_low.size() == n && ci_high.size() == n,
          "metric inputs must have equal length");
  for (Eigen::Index i = 0; i < n; ++i)
    require(ci_low[i] <= ci_high[i], "credible interval bounds out of order");
  TrendMetrics m;
  m.mad = (estimate - truth).array().abs().mean();
  m.mciw = (ci_high - ci_low).mean();
  m.masv = masv(estimate);
  m.tmasv = masv(truth);
  return m;
}

struct StudyRow {
  std::string scenario;
  std::string prior;
  int replicate = 0;
  TrendMetrics metrics;
  double min_ess = 0.0;
  double max_rhat = 0.0;
  double min_essps = 0.0;
  double mean_essps = 0.0;
  double cpu_seconds = 0.0;
  bool failed = false;
};

struct StudyConfig {
  std::vector<TrendScenario> scenarios;
  std::vector<PriorFamily> priors = {PriorFamily::normal, PriorFamily::laplace,
                                     PriorFamily::horseshoe};
  int replicates = 20;
  SamplerConfig sampler;    // defaults already match the study protocol
  double zeta = 0.01;       // global-scale hyperparameter for all fits
  double sigma_prior_scale = 5.0;
  std::uint64_t seed = 20240101;
  int threads = 1;          // replicate-level parallelism
  std::string csv_path;     // incremental rows; completed rows are skipped on restart
};

struct StudyAggregate {
  std::string scenario;
  std::string prior;
  int replicates = 0;
  TrendMetrics mean;
  double mad_ci_halfwidth = 0.0;  // 95% frequentist interval on the mean MAD
  double mean_essps = 0.0;
};

struct StudyReport {
  std::vector<StudyRow> rows;
  std::vector<StudyAggregate> aggregates;
};

namespace detail {

inline std::string study_row_csv(const StudyRow& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.scenario << ',' << r.prior << ',' << r.replicate << ','
     << r.metrics.mad << ',' << r.metrics.mciw << ',' << r.metrics.masv << ','
     << r.metrics.tmasv << ',' << r.min_ess << ',' << r.max_rhat << ','
     << r.min_essps << ',' << r.mean_essps << ',' << r.cpu_seconds << ','
     << (r.failed ? 1 : 0);
  return os.str();
}

inline constexpr const char* study_csv_header =
    "scenario,prior,replicate,mad,mciw,masv,tmasv,min_ess,max_rhat,"
    "min_essps,mean_essps,cpu_seconds,failed";

}  // namespace detail

/// One model fit of a benchmark dataset; returns the filled study row.
inline StudyRow fit_replicate(const TrendScenario& sc, PriorFamily prior,
                              int replicate, const Eigen::VectorXd& theta_true,
                              const Eigen::VectorXd& y, const StudyConfig& cfg) {
  StudyRow row;
  row.scenario = sc.name();
  row.prior = prior_name(prior);
  row.replicate = replicate;
  try {
    ObservationModel obs;
    switch (sc.obs) {
      case ObsFamily::normal: obs = ObservationModel::normal(); break;
      case ObsFamily::poisson: obs = ObservationModel::poisson(); break;
      case ObsFamily::binomial:
        obs = ObservationModel::binomial(sc.n, sc.binomial_trials);
        break;
    }
    const auto [mu, omega] = default_theta1_prior(y, obs);
    ModelSpec spec{Grid::regular_unit(sc.n), sc.model_order(), prior, obs,
                   cfg.zeta, mu, omega, cfg.sigma_prior_scale, {}, {}};
    SamplerConfig scfg = cfg.sampler;
    scfg.seed = mix_seed(cfg.seed, mix_seed(fnv1a(row.scenario),
                                            std::uint64_t(replicate) * 8 +
                                                std::uint64_t(prior)));
    const PosteriorSamples samples = nuts_run(spec, y, scfg);
    const FitSummary summary = summarize(samples);

    const Eigen::Index n = sc.n;
    Eigen::VectorXd med(n), lo(n), hi(n);
    double min_ess = std::numeric_limits<double>::infinity();
    double max_rhat = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const ParamSummary& p = summary.params[std::size_t(i)];
      med[i] = p.median;
      lo[i] = p.q025;
      hi[i] = p.q975;
      if (!p.degenerate) min_ess = std::min(min_ess, p.ess);
      max_rhat = std::max(max_rhat, p.rhat);
    }
    row.metrics = metrics(med, lo, hi, theta_true);
    row.min_ess = min_ess;
    row.max_rhat = max_rhat;
    row.min_essps = summary.min_essps;
    row.mean_essps = summary.mean_essps;
    row.cpu_seconds = summary.total_cpu_seconds;
  } catch (const std::exception&) {
    row.failed = true;
  }
  return row;
}

/// Runs the benchmark: per replicate one dataset shared by every prior, fit
/// with the standard chain settings.  Rows append to cfg.csv_path as they
/// finish, so an interrupted study resumes without refitting; the file is
/// rewritten in sorted order at the end.
inline StudyReport run_study(const StudyConfig& cfg) {
  require(cfg.replicates >= 1, "need at least one replicate");
  require(!cfg.scenarios.empty(), "no scenarios");
  require(!cfg.priors.empty(), "no priors");

  std::set<std::string> done;
  std::vector<StudyRow> rows;
  if (!cfg.csv_path.empty() && std::filesystem::exists(cfg.csv_path)) {
    std::ifstream in(cfg.csv_path);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string scenario, prior, rep;
      std::getline(ls, scenario, ',');
      std::getline(ls, prior, ',');
      std::getline(ls, rep, ',');
      if (scenario.empty() || prior.empty() || rep.empty()) continue;
      done.insert(scenario + "|" + prior + "|" + rep);
      StudyRow r;
      r.scenario = scenario;
      r.prior = prior;
      r.replicate = std::stoi(rep);
      std::string f;
      std::getline(ls, f, ',');
      r.metrics.mad = std::stod(f);
      std::getline(ls, f, ',');
      r.metrics.mciw = std::stod(f);
      std::getline(ls, f, ',');
      r.metrics.masv = std::stod(f);
      std::getline(ls, f, ',');
      r.metrics.tmasv = std::stod(f);
      std::getline(ls, f, ',');
      r.min_ess = std::stod(f);
      std::getline(ls, f, ',');
      r.max_rhat = std::stod(f);
      std::getline(ls, f, ',');
      r.min_essps = std::stod(f);
      std::getline(ls, f, ',');
      r.mean_essps = std::stod(f);
      std::getline(ls, f, ',');
      r.cpu_seconds = std::stod(f);
      std::getline(ls, f, ',');
      r.failed = f == "1";
      rows.push_back(std::move(r));
    }
  }

  struct Task {
    std::size_t scenario_idx;
    int replicate;
    PriorFamily prior;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < cfg.scenarios.size(); ++s)
    for (int r = 1; r <= cfg.replicates; ++r)
      for (PriorFamily p : cfg.priors) tasks.push_back({s, r, p});

  std::mutex io_mutex;
  std::ofstream out;
  if (!cfg.csv_path.empty()) {
    const bool fresh = !std::filesystem::exists(cfg.csv_path);
    out.open(cfg.csv_path, std::ios::app);
    if (!out) throw IoError("cannot open study csv: " + cfg.csv_path);
    if (fresh) out << detail::study_csv_header << '\n';
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const TrendScenario& sc = cfg.scenarios[tasks[t].scenario_idx];
      const int rep = tasks[t].replicate;
      const Eigen::VectorXd theta_true = trend_values(sc);
      Rng data_rng(mix_seed(cfg.seed, mix_seed(tasks[t].scenario_idx, std::uint64_t(rep))));
      const Eigen::VectorXd y = simulate_observations(
          theta_true, sc.obs, data_rng, sc.sigma, sc.binomial_trials);
      for (PriorFamily prior : cfg.priors) {
        const std::string key = sc.name() + "|" + std::string(prior_name(prior)) +
                                "|" + std::to_string(rep);
        {
          std::lock_guard<std::mutex> lock(io_mutex);
          if (done.count(key)) continue;
        }
        StudyRow row = fit_replicate(sc, prior, rep, theta_true, y, cfg);
        std::lock_guard<std::mutex> lock(io_mutex);
        rows.push_back(row);
        done.insert(key);
        if (out) {
          out << detail::study_row_csv(row) << '\n';
          out.flush();
        }
      }
    }
  };

  const int n_workers = std::max(1, cfg.threads);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (out) out.close();

  std::sort(rows.begin(), rows.end(), [](const StudyRow& a, const StudyRow& b) {
    return std::tie(a.scenario, a.prior, a.replicate) <
           std::tie(b.scenario, b.prior, b.replicate);
  });
  if (!cfg.csv_path.empty()) {
    std::ofstream rewrite(cfg.csv_path, std::ios::trunc);
    rewrite << detail::study_csv_header << '\n';
    for (const auto& r : rows) rewrite << detail::study_row_csv(r) << '\n';
  }

  StudyReport report;
  report.rows = rows;
  std::map<std::pair<std::string, std::string>, std::vector<const StudyRow*>> groups;
  for (const auto& r : rows)
    if (!r.failed) groups[{r.scenario, r.prior}].push_back(&r);
  for (const auto& [key, grp] : groups) {
    StudyAggregate a;
    a.scenario = key.first;
    a.prior = key.second;
    a.replicates = int(grp.size());
    double mad2 = 0.0;
    for (const StudyRow* r : grp) {
      a.mean.mad += r->metrics.mad;
      a.mean.mciw += r->metrics.mciw;
      a.mean.masv += r->metrics.masv;
      a.mean.tmasv += r->metrics.tmasv;
      a.mean_essps += r->mean_essps;
      mad2 += r->metrics.mad * r->metrics.mad;
    }
    const double n = double(grp.size());
    a.mean.mad /= n;
    a.mean.mciw /= n;
    a.mean.masv /= n;
    a.mean.tmasv /= n;
    a.mean_essps /= n;
    if (grp.size() >= 2) {
      const double var = (mad2 - n * a.mean.mad * a.mean.mad) / (n - 1.0);
      a.mad_ci_halfwidth = 1.96 * std::sqrt(std::max(0.0, var) / n);
    }
    report.aggregates.push_back(std::move(a));
  }
  return report;
}

}  // namespace spmrf
