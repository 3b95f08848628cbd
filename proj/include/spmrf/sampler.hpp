#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "spmrf/common.hpp"
#include "spmrf/model.hpp"
#include "spmrf/rng.hpp"

namespace spmrf {

/// Chain settings.  Defaults follow the standard protocol used throughout
/// this project: four chains, 500 warmup iterations, 2500 post-warmup
/// iterations thinned to every 5th draw.
struct SamplerConfig {
  int chains = 4;
  int warmup = 500;
  int iters = 2500;
  int thin = 5;
  double target_accept = 0.8;
  int max_treedepth = 10;
  std::uint64_t seed = 1;
  int threads = 1;       // chain-level parallelism; draws are identical for any value
  double init_radius = 2.0;
  int init_retries = 10;
  double divergence_threshold = 1000.0;  // nats of energy error

  int retained_per_chain() const { return iters / thin; }

  void validate() const {
    require(chains >= 1, "need at least one chain");
    require(warmup >= 0 && iters >= 1 && thin >= 1, "bad iteration counts");
    require(retained_per_chain() >= 1, "zero retained draws: iters < thin");
    require(target_accept > 0.0 && target_accept < 1.0, "target_accept in (0,1)");
    require(max_treedepth >= 1 && max_treedepth <= 20, "max_treedepth in [1,20]");
  }
};

struct ChainStats {
  int divergences = 0;         // sampling phase
  int divergences_warmup = 0;
  int treedepth_hits = 0;      // sampling phase
  double mean_accept = 0.0;    // sampling phase
  double step_size = 0.0;
  double warmup_wall = 0.0, warmup_cpu = 0.0;
  double sampling_wall = 0.0, sampling_cpu = 0.0;
};

/// Retained constrained draws for every chain, plus per-chain adaptation
/// and timing metadata.  Sampling time excludes the warmup phase.
struct PosteriorSamples {
  std::vector<std::string> names;
  std::vector<Eigen::MatrixXd> chains;  // retained x n_constrained
  std::vector<ChainStats> stats;

  int n_chains() const { return static_cast<int>(chains.size()); }
  Eigen::Index retained_per_chain() const {
    return chains.empty() ? 0 : chains.front().rows();
  }
  int total_divergences() const {
    int d = 0;
    for (const auto& s : stats) d += s.divergences;
    return d;
  }
  int total_treedepth_hits() const {
    int d = 0;
    for (const auto& s : stats) d += s.treedepth_hits;
    return d;
  }
  double sampling_cpu_seconds() const {
    double t = 0.0;
    for (const auto& s : stats) t += s.sampling_cpu;
    return t;
  }
  double total_cpu_seconds() const {
    double t = 0.0;
    for (const auto& s : stats) t += s.warmup_cpu + s.sampling_cpu;
    return t;
  }
  /// Draws of one parameter, one vector per chain.
  std::vector<Eigen::VectorXd> parameter(Eigen::Index col) const {
    std::vector<Eigen::VectorXd> out;
    out.reserve(chains.size());
    for (const auto& c : chains) out.push_back(c.col(col));
    return out;
  }
};

namespace detail {

inline double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return double(ts.tv_sec) + 1e-9 * double(ts.tv_nsec);
}

struct DualAverage {
  double mu = 0.0;
  double target = 0.8;
  double gamma = 0.05, t0 = 10.0, kappa = 0.75;
  double hbar = 0.0, log_eps = 0.0, log_eps_bar = 0.0;
  int count = 1;

  void restart(double eps0) {
    mu = std::log(10.0 * eps0);
    log_eps = std::log(eps0);
    log_eps_bar = std::log(eps0);
    hbar = 0.0;
    count = 1;
  }
  void update(double alpha) {
    const double w = 1.0 / (count + t0);
    hbar = (1.0 - w) * hbar + w * (target - alpha);
    log_eps = mu - std::sqrt(double(count)) / gamma * hbar;
    const double k = std::pow(double(count), -kappa);
    log_eps_bar = k * log_eps + (1.0 - k) * log_eps_bar;
    ++count;
  }
  double eps() const { return std::exp(log_eps); }
  double eps_bar() const { return std::exp(log_eps_bar); }
};

struct Welford {
  Eigen::VectorXd mean, m2;
  long n = 0;
  void reset(Eigen::Index d) {
    mean = Eigen::VectorXd::Zero(d);
    m2 = Eigen::VectorXd::Zero(d);
    n = 0;
  }
  void add(const Eigen::VectorXd& x) {
    ++n;
    const Eigen::VectorXd delta = x - mean;
    mean += delta / double(n);
    m2 += delta.cwiseProduct(x - mean);
  }
  Eigen::VectorXd variance() const {
    if (n < 2) return Eigen::VectorXd::Ones(mean.size());
    return m2 / double(n - 1);
  }
};

struct PhasePoint {
  Eigen::VectorXd q, p, grad;
  double logp = -std::numeric_limits<double>::infinity();
};

template <class Model>
void refresh(const Model& model, PhasePoint& z) {
  const PosteriorEval e = model.eval(z.q);
  z.logp = e.logp;
  z.grad = e.grad;
}

/// One leapfrog step; the gradient at the new position is left in z.grad.
template <class Model>
void leapfrog(const Model& model, PhasePoint& z, double eps,
              const Eigen::VectorXd& inv_metric) {
  z.p += 0.5 * eps * z.grad;
  z.q += eps * inv_metric.cwiseProduct(z.p);
  refresh(model, z);
  z.p += 0.5 * eps * z.grad;
}

inline double kinetic(const Eigen::VectorXd& p, const Eigen::VectorXd& inv_metric) {
  return 0.5 * p.dot(inv_metric.cwiseProduct(p));
}

inline double hamiltonian(const PhasePoint& z, const Eigen::VectorXd& inv_metric) {
  if (!std::isfinite(z.logp)) return std::numeric_limits<double>::infinity();
  return -z.logp + kinetic(z.p, inv_metric);
}

inline double log_sum_exp(double a, double b) {
  const double m = std::max(a, b);
  if (!std::isfinite(m)) return m;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

struct Subtree {
  PhasePoint minus, plus;
  Eigen::VectorXd q_prop;
  Eigen::VectorXd rho;
  double logw = -std::numeric_limits<double>::infinity();
  double sum_alpha = 0.0;
  int n_alpha = 0;
  int n_leapfrog = 0;
  bool diverged = false;
  bool turned = false;
  bool ok() const { return !diverged && !turned; }
};

/// Generalized U-turn criterion on a momentum sum: the trajectory segment
/// has turned when either end's velocity opposes the segment's net momentum.
inline bool uturn(const PhasePoint& minus, const PhasePoint& plus,
                  const Eigen::VectorXd& rho, const Eigen::VectorXd& inv_metric) {
  return inv_metric.cwiseProduct(minus.p).dot(rho) <= 0.0 ||
         inv_metric.cwiseProduct(plus.p).dot(rho) <= 0.0;
}

template <class Model>
Subtree build_tree(const Model& model, Rng& rng, int depth, double dir,
                   const PhasePoint& from, double h0, double eps,
                   const Eigen::VectorXd& inv_metric, double div_threshold) {
  Subtree t;
  if (depth == 0) {
    PhasePoint z = from;
    leapfrog(model, z, dir * eps, inv_metric);
    const double h = hamiltonian(z, inv_metric);
    const double dh = h0 - h;  // log weight of the new state
    t.minus = z;
    t.plus = z;
    t.q_prop = z.q;
    t.rho = z.p;
    t.logw = std::isfinite(dh) ? dh : -std::numeric_limits<double>::infinity();
    t.sum_alpha = std::isfinite(dh) ? std::min(1.0, std::exp(dh)) : 0.0;
    t.n_alpha = 1;
    t.n_leapfrog = 1;
    t.diverged = !std::isfinite(dh) || (h - h0) > div_threshold;
    return t;
  }
  Subtree first = build_tree(model, rng, depth - 1, dir, from, h0, eps,
                             inv_metric, div_threshold);
  if (!first.ok()) return first;
  const PhasePoint& cont = dir > 0 ? first.plus : first.minus;
  Subtree second = build_tree(model, rng, depth - 1, dir, cont, h0, eps,
                              inv_metric, div_threshold);
  // Keep acceptance statistics from both halves even if the second failed.
  first.sum_alpha += second.sum_alpha;
  first.n_alpha += second.n_alpha;
  first.n_leapfrog += second.n_leapfrog;
  if (!second.ok()) {
    first.diverged = second.diverged;
    first.turned = second.turned;
    return first;
  }
  const double logw = log_sum_exp(first.logw, second.logw);
  if (std::log(rng.uniform()) < second.logw - logw) first.q_prop = second.q_prop;
  first.logw = logw;
  if (dir > 0) first.plus = second.plus;
  else first.minus = second.minus;
  first.rho += second.rho;
  first.turned = uturn(first.minus, first.plus, first.rho, inv_metric);
  return first;
}

struct TransitionResult {
  double accept_stat = 0.0;
  bool divergent = false;
  bool max_depth_hit = false;
  int n_leapfrog = 0;
};

template <class Model>
TransitionResult nuts_transition(const Model& model, Rng& rng, PhasePoint& z,
                                 double eps, const Eigen::VectorXd& inv_metric,
                                 int max_depth, double div_threshold) {
  const Eigen::Index d = z.q.size();
  for (Eigen::Index i = 0; i < d; ++i)
    z.p[i] = rng.normal() / std::sqrt(inv_metric[i]);
  const double h0 = hamiltonian(z, inv_metric);

  PhasePoint minus = z, plus = z;
  Eigen::VectorXd q_prop = z.q;
  Eigen::VectorXd rho = z.p;
  double logw = 0.0;
  double sum_alpha = 0.0;
  int n_alpha = 0;
  TransitionResult res;

  int depth = 0;
  for (; depth < max_depth; ++depth) {
    const double dir = rng.uniform() < 0.5 ? -1.0 : 1.0;
    Subtree sub = build_tree(model, rng, depth, dir, dir > 0 ? plus : minus, h0,
                             eps, inv_metric, div_threshold);
    sum_alpha += sub.sum_alpha;
    n_alpha += sub.n_alpha;
    res.n_leapfrog += sub.n_leapfrog;
    if (!sub.ok()) {
      res.divergent = sub.diverged;
      break;
    }
    // Biased progressive sampling: favor the fresh half of the trajectory.
    if (std::log(rng.uniform()) < sub.logw - logw) q_prop = sub.q_prop;
    logw = log_sum_exp(logw, sub.logw);
    if (dir > 0) plus = sub.plus;
    else minus = sub.minus;
    rho += sub.rho;
    if (uturn(minus, plus, rho, inv_metric)) break;
  }
  res.max_depth_hit = depth == max_depth;
  res.accept_stat = n_alpha > 0 ? sum_alpha / n_alpha : 0.0;

  z.q = q_prop;
  refresh(model, z);
  return res;
}

template <class Model>
double find_reasonable_epsilon(const Model& model, Rng& rng, const PhasePoint& z0,
                               const Eigen::VectorXd& inv_metric) {
  double eps = 1.0;
  PhasePoint z = z0;
  for (Eigen::Index i = 0; i < z.q.size(); ++i)
    z.p[i] = rng.normal() / std::sqrt(inv_metric[i]);
  const double h0 = hamiltonian(z, inv_metric);
  auto accept_prob = [&](double e) {
    PhasePoint w = z;
    leapfrog(model, w, e, inv_metric);
    const double h = hamiltonian(w, inv_metric);
    return std::isfinite(h) ? std::exp(std::min(0.0, h0 - h)) : 0.0;
  };
  double a = accept_prob(eps);
  const double dir = a > 0.5 ? 1.0 : -1.0;
  for (int it = 0; it < 100; ++it) {
    if (dir > 0 ? a <= 0.5 : a >= 0.5) break;
    eps *= dir > 0 ? 2.0 : 0.5;
    if (eps > 1e7 || eps < 1e-10) break;
    a = accept_prob(eps);
  }
  return eps;
}

/// Metric adaptation windows: a fast initial buffer (15% of warmup), doubling
/// slow windows for the diagonal metric, and a fast terminal buffer (10%).
inline std::vector<int> adaptation_window_ends(int warmup) {
  std::vector<int> ends;
  const int init_buffer = int(std::lround(0.15 * warmup));
  const int term_buffer = int(std::lround(0.10 * warmup));
  const int middle_end = warmup - term_buffer;
  const int middle = middle_end - init_buffer;
  if (middle < 20) return ends;
  int pos = init_buffer;
  int size = 25;
  while (pos < middle_end) {
    int end = pos + size;
    if (end + 2 * size > middle_end) end = middle_end;
    ends.push_back(end);
    pos = end;
    size *= 2;
  }
  return ends;
}

}  // namespace detail

/// Randomized starting state: unconstrained coordinates uniform on
/// (-radius, radius), redrawn until the log posterior is finite.
template <class Model>
Eigen::VectorXd init_state(const Model& model, Rng& rng, double radius = 2.0,
                           int retries = 10) {
  for (int attempt = 0; attempt < retries; ++attempt) {
    Eigen::VectorXd x(model.dim());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.uniform(-radius, radius);
    if (std::isfinite(model.eval(x).logp)) return x;
  }
  throw SamplerError("initialization failed: no finite log posterior after " +
                     std::to_string(retries) + " attempts");
}

namespace detail {

template <class Model>
void run_chain(const Model& model, const SamplerConfig& cfg, int chain_index,
               Eigen::MatrixXd& draws, ChainStats& stats) {
  Rng rng = Rng::for_chain(cfg.seed, chain_index);
  PhasePoint z;
  z.q = init_state(model, rng, cfg.init_radius, cfg.init_retries);
  z.p = Eigen::VectorXd::Zero(model.dim());
  refresh(model, z);

  Eigen::VectorXd inv_metric = Eigen::VectorXd::Ones(model.dim());
  const auto wall0 = std::chrono::steady_clock::now();
  const double cpu0 = thread_cpu_seconds();

  DualAverage da;
  da.target = cfg.target_accept;
  double eps = find_reasonable_epsilon(model, rng, z, inv_metric);
  da.restart(eps);

  const std::vector<int> window_ends = adaptation_window_ends(cfg.warmup);
  std::size_t window = 0;
  Welford acc;
  acc.reset(model.dim());
  const int collect_from =
      window_ends.empty() ? cfg.warmup + 1 : int(std::lround(0.15 * cfg.warmup));

  for (int it = 1; it <= cfg.warmup; ++it) {
    const TransitionResult tr = nuts_transition(model, rng, z, da.eps(),
                                                inv_metric, cfg.max_treedepth,
                                                cfg.divergence_threshold);
    if (tr.divergent) ++stats.divergences_warmup;
    da.update(tr.accept_stat);
    if (it > collect_from) acc.add(z.q);
    if (window < window_ends.size() && it == window_ends[window]) {
      const Eigen::VectorXd v = acc.variance();
      const double nn = double(acc.n);
      for (Eigen::Index i = 0; i < inv_metric.size(); ++i)
        inv_metric[i] = nn / (nn + 5.0) * v[i] + 1e-3 * (5.0 / (nn + 5.0));
      acc.reset(model.dim());
      da.restart(da.eps_bar());
      ++window;
    }
  }
  eps = cfg.warmup > 0 ? da.eps_bar() : da.eps();
  stats.step_size = eps;

  const auto wall1 = std::chrono::steady_clock::now();
  const double cpu1 = thread_cpu_seconds();
  stats.warmup_wall = std::chrono::duration<double>(wall1 - wall0).count();
  stats.warmup_cpu = cpu1 - cpu0;

  Eigen::Index row = 0;
  double accept_sum = 0.0;
  for (int it = 1; it <= cfg.iters; ++it) {
    const TransitionResult tr = nuts_transition(model, rng, z, eps, inv_metric,
                                                cfg.max_treedepth,
                                                cfg.divergence_threshold);
    if (tr.divergent) ++stats.divergences;
    if (tr.max_depth_hit) ++stats.treedepth_hits;
    accept_sum += tr.accept_stat;
    if (it % cfg.thin == 0) draws.row(row++) = model.constrain(z.q);
  }
  stats.mean_accept = accept_sum / double(cfg.iters);

  const auto wall2 = std::chrono::steady_clock::now();
  const double cpu2 = thread_cpu_seconds();
  stats.sampling_wall = std::chrono::duration<double>(wall2 - wall1).count();
  stats.sampling_cpu = cpu2 - cpu1;
}

}  // namespace detail

/// Runs NUTS on any model exposing dim(), eval(), constrain() and names().
/// Chains may run concurrently (cfg.threads); retained draws are identical
/// to sequential execution because each chain owns an independent RNG
/// stream derived from (seed, chain index).
template <class Model>
PosteriorSamples nuts_run(const Model& model, const SamplerConfig& cfg) {
  cfg.validate();
  PosteriorSamples out;
  out.names = model.names();
  out.chains.assign(cfg.chains,
                    Eigen::MatrixXd(cfg.retained_per_chain(),
                                    Eigen::Index(out.names.size())));
  out.stats.assign(cfg.chains, ChainStats{});

  const int n_workers = std::max(1, std::min(cfg.threads, cfg.chains));
  if (n_workers == 1) {
    for (int c = 0; c < cfg.chains; ++c)
      detail::run_chain(model, cfg, c, out.chains[c], out.stats[c]);
    return out;
  }

  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(cfg.chains);
  auto worker = [&]() {
    for (;;) {
      const int c = next.fetch_add(1);
      if (c >= cfg.chains) return;
      try {
        detail::run_chain(model, cfg, c, out.chains[c], out.stats[c]);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Convenience wrapper fitting a model specification to data.
inline PosteriorSamples nuts_run(const ModelSpec& spec, const Eigen::VectorXd& y,
                                 const SamplerConfig& cfg,
                                 Formulation form = Formulation::hierarchical) {
  return nuts_run(Posterior(spec, y, form), cfg);
}

}  // namespace spmrf
