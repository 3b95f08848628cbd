#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>

#include "spmrf/calibrate.hpp"
#include "spmrf/diagnostics.hpp"
#include "spmrf/model.hpp"
#include "spmrf/sampler.hpp"
#include "support/targets.hpp"
#include "support/testutil.hpp"

using namespace spmrf;
using Catch::Approx;
namespace ts = testsupport;

namespace {
Eigen::VectorXd pooled(const PosteriorSamples& s, Eigen::Index col) {
  const Eigen::Index rows = s.retained_per_chain();
  Eigen::VectorXd out(rows * s.n_chains());
  for (int c = 0; c < s.n_chains(); ++c)
    out.segment(c * rows, rows) = s.chains[std::size_t(c)].col(col);
  return out;
}
}  // namespace

TEST_CASE("five-dimensional standard normal moments") {
  const ts::GaussianTarget target = ts::std_normal_target(5);
  SamplerConfig cfg;
  cfg.seed = 20260810;
  cfg.warmup = 400;
  cfg.iters = 2500;
  cfg.thin = 5;  // 4 chains x 500 = 2000 retained
  const PosteriorSamples s = nuts_run(target, cfg);
  REQUIRE(s.retained_per_chain() * s.n_chains() == 2000);
  for (Eigen::Index d = 0; d < 5; ++d) {
    const Eigen::VectorXd x = pooled(s, d);
    const double e = ess(s.parameter(d));
    REQUIRE(e > 100.0);
    const double mcse = ts::sd(x) / std::sqrt(e);
    CHECK(std::abs(ts::mean(x)) < 3.0 * mcse);
    CHECK(ts::sd(x) == Approx(1.0).epsilon(0.10));
  }
}

TEST_CASE("conjugate GMRF posterior mean matches the dense solve") {
  const Eigen::Index n = 25;
  ModelSpec spec{Grid::regular_unit(n), DiffOrder::first, PriorFamily::normal,
                 ObservationModel::normal(), 0.01, 0.5, 1.5, 5.0, 0.7, 1.3};
  Rng rng(9);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i)
    y[i] = (i < n / 2 ? 0.0 : 2.0) + 0.8 * rng.normal();

  const Posterior post(spec, y);
  REQUIRE(post.dim() == n);  // gamma and sigma pinned: innovations only
  SamplerConfig cfg;
  cfg.seed = 4242;
  cfg.warmup = 400;
  cfg.iters = 5000;
  cfg.thin = 5;  // 4000 retained
  const PosteriorSamples s = nuts_run(post, cfg);

  const double sigma = *spec.fixed_sigma;
  const Eigen::MatrixXd q = precision_matrix(
      spec.k, n, spec.theta1_sd * spec.theta1_sd, *spec.fixed_gamma);
  Eigen::MatrixXd p = q;
  p.diagonal().array() += 1.0 / (sigma * sigma);
  Eigen::VectorXd b = y / (sigma * sigma);
  b[0] += spec.theta1_mean / (spec.theta1_sd * spec.theta1_sd);
  const Eigen::VectorXd exact = p.ldlt().solve(b);

  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd x = pooled(s, i);
    const double e = ess(s.parameter(i));
    REQUIRE(e > 100.0);
    const double mcse = ts::sd(x) / std::sqrt(e);
    INFO("coordinate " << i);
    CHECK(std::abs(ts::mean(x) - exact[i]) < 3.0 * mcse);
  }
  // a well-conditioned Gaussian target should never diverge
  CHECK(s.total_divergences() == 0);
}

TEST_CASE("identical seed and config reproduce draws bitwise") {
  const Eigen::Index n = 12;
  ModelSpec spec{Grid::regular_unit(n), DiffOrder::first, PriorFamily::horseshoe,
                 ObservationModel::poisson(), 0.05, 1.0, 1.0, 5.0, {}, {}};
  Rng rng(31);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = double(rng.poisson(4.0));
  const Posterior post(spec, y);
  SamplerConfig cfg;
  cfg.seed = 777;
  cfg.chains = 3;
  cfg.warmup = 150;
  cfg.iters = 200;
  cfg.thin = 2;
  const PosteriorSamples a = nuts_run(post, cfg);
  const PosteriorSamples b = nuts_run(post, cfg);
  SamplerConfig par = cfg;
  par.threads = 3;  // concurrent chains must not change the draws
  const PosteriorSamples c = nuts_run(post, par);
  for (int ch = 0; ch < cfg.chains; ++ch) {
    CHECK(a.chains[ch] == b.chains[ch]);
    CHECK(a.chains[ch] == c.chains[ch]);
  }
  // a different seed must give different draws
  SamplerConfig other = cfg;
  other.seed = 778;
  const PosteriorSamples d = nuts_run(post, other);
  CHECK(a.chains[0] != d.chains[0]);
}

TEST_CASE("initialization") {
  const Eigen::Index n = 10;
  ModelSpec spec{Grid::regular_unit(n), DiffOrder::second, PriorFamily::laplace,
                 ObservationModel::poisson(), 0.1, 1.0, 2.0, 5.0, {}, {}};
  Eigen::VectorXd y = Eigen::VectorXd::Constant(n, 3.0);
  const Posterior post(spec, y);
  Rng r0 = Rng::for_chain(99, 0);
  Rng r1 = Rng::for_chain(99, 1);
  const Eigen::VectorXd x0 = init_state(post, r0);
  const Eigen::VectorXd x1 = init_state(post, r1);
  CHECK(x0.size() == post.dim());
  CHECK(std::isfinite(post.eval(x0).logp));
  CHECK(std::isfinite(post.eval(x1).logp));
  CHECK(x0 != x1);
  CHECK(x0.cwiseAbs().maxCoeff() <= 2.0);

  ts::NeverFiniteTarget bad;
  Rng rb(5);
  CHECK_THROWS_AS(init_state(bad, rb), SamplerError);
}

TEST_CASE("sampler configuration validation") {
  const ts::GaussianTarget target = ts::std_normal_target(2);
  SamplerConfig cfg;
  cfg.iters = 3;
  cfg.thin = 5;  // zero retained draws
  CHECK_THROWS_AS(nuts_run(target, cfg), std::invalid_argument);
  SamplerConfig cfg2;
  cfg2.chains = 0;
  CHECK_THROWS_AS(nuts_run(target, cfg2), std::invalid_argument);
}

TEST_CASE("one-dimensional normal target passes a KS test") {
  const ts::GaussianTarget target = ts::std_normal_target(1);
  SamplerConfig cfg;
  cfg.seed = 1234;
  cfg.chains = 4;
  cfg.warmup = 300;
  cfg.iters = 12500;
  cfg.thin = 5;  // 10,000 retained
  const PosteriorSamples s = nuts_run(target, cfg);
  const Eigen::VectorXd x = pooled(s, 0);
  REQUIRE(x.size() == 10000);
  std::vector<double> draws(x.data(), x.data() + x.size());
  const double d = ts::ks_statistic(draws, ts::std_normal_cdf);
  CHECK(d < ts::ks_critical_001(draws.size()));
}

TEST_CASE("half-Cauchy product construction: end-to-end prior draws") {
  // Flat likelihood, normal prior, gamma free: the sampled gamma column must
  // be marginally half-Cauchy(zeta).
  const Eigen::Index n = 2;
  const double zeta = 1.0;
  ModelSpec spec{Grid::regular_unit(n), DiffOrder::first, PriorFamily::normal,
                 ObservationModel::normal(), zeta, 0.0, 1.0, 5.0, {}, 1e8};
  Eigen::VectorXd y(n);
  y << 0.0, 0.0;
  const Posterior post(spec, y);
  SamplerConfig cfg;
  cfg.seed = 5678;
  cfg.chains = 4;
  cfg.warmup = 300;
  cfg.iters = 12500;
  cfg.thin = 5;
  const PosteriorSamples s = nuts_run(post, cfg);
  const Eigen::Index gcol = n;  // theta.1..n, gamma
  REQUIRE(s.names[std::size_t(gcol)] == "gamma");
  const Eigen::VectorXd g = pooled(s, gcol);
  std::vector<double> draws(g.data(), g.data() + g.size());
  const double d = ts::ks_statistic(
      draws, [&](double x) { return half_cauchy_cdf(x, zeta); });
  CHECK(d < ts::ks_critical_001(draws.size()));
}

TEST_CASE("leapfrog energy error scales as the square of the step size") {
  // smooth non-Gaussian 2-D target so the error has a generic epsilon^2 term
  struct Quartic {
    Eigen::Index dim() const { return 2; }
    PosteriorEval eval(const Eigen::VectorXd& x) const {
      PosteriorEval e;
      const double a = x[0], b = x[1];
      e.logp = -0.5 * a * a - 0.5 * b * b - 0.1 * a * a * a * a -
               0.05 * a * a * b * b;
      e.grad.resize(2);
      e.grad[0] = -a - 0.4 * a * a * a - 0.1 * a * b * b;
      e.grad[1] = -b - 0.1 * a * a * b;
      return e;
    }
    Eigen::VectorXd constrain(const Eigen::VectorXd& x) const { return x; }
    std::vector<std::string> names() const { return {"a", "b"}; }
  } target;

  const Eigen::VectorXd inv_metric = Eigen::VectorXd::Ones(2);
  detail::PhasePoint z0;
  z0.q = Eigen::VectorXd(2);
  z0.q << 0.9, -0.6;
  z0.p = Eigen::VectorXd(2);
  z0.p << 0.7, 1.1;
  detail::refresh(target, z0);
  const double h0 = detail::hamiltonian(z0, inv_metric);

  auto energy_error = [&](double eps, int steps) {
    detail::PhasePoint z = z0;
    for (int i = 0; i < steps; ++i) detail::leapfrog(target, z, eps, inv_metric);
    return std::abs(detail::hamiltonian(z, inv_metric) - h0);
  };
  const double coarse = energy_error(0.2, 10);
  const double fine = energy_error(0.02, 100);
  const double factor = coarse / fine;
  CHECK(factor > 50.0);
  CHECK(factor < 200.0);
}

TEST_CASE("treedepth saturation is recorded") {
  const ts::GaussianTarget target = ts::std_normal_target(4);
  SamplerConfig cfg;
  cfg.seed = 11;
  cfg.chains = 1;
  cfg.warmup = 100;
  cfg.iters = 100;
  cfg.thin = 1;
  cfg.max_treedepth = 1;  // far too shallow on purpose
  const PosteriorSamples s = nuts_run(target, cfg);
  CHECK(s.total_treedepth_hits() > 0);
}
