#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "spmrf/simulate.hpp"
#include "support/testutil.hpp"

using namespace spmrf;
using Catch::Approx;
namespace ts = testsupport;

namespace {
double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

TrendScenario scenario(TrendKind kind, ObsFamily obs, double sigma = 4.5) {
  TrendScenario sc;
  sc.kind = kind;
  sc.obs = obs;
  sc.sigma = sigma;
  return sc;
}
}  // namespace

TEST_CASE("trend sequential variation anchors") {
  CHECK(round3(masv(trend_values(scenario(TrendKind::constant, ObsFamily::normal)))) == 0.0);
  CHECK(round3(masv(trend_values(scenario(TrendKind::piecewise_constant, ObsFamily::normal)))) == 0.606);
  CHECK(round3(masv(trend_values(scenario(TrendKind::varying_smooth, ObsFamily::normal)))) == 0.543);
  // link-scale versions of the same trends
  CHECK(round3(masv(trend_values(scenario(TrendKind::piecewise_constant, ObsFamily::poisson)))) == 0.030);
  CHECK(round3(masv(trend_values(scenario(TrendKind::piecewise_constant, ObsFamily::binomial)))) == 0.066);
  CHECK(round3(masv(trend_values(scenario(TrendKind::varying_smooth, ObsFamily::poisson)))) == 0.023);
  CHECK(round3(masv(trend_values(scenario(TrendKind::varying_smooth, ObsFamily::binomial)))) == 0.068);
}

TEST_CASE("varying-smoothness midpoint value") {
  const Eigen::VectorXd f = trend_values(scenario(TrendKind::varying_smooth, ObsFamily::normal));
  // t = 50 on n = 100: 4t/n - 2 = 0, so g = 2 and f = 40
  CHECK(f[49] == Approx(40.0).margin(1e-12));
}

TEST_CASE("trend generators are deterministic in the seed") {
  const TrendScenario a = scenario(TrendKind::smooth_gp, ObsFamily::normal);
  const Eigen::VectorXd p1 = trend_values(a);
  const Eigen::VectorXd p2 = trend_values(a);
  CHECK(p1 == p2);
  TrendScenario b = a;
  b.gp_seed = a.gp_seed + 1;
  CHECK(trend_values(b) != p1);
}

TEST_CASE("bundled GP path supports every observation family") {
  const Eigen::VectorXd f = trend_values(scenario(TrendKind::smooth_gp, ObsFamily::normal));
  CHECK(f.minCoeff() > 0.0);  // log link stays finite for Poisson
  const Eigen::VectorXd flog = trend_values(scenario(TrendKind::smooth_gp, ObsFamily::poisson));
  CHECK((flog - f.array().log().matrix()).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::VectorXd fb = trend_values(scenario(TrendKind::smooth_gp, ObsFamily::binomial));
  CHECK(fb.size() == 100);
}

TEST_CASE("normal-observation scenarios hit the intended signal-to-noise") {
  for (TrendKind kind : {TrendKind::piecewise_constant, TrendKind::smooth_gp,
                         TrendKind::varying_smooth}) {
    const Eigen::VectorXd f = trend_values(scenario(kind, ObsFamily::normal));
    const double snr15 = ts::sd(f) / 1.5;
    const double snr45 = ts::sd(f) / 4.5;
    INFO(trend_name(kind));
    CHECK(snr15 == Approx(6.0).epsilon(0.2));
    CHECK(snr45 == Approx(2.0).epsilon(0.2));
  }
}

TEST_CASE("observation simulator") {
  Rng rng(2026);
  const Eigen::VectorXd theta = Eigen::VectorXd::Constant(100000, std::log(20.0));
  const Eigen::VectorXd y = simulate_observations(theta, ObsFamily::poisson, rng);
  const double se = std::sqrt(20.0 / double(y.size()));
  CHECK(std::abs(y.mean() - 20.0) < 3.0 * se);

  Eigen::VectorXd small = Eigen::VectorXd::Zero(10);
  CHECK_THROWS_AS(simulate_observations(small, ObsFamily::normal, rng, 0.0),
                  std::invalid_argument);
  const Eigen::VectorXd yb = simulate_observations(small, ObsFamily::binomial, rng, 0.0, 20);
  CHECK(yb.minCoeff() >= 0.0);
  CHECK(yb.maxCoeff() <= 20.0);
}

TEST_CASE("trend metrics") {
  Eigen::VectorXd est(2), truth(2), lo(2), hi(2);
  est << 1, 2;
  truth << 0, 0;
  lo << 0, 1;
  hi << 2, 3;
  const TrendMetrics m = metrics(est, lo, hi, truth);
  CHECK(m.mad == Approx(1.5));
  CHECK(m.masv == Approx(1.0));
  CHECK(m.mciw == Approx(2.0));
  CHECK(metrics(truth, truth, truth, truth).mad == Approx(0.0));
  const Eigen::VectorXd flat = Eigen::VectorXd::Constant(2, 3.0);
  CHECK(metrics(flat, lo, hi, truth).masv == Approx(0.0));

  Eigen::VectorXd bad_hi(2);
  bad_hi << -1, 3;  // interval bounds out of order
  CHECK_THROWS_AS(metrics(est, lo, bad_hi, truth), std::invalid_argument);
  Eigen::VectorXd shorter(1);
  shorter << 1;
  CHECK_THROWS_AS(metrics(shorter, lo, hi, truth), std::invalid_argument);
}

TEST_CASE("study runner completes, resumes, and stays deterministic") {
  const std::string csv = "study_test_rows.csv";
  std::filesystem::remove(csv);
  StudyConfig cfg;
  TrendScenario sc = scenario(TrendKind::piecewise_constant, ObsFamily::normal);
  sc.n = 40;
  cfg.scenarios = {sc};
  cfg.priors = {PriorFamily::normal, PriorFamily::laplace};
  cfg.replicates = 2;
  cfg.sampler.chains = 2;
  cfg.sampler.warmup = 150;
  cfg.sampler.iters = 300;
  cfg.sampler.thin = 5;
  cfg.seed = 99;
  cfg.csv_path = csv;
  const StudyReport r1 = run_study(cfg);
  REQUIRE(r1.rows.size() == 4);
  for (const auto& row : r1.rows) {
    CHECK_FALSE(row.failed);
    CHECK(row.metrics.tmasv == Approx(masv(trend_values(sc))));
    CHECK(row.metrics.mad > 0.0);
  }
  REQUIRE(r1.aggregates.size() == 2);
  for (const auto& a : r1.aggregates) CHECK(a.replicates == 2);

  // resume: everything already recorded, so nothing refits and rows persist
  const StudyReport r2 = run_study(cfg);
  REQUIRE(r2.rows.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(r2.rows[i].scenario == r1.rows[i].scenario);
    CHECK(r2.rows[i].prior == r1.rows[i].prior);
    CHECK(r2.rows[i].replicate == r1.rows[i].replicate);
    CHECK(r2.rows[i].metrics.mad == Approx(r1.rows[i].metrics.mad));
  }
  std::filesystem::remove(csv);

  StudyConfig empty = cfg;
  empty.replicates = 0;
  CHECK_THROWS_AS(run_study(empty), std::invalid_argument);
}
