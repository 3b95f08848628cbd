#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "spmrf/densities.hpp"
#include "spmrf/rng.hpp"
#include "support/quadrature.hpp"
#include "support/testutil.hpp"

using namespace spmrf;
using Catch::Approx;
namespace ts = testsupport;

TEST_CASE("normal kernel") {
  CHECK(log_normal(0, 0, 1) == Approx(-0.5 * std::log(2.0 * M_PI)));
  CHECK(log_normal(1, 0, 2) ==
        Approx(-std::log(2.0) - 0.5 * std::log(2.0 * M_PI) - 0.125));
  // symmetry about the mean
  CHECK(log_normal(1.7, 0.4, 1.3) == Approx(log_normal(2 * 0.4 - 1.7, 0.4, 1.3)));
  CHECK_THROWS_AS(log_normal(0, 0, -1), std::invalid_argument);
}

TEST_CASE("half-Cauchy kernel") {
  CHECK(log_half_cauchy(1, 1) == Approx(std::log(1.0 / M_PI)));
  CHECK(log_half_cauchy(2, 1) == Approx(std::log(2.0 / (5.0 * M_PI))));
  // the median equals the scale parameter
  for (double s : {0.3, 1.0, 12.0}) {
    CHECK(half_cauchy_cdf(s, s) == Approx(0.5));
    const double mass = ts::integrate(
        [&](double x) { return std::exp(log_half_cauchy(x, s)); }, 1e-12, s,
        1e-12);
    CHECK(mass == Approx(0.5).margin(1e-8));
  }
  CHECK_THROWS_AS(log_half_cauchy(-1, 1), std::invalid_argument);
}

TEST_CASE("exponential and inverse-gamma kernels") {
  CHECK(log_exponential(1, 1) == Approx(-1.0));
  // quadrature oracle: mean of Exp(rate 2) is 1/2
  const double mean = ts::integrate_zero_to_inf(
      [](double x) { return x * std::exp(log_exponential(x, 2.0)); }, 1e-12);
  CHECK(mean == Approx(0.5).margin(1e-8));
  // quadrature oracle: inverse-gamma(1/2, 1/2) integrates to 1
  const double mass = ts::integrate_zero_to_inf(
      [](double x) { return std::exp(log_inv_gamma(x, 0.5, 0.5)); }, 1e-12);
  CHECK(mass == Approx(1.0).margin(1e-8));
}

TEST_CASE("marginal Laplace closed form") {
  CHECK(log_laplace_marginal(0.0, {1.0, 1.0}) == Approx(std::log(0.5)));
  // delta = 4 halves the rate: p(u | delta=4) = (1/2) p(u/2 | delta=1)
  for (double u : {-3.0, -0.4, 0.9, 2.5})
    CHECK(log_laplace_marginal(u, {1.0, 4.0}) ==
          Approx(std::log(0.5) + log_laplace_marginal(u / 2.0, {1.0, 1.0})));
  // variance equals 2 delta gamma^2 (quadrature oracle)
  for (auto [g, d] : {std::pair{1.0, 1.0}, {0.7, 2.5}}) {
    ScaledDensityParams p{g, d};
    const double var = 2.0 * ts::integrate_zero_to_inf(
        [&](double u) { return u * u * std::exp(log_laplace_marginal(u, p)); },
        1e-12);
    CHECK(var == Approx(2.0 * d * g * g).epsilon(1e-7));
  }
}

TEST_CASE("marginal Laplace matches the scale-mixture Monte Carlo oracle") {
  // tau^2 ~ Exp(lambda^2 / 2) with lambda = 1/gamma, then u | tau ~ N(0, delta tau^2)
  const ScaledDensityParams p{1.0, 1.0};
  const double lambda = 1.0 / p.gamma;
  Rng rng(314159);
  const int n = 200000;
  std::vector<double> tau2(n);
  for (auto& t : tau2) t = rng.exponential(lambda * lambda / 2.0);
  for (double u : {0.0, -1.0, 1.0, -3.0, 3.0}) {
    double sum = 0.0, sum2 = 0.0;
    for (double t : tau2) {
      const double k = std::exp(-u * u / (2.0 * p.delta * t)) /
                       std::sqrt(2.0 * M_PI * p.delta * t);
      sum += k;
      sum2 += k * k;
    }
    const double mc = sum / n;
    const double se = std::sqrt((sum2 / n - mc * mc) / n);
    CHECK(std::abs(std::exp(log_laplace_marginal(u, p)) - mc) <= 3.0 * se);
  }
}

TEST_CASE("horseshoe blend weight and normalization identity") {
  const double w = detail::horseshoe_blend_weight();
  CHECK(w == Approx((std::sqrt(M_PI) - 2.0) / (std::sqrt(2.0) - 2.0)));
  CHECK(w == Approx(0.38845).margin(1e-5));
  CHECK(w > 0.0);
  CHECK(w < 1.0);
  // the blend weight is pinned by w * int(B1) + (1-w) * int(B2) = 1
  CHECK(w * std::sqrt(2.0 / M_PI) + (1.0 - w) * 2.0 / std::sqrt(M_PI) ==
        Approx(1.0).margin(1e-15));
}

TEST_CASE("horseshoe approximation integrates to one") {
  for (double g : {0.5, 1.0})
    for (double d : {1.0, 3.0}) {
      const ScaledDensityParams p{g, d};
      const double mass = ts::integrate_real_line_split(
          [&](double u) { return std::exp(log_horseshoe_approx(u, p)); }, 1e-10);
      CHECK(mass == Approx(1.0).margin(1e-6));
    }
}

TEST_CASE("horseshoe envelope integrals and pointwise ordering") {
  const ScaledDensityParams p{1.3, 0.8};
  const double m1 = ts::integrate_real_line_split(
      [&](double u) { return horseshoe_bound_lower(u, p); }, 1e-10);
  const double m2 = ts::integrate_real_line_split(
      [&](double u) { return horseshoe_bound_upper(u, p); }, 1e-10);
  CHECK(m1 == Approx(std::sqrt(2.0 / M_PI)).margin(1e-6));
  CHECK(m2 == Approx(2.0 / std::sqrt(M_PI)).margin(1e-6));
  for (int i = 0; i < 200; ++i) {
    const double u = std::pow(10.0, -4.0 + 8.0 * i / 199.0);
    const double pd = std::exp(log_horseshoe_approx(u, p));
    CHECK(pd >= horseshoe_bound_lower(u, p));
    CHECK(pd <= horseshoe_bound_upper(u, p));
  }
}

TEST_CASE("horseshoe approximation symmetry and domain") {
  const ScaledDensityParams p{0.9, 1.7};
  for (double u : {0.01, 0.5, 4.0})
    CHECK(log_horseshoe_approx(u, p) == Approx(log_horseshoe_approx(-u, p)));
  CHECK_THROWS_AS(log_horseshoe_approx(0.0, p), std::invalid_argument);
}

TEST_CASE("horseshoe approximation matches the mixture Monte Carlo oracle in "
          "the tail-dominated regime") {
  // tau ~ C+(0, gamma), u | tau ~ N(0, delta tau^2).  With gamma = 0.005 the
  // test points sit far enough out that the closed form's blend error is well
  // below Monte Carlo noise; its near-origin error is covered by the envelope
  // checks above instead.
  const ScaledDensityParams p{0.005, 1.0};
  Rng rng(8675309);
  const int n = 200000;
  std::vector<double> tau(n);
  for (auto& t : tau) t = rng.half_cauchy(p.gamma);
  for (double u : {0.1, 1.0, 5.0}) {
    double sum = 0.0, sum2 = 0.0;
    for (double t : tau) {
      const double k = std::exp(-u * u / (2.0 * p.delta * t * t)) /
                       (t * std::sqrt(2.0 * M_PI * p.delta));
      sum += k;
      sum2 += k * k;
    }
    const double mc = sum / n;
    const double se = std::sqrt((sum2 / n - mc * mc) / n);
    CHECK(std::abs(std::exp(log_horseshoe_approx(u, p)) - mc) <= 3.0 * se);
  }
}

TEST_CASE("kernels match finite-difference derivatives in their argument") {
  const double pts[5] = {0.13, 0.71, 1.9, 3.4, 7.2};
  const ScaledDensityParams p{0.8, 1.6};
  auto check = [&](auto f, auto df) {
    for (double x : pts) {
      const double fd = ts::fd_derivative(f, x);
      const double an = df(x);
      CHECK(an == Approx(fd).epsilon(1e-6).margin(1e-9));
    }
  };
  check([](double x) { return log_normal(x, 0.3, 1.2); },
        [](double x) { return d_log_normal_du(x, 0.3, 1.2); });
  check([](double x) { return log_half_cauchy(x, 0.9); },
        [](double x) { return d_log_half_cauchy_dx(x, 0.9); });
  check([](double x) { return log_exponential(x, 1.7); },
        [](double x) { return d_log_exponential_dx(x, 1.7); });
  check([](double x) { return log_inv_gamma(x, 0.5, 0.5); },
        [](double x) { return d_log_inv_gamma_dx(x, 0.5, 0.5); });
  check([&](double x) { return log_laplace_marginal(x, p); },
        [&](double x) { return d_log_laplace_marginal_du(x, p); });
  check([&](double x) { return log_horseshoe_approx(x, p); },
        [&](double x) { return d_log_horseshoe_approx_du(x, p); });
}

TEST_CASE("kernels are scale equivariant at delta = 1") {
  for (double g : {0.4, 2.7}) {
    for (double u : {0.2, 1.1, 5.0}) {
      CHECK(log_laplace_marginal(u, {g, 1.0}) ==
            Approx(-std::log(g) + log_laplace_marginal(u / g, {1.0, 1.0})));
      CHECK(log_horseshoe_approx(u, {g, 1.0}) ==
            Approx(-std::log(g) + log_horseshoe_approx(u / g, {1.0, 1.0})));
      CHECK(log_normal(u, 0.0, g) == Approx(-std::log(g) + log_normal(u / g, 0.0, 1.0)));
      CHECK(log_half_cauchy(u, g) == Approx(-std::log(g) + log_half_cauchy(u / g, 1.0)));
    }
  }
}
