#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spmrf/common.hpp"
#include "spmrf/densities.hpp"
#include "spmrf/grid.hpp"
#include "spmrf/obs.hpp"

namespace spmrf {

enum class PriorFamily { normal, laplace, horseshoe };

inline const char* prior_name(PriorFamily p) {
  switch (p) {
    case PriorFamily::normal: return "normal";
    case PriorFamily::laplace: return "laplace";
    case PriorFamily::horseshoe: return "horseshoe";
  }
  return "?";
}

/// Which posterior is targeted: the hierarchical one with explicit local
/// scales, or the marginal one with local scales integrated out (normal and
/// Laplace priors only).
enum class Formulation { hierarchical, marginal };

/// Declarative model specification.  `fixed_gamma` / `fixed_sigma` pin those
/// scales to constants and drop their auxiliaries from the parameter vector;
/// used for conjugate checks and prior-predictive tests.
struct ModelSpec {
  Grid grid;
  DiffOrder k = DiffOrder::first;
  PriorFamily prior = PriorFamily::horseshoe;
  ObservationModel obs;
  double zeta = 0.01;           // half-Cauchy scale of the global scale gamma
  double theta1_mean = 0.0;     // mu
  double theta1_sd = 1.0;       // omega
  double sigma_prior_scale = 5.0;  // half-Cauchy scale of the noise sd (normal obs)
  std::optional<double> fixed_gamma{};
  std::optional<double> fixed_sigma{};

  void validate() const {
    require(grid.size() >= order_value(k) + 1, "model needs n >= k + 1");
    require(theta1_sd > 0.0, "theta1 prior sd must be positive");
    if (!fixed_gamma) require(zeta > 0.0, "zeta must be positive");
    else require(*fixed_gamma > 0.0, "fixed gamma must be positive");
    if (obs.family == ObsFamily::normal) {
      if (!fixed_sigma) require(sigma_prior_scale > 0.0, "sigma prior scale must be positive");
      else require(*fixed_sigma > 0.0, "fixed sigma must be positive");
    }
  }
};

/// Unconstrained parameter vector layout.  Every positive scale is
/// reparameterized so the sampled space is free of hard constraints and
/// heavy tails:
///
///   * half-Cauchy scales (gamma, horseshoe tau_j and alpha_h, noise sd)
///     use the product construction  scale = base * |nu| * sqrt(exp(eta)),
///     nu ~ N(0,1), exp(eta) ~ inverse-gamma(1/2, 1/2) on the log scale;
///     the product is marginally half-Cauchy(base);
///   * Laplace local scales use tau_j^2 = 2 gamma^2 exp(eta_j) with
///     exp(eta_j) ~ Exp(1) on the log scale;
///   * the trend is fully non-centered: innovations z_j ~ N(0,1) with
///     order-k increments sqrt(d_j) tau_j z_j, inverted cumulatively.
///
/// Vector order (hierarchical):
///   [ z1 | z_init (k-1) | z (n-k) | alpha aux | tau aux | gamma aux | sigma aux ]
/// where "aux" blocks store [nu...] then [eta...] for product pairs, or
/// [eta...] alone for the Laplace exponential auxiliaries.  The marginal
/// formulation drops the alpha/tau aux blocks and gives the innovations a
/// standard normal (normal prior) or standard Laplace (Laplace prior) law.
struct ParamLayout {
  Eigen::Index n = 0;   // grid size
  int k = 1;            // difference order
  Eigen::Index m = 0;   // n - k innovations
  PriorFamily prior = PriorFamily::normal;
  Formulation form = Formulation::hierarchical;
  bool has_sigma = false;   // normal observation model
  bool gamma_free = true;   // gamma sampled (not pinned)
  bool sigma_free = false;  // sigma sampled (not pinned)

  Eigen::Index idx_z1 = 0;
  Eigen::Index idx_zinit = 0;
  Eigen::Index idx_z = 0;
  Eigen::Index idx_alpha_aux = 0;  // nu block then eta block (horseshoe), eta only (laplace)
  Eigen::Index idx_tau_aux = 0;
  Eigen::Index idx_gamma = 0;      // [nu, eta]
  Eigen::Index idx_sigma = 0;      // [nu, eta]
  Eigen::Index dim = 0;

  Eigen::Index n_alpha_aux = 0;
  Eigen::Index n_tau_aux = 0;
};

inline ParamLayout make_layout(const ModelSpec& spec, Formulation form) {
  spec.validate();
  if (form == Formulation::marginal)
    require(spec.prior != PriorFamily::horseshoe,
            "no marginal formulation for the horseshoe prior; "
            "use the hierarchical posterior");
  ParamLayout lay;
  lay.n = spec.grid.size();
  lay.k = order_value(spec.k);
  lay.m = lay.n - lay.k;
  lay.prior = spec.prior;
  lay.form = form;
  lay.has_sigma = spec.obs.family == ObsFamily::normal;
  lay.gamma_free = !spec.fixed_gamma.has_value();
  lay.sigma_free = lay.has_sigma && !spec.fixed_sigma.has_value();

  const Eigen::Index n_init = lay.k - 1;
  const bool hier = form == Formulation::hierarchical;
  if (hier && spec.prior == PriorFamily::laplace) {
    lay.n_alpha_aux = n_init;
    lay.n_tau_aux = lay.m;
  } else if (hier && spec.prior == PriorFamily::horseshoe) {
    lay.n_alpha_aux = 2 * n_init;
    lay.n_tau_aux = 2 * lay.m;
  }

  Eigen::Index at = 0;
  lay.idx_z1 = at;
  at += 1;
  lay.idx_zinit = at;
  at += n_init;
  lay.idx_z = at;
  at += lay.m;
  lay.idx_alpha_aux = at;
  at += lay.n_alpha_aux;
  lay.idx_tau_aux = at;
  at += lay.n_tau_aux;
  lay.idx_gamma = at;
  at += lay.gamma_free ? 2 : 0;
  lay.idx_sigma = at;
  at += lay.sigma_free ? 2 : 0;
  lay.dim = at;
  return lay;
}

/// Constrained view of a parameter state.
struct ConstrainedParams {
  Eigen::VectorXd theta;
  Eigen::VectorXd tau;    // hierarchical shrinkage priors only
  Eigen::VectorXd alpha;  // hierarchical shrinkage priors, k = 2 only
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double sigma = std::numeric_limits<double>::quiet_NaN();
};

struct PosteriorEval {
  double logp = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd grad;
};

/// Log posterior (and analytic gradient) of a model in unconstrained
/// coordinates, including all transform Jacobians.  Evaluation is pure and
/// callable concurrently.
class Posterior {
 public:
  Posterior(ModelSpec spec, Eigen::VectorXd y,
            Formulation form = Formulation::hierarchical)
      : spec_(std::move(spec)), y_(std::move(y)), lay_(make_layout(spec_, form)) {
    require(y_.size() == spec_.grid.size(), "data length does not match grid");
    spec_.obs.validate_data(y_);
    const Eigen::VectorXd d = scale_factors(spec_.k, spec_.grid);
    sqrt_d_ = d.array().sqrt();
    if (lay_.k == 2) {
      ratio_.resize(lay_.m);
      for (Eigen::Index j = 0; j < lay_.m; ++j)
        ratio_[j] = spec_.grid.spacing(j + 1) / spec_.grid.spacing(j);
    }
    lik_const_ = 0.0;
    if (spec_.obs.family == ObsFamily::poisson) {
      for (Eigen::Index i = 0; i < y_.size(); ++i)
        lik_const_ -= std::lgamma(y_[i] + 1.0);
    } else if (spec_.obs.family == ObsFamily::binomial) {
      for (Eigen::Index i = 0; i < y_.size(); ++i) {
        const double m = spec_.obs.trials[i];
        lik_const_ += std::lgamma(m + 1.0) - std::lgamma(y_[i] + 1.0) -
                      std::lgamma(m - y_[i] + 1.0);
      }
    }
  }

  const ParamLayout& layout() const { return lay_; }
  const ModelSpec& spec() const { return spec_; }
  const Eigen::VectorXd& data() const { return y_; }
  Eigen::Index dim() const { return lay_.dim; }

  ConstrainedParams constrain_full(const Eigen::VectorXd& x) const {
    check_state(x, true);
    ConstrainedParams c;
    Eigen::VectorXd tau, alpha;
    double uinit = 0.0;
    unpack_scales(x, c.gamma, c.sigma, tau, alpha);
    c.theta = reconstruct(x, c.gamma, tau, alpha, uinit);
    const bool hier_shrink = lay_.form == Formulation::hierarchical &&
                             lay_.prior != PriorFamily::normal;
    if (hier_shrink) {
      c.tau = tau;
      c.alpha = alpha;
    }
    return c;
  }

  /// Constrained draws retained by the sampler, flattened per names().
  Eigen::VectorXd constrain(const Eigen::VectorXd& x) const {
    const ConstrainedParams c = constrain_full(x);
    Eigen::VectorXd out(n_constrained());
    Eigen::Index at = 0;
    out.segment(at, lay_.n) = c.theta;
    at += lay_.n;
    out.segment(at, c.tau.size()) = c.tau;
    at += c.tau.size();
    out.segment(at, c.alpha.size()) = c.alpha;
    at += c.alpha.size();
    out[at++] = c.gamma;
    if (lay_.has_sigma) out[at++] = c.sigma;
    return out;
  }

  Eigen::Index n_constrained() const {
    const bool hier_shrink = lay_.form == Formulation::hierarchical &&
                             lay_.prior != PriorFamily::normal;
    Eigen::Index n = lay_.n + 1;  // theta, gamma
    if (hier_shrink) n += lay_.m + (lay_.k - 1);
    if (lay_.has_sigma) n += 1;
    return n;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (Eigen::Index i = 1; i <= lay_.n; ++i)
      out.push_back("theta." + std::to_string(i));
    const bool hier_shrink = lay_.form == Formulation::hierarchical &&
                             lay_.prior != PriorFamily::normal;
    if (hier_shrink) {
      for (Eigen::Index j = 1; j <= lay_.m; ++j)
        out.push_back("tau." + std::to_string(j));
      for (int h = 1; h <= lay_.k - 1; ++h)
        out.push_back("alpha." + std::to_string(h));
    }
    out.push_back("gamma");
    if (lay_.has_sigma) out.push_back("sigma");
    return out;
  }

  PosteriorEval eval(const Eigen::VectorXd& x) const {
    check_state(x, false);
    PosteriorEval r;
    r.grad = Eigen::VectorXd::Zero(lay_.dim);
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (!std::isfinite(x[i])) return r;  // logp stays -inf

    const bool hier = lay_.form == Formulation::hierarchical;
    const Eigen::Index m = lay_.m;
    const Eigen::Index n = lay_.n;

    double gamma, sigma;
    Eigen::VectorXd tau, alpha;
    unpack_scales(x, gamma, sigma, tau, alpha);
    double uinit = 0.0;
    const Eigen::VectorXd theta = reconstruct(x, gamma, tau, alpha, uinit);

    double lp = lik_const_;
    Eigen::VectorXd g_theta(n);
    double adj_sigma = 0.0;
    switch (spec_.obs.family) {
      case ObsFamily::normal: {
        const double inv_s2 = 1.0 / (sigma * sigma);
        for (Eigen::Index i = 0; i < n; ++i) {
          const double resid = y_[i] - theta[i];
          lp += -std::log(sigma) - half_log_2pi - 0.5 * resid * resid * inv_s2;
          g_theta[i] = resid * inv_s2;
          adj_sigma += -1.0 / sigma + resid * resid * inv_s2 / sigma;
        }
        break;
      }
      case ObsFamily::poisson: {
        for (Eigen::Index i = 0; i < n; ++i) {
          const double rate = std::exp(theta[i]);
          lp += y_[i] * theta[i] - rate;
          g_theta[i] = y_[i] - rate;
        }
        break;
      }
      case ObsFamily::binomial: {
        for (Eigen::Index i = 0; i < n; ++i) {
          const double t = theta[i];
          const double log1pexp = t > 0.0 ? t + std::log1p(std::exp(-t))
                                          : std::log1p(std::exp(t));
          lp += y_[i] * t - spec_.obs.trials[i] * log1pexp;
          g_theta[i] = y_[i] - spec_.obs.trials[i] * logistic(t);
        }
        break;
      }
    }

    // Reverse sweep through the cumulative reconstruction.
    Eigen::VectorXd adj = g_theta;
    Eigen::VectorXd adj_u(m);
    double adj_uinit = 0.0;
    if (lay_.k == 1) {
      for (Eigen::Index i = n - 1; i >= 1; --i) {
        adj_u[i - 1] = adj[i];
        adj[i - 1] += adj[i];
      }
    } else {
      for (Eigen::Index i = n - 1; i >= 2; --i) {
        const double r = ratio_[i - 2];
        adj_u[i - 2] = adj[i];
        adj[i - 1] += (1.0 + r) * adj[i];
        adj[i - 2] -= r * adj[i];
      }
      adj_uinit = adj[1];
      adj[0] += adj[1];
    }
    const double adj_theta1 = adj[0];

    double adj_gamma = 0.0;

    // z1 and its standard normal prior.
    const double z1 = x[lay_.idx_z1];
    lp += -half_log_2pi - 0.5 * z1 * z1;
    r.grad[lay_.idx_z1] = spec_.theta1_sd * adj_theta1 - z1;

    // Innovations.
    const bool laplace_z = !hier && lay_.prior == PriorFamily::laplace;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double z = x[lay_.idx_z + j];
      const double scale_j = hier ? tau[j] : gamma;
      double g = sqrt_d_[j] * scale_j * adj_u[j];
      if (laplace_z) {
        lp += -std::log(2.0) - std::abs(z);
        g += (z > 0.0 ? -1.0 : (z < 0.0 ? 1.0 : 0.0));
      } else {
        lp += -half_log_2pi - 0.5 * z * z;
        g += -z;
      }
      r.grad[lay_.idx_z + j] = g;
      if (hier) {
        const double adj_tau = sqrt_d_[j] * z * adj_u[j];
        accumulate_scale_grad(x, lay_.idx_tau_aux, m, j, lay_.prior, tau[j],
                              gamma, adj_tau, adj_gamma, r.grad);
      } else {
        adj_gamma += sqrt_d_[j] * z * adj_u[j];
      }
    }

    // Initial difference (k = 2).
    if (lay_.k == 2) {
      const double zi = x[lay_.idx_zinit];
      const double a_scale = hier ? alpha[0] : gamma;
      double g = a_scale * adj_uinit;
      if (laplace_z) {
        lp += -std::log(2.0) - std::abs(zi);
        g += (zi > 0.0 ? -1.0 : (zi < 0.0 ? 1.0 : 0.0));
      } else {
        lp += -half_log_2pi - 0.5 * zi * zi;
        g += -zi;
      }
      r.grad[lay_.idx_zinit] = g;
      if (hier) {
        const double adj_alpha = zi * adj_uinit;
        accumulate_scale_grad(x, lay_.idx_alpha_aux, lay_.k - 1, 0, lay_.prior,
                              alpha[0], gamma, adj_alpha, adj_gamma, r.grad);
      } else {
        adj_gamma += zi * adj_uinit;
      }
    }

    // Local-scale auxiliary priors.
    if (hier && lay_.prior == PriorFamily::laplace) {
      for (Eigen::Index j = 0; j < m; ++j) {
        const double eta = x[lay_.idx_tau_aux + j];
        lp += eta - std::exp(eta);
        r.grad[lay_.idx_tau_aux + j] += 1.0 - std::exp(eta);
      }
      if (lay_.k == 2) {
        const double eta = x[lay_.idx_alpha_aux];
        lp += eta - std::exp(eta);
        r.grad[lay_.idx_alpha_aux] += 1.0 - std::exp(eta);
      }
    } else if (hier && lay_.prior == PriorFamily::horseshoe) {
      for (Eigen::Index j = 0; j < m; ++j)
        lp += pair_prior(x[lay_.idx_tau_aux + j], x[lay_.idx_tau_aux + m + j],
                         r.grad[lay_.idx_tau_aux + j],
                         r.grad[lay_.idx_tau_aux + m + j]);
      if (lay_.k == 2)
        lp += pair_prior(x[lay_.idx_alpha_aux], x[lay_.idx_alpha_aux + 1],
                         r.grad[lay_.idx_alpha_aux],
                         r.grad[lay_.idx_alpha_aux + 1]);
    }

    // Global scale.
    if (lay_.gamma_free) {
      const double nu = x[lay_.idx_gamma];
      const double eta = x[lay_.idx_gamma + 1];
      lp += pair_prior(nu, eta, r.grad[lay_.idx_gamma], r.grad[lay_.idx_gamma + 1]);
      const double s = spec_.zeta * std::exp(0.5 * eta);
      r.grad[lay_.idx_gamma] += adj_gamma * s * sgn(nu);
      r.grad[lay_.idx_gamma + 1] += adj_gamma * 0.5 * gamma;
    }

    // Noise sd.
    if (lay_.sigma_free) {
      const double nu = x[lay_.idx_sigma];
      const double eta = x[lay_.idx_sigma + 1];
      lp += pair_prior(nu, eta, r.grad[lay_.idx_sigma], r.grad[lay_.idx_sigma + 1]);
      const double s = spec_.sigma_prior_scale * std::exp(0.5 * eta);
      r.grad[lay_.idx_sigma] += adj_sigma * s * sgn(nu);
      r.grad[lay_.idx_sigma + 1] += adj_sigma * 0.5 * sigma;
    }

    if (!std::isfinite(lp)) {
      r.logp = -std::numeric_limits<double>::infinity();
      r.grad.setZero();
      return r;
    }
    r.logp = lp;
    return r;
  }

  double logp(const Eigen::VectorXd& x) const { return eval(x).logp; }

 private:
  static double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

  void check_state(const Eigen::VectorXd& x, bool strict) const {
    require(x.size() == lay_.dim, "parameter state does not match layout");
    if (strict)
      for (Eigen::Index i = 0; i < x.size(); ++i)
        require(std::isfinite(x[i]), "non-finite parameter state");
  }

  /// Joint log density of one half-Cauchy product pair (nu, eta) including
  /// the log-scale Jacobian for eps = exp(eta).
  static double pair_prior(double nu, double eta, double& g_nu, double& g_eta) {
    const double eme = std::exp(-eta);
    g_nu += -nu;
    g_eta += -0.5 + 0.5 * eme;
    return -half_log_2pi - 0.5 * nu * nu - half_log_2pi - 0.5 * eta - 0.5 * eme;
  }

  /// Chain-rule contributions of d(logp)/d(scale) through the local-scale
  /// reparameterization for entry `j` of a block holding `count` scales.
  void accumulate_scale_grad(const Eigen::VectorXd& x, Eigen::Index block,
                             Eigen::Index count, Eigen::Index j,
                             PriorFamily prior, double scale, double gamma,
                             double adj_scale, double& adj_gamma,
                             Eigen::VectorXd& grad) const {
    switch (prior) {
      case PriorFamily::normal:
        adj_gamma += adj_scale;  // scale == gamma
        break;
      case PriorFamily::laplace:
        grad[block + j] += adj_scale * 0.5 * scale;
        adj_gamma += adj_scale * scale / gamma;
        break;
      case PriorFamily::horseshoe: {
        const double nu = x[block + j];
        const double eta = x[block + count + j];
        const double s = gamma * std::exp(0.5 * eta);
        grad[block + j] += adj_scale * s * sgn(nu);
        grad[block + count + j] += adj_scale * 0.5 * scale;
        adj_gamma += adj_scale * scale / gamma;
        break;
      }
    }
  }

  void unpack_scales(const Eigen::VectorXd& x, double& gamma, double& sigma,
                     Eigen::VectorXd& tau, Eigen::VectorXd& alpha) const {
    gamma = lay_.gamma_free
                ? spec_.zeta * std::abs(x[lay_.idx_gamma]) *
                      std::exp(0.5 * x[lay_.idx_gamma + 1])
                : *spec_.fixed_gamma;
    sigma = std::numeric_limits<double>::quiet_NaN();
    if (lay_.has_sigma)
      sigma = lay_.sigma_free
                  ? spec_.sigma_prior_scale * std::abs(x[lay_.idx_sigma]) *
                        std::exp(0.5 * x[lay_.idx_sigma + 1])
                  : *spec_.fixed_sigma;

    const bool hier = lay_.form == Formulation::hierarchical;
    tau.resize(hier ? lay_.m : 0);
    alpha.resize(hier ? lay_.k - 1 : 0);
    if (!hier) return;
    for (Eigen::Index j = 0; j < lay_.m; ++j) {
      switch (lay_.prior) {
        case PriorFamily::normal:
          tau[j] = gamma;
          break;
        case PriorFamily::laplace:
          tau[j] = gamma * std::sqrt(2.0) *
                   std::exp(0.5 * x[lay_.idx_tau_aux + j]);
          break;
        case PriorFamily::horseshoe:
          tau[j] = gamma * std::abs(x[lay_.idx_tau_aux + j]) *
                   std::exp(0.5 * x[lay_.idx_tau_aux + lay_.m + j]);
          break;
      }
    }
    if (lay_.k == 2) {
      switch (lay_.prior) {
        case PriorFamily::normal:
          alpha[0] = gamma;
          break;
        case PriorFamily::laplace:
          alpha[0] = gamma * std::sqrt(2.0) *
                     std::exp(0.5 * x[lay_.idx_alpha_aux]);
          break;
        case PriorFamily::horseshoe:
          alpha[0] = gamma * std::abs(x[lay_.idx_alpha_aux]) *
                     std::exp(0.5 * x[lay_.idx_alpha_aux + 1]);
          break;
      }
    }
  }

  /// Cumulative inversion of the (possibly irregular) difference operator.
  Eigen::VectorXd reconstruct(const Eigen::VectorXd& x, double gamma,
                              const Eigen::VectorXd& tau,
                              const Eigen::VectorXd& alpha,
                              double& uinit) const {
    const bool hier = lay_.form == Formulation::hierarchical;
    Eigen::VectorXd theta(lay_.n);
    theta[0] = spec_.theta1_mean + spec_.theta1_sd * x[lay_.idx_z1];
    if (lay_.k == 2) {
      const double a_scale = hier ? alpha[0] : gamma;
      uinit = a_scale * x[lay_.idx_zinit];
      theta[1] = theta[0] + uinit;
    }
    for (Eigen::Index j = 0; j < lay_.m; ++j) {
      const double scale_j = hier ? tau[j] : gamma;
      const double u = sqrt_d_[j] * scale_j * x[lay_.idx_z + j];
      if (lay_.k == 1) {
        theta[j + 1] = theta[j] + u;
      } else {
        const double r = ratio_[j];
        theta[j + 2] = (1.0 + r) * theta[j + 1] - r * theta[j] + u;
      }
    }
    return theta;
  }

  ModelSpec spec_;
  Eigen::VectorXd y_;
  ParamLayout lay_;
  Eigen::ArrayXd sqrt_d_;
  Eigen::VectorXd ratio_;
  double lik_const_ = 0.0;
};

inline PosteriorEval log_posterior_hierarchical(const ModelSpec& spec,
                                                const Eigen::VectorXd& x,
                                                const Eigen::VectorXd& y) {
  return Posterior(spec, y, Formulation::hierarchical).eval(x);
}

inline PosteriorEval log_posterior_marginal(const ModelSpec& spec,
                                            const Eigen::VectorXd& x,
                                            const Eigen::VectorXd& y) {
  return Posterior(spec, y, Formulation::marginal).eval(x);
}

inline ConstrainedParams constrain(const ModelSpec& spec,
                                   const Eigen::VectorXd& x,
                                   Formulation form = Formulation::hierarchical) {
  const Eigen::VectorXd dummy = Eigen::VectorXd::Zero(spec.grid.size());
  return Posterior(spec, dummy, form).constrain_full(x);
}

/// Data-driven prior for theta_1: mean of the data transformed to the
/// latent scale and twice its sample standard deviation.
inline std::pair<double, double> default_theta1_prior(const Eigen::VectorXd& y,
                                                      const ObservationModel& obs) {
  require(y.size() >= 2, "need at least two observations");
  const Eigen::VectorXd t = transform_to_latent_scale(y, obs);
  const double mu = sample_mean(t);
  const double omega = 2.0 * sample_sd(t);
  require(omega > 0.0, "degenerate data: zero variance on the latent scale");
  return {mu, omega};
}

}  // namespace spmrf
