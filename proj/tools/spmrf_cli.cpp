// Command-line front end: fit trend models, calibrate the global smoothing
// prior, run simulation benchmarks, and post-process draws.

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Dense>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "spmrf/spmrf.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace spmrf;

namespace {

int default_threads() {
  if (const char* env = std::getenv("SPMRF_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) return t;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? int(hc) : 1;
}

std::string default_out_dir() {
  if (const char* env = std::getenv("SPMRF_OUTPUT_DIR")) return env;
  return {};
}

ObsFamily parse_obs(const std::string& s) {
  if (s == "normal") return ObsFamily::normal;
  if (s == "poisson") return ObsFamily::poisson;
  if (s == "binomial") return ObsFamily::binomial;
  throw std::invalid_argument("unknown observation family: " + s);
}

PriorFamily parse_prior(const std::string& s) {
  if (s == "normal") return PriorFamily::normal;
  if (s == "laplace") return PriorFamily::laplace;
  if (s == "horseshoe") return PriorFamily::horseshoe;
  throw std::invalid_argument("unknown prior family: " + s);
}

double natural_scale(double link_value, ObsFamily fam) {
  switch (fam) {
    case ObsFamily::normal: return link_value;
    case ObsFamily::poisson: return std::exp(link_value);
    case ObsFamily::binomial: return logistic(link_value);
  }
  return link_value;
}

struct LoadedData {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  ObservationModel obs;
  Grid grid;
};

LoadedData load_data(const std::string& path, ObsFamily fam,
                     const std::string& x_col, const std::string& y_col,
                     const std::string& m_col) {
  const CsvTable t = read_csv(path);
  LoadedData d{t.column(x_col), t.column(y_col), {}, Grid(t.column(x_col))};
  if (fam == ObsFamily::binomial)
    d.obs = ObservationModel::binomial(t.column(m_col));
  else if (fam == ObsFamily::poisson)
    d.obs = ObservationModel::poisson();
  else
    d.obs = ObservationModel::normal();
  d.obs.validate_data(d.y);
  return d;
}

struct FitOptions {
  std::string input, out_dir;
  std::string x_col = "x", y_col = "y", m_col = "m";
  std::string obs_name;
  std::string prior_name = "horseshoe";
  int order = 1;
  std::string zeta_arg = "auto";
  double alpha = 0.05;
  double sigma_scale = 5.0;
  SamplerConfig sampler;
  bool save_draws = false;
};

void add_sampler_flags(CLI::App* cmd, SamplerConfig& cfg) {
  cmd->add_option("--chains", cfg.chains, "number of chains");
  cmd->add_option("--warmup", cfg.warmup, "warmup iterations per chain");
  cmd->add_option("--iters", cfg.iters, "post-warmup iterations per chain");
  cmd->add_option("--thin", cfg.thin, "keep every thin-th draw");
  cmd->add_option("--target-accept", cfg.target_accept, "dual-averaging target");
  cmd->add_option("--max-treedepth", cfg.max_treedepth, "trajectory doubling cap");
}

void write_draws_csv(const std::string& path, const PosteriorSamples& s) {
  CsvWriter w(path);
  std::vector<std::string> header = {"chain", "iter"};
  header.insert(header.end(), s.names.begin(), s.names.end());
  w.header(header);
  for (int c = 0; c < s.n_chains(); ++c)
    for (Eigen::Index r = 0; r < s.retained_per_chain(); ++r) {
      std::vector<std::string> row = {std::to_string(c + 1), std::to_string(r + 1)};
      for (Eigen::Index j = 0; j < s.chains[std::size_t(c)].cols(); ++j)
        row.push_back(fmt17(s.chains[std::size_t(c)](r, j)));
      w.row(row);
    }
}

/// Rebuilds per-chain draws from a draws.csv written by write_draws_csv.
PosteriorSamples read_draws_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  require(t.columns.size() >= 3 && t.columns[0] == "chain" && t.columns[1] == "iter",
          "not a draws file: " + path);
  PosteriorSamples s;
  s.names.assign(t.columns.begin() + 2, t.columns.end());
  const Eigen::VectorXd& chain_col = t.data[0];
  const int n_chains = int(chain_col.maxCoeff());
  const Eigen::Index rows_per_chain = t.rows() / n_chains;
  require(rows_per_chain * n_chains == t.rows(), "ragged draws file");
  for (int c = 0; c < n_chains; ++c) {
    Eigen::MatrixXd m(rows_per_chain, Eigen::Index(s.names.size()));
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      if (int(chain_col[i]) != c + 1) continue;
      for (std::size_t j = 0; j < s.names.size(); ++j)
        m(r, Eigen::Index(j)) = t.data[j + 2][i];
      ++r;
    }
    require(r == rows_per_chain, "chains of unequal length in " + path);
    s.chains.push_back(std::move(m));
    s.stats.push_back(ChainStats{});
  }
  return s;
}

void write_fit_outputs(const FitOptions& opt, const LoadedData& data,
                       const ModelSpec& spec, const PosteriorSamples& samples,
                       const FitSummary& summary,
                       const std::optional<CalibrationReport>& cal) {
  const fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  const Eigen::Index n = data.grid.size();

  {
    CsvWriter w((dir / "summary.csv").string());
    w.header({"param", "location", "median", "q2.5", "q97.5", "median_natural",
              "q2.5_natural", "q97.5_natural"});
    for (std::size_t p = 0; p < summary.params.size(); ++p) {
      const ParamSummary& ps = summary.params[p];
      const bool is_theta = Eigen::Index(p) < n;
      const std::string loc =
          is_theta ? fmt17(data.grid.location(Eigen::Index(p))) : "";
      auto nat = [&](double v) {
        return is_theta ? natural_scale(v, spec.obs.family) : v;
      };
      w.row({ps.name, loc, fmt17(ps.median), fmt17(ps.q025), fmt17(ps.q975),
             fmt17(nat(ps.median)), fmt17(nat(ps.q025)), fmt17(nat(ps.q975))});
    }
  }
  {
    CsvWriter w((dir / "diagnostics.csv").string());
    w.header({"param", "ess", "rhat", "degenerate"});
    for (const ParamSummary& ps : summary.params)
      w.row({ps.name, fmt17(ps.ess), fmt17(ps.rhat), ps.degenerate ? "1" : "0"});
  }
  {
    CsvWriter w((dir / "plot_data.csv").string());
    w.header({"location", "median", "lower", "upper"});
    for (Eigen::Index i = 0; i < n; ++i) {
      const ParamSummary& ps = summary.params[std::size_t(i)];
      w.row({fmt17(data.grid.location(i)),
             fmt17(natural_scale(ps.median, spec.obs.family)),
             fmt17(natural_scale(ps.q025, spec.obs.family)),
             fmt17(natural_scale(ps.q975, spec.obs.family))});
    }
  }
  if (opt.save_draws) write_draws_csv((dir / "draws.csv").string(), samples);

  json manifest;
  manifest["tool"] = "spmrf";
  manifest["version"] = version;
  manifest["command"] = "fit";
  manifest["input"] = opt.input;
  manifest["columns"] = {{"x", opt.x_col}, {"y", opt.y_col}};
  if (spec.obs.family == ObsFamily::binomial) manifest["columns"]["m"] = opt.m_col;
  manifest["obs"] = opt.obs_name;
  manifest["prior"] = opt.prior_name;
  manifest["order"] = order_value(spec.k);
  json zeta_info;
  zeta_info["value"] = spec.zeta;
  zeta_info["source"] = cal ? "auto" : "explicit";
  if (cal) {
    zeta_info["U"] = cal->upper_bound;
    zeta_info["sigma_ref"] = cal->sigma_ref;
    zeta_info["omega2"] = cal->omega2;
    zeta_info["alpha"] = cal->alpha;
  }
  manifest["zeta"] = zeta_info;
  manifest["theta1"] = {{"mean", spec.theta1_mean}, {"sd", spec.theta1_sd}};
  if (spec.obs.family == ObsFamily::normal)
    manifest["sigma_prior_scale"] = spec.sigma_prior_scale;
  manifest["sampler"] = {{"chains", opt.sampler.chains},
                         {"warmup", opt.sampler.warmup},
                         {"iters", opt.sampler.iters},
                         {"thin", opt.sampler.thin},
                         {"target_accept", opt.sampler.target_accept},
                         {"max_treedepth", opt.sampler.max_treedepth},
                         {"seed", opt.sampler.seed}};
  manifest["n"] = n;
  std::vector<double> locs(data.grid.locations().data(),
                           data.grid.locations().data() + n);
  manifest["locations"] = locs;
  manifest["retained_draws"] = samples.retained_per_chain() * samples.n_chains();
  manifest["divergences"] = samples.total_divergences();
  manifest["treedepth_hits"] = samples.total_treedepth_hits();
  std::ofstream mf(dir / "manifest.json");
  mf << manifest.dump(2) << '\n';

  // timing and ESS-per-second are machine-dependent and live apart from the
  // reproducible artifacts above
  {
    CsvWriter w((dir / "timing.csv").string());
    w.header({"chain", "warmup_wall", "warmup_cpu", "sampling_wall",
              "sampling_cpu", "step_size", "mean_accept"});
    for (int c = 0; c < samples.n_chains(); ++c) {
      const ChainStats& st = samples.stats[std::size_t(c)];
      w.row({std::to_string(c + 1), fmt17(st.warmup_wall), fmt17(st.warmup_cpu),
             fmt17(st.sampling_wall), fmt17(st.sampling_cpu),
             fmt17(st.step_size), fmt17(st.mean_accept)});
    }
  }
  {
    std::ofstream rep(dir / "report.txt");
    rep << "spmrf fit: " << opt.input << "\n"
        << "prior " << opt.prior_name << ", order " << order_value(spec.k)
        << ", obs " << opt.obs_name << ", n " << n << "\n"
        << "zeta " << fmt4(spec.zeta) << (cal ? " (auto)" : " (explicit)") << "\n";
    if (cal)
      rep << "  U " << fmt4(cal->upper_bound) << ", sigma_ref "
          << fmt4(cal->sigma_ref) << ", omega2 " << fmt4(cal->omega2)
          << ", alpha " << fmt4(cal->alpha) << "\n";
    double max_rhat = 0.0, min_ess = std::numeric_limits<double>::infinity();
    for (const ParamSummary& ps : summary.params)
      if (!ps.degenerate) {
        max_rhat = std::max(max_rhat, ps.rhat);
        min_ess = std::min(min_ess, ps.ess);
      }
    rep << "retained " << samples.retained_per_chain() * samples.n_chains()
        << " draws, divergences " << samples.total_divergences()
        << ", treedepth hits " << samples.total_treedepth_hits() << "\n"
        << "max R-hat " << fmt4(max_rhat) << ", min ESS " << fmt4(min_ess) << "\n"
        << "CPU seconds: total " << fmt4(summary.total_cpu_seconds)
        << ", sampling " << fmt4(summary.sampling_cpu_seconds) << "\n"
        << "ESS per sampling second: min " << fmt4(summary.min_essps)
        << ", mean " << fmt4(summary.mean_essps) << "\n";
  }
}

int cmd_fit(const FitOptions& opt_in) {
  FitOptions opt = opt_in;
  require(!opt.out_dir.empty(), "--out is required (or set SPMRF_OUTPUT_DIR)");
  const ObsFamily fam = parse_obs(opt.obs_name);
  const LoadedData data = load_data(opt.input, fam, opt.x_col, opt.y_col, opt.m_col);

  std::optional<CalibrationReport> cal;
  double zeta_value = 0.0;
  if (opt.zeta_arg == "auto") {
    cal = calibrate(data.y, data.obs, order_from_int(opt.order), opt.alpha);
    zeta_value = cal->zeta;
  } else {
    zeta_value = detail::parse_double(opt.zeta_arg, "--zeta");
    require(zeta_value > 0.0, "explicit zeta must be positive");
  }

  const auto [mu, omega] = default_theta1_prior(data.y, data.obs);
  const ModelSpec spec{data.grid,
                       order_from_int(opt.order),
                       parse_prior(opt.prior_name),
                       data.obs,
                       zeta_value,
                       mu,
                       omega,
                       opt.sigma_scale,
                       {},
                       {}};
  const PosteriorSamples samples = nuts_run(spec, data.y, opt.sampler);
  const FitSummary summary = summarize(samples);
  write_fit_outputs(opt, data, spec, samples, summary, cal);
  std::cout << "fit written to " << opt.out_dir << " (zeta " << fmt4(zeta_value)
            << ", divergences " << samples.total_divergences() << ")\n";
  return 0;
}

int cmd_calibrate(const std::string& input, const std::string& obs_name,
                  int order, double alpha, const std::string& x_col,
                  const std::string& y_col, const std::string& m_col,
                  double densify, const std::string& out_dir) {
  const ObsFamily fam = parse_obs(obs_name);
  const LoadedData data = load_data(input, fam, x_col, y_col, m_col);
  const DiffOrder k = order_from_int(order);
  const CalibrationReport r = calibrate(data.y, data.obs, k, alpha);
  std::cout << "n          " << data.y.size() << "\n"
            << "U          " << fmt4(r.upper_bound) << "\n"
            << "omega2     " << fmt4(r.omega2) << "\n"
            << "sigma_ref  " << fmt4(r.sigma_ref) << "\n"
            << "alpha      " << fmt4(r.alpha) << "\n"
            << "zeta       " << fmt4(r.zeta) << "\n";
  if (densify != 1.0)
    std::cout << "zeta at densify factor " << fmt4(densify) << ": "
              << fmt4(rescale_zeta(r.zeta, k, densify)) << "\n";
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    CsvWriter w((fs::path(out_dir) / "calibration.csv").string());
    w.header({"n", "order", "U", "omega2", "sigma_ref", "alpha", "zeta"});
    w.row({std::to_string(data.y.size()), std::to_string(order),
           fmt17(r.upper_bound), fmt17(r.omega2), fmt17(r.sigma_ref),
           fmt17(r.alpha), fmt17(r.zeta)});
  }
  return 0;
}

int cmd_changepoint(const std::string& fit_dir, const std::string& draws_path,
                    const std::string& out_dir) {
  std::string draws_file = draws_path;
  Eigen::VectorXd locations;
  ObsFamily fam = ObsFamily::normal;  // identity scale unless the manifest says otherwise
  if (!fit_dir.empty()) {
    draws_file = (fs::path(fit_dir) / "draws.csv").string();
    std::ifstream mf(fs::path(fit_dir) / "manifest.json");
    if (mf) {
      json manifest = json::parse(mf);
      if (manifest.contains("locations")) {
        const auto locs = manifest["locations"].get<std::vector<double>>();
        locations = Eigen::Map<const Eigen::VectorXd>(locs.data(),
                                                      Eigen::Index(locs.size()));
      }
      if (manifest.contains("obs")) fam = parse_obs(manifest["obs"]);
      if (manifest.value("order", 1) != 1)
        std::cerr << "note: change points are defined for first-order fits; "
                     "this fit has order "
                  << manifest["order"] << "\n";
    }
  }
  require(!draws_file.empty(), "need --fit-dir or --draws");
  const PosteriorSamples s = read_draws_csv(draws_file);

  Eigen::Index n_theta = 0;
  while (n_theta < Eigen::Index(s.names.size()) &&
         s.names[std::size_t(n_theta)].rfind("theta.", 0) == 0)
    ++n_theta;
  require(n_theta >= 2, "no trend columns in draws file");
  if (locations.size() == 0) {
    locations.resize(n_theta);
    for (Eigen::Index i = 0; i < n_theta; ++i) locations[i] = double(i + 1);
  }
  require(locations.size() == n_theta, "locations do not match trend columns");

  // drops are measured on the natural scale of the observations
  const Eigen::Index rows = s.retained_per_chain();
  Eigen::MatrixXd theta(rows * s.n_chains(), n_theta);
  for (int c = 0; c < s.n_chains(); ++c)
    theta.middleRows(c * rows, rows) = s.chains[std::size_t(c)].leftCols(n_theta);
  for (Eigen::Index r = 0; r < theta.rows(); ++r)
    for (Eigen::Index j = 0; j < n_theta; ++j)
      theta(r, j) = natural_scale(theta(r, j), fam);
  const ChangePointPosterior cp = change_point_posterior(theta, locations);

  std::cout << "change point mode " << fmt4(cp.mode) << ", median "
            << fmt4(cp.median) << ", IQR [" << fmt4(cp.q25) << ", "
            << fmt4(cp.q75) << "]\n";
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    CsvWriter w((fs::path(out_dir) / "changepoint.csv").string());
    w.header({"location", "count", "probability"});
    const double total = double(cp.locations.size());
    for (const auto& [loc, cnt] : cp.counts)
      w.row({fmt17(loc), std::to_string(cnt), fmt17(double(cnt) / total)});
  }
  return 0;
}

int cmd_diagnose(const std::string& draws_path, const std::string& out_dir) {
  const PosteriorSamples s = read_draws_csv(draws_path);
  const FitSummary summary = summarize(s);
  std::cout << "param ess rhat\n";
  for (const ParamSummary& ps : summary.params)
    std::cout << ps.name << ' ' << fmt4(ps.ess) << ' ' << fmt4(ps.rhat)
              << (ps.degenerate ? " (degenerate)" : "") << "\n";
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    CsvWriter w((fs::path(out_dir) / "diagnostics.csv").string());
    w.header({"param", "ess", "rhat", "degenerate"});
    for (const ParamSummary& ps : summary.params)
      w.row({ps.name, fmt17(ps.ess), fmt17(ps.rhat), ps.degenerate ? "1" : "0"});
  }
  return 0;
}

struct SimulateOptions {
  std::string scenario = "piecewise";
  std::string obs_name = "normal";
  double sigma = 4.5;
  int n = 100;
  int replicates = 20;
  std::string priors_arg = "normal,laplace,horseshoe";
  double zeta = 0.01;
  std::uint64_t seed = 20240101;
  int threads = 1;
  std::string out_dir;
  SamplerConfig sampler;
  // sensitivity sweep over zeta on a real dataset
  std::string sweep_input;
  std::string sweep_zetas = "1,0.01,0.0001";
  std::string x_col = "x", y_col = "y", m_col = "m";
  int order = 1;
};

std::vector<PriorFamily> parse_priors(const std::string& arg) {
  std::vector<PriorFamily> out;
  std::istringstream ss(arg);
  std::string p;
  while (std::getline(ss, p, ',')) out.push_back(parse_prior(p));
  require(!out.empty(), "no priors given");
  return out;
}

int cmd_simulate(const SimulateOptions& opt) {
  require(!opt.out_dir.empty(), "--out is required (or set SPMRF_OUTPUT_DIR)");
  fs::create_directories(opt.out_dir);

  if (!opt.sweep_input.empty()) {
    // prior-sensitivity sweep: refit one dataset at several zeta values for
    // each prior and tabulate the fits
    const ObsFamily fam = parse_obs(opt.obs_name);
    const LoadedData data =
        load_data(opt.sweep_input, fam, opt.x_col, opt.y_col, opt.m_col);
    std::vector<double> zetas;
    std::istringstream ss(opt.sweep_zetas);
    std::string z;
    while (std::getline(ss, z, ','))
      zetas.push_back(detail::parse_double(z, "--sweep-zetas"));
    require(!zetas.empty(), "no sweep zeta values");
    const auto priors = parse_priors(opt.priors_arg);
    const auto [mu, omega] = default_theta1_prior(data.y, data.obs);

    CsvWriter w((fs::path(opt.out_dir) / "sweep.csv").string());
    w.header({"zeta", "prior", "masv", "mciw", "min_ess", "max_rhat",
              "divergences"});
    for (double zv : zetas)
      for (PriorFamily prior : priors) {
        const ModelSpec spec{data.grid, order_from_int(opt.order), prior,
                             data.obs, zv,    mu,
                             omega,     5.0,  {},
                             {}};
        SamplerConfig cfg = opt.sampler;
        cfg.seed = mix_seed(opt.seed, mix_seed(fnv1a(prior_name(prior)),
                                               std::uint64_t(zv * 1e9)));
        cfg.threads = opt.threads;
        const PosteriorSamples samples = nuts_run(spec, data.y, cfg);
        const FitSummary summary = summarize(samples);
        const Eigen::Index n = data.grid.size();
        Eigen::VectorXd med(n), lo(n), hi(n);
        double min_ess = std::numeric_limits<double>::infinity(), max_rhat = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          med[i] = summary.params[std::size_t(i)].median;
          lo[i] = summary.params[std::size_t(i)].q025;
          hi[i] = summary.params[std::size_t(i)].q975;
          if (!summary.params[std::size_t(i)].degenerate)
            min_ess = std::min(min_ess, summary.params[std::size_t(i)].ess);
          max_rhat = std::max(max_rhat, summary.params[std::size_t(i)].rhat);
        }
        w.row({fmt17(zv), prior_name(prior), fmt17(masv(med)),
               fmt17((hi - lo).mean()), fmt17(min_ess), fmt17(max_rhat),
               std::to_string(samples.total_divergences())});
        std::cout << "sweep zeta " << fmt4(zv) << " prior "
                  << prior_name(prior) << " done\n";
      }
    return 0;
  }

  StudyConfig cfg;
  TrendScenario sc;
  if (opt.scenario == "constant") sc.kind = TrendKind::constant;
  else if (opt.scenario == "piecewise") sc.kind = TrendKind::piecewise_constant;
  else if (opt.scenario == "smooth-gp") sc.kind = TrendKind::smooth_gp;
  else if (opt.scenario == "varying") sc.kind = TrendKind::varying_smooth;
  else throw std::invalid_argument("unknown scenario: " + opt.scenario);
  sc.obs = parse_obs(opt.obs_name);
  sc.sigma = opt.sigma;
  sc.n = opt.n;
  cfg.scenarios = {sc};
  cfg.priors = parse_priors(opt.priors_arg);
  cfg.replicates = opt.replicates;
  cfg.sampler = opt.sampler;
  cfg.zeta = opt.zeta;
  cfg.seed = opt.seed;
  cfg.threads = opt.threads;
  cfg.csv_path = (fs::path(opt.out_dir) / "study_rows.csv").string();
  const StudyReport report = run_study(cfg);

  CsvWriter w((fs::path(opt.out_dir) / "study_summary.csv").string());
  w.header({"scenario", "prior", "replicates", "mean_mad", "mad_ci95_halfwidth",
            "mean_mciw", "mean_masv", "tmasv", "mean_essps"});
  for (const StudyAggregate& a : report.aggregates)
    w.row({a.scenario, a.prior, std::to_string(a.replicates), fmt17(a.mean.mad),
           fmt17(a.mad_ci_halfwidth), fmt17(a.mean.mciw), fmt17(a.mean.masv),
           fmt17(a.mean.tmasv), fmt17(a.mean_essps)});
  std::cout << "study rows in " << cfg.csv_path << "\n";
  for (const StudyAggregate& a : report.aggregates)
    std::cout << a.scenario << " " << a.prior << ": mean MAD "
              << fmt4(a.mean.mad) << " +/- " << fmt4(a.mad_ci_halfwidth)
              << ", mean MCIW " << fmt4(a.mean.mciw) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally adaptive Bayesian trend filtering with shrinkage priors"};
  app.require_subcommand(1);

  FitOptions fit;
  fit.out_dir = default_out_dir();
  fit.sampler.threads = default_threads();
  CLI::App* cfit = app.add_subcommand("fit", "fit a trend model to a CSV series");
  cfit->add_option("--input", fit.input, "input csv")->required();
  cfit->add_option("--obs", fit.obs_name, "normal|poisson|binomial")->required();
  cfit->add_option("--prior", fit.prior_name, "normal|laplace|horseshoe");
  cfit->add_option("--order", fit.order, "difference order (1 or 2)");
  cfit->add_option("--zeta", fit.zeta_arg, "global-scale hyperparameter or 'auto'");
  cfit->add_option("--alpha", fit.alpha, "tail probability for auto calibration");
  cfit->add_option("--sigma-scale", fit.sigma_scale, "noise sd prior scale");
  cfit->add_option("--x-col", fit.x_col);
  cfit->add_option("--y-col", fit.y_col);
  cfit->add_option("--m-col", fit.m_col);
  cfit->add_option("--out", fit.out_dir, "output directory");
  cfit->add_flag("--save-draws", fit.save_draws, "write raw thinned draws");
  cfit->add_option("--seed", fit.sampler.seed, "random seed");
  cfit->add_option("--threads", fit.sampler.threads, "chain-level parallelism");
  add_sampler_flags(cfit, fit.sampler);

  std::string cal_input, cal_obs, cal_out;
  int cal_order = 1;
  double cal_alpha = 0.05, cal_densify = 1.0;
  std::string cal_x = "x", cal_y = "y", cal_m = "m";
  CLI::App* ccal = app.add_subcommand(
      "calibrate", "derive the global smoothing hyperparameter from data");
  ccal->add_option("--input", cal_input)->required();
  ccal->add_option("--obs", cal_obs)->required();
  ccal->add_option("--order", cal_order);
  ccal->add_option("--alpha", cal_alpha);
  ccal->add_option("--densify-factor", cal_densify,
                   "also report zeta rescaled for a denser grid");
  ccal->add_option("--x-col", cal_x);
  ccal->add_option("--y-col", cal_y);
  ccal->add_option("--m-col", cal_m);
  ccal->add_option("--out", cal_out);

  SimulateOptions sim;
  sim.out_dir = default_out_dir();
  sim.threads = default_threads();
  CLI::App* csim = app.add_subcommand(
      "simulate", "benchmark study on simulated trends, or a zeta sweep");
  csim->add_option("--scenario", sim.scenario, "constant|piecewise|smooth-gp|varying");
  csim->add_option("--obs", sim.obs_name, "normal|poisson|binomial");
  csim->add_option("--sigma", sim.sigma, "noise sd for normal scenarios");
  csim->add_option("--n", sim.n, "grid size");
  csim->add_option("--replicates", sim.replicates);
  csim->add_option("--priors", sim.priors_arg, "comma-separated prior list");
  csim->add_option("--zeta", sim.zeta, "global-scale hyperparameter for fits");
  csim->add_option("--seed", sim.seed);
  csim->add_option("--threads", sim.threads, "replicate-level parallelism");
  csim->add_option("--out", sim.out_dir);
  csim->add_option("--sweep-input", sim.sweep_input,
                   "dataset for a prior-sensitivity sweep over zeta");
  csim->add_option("--sweep-zetas", sim.sweep_zetas, "comma-separated zeta values");
  csim->add_option("--order", sim.order, "difference order for sweep fits");
  csim->add_option("--x-col", sim.x_col);
  csim->add_option("--y-col", sim.y_col);
  csim->add_option("--m-col", sim.m_col);
  add_sampler_flags(csim, sim.sampler);

  std::string cp_fit_dir, cp_draws, cp_out;
  CLI::App* ccp = app.add_subcommand(
      "changepoint", "posterior over change-point locations from saved draws");
  ccp->add_option("--fit-dir", cp_fit_dir, "fit output directory with draws.csv");
  ccp->add_option("--draws", cp_draws, "draws.csv path");
  ccp->add_option("--out", cp_out);

  std::string diag_draws, diag_out;
  CLI::App* cdiag = app.add_subcommand(
      "diagnose", "convergence diagnostics from saved draws");
  cdiag->add_option("--draws", diag_draws)->required();
  cdiag->add_option("--out", diag_out);

  try {
    app.parse(argc, argv);
    if (cfit->parsed()) return cmd_fit(fit);
    if (ccal->parsed())
      return cmd_calibrate(cal_input, cal_obs, cal_order, cal_alpha, cal_x,
                           cal_y, cal_m, cal_densify, cal_out);
    if (csim->parsed()) return cmd_simulate(sim);
    if (ccp->parsed()) return cmd_changepoint(cp_fit_dir, cp_draws, cp_out);
    if (cdiag->parsed()) return cmd_diagnose(diag_draws, diag_out);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const SamplerError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
