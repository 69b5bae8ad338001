#include "sofr/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "sofr/design.hpp"
#include "sofr/engine.hpp"
#include "sofr/errors.hpp"
#include "sofr/metrics.hpp"
#include "sofr/rng.hpp"

namespace sofr::sim {

namespace {

// RNG substreams per generator, fixed so that datasets are pure functions of
// (parameters, seed)
enum Stream : std::uint64_t {
  kPopulationMeans = 0,
  kCovariateNoise = 1,
  kCoefficientHierarchy = 2,
  kScalarCovariates = 3,
  kScalarCoefficient = 4,
  kResponseNoise = 5,
};

constexpr double kGenLambda2 = 0.001;   // hierarchy regularization in studies 1/3
constexpr double kMinSignal = 0.5;      // redraw until the truth clears this

// coefficients for one relevant covariate drawn from the model hierarchy,
// redrawn until the curve sup-norm clears kMinSignal
Eigen::VectorXd draw_relevant_coefficients(const BasisSystem& basis,
                                           double sigma2, Rng& rng) {
  const int k = basis.num_basis;
  Eigen::VectorXd coef(k);
  while (true) {
    for (int i = 0; i < k; ++i) {
      const double tau2 = rng.exponential(0.5 * kGenLambda2);
      coef[i] = rng.normal(0.0, std::sqrt(sigma2 * tau2));
    }
    const Eigen::VectorXd curve = basis.values * coef;
    if (curve.cwiseAbs().maxCoeff() >= kMinSignal) return coef;
  }
}

FunctionalCovariate make_spline_covariate(const std::string& name,
                                          const BasisSystem& basis, int n,
                                          double mean_loc, double mean_sd,
                                          Rng& mean_rng, Rng& noise_rng) {
  const int k = basis.num_basis;
  Eigen::VectorXd center(k);
  for (int i = 0; i < k; ++i) center[i] = mean_rng.normal(mean_loc, mean_sd);
  Eigen::MatrixXd coef(n, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j)
      coef(i, j) = center[j] + noise_rng.normal(0.0, 10.0);
  FunctionalCovariate cov;
  cov.name = name;
  cov.grid = basis.grid;
  cov.values = coef * basis.values.transpose();
  return cov;
}

}  // namespace

SimulatedData gen_sim1(int n, double sigma2, std::uint64_t seed) {
  if (n < 2) throw InputError("gen_sim1: need n >= 2");
  const Eigen::VectorXd grid = linspace(0.0, 1.0, 100);
  const BasisSystem basis = make_basis(0.0, 1.0, 4, 3, grid);

  Rng mean_rng(seed, kPopulationMeans);
  Rng noise_rng(seed, kCovariateNoise);
  Rng coef_rng(seed, kCoefficientHierarchy);
  Rng eps_rng(seed, kResponseNoise);

  SimulatedData out;
  out.dataset.covariates.push_back(
      make_spline_covariate("x1", basis, n, 5.0, 10.0, mean_rng, noise_rng));
  out.dataset.covariates.push_back(
      make_spline_covariate("x2", basis, n, 2.0, 1.0, mean_rng, noise_rng));

  const Eigen::VectorXd b1 = draw_relevant_coefficients(basis, sigma2, coef_rng);
  out.truth.xi_curves.push_back(basis.values * b1);
  out.truth.xi_curves.push_back(Eigen::VectorXd::Zero(grid.size()));
  out.truth.alpha.resize(0);
  out.truth.intercept = 10.0;
  out.truth.relevant = {1, 0};

  out.dataset.y.resize(n);
  const Eigen::VectorXd w = trapezoid_weights(grid);
  const Eigen::VectorXd wxi = w.cwiseProduct(out.truth.xi_curves[0]);
  for (int i = 0; i < n; ++i)
    out.dataset.y[i] = out.truth.intercept +
                       out.dataset.covariates[0].values.row(i).dot(wxi) +
                       eps_rng.normal(0.0, std::sqrt(sigma2));
  return out;
}

SimulatedData gen_sim2(int n, double sigma2, std::uint64_t seed) {
  if (n < 2) throw InputError("gen_sim2: need n >= 2");
  const int n_t = 81;
  const Eigen::VectorXd grid = linspace(0.0, 1.0, n_t);

  // X(t) = 5 sum_{k=1}^{10} c_k gamma_k(t), c_k ~ N(0, k^-2),
  // gamma_1 = 1, gamma_{k+1}(t) = sqrt(2) cos(k pi t)
  Eigen::MatrixXd cosines(10, n_t);
  cosines.row(0).setOnes();
  for (int k = 1; k < 10; ++k)
    for (int m = 0; m < n_t; ++m)
      cosines(k, m) = std::sqrt(2.0) * std::cos(k * M_PI * grid[m]);

  Rng coef_rng(seed, kCovariateNoise);
  Rng eps_rng(seed, kResponseNoise);

  SimulatedData out;
  for (int j = 0; j < 4; ++j) {
    Eigen::MatrixXd scores(n, 10);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < 10; ++k)
        scores(i, k) = coef_rng.normal(0.0, 1.0 / (k + 1.0));
    FunctionalCovariate cov;
    cov.name = "x" + std::to_string(j + 1);
    cov.grid = grid;
    cov.values = 5.0 * scores * cosines;
    out.dataset.covariates.push_back(std::move(cov));
  }

  Eigen::VectorXd beta1(n_t), beta3(n_t);
  for (int m = 0; m < n_t; ++m) {
    beta1[m] = 2.0 * std::sin(M_PI * grid[m]);
    beta3[m] = 1.25 * std::sin(3.0 * M_PI * grid[m]);
  }
  out.truth.xi_curves = {beta1, Eigen::VectorXd::Zero(n_t), beta3,
                         Eigen::VectorXd::Zero(n_t)};
  out.truth.alpha.resize(0);
  out.truth.intercept = 20.0;
  out.truth.relevant = {1, 0, 1, 0};

  out.dataset.y.resize(n);
  const Eigen::VectorXd w = trapezoid_weights(grid);
  const Eigen::VectorXd w1 = w.cwiseProduct(beta1);
  const Eigen::VectorXd w3 = w.cwiseProduct(beta3);
  for (int i = 0; i < n; ++i)
    out.dataset.y[i] = out.truth.intercept +
                       out.dataset.covariates[0].values.row(i).dot(w1) +
                       out.dataset.covariates[2].values.row(i).dot(w3) +
                       eps_rng.normal(0.0, std::sqrt(sigma2));
  return out;
}

SimulatedData gen_sim3(int n, double sigma2, std::uint64_t seed) {
  if (n < 2) throw InputError("gen_sim3: need n >= 2");
  const Eigen::VectorXd grid = linspace(0.0, 1.0, 100);
  const BasisSystem basis = make_basis(0.0, 1.0, 6, 3, grid);

  Rng mean_rng(seed, kPopulationMeans);
  Rng noise_rng(seed, kCovariateNoise);
  Rng coef_rng(seed, kCoefficientHierarchy);
  Rng scalar_rng(seed, kScalarCovariates);
  Rng alpha_rng(seed, kScalarCoefficient);
  Rng eps_rng(seed, kResponseNoise);

  SimulatedData out;
  out.dataset.covariates.push_back(
      make_spline_covariate("x1", basis, n, 5.0, 10.0, mean_rng, noise_rng));
  out.dataset.covariates.push_back(
      make_spline_covariate("x2", basis, n, 2.0, 1.0, mean_rng, noise_rng));

  out.dataset.scalars.resize(n, 2);
  out.dataset.scalar_names = {"s1", "s2"};
  for (int i = 0; i < n; ++i) {
    out.dataset.scalars(i, 0) = scalar_rng.normal(10.0, 2.0);
    out.dataset.scalars(i, 1) = scalar_rng.normal(20.0, 2.0);
  }

  const Eigen::VectorXd b1 = draw_relevant_coefficients(basis, sigma2, coef_rng);
  out.truth.xi_curves.push_back(basis.values * b1);
  out.truth.xi_curves.push_back(Eigen::VectorXd::Zero(grid.size()));

  double alpha2 = 0.0;
  do {
    const double nu2 = alpha_rng.exponential(0.5 * kGenLambda2);
    alpha2 = alpha_rng.normal(0.0, std::sqrt(sigma2 * nu2));
  } while (std::abs(alpha2) < kMinSignal);
  out.truth.alpha.resize(2);
  out.truth.alpha << 0.0, alpha2;
  out.truth.intercept = 30.0;
  out.truth.relevant = {1, 0};
  out.truth.relevant_scalar = {0, 1};

  out.dataset.y.resize(n);
  const Eigen::VectorXd w = trapezoid_weights(grid);
  const Eigen::VectorXd wxi = w.cwiseProduct(out.truth.xi_curves[0]);
  for (int i = 0; i < n; ++i)
    out.dataset.y[i] = out.truth.intercept +
                       out.dataset.covariates[0].values.row(i).dot(wxi) +
                       out.dataset.scalars(i, 1) * alpha2 +
                       eps_rng.normal(0.0, std::sqrt(sigma2));
  return out;
}

SimulatedData generate(int study, int n, double sigma2, std::uint64_t seed) {
  switch (study) {
    case 1: return gen_sim1(n, sigma2, seed);
    case 2: return gen_sim2(n, sigma2, seed);
    case 3: return gen_sim3(n, sigma2, seed);
    default: throw InputError("generate: study must be 1, 2 or 3");
  }
}

FitSettings default_fit_settings(int study, double sigma2) {
  FitSettings settings;
  switch (study) {
    case 1: settings.num_basis = 4; break;
    case 2: settings.num_basis = 7; break;
    case 3: settings.num_basis = 6; break;
    default: throw InputError("default_fit_settings: study must be 1, 2 or 3");
  }
  settings.prior.sigma2_mean_init = sigma2;
  return settings;
}

FitResult run_pipeline(const FunctionalDataset& data,
                       const std::vector<BasisSystem>& bases,
                       const FitSettings& settings, std::uint64_t seed) {
  auto [standardized, record] = standardize(data);
  const DesignMatrix design = build_design(standardized, bases);
  FitOutcome outcome;
  if (settings.n_restarts > 1 ||
      settings.prior.pz_init_mode == PzInit::Random) {
    outcome = vem::restart_fit(design, standardized.y, settings.prior,
                               settings.n_restarts, seed);
  } else if (data.q() > 0) {
    outcome = vem::fit_partial(design, standardized.y, settings.prior);
  } else {
    outcome = vem::fit(design, standardized.y, settings.prior);
  }
  std::vector<std::string> names;
  for (const auto& cov : data.covariates) names.push_back(cov.name);
  const FitResult std_fit =
      summarize_fit(outcome, bases, standardized, names, data.scalar_names,
                    settings.bands, mix64(seed));
  return rescale_results(std_fit, record);
}

ReplicationReport replicate(const ScenarioSpec& scenario,
                            const FitSettings& settings, int n_threads) {
  if (scenario.replicates < 1)
    throw InputError("replicate: need at least one replicate");

  const SimulatedData probe =
      generate(scenario.study, scenario.n, scenario.sigma2, scenario.seed);
  std::vector<BasisSystem> bases;
  for (const auto& cov : probe.dataset.covariates)
    bases.push_back(make_basis(cov.grid[0], cov.grid[cov.grid.size() - 1],
                               settings.num_basis, 3, cov.grid));

  ReplicationReport report;
  report.scenario = scenario;
  report.rows.resize(scenario.replicates);

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    while (true) {
      const int s = next.fetch_add(1);
      if (s >= scenario.replicates) return;
      try {
        const SimulatedData sim = generate(scenario.study, scenario.n,
                                           scenario.sigma2, scenario.seed + s);
        const FitResult fit =
            run_pipeline(sim.dataset, bases, settings, scenario.seed + s);
        ReplicateRow row;
        row.selected = fit.selected;
        row.selected_scalar = fit.selected_scalar;
        row.mse = metrics::mse(sim.dataset.y, predict(fit, sim.dataset));
        const double t_len = bases[0].t_max - bases[0].t_min;
        for (int j = 0; j < sim.dataset.p(); ++j) {
          const Eigen::VectorXd diff =
              sim.truth.xi_curves[j] - fit.xi_curves[j];
          row.ise.push_back(t_len * diff.squaredNorm() /
                            static_cast<double>(diff.size()));
        }
        row.intercept = fit.intercept;
        row.converged = fit.converged;
        row.elbo = fit.final_elbo;
        report.rows[s] = std::move(row);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const int workers = std::max(1, std::min(n_threads, scenario.replicates));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  const int s_count = scenario.replicates;
  const int p = static_cast<int>(report.rows[0].selected.size());
  const int q = static_cast<int>(report.rows[0].selected_scalar.size());
  report.selection_prop.assign(p, 0.0);
  report.selection_prop_scalar.assign(q, 0.0);
  report.emise.assign(p, 0.0);
  for (const auto& row : report.rows) {
    report.mean_mse += row.mse / s_count;
    report.intercepts.push_back(row.intercept);
    for (int j = 0; j < p; ++j) {
      report.selection_prop[j] += static_cast<double>(row.selected[j]) / s_count;
      report.emise[j] += row.ise[j] / s_count;
    }
    for (int l = 0; l < q; ++l)
      report.selection_prop_scalar[l] +=
          static_cast<double>(row.selected_scalar[l]) / s_count;
  }
  std::vector<double> sorted = report.intercepts;
  std::sort(sorted.begin(), sorted.end());
  report.median_intercept =
      (s_count % 2 == 1)
          ? sorted[s_count / 2]
          : 0.5 * (sorted[s_count / 2 - 1] + sorted[s_count / 2]);
  return report;
}

}  // namespace sofr::sim
