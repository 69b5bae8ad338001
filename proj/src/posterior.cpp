#include "sofr/posterior.hpp"

#include <algorithm>
#include <cmath>

#include "sofr/errors.hpp"
#include "sofr/rng.hpp"

namespace sofr {

std::vector<int> select(const Eigen::VectorXd& pz, double threshold) {
  std::vector<int> out(pz.size());
  for (int j = 0; j < pz.size(); ++j) out[j] = pz[j] > threshold ? 1 : 0;
  return out;
}

std::vector<Eigen::VectorXd> reconstruct_curves(
    const VariationalState& state, const std::vector<BasisSystem>& bases,
    bool apply_selection) {
  std::vector<Eigen::VectorXd> curves;
  curves.reserve(bases.size());
  int offset = 0;
  for (std::size_t j = 0; j < bases.size(); ++j) {
    const int k = bases[j].num_basis;
    Eigen::VectorXd curve = bases[j].values * state.mu_b.segment(offset, k);
    if (apply_selection && !(state.pz[static_cast<int>(j)] > 0.5))
      curve.setZero();
    curves.push_back(std::move(curve));
    offset += k;
  }
  return curves;
}

double intercept_estimate(const std::vector<Eigen::VectorXd>& xi_curves,
                          const std::vector<Eigen::VectorXd>& grids,
                          const std::vector<Eigen::VectorXd>& mean_curves,
                          const Eigen::VectorXd& alpha_hat,
                          const Eigen::VectorXd& scalar_means, double y_mean) {
  if (xi_curves.size() != mean_curves.size() || xi_curves.size() != grids.size())
    throw InputError("intercept_estimate: curve/mean/grid counts differ");
  double value = y_mean;
  for (std::size_t j = 0; j < xi_curves.size(); ++j)
    value -= trapezoid(mean_curves[j].cwiseProduct(xi_curves[j]), grids[j]);
  if (alpha_hat.size() != scalar_means.size())
    throw InputError("intercept_estimate: scalar effect/mean counts differ");
  for (int l = 0; l < alpha_hat.size(); ++l)
    value -= scalar_means[l] * alpha_hat[l];
  return value;
}

namespace {

// nearest-rank quantile of an already sorted sample
double nearest_rank(const std::vector<double>& sorted, double prob) {
  const int n = static_cast<int>(sorted.size());
  int rank = static_cast<int>(std::ceil(prob * n));
  rank = std::max(1, std::min(n, rank));
  return sorted[rank - 1];
}

}  // namespace

std::vector<Band> credible_bands(const VariationalState& state,
                                 const std::vector<BasisSystem>& bases,
                                 int n_samples, double level,
                                 std::uint64_t seed) {
  if (n_samples < 1) throw InputError("credible_bands: need at least one sample");
  if (!(level > 0.0 && level <= 1.0))
    throw InputError("credible_bands: level must lie in (0, 1]");
  const double q_lo = 0.5 * (1.0 - level);
  const double q_hi = 1.0 - q_lo;

  std::vector<Band> bands;
  bands.reserve(bases.size());
  Rng rng(seed);
  int offset = 0;
  for (std::size_t j = 0; j < bases.size(); ++j) {
    const int k = bases[j].num_basis;
    const int n_t = static_cast<int>(bases[j].grid.size());
    const Eigen::MatrixXd block = state.sigma_b.block(offset, offset, k, k);
    Eigen::LLT<Eigen::MatrixXd> llt(block);
    if (llt.info() != Eigen::Success)
      throw NumericalError("credible_bands: Sigma_b block not positive definite");
    const Eigen::MatrixXd chol = llt.matrixL();
    const Eigen::VectorXd mu = state.mu_b.segment(offset, k);
    const double pz = state.pz[static_cast<int>(j)];

    Eigen::MatrixXd samples(n_samples, n_t);
    Eigen::VectorXd draws(k);
    for (int s = 0; s < n_samples; ++s) {
      const bool z = rng.bernoulli(pz);
      for (int i = 0; i < k; ++i) draws[i] = rng.normal();
      if (z) {
        const Eigen::VectorXd b = mu + chol * draws;
        samples.row(s) = (bases[j].values * b).transpose();
      } else {
        samples.row(s).setZero();
      }
    }

    Band band;
    band.lower.resize(n_t);
    band.upper.resize(n_t);
    std::vector<double> column(n_samples);
    for (int m = 0; m < n_t; ++m) {
      for (int s = 0; s < n_samples; ++s) column[s] = samples(s, m);
      std::sort(column.begin(), column.end());
      band.lower[m] = nearest_rank(column, q_lo);
      band.upper[m] = nearest_rank(column, q_hi);
    }
    bands.push_back(std::move(band));
    offset += k;
  }
  return bands;
}

Eigen::VectorXd predict(const FitResult& fit, const FunctionalDataset& data) {
  if (static_cast<int>(fit.xi_curves.size()) != data.p())
    throw InputError("predict: fit/dataset covariate counts differ");
  const int n = data.n();
  Eigen::VectorXd yhat = Eigen::VectorXd::Constant(n, fit.intercept);
  for (int j = 0; j < data.p(); ++j) {
    const Eigen::VectorXd w =
        trapezoid_weights(data.covariates[j].grid)
            .cwiseProduct(fit.xi_curves[j]);
    yhat += data.covariates[j].values * w;
  }
  if (fit.alpha_hat.size() > 0) {
    if (fit.alpha_hat.size() != data.q())
      throw InputError("predict: fit/dataset scalar covariate counts differ");
    yhat += data.scalars * fit.alpha_hat;
  }
  return yhat;
}

FitResult summarize_fit(const FitOutcome& outcome,
                        const std::vector<BasisSystem>& bases,
                        const FunctionalDataset& standardized_data,
                        const std::vector<std::string>& names,
                        const std::vector<std::string>& scalar_names,
                        const BandConfig& bands, std::uint64_t band_seed) {
  FitResult fit;
  fit.names = names;
  fit.scalar_names = scalar_names;
  for (const auto& basis : bases) fit.grids.push_back(basis.grid);
  fit.pz = outcome.state.pz;
  fit.pu = outcome.state.pu;
  fit.selected = select(fit.pz);
  fit.selected_scalar = select(fit.pu);
  fit.beta_curves = reconstruct_curves(outcome.state, bases, false);
  fit.xi_curves = reconstruct_curves(outcome.state, bases, true);
  fit.alpha_hat = outcome.state.mu_alpha;
  for (int l = 0; l < fit.alpha_hat.size(); ++l)
    if (!fit.selected_scalar[l]) fit.alpha_hat[l] = 0.0;
  if (bands.n_samples > 0)
    fit.bands = credible_bands(outcome.state, bases, bands.n_samples,
                               bands.level, band_seed);
  // standardized covariates have zero means, so the intercept reduces to the
  // (zero) response mean
  fit.intercept = 0.0;
  fit.trace = outcome.trace;
  fit.converged = outcome.converged;
  fit.iterations = outcome.iterations;
  fit.final_elbo = outcome.final_elbo;
  fit.state = outcome.state;
  fit.standardized_scale = true;
  (void)standardized_data;
  return fit;
}

FitResult rescale_results(const FitResult& fit,
                          const StandardizationRecord& record) {
  if (record.mean_curves.size() != fit.beta_curves.size())
    throw InputError("rescale_results: record does not match fit covariates");
  if (record.scalar_means.size() != fit.alpha_hat.size())
    throw InputError("rescale_results: record does not match fit scalar block");

  FitResult out = fit;
  for (std::size_t j = 0; j < fit.beta_curves.size(); ++j) {
    const Eigen::VectorXd& sd = record.sd_curves[j];
    if (sd.size() != fit.beta_curves[j].size())
      throw InputError("rescale_results: SD curve length mismatch");
    out.beta_curves[j] = fit.beta_curves[j].cwiseQuotient(sd);
    out.xi_curves[j] = fit.xi_curves[j].cwiseQuotient(sd);
    if (!fit.bands.empty()) {
      out.bands[j].lower = fit.bands[j].lower.cwiseQuotient(sd);
      out.bands[j].upper = fit.bands[j].upper.cwiseQuotient(sd);
    }
  }
  for (int l = 0; l < fit.alpha_hat.size(); ++l)
    out.alpha_hat[l] = fit.alpha_hat[l] / record.scalar_sds[l];

  out.intercept =
      intercept_estimate(out.xi_curves, out.grids, record.mean_curves,
                         out.alpha_hat, record.scalar_means, record.y_mean);
  out.standardized_scale = false;
  return out;
}

}  // namespace sofr
