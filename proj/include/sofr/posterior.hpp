#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "sofr/basis.hpp"
#include "sofr/dataset.hpp"
#include "sofr/state.hpp"

namespace sofr {

struct Band {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct BandConfig {
  int n_samples = 200;
  double level = 0.95;
};

// User-facing fit summary. Curves live on the covariate grids; excluded
// covariates have identically-zero final (xi) curves.
struct FitResult {
  std::vector<std::string> names;
  std::vector<std::string> scalar_names;
  std::vector<Eigen::VectorXd> grids;

  std::vector<int> selected;              // p entries, 0/1
  std::vector<int> selected_scalar;       // q entries
  Eigen::VectorXd pz;
  Eigen::VectorXd pu;
  std::vector<Eigen::VectorXd> beta_curves;  // partial coefficients B mu_b
  std::vector<Eigen::VectorXd> xi_curves;    // final coefficients Z_hat * beta
  std::vector<Band> bands;                   // envelopes of sampled Z * beta
  Eigen::VectorXd alpha_hat;                 // final scalar effects u_hat * mu
  double intercept = 0.0;

  ElboTrace trace;
  bool converged = false;
  int iterations = 0;
  double final_elbo = 0.0;
  VariationalState state;  // snapshot for resampling / GCV
  bool standardized_scale = true;
};

// Mode of q(Z): selected iff probability strictly exceeds the threshold.
std::vector<int> select(const Eigen::VectorXd& pz, double threshold = 0.5);

// Coefficient curves B_j' mu_bj on each basis grid; with apply_selection the
// curves of excluded covariates are zeroed.
std::vector<Eigen::VectorXd> reconstruct_curves(
    const VariationalState& state, const std::vector<BasisSystem>& bases,
    bool apply_selection);

// beta0 = y_mean - sum_j trapz(mean_j * xi_j) - sum_l scalar_mean_l * alpha_l
double intercept_estimate(const std::vector<Eigen::VectorXd>& xi_curves,
                          const std::vector<Eigen::VectorXd>& grids,
                          const std::vector<Eigen::VectorXd>& mean_curves,
                          const Eigen::VectorXd& alpha_hat,
                          const Eigen::VectorXd& scalar_means, double y_mean);

// Pointwise quantile envelopes from joint draws of (Z_j, b_j); nearest-rank
// quantiles, deterministic under the seed.
std::vector<Band> credible_bands(const VariationalState& state,
                                 const std::vector<BasisSystem>& bases,
                                 int n_samples, double level,
                                 std::uint64_t seed);

// Predictions by trapezoid integration of the stored curves against the
// dataset (which must live on the same scale as the fit).
Eigen::VectorXd predict(const FitResult& fit, const FunctionalDataset& data);

// Standardized-scale summary of a fit outcome.
FitResult summarize_fit(const FitOutcome& outcome,
                        const std::vector<BasisSystem>& bases,
                        const FunctionalDataset& standardized_data,
                        const std::vector<std::string>& names,
                        const std::vector<std::string>& scalar_names,
                        const BandConfig& bands, std::uint64_t band_seed);

// Map a standardized-scale fit back to the original scale: curves and bands
// divided pointwise by the SD curves, scalar effects by the scalar SDs, and
// the intercept recomputed from original-scale means.
FitResult rescale_results(const FitResult& fit,
                          const StandardizationRecord& record);

}  // namespace sofr
