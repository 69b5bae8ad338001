#pragma once

#include <Eigen/Dense>
#include <vector>

namespace sofr {

// Probabilities are clamped away from {0,1} so Bernoulli entropies and the
// Omega expectation stay finite.
constexpr double kProbClamp = 1e-12;
// Floor for the GIG chi parameter; the update is improper at chi = 0.
constexpr double kChiFloor = 1e-12;

// All variational-distribution parameters. The alpha/u/nu^2 family is empty
// (size-0) for scalar-free fits.
struct VariationalState {
  // q(b) ~ MVN
  Eigen::VectorXd mu_b;
  Eigen::MatrixXd sigma_b;
  // q(Z_j) ~ Bernoulli(pz_j)
  Eigen::VectorXd pz;
  // q(theta_j) ~ Beta(theta_a_j, theta_b_j)
  Eigen::VectorXd theta_a, theta_b;
  // q(sigma^2) ~ inverse-gamma
  double delta1_star = 0.0, delta2_star = 0.0;
  // q(tau^2_kj) ~ GIG(1/2, chi, psi), flattened per coefficient
  Eigen::VectorXd gig_chi, gig_psi, gig_e_log;
  // M-step point estimates
  Eigen::VectorXd lambda2;

  // scalar-covariate block
  Eigen::VectorXd mu_alpha;
  Eigen::MatrixXd sigma_alpha;
  Eigen::VectorXd pu;
  Eigen::VectorXd theta_u_a, theta_u_b;
  Eigen::VectorXd gig_alpha_chi, gig_alpha_psi, gig_alpha_e_log;
  Eigen::VectorXd lambda2_alpha;

  int q() const { return static_cast<int>(mu_alpha.size()); }
};

struct ElboTerms {
  double likelihood = 0.0;
  double z_block = 0.0;
  double b_block = 0.0;
  double theta_block = 0.0;
  double sigma2_block = 0.0;
  double tau2_block = 0.0;
  // partial-model additions, all zero when q == 0
  double u_block = 0.0;
  double alpha_block = 0.0;
  double theta_u_block = 0.0;
  double nu2_block = 0.0;

  double total() const {
    return likelihood + z_block + b_block + theta_block + sigma2_block +
           tau2_block + u_block + alpha_block + theta_u_block + nu2_block;
  }
};

struct ElboTrace {
  std::vector<double> values;
  std::vector<ElboTerms> terms;
};

struct FitOutcome {
  VariationalState state;
  ElboTrace trace;
  bool converged = false;
  int iterations = 0;
  double final_elbo = 0.0;
};

}  // namespace sofr
