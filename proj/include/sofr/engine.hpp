#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "sofr/design.hpp"
#include "sofr/prior.hpp"
#include "sofr/state.hpp"

namespace sofr::vem {

// Per-fit read-only quantities shared by all updates.
struct Problem {
  const DesignMatrix* design = nullptr;
  Eigen::VectorXd y;
  Eigen::VectorXd Wty;   // W' y
  Eigen::VectorXd Xsty;  // Xs' y
  double yty = 0.0;
  int n = 0;
  std::vector<int> col_block;  // design column -> covariate index

  int total_coef() const { return design->total_coef(); }
  int p() const { return design->p(); }
  int q() const { return design->q(); }
};

Problem make_problem(const DesignMatrix& design, const Eigen::VectorXd& y);

VariationalState init_state(const Problem& prob, const PriorConfig& prior);

// E(Gamma W'W Gamma) = (W'W) o Omega with Omega = pp' + diag(p)(I - diag(p))
// expanded blockwise (each covariate's probability replicated over its
// coefficients).
Eigen::MatrixXd expected_gamma_wtw(const Eigen::VectorXd& pz,
                                   const Eigen::MatrixXd& wtw,
                                   const std::vector<BlockIndex>& blocks);

// Coordinate updates. Each is the exact CAVI maximizer of its factor given
// the rest of the state; the scalar-block variants are active only when the
// design carries scalar covariates.
void update_b(VariationalState& state, const Problem& prob,
              const PriorConfig& prior);
void update_sigma2(VariationalState& state, const Problem& prob,
                   const PriorConfig& prior);
void update_tau2(VariationalState& state, const Problem& prob);
void update_theta(VariationalState& state, int j);
void update_z(VariationalState& state, const Problem& prob, int j);
void mstep_lambda(VariationalState& state, const Problem& prob);

void update_alpha(VariationalState& state, const Problem& prob,
                  const PriorConfig& prior);
void update_nu2(VariationalState& state, const Problem& prob);
void update_theta_u(VariationalState& state, int l);
void update_u(VariationalState& state, const Problem& prob, int l);
void mstep_lambda_alpha(VariationalState& state);

// E (y - W Gamma b)'(y - W Gamma b) under the current variational state; for
// designs with scalar covariates the X^S U alpha part and its cross term are
// included.
double expected_residual_quadform(const VariationalState& state,
                                  const Problem& prob);

ElboTerms compute_elbo(const VariationalState& state, const Problem& prob,
                       const PriorConfig& prior);

// Algorithm driver: b, (alpha,) sigma^2, tau^2, (nu^2,) per-j theta/Z,
// (per-l theta_u/u,) lambda M-step(s), ELBO; stops when the ELBO increment
// drops to the tolerance or max_iter is reached (non-convergence is a
// reported state, not an error).
FitOutcome fit(const DesignMatrix& design, const Eigen::VectorXd& y,
               const PriorConfig& prior);
FitOutcome fit_partial(const DesignMatrix& design, const Eigen::VectorXd& y,
                       const PriorConfig& prior);

// Multi-start driver: restart 0 uses the configured pz initialization,
// restarts >= 1 draw inclusion probabilities uniformly from {0,1}; returns
// the run with the highest final ELBO (ties: fewest selected covariates,
// then lowest restart index).
FitOutcome restart_fit(const DesignMatrix& design, const Eigen::VectorXd& y,
                       const PriorConfig& prior, int n_restarts,
                       std::uint64_t seed);

}  // namespace sofr::vem
