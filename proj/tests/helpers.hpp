// Shared builders for engine-level tests: random span-generated datasets,
// designs, and consistent variational states.
#pragma once

#include <string>
#include <vector>

#include "sofr/basis.hpp"
#include "sofr/dataset.hpp"
#include "sofr/design.hpp"
#include "sofr/engine.hpp"
#include "sofr/rng.hpp"
#include "sofr/special.hpp"

namespace helpers {

struct Instance {
  sofr::FunctionalDataset data;
  std::vector<sofr::BasisSystem> bases;
  sofr::DesignMatrix design;
  Eigen::VectorXd y;
};

// dataset whose covariates are exact basis expansions with random
// coefficients; response is random (not tied to the covariates)
inline Instance random_instance(int n, int p, int k, std::uint64_t seed,
                                int q = 0, int n_t = 30) {
  sofr::Rng rng(seed);
  Instance inst;
  const Eigen::VectorXd grid = sofr::linspace(0.0, 1.0, n_t);
  for (int j = 0; j < p; ++j) {
    sofr::BasisSystem basis = sofr::make_basis(0.0, 1.0, k, 3, grid);
    Eigen::MatrixXd coef(n, k);
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < k; ++c) coef(i, c) = rng.normal(0.0, 2.0);
    sofr::FunctionalCovariate cov;
    cov.name = "x" + std::to_string(j + 1);
    cov.grid = grid;
    cov.values = coef * basis.values.transpose();
    inst.data.covariates.push_back(std::move(cov));
    inst.bases.push_back(std::move(basis));
  }
  if (q > 0) {
    inst.data.scalars.resize(n, q);
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < q; ++l) inst.data.scalars(i, l) = rng.normal(0.0, 1.5);
    for (int l = 0; l < q; ++l)
      inst.data.scalar_names.push_back("s" + std::to_string(l + 1));
  }
  inst.data.y.resize(n);
  for (int i = 0; i < n; ++i) inst.data.y[i] = rng.normal(0.0, 1.0);
  inst.design = sofr::build_design(inst.data, inst.bases);
  inst.y = inst.data.y;
  return inst;
}

// a consistent state reached by running a few VEM iterations from a random
// inclusion initialization
inline sofr::VariationalState warmed_state(const sofr::vem::Problem& prob,
                                           const sofr::PriorConfig& prior,
                                           std::uint64_t seed, int sweeps = 3) {
  sofr::Rng rng(seed);
  sofr::PriorConfig warm = prior;
  warm.pz_init_mode = sofr::PzInit::Vector;
  warm.pz_init.resize(prob.p());
  for (int j = 0; j < prob.p(); ++j) warm.pz_init[j] = 0.2 + 0.6 * rng.uniform();
  warm.pu_init.resize(prob.q());
  for (int l = 0; l < prob.q(); ++l) warm.pu_init[l] = 0.2 + 0.6 * rng.uniform();

  sofr::VariationalState state = sofr::vem::init_state(prob, warm);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    sofr::vem::update_b(state, prob, warm);
    if (prob.q() > 0) sofr::vem::update_alpha(state, prob, warm);
    sofr::vem::update_sigma2(state, prob, warm);
    sofr::vem::update_tau2(state, prob);
    if (prob.q() > 0) sofr::vem::update_nu2(state, prob);
    for (int j = 0; j < prob.p(); ++j) {
      sofr::vem::update_theta(state, j);
      sofr::vem::update_z(state, prob, j);
    }
    for (int l = 0; l < prob.q(); ++l) {
      sofr::vem::update_theta_u(state, l);
      sofr::vem::update_u(state, prob, l);
    }
    sofr::vem::mstep_lambda(state, prob);
    if (prob.q() > 0) sofr::vem::mstep_lambda_alpha(state);
  }
  return state;
}

}  // namespace helpers
