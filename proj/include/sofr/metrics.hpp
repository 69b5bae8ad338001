#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sofr/engine.hpp"
#include "sofr/state.hpp"

namespace sofr::metrics {

// mean squared prediction error
double mse(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat);

// EMISE_j = (1/S) sum_s (T/n_t) sum_m (xi_j(t_m) - xihat_j^s(t_m))^2
std::vector<double> emise(
    const std::vector<Eigen::VectorXd>& true_curves,
    const std::vector<std::vector<Eigen::VectorXd>>& estimated_per_replicate,
    double t_length);

// R^2_a = 1 - (n-1) RSS / ((n - selected*K) TSS); errors out when the
// selected parameter count exhausts the degrees of freedom
double adjusted_r2(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat,
                   int selected_count_times_k);

// selection proportion per covariate across replicates
std::vector<double> selection_table(
    const std::vector<std::vector<int>>& selected_per_replicate);

// n RSS / (n - tr(H))^2 with tr(H) the trace of the variational posterior
// mean map y -> yhat on the standardized scale
double gcv(const VariationalState& state, const vem::Problem& prob);

// K whose GCV point lies farthest from the line joining the first and last
// points of the curve, in normalized coordinates; ties break to smallest K
int elbow_select(const std::vector<int>& num_basis_values,
                 const std::vector<double>& gcv_values);

}  // namespace sofr::metrics
