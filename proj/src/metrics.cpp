#include "sofr/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "sofr/errors.hpp"

namespace sofr::metrics {

double mse(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) {
  if (y.size() != yhat.size() || y.size() == 0)
    throw InputError("mse: length mismatch or empty input");
  return (y - yhat).squaredNorm() / static_cast<double>(y.size());
}

std::vector<double> emise(
    const std::vector<Eigen::VectorXd>& true_curves,
    const std::vector<std::vector<Eigen::VectorXd>>& estimated_per_replicate,
    double t_length) {
  if (estimated_per_replicate.empty())
    throw InputError("emise: no replicates");
  const std::size_t p = true_curves.size();
  std::vector<double> out(p, 0.0);
  const double s_count = static_cast<double>(estimated_per_replicate.size());
  for (const auto& estimates : estimated_per_replicate) {
    if (estimates.size() != p)
      throw InputError("emise: replicate covariate count mismatch");
    for (std::size_t j = 0; j < p; ++j) {
      if (estimates[j].size() != true_curves[j].size())
        throw InputError("emise: curve length mismatch");
      const double n_t = static_cast<double>(true_curves[j].size());
      out[j] += (t_length / n_t) *
                (true_curves[j] - estimates[j]).squaredNorm() / s_count;
    }
  }
  return out;
}

double adjusted_r2(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat,
                   int selected_count_times_k) {
  if (y.size() != yhat.size() || y.size() < 2)
    throw InputError("adjusted_r2: length mismatch or too few observations");
  const double n = static_cast<double>(y.size());
  const double df = n - static_cast<double>(selected_count_times_k);
  if (!(df > 0.0))
    throw InputError("adjusted_r2: over-parameterized (selected * K >= n)");
  const double mean = y.mean();
  const double tss = (y.array() - mean).square().sum();
  if (!(tss > 0.0)) throw InputError("adjusted_r2: constant response");
  const double rss = (y - yhat).squaredNorm();
  return 1.0 - (n - 1.0) * rss / (df * tss);
}

std::vector<double> selection_table(
    const std::vector<std::vector<int>>& selected_per_replicate) {
  if (selected_per_replicate.empty())
    throw InputError("selection_table: no replicates");
  const std::size_t p = selected_per_replicate.front().size();
  std::vector<double> out(p, 0.0);
  for (const auto& selected : selected_per_replicate) {
    if (selected.size() != p)
      throw InputError("selection_table: replicate size mismatch");
    for (std::size_t j = 0; j < p; ++j)
      out[j] += static_cast<double>(selected[j]) /
                static_cast<double>(selected_per_replicate.size());
  }
  return out;
}

double gcv(const VariationalState& state, const vem::Problem& prob) {
  const auto& design = *prob.design;
  const int total = design.total_coef();
  Eigen::VectorXd ez(total);
  for (std::size_t j = 0; j < design.blocks.size(); ++j)
    ez.segment(design.blocks[j].offset, design.blocks[j].size)
        .setConstant(state.pz[static_cast<int>(j)]);

  // posterior mean map: yhat = W E(Gamma) Q^{-1} E(Gamma) W' y with
  // Q^{-1} = Sigma_b E(1/sigma^2)
  const double e_inv_sigma2 = state.delta1_star / state.delta2_star;
  const Eigen::MatrixXd q_inv = state.sigma_b * e_inv_sigma2;
  const Eigen::MatrixXd gwg =
      design.WtW.cwiseProduct(ez * ez.transpose());
  double tr_h = q_inv.cwiseProduct(gwg).sum();

  Eigen::VectorXd yhat = design.W * ez.cwiseProduct(state.mu_b);
  if (design.q() > 0) {
    const Eigen::MatrixXd m_inv = state.sigma_alpha * e_inv_sigma2;
    tr_h += m_inv
                .cwiseProduct(design.XstXs.cwiseProduct(state.pu *
                                                        state.pu.transpose()))
                .sum();
    yhat += design.scalars * state.pu.cwiseProduct(state.mu_alpha);
  }

  const double n = static_cast<double>(prob.n);
  if (!(n - tr_h > 0.0))
    throw NumericalError("gcv: effective degrees of freedom exhaust n");
  const double rss = (prob.y - yhat).squaredNorm();
  return n * rss / ((n - tr_h) * (n - tr_h));
}

int elbow_select(const std::vector<int>& num_basis_values,
                 const std::vector<double>& gcv_values) {
  const std::size_t m = num_basis_values.size();
  if (m == 0 || m != gcv_values.size())
    throw InputError("elbow_select: empty input or size mismatch");
  for (std::size_t i = 0; i + 1 < m; ++i)
    if (num_basis_values[i + 1] <= num_basis_values[i])
      throw InputError("elbow_select: basis sizes must be strictly increasing");
  if (m == 1) return num_basis_values[0];
  if (m == 2) {
    // no interior point; take the smaller GCV, ties to smallest K
    return gcv_values[1] < gcv_values[0] ? num_basis_values[1]
                                         : num_basis_values[0];
  }

  // normalized coordinates keep the choice invariant to affine rescaling of
  // the GCV axis
  const double k0 = num_basis_values.front();
  const double k_span = num_basis_values.back() - k0;
  const double g0 = gcv_values.front();
  double scale = gcv_values.back() - g0;
  if (scale == 0.0) {
    const auto [lo, hi] = std::minmax_element(gcv_values.begin(), gcv_values.end());
    scale = *hi - *lo;
  }
  if (scale == 0.0) return num_basis_values[1];  // flat curve, all ties

  const double c = (gcv_values.back() - g0) / scale;  // endpoint slope
  const double norm = std::sqrt(1.0 + c * c);
  int best = num_basis_values[1];
  double best_dist = -1.0;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double u = (num_basis_values[i] - k0) / k_span;
    const double v = (gcv_values[i] - g0) / scale;
    const double dist = std::abs(c * u - v) / norm;
    if (dist > best_dist) {
      best_dist = dist;
      best = num_basis_values[i];
    }
  }
  return best;
}

}  // namespace sofr::metrics
