#include "sofr/dataset.hpp"

#include <cmath>

#include "sofr/errors.hpp"

namespace sofr {

void validate(const FunctionalDataset& data) {
  const int n = data.n();
  if (n < 1) throw InputError("dataset: empty response");
  if (!data.y.allFinite()) throw InputError("dataset: non-finite response");
  for (const auto& cov : data.covariates) {
    if (cov.values.rows() != n)
      throw InputError("dataset: covariate '" + cov.name +
                       "' row count does not match response length");
    if (cov.values.cols() != cov.grid.size())
      throw InputError("dataset: covariate '" + cov.name +
                       "' column count does not match its grid");
    if (!cov.values.allFinite())
      throw InputError("dataset: non-finite values in covariate '" + cov.name + "'");
    for (int i = 0; i + 1 < cov.grid.size(); ++i)
      if (!(cov.grid[i + 1] > cov.grid[i]))
        throw InputError("dataset: grid of covariate '" + cov.name +
                         "' is not strictly increasing");
  }
  if (data.scalars.cols() > 0) {
    if (data.scalars.rows() != n)
      throw InputError("dataset: scalar covariate rows do not match response length");
    if (!data.scalars.allFinite())
      throw InputError("dataset: non-finite scalar covariate values");
  }
}

std::pair<FunctionalDataset, StandardizationRecord> standardize(
    const FunctionalDataset& data) {
  validate(data);
  const int n = data.n();
  if (n < 2) throw InputError("standardize: need at least two observations");

  FunctionalDataset out = data;
  StandardizationRecord record;
  record.y_mean = data.y.mean();
  out.y = data.y.array() - record.y_mean;

  for (int j = 0; j < data.p(); ++j) {
    const Eigen::MatrixXd& x = data.covariates[j].values;
    Eigen::VectorXd mean = x.colwise().mean();
    Eigen::MatrixXd centered = x.rowwise() - mean.transpose();
    Eigen::VectorXd sd =
        (centered.colwise().squaredNorm() / static_cast<double>(n - 1))
            .cwiseSqrt();
    for (int m = 0; m < sd.size(); ++m)
      if (!(sd[m] > 0.0))
        throw InputError("standardize: covariate '" +
                         data.covariates[j].name +
                         "' has zero pointwise SD (degenerate covariate)");
    out.covariates[j].values =
        centered.array().rowwise() / sd.transpose().array();
    record.mean_curves.push_back(std::move(mean));
    record.sd_curves.push_back(std::move(sd));
  }

  const int q = data.q();
  record.scalar_means.resize(q);
  record.scalar_sds.resize(q);
  for (int l = 0; l < q; ++l) {
    const Eigen::VectorXd col = data.scalars.col(l);
    const double mean = col.mean();
    const double sd = std::sqrt((col.array() - mean).square().sum() /
                                static_cast<double>(n - 1));
    if (!(sd > 0.0))
      throw InputError("standardize: scalar covariate has zero SD");
    record.scalar_means[l] = mean;
    record.scalar_sds[l] = sd;
    out.scalars.col(l) = (col.array() - mean) / sd;
  }

  return {std::move(out), std::move(record)};
}

FunctionalDataset unstandardize(const FunctionalDataset& data,
                                const StandardizationRecord& record) {
  if (static_cast<int>(record.mean_curves.size()) != data.p() ||
      record.scalar_means.size() != data.q())
    throw InputError("unstandardize: record does not match dataset");
  FunctionalDataset out = data;
  out.y = data.y.array() + record.y_mean;
  for (int j = 0; j < data.p(); ++j) {
    out.covariates[j].values =
        (data.covariates[j].values.array().rowwise() *
         record.sd_curves[j].transpose().array())
            .rowwise() +
        record.mean_curves[j].transpose().array();
  }
  for (int l = 0; l < data.q(); ++l)
    out.scalars.col(l) =
        data.scalars.col(l).array() * record.scalar_sds[l] +
        record.scalar_means[l];
  return out;
}

}  // namespace sofr
