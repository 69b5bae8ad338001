#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace sofr {

struct FunctionalCovariate {
  std::string name;
  Eigen::VectorXd grid;    // n_t strictly increasing points
  Eigen::MatrixXd values;  // n x n_t, row per observation
};

// Response, functional covariates on dense common-per-covariate grids, and an
// optional scalar covariate block (0 columns when absent).
struct FunctionalDataset {
  Eigen::VectorXd y;
  std::vector<FunctionalCovariate> covariates;
  Eigen::MatrixXd scalars;  // n x q
  std::vector<std::string> scalar_names;

  int n() const { return static_cast<int>(y.size()); }
  int p() const { return static_cast<int>(covariates.size()); }
  int q() const { return static_cast<int>(scalars.cols()); }
};

void validate(const FunctionalDataset& data);

// Pointwise means/SDs removed from each covariate plus the response mean;
// applying then inverting recovers the data exactly.
struct StandardizationRecord {
  std::vector<Eigen::VectorXd> mean_curves;  // per covariate, on its grid
  std::vector<Eigen::VectorXd> sd_curves;
  Eigen::VectorXd scalar_means;
  Eigen::VectorXd scalar_sds;
  double y_mean = 0.0;
};

// Functional covariates scaled to pointwise mean 0 / SD 1 (sample SD,
// divisor n-1), scalar covariates likewise, response centered.
std::pair<FunctionalDataset, StandardizationRecord> standardize(
    const FunctionalDataset& data);

FunctionalDataset unstandardize(const FunctionalDataset& data,
                                const StandardizationRecord& record);

}  // namespace sofr
