#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sofr/basis.hpp"
#include "sofr/dataset.hpp"

namespace sofr {

struct BlockIndex {
  int offset = 0;
  int size = 0;
};

// Regression design in the basis space: W_ij = J_j' A_ij stacked per
// covariate block, with the scalar covariate block carried alongside.
struct DesignMatrix {
  Eigen::MatrixXd W;    // n x sum_j K_j
  Eigen::MatrixXd WtW;
  std::vector<BlockIndex> blocks;  // covariate j -> column range
  Eigen::MatrixXd scalars;         // n x q
  Eigen::MatrixXd XstXs;           // q x q

  int n() const { return static_cast<int>(W.rows()); }
  int total_coef() const { return static_cast<int>(W.cols()); }
  int p() const { return static_cast<int>(blocks.size()); }
  int q() const { return static_cast<int>(scalars.cols()); }
};

// One basis per covariate; basis coefficients come from smooth_fit.
DesignMatrix build_design(const FunctionalDataset& data,
                          const std::vector<BasisSystem>& bases);

}  // namespace sofr
