#include "sofr/design.hpp"

#include "sofr/errors.hpp"

namespace sofr {

DesignMatrix build_design(const FunctionalDataset& data,
                          const std::vector<BasisSystem>& bases) {
  validate(data);
  if (bases.size() != data.covariates.size())
    throw InputError("build_design: need one basis per covariate");

  int total = 0;
  for (const auto& basis : bases) total += basis.num_basis;

  DesignMatrix design;
  design.W.resize(data.n(), total);
  design.blocks.reserve(bases.size());

  int offset = 0;
  for (int j = 0; j < data.p(); ++j) {
    const BasisSystem& basis = bases[j];
    if (basis.grid.size() != data.covariates[j].grid.size() ||
        (basis.grid - data.covariates[j].grid).cwiseAbs().maxCoeff() > 0.0)
      throw InputError("build_design: basis grid does not match covariate grid");
    const CurveCoefficients fit = smooth_fit(data.covariates[j].values, basis);
    design.W.middleCols(offset, basis.num_basis) = fit.coef * basis.gram;
    design.blocks.push_back({offset, basis.num_basis});
    offset += basis.num_basis;
  }

  design.WtW = design.W.transpose() * design.W;
  design.WtW = 0.5 * (design.WtW + design.WtW.transpose()).eval();
  design.scalars = data.scalars;
  if (data.q() > 0) {
    design.XstXs = design.scalars.transpose() * design.scalars;
    design.XstXs = 0.5 * (design.XstXs + design.XstXs.transpose()).eval();
  } else {
    design.XstXs.resize(0, 0);
  }
  return design;
}

}  // namespace sofr
