#include "sofr/prior.hpp"

#include "sofr/errors.hpp"

namespace sofr {

void PriorConfig::validate() const {
  if (!(delta1 > 0.0) || !(delta2 > 0.0))
    throw InputError("prior: delta1 and delta2 must be positive");
  if (!(lambda2_init > 0.0))
    throw InputError("prior: lambda2_init must be positive");
  if (!(tol > 0.0)) throw InputError("prior: tol must be positive");
  if (max_iter < 1) throw InputError("prior: max_iter must be at least 1");
  if (jitter < 0.0) throw InputError("prior: jitter must be non-negative");
  if (pz_init_mode == PzInit::Vector)
    for (double v : pz_init)
      if (!(v >= 0.0 && v <= 1.0))
        throw InputError("prior: pz_init entries must lie in [0, 1]");
  for (double v : pu_init)
    if (!(v >= 0.0 && v <= 1.0))
      throw InputError("prior: pu_init entries must lie in [0, 1]");
}

}  // namespace sofr
