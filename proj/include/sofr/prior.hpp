#pragma once

#include <vector>

namespace sofr {

enum class PzInit { AllOne, Random, Vector };

// Hyperparameters and run controls for the variational EM fit.
struct PriorConfig {
  double delta1 = 0.01;   // inverse-gamma shape on sigma^2
  double delta2 = 0.01;   // inverse-gamma rate on sigma^2
  double lambda2_init = 1.0;
  double tol = 0.01;      // absolute ELBO increment threshold
  int max_iter = 100;
  PzInit pz_init_mode = PzInit::AllOne;
  std::vector<double> pz_init;       // used when mode == Vector
  std::vector<double> pu_init;       // scalar-block analog; empty = all-one
  double sigma2_mean_init = -1.0;    // <= 0: sample variance of the response
  double jitter = 0.0;               // ridge added to Q before factorization

  void validate() const;
};

}  // namespace sofr
