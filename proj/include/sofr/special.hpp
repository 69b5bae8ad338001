#pragma once

namespace sofr {

// digamma(x) = d/dx log Gamma(x), x > 0. Upward recurrence into the
// asymptotic regime, then the Bernoulli series; absolute error < 1e-13.
double digamma(double x);

// log Gamma(x), x > 0. Same recurrence + Stirling series scheme.
double log_gamma(double x);

// log K_{1/2}(x) for x > 0, from K_{1/2}(x) = sqrt(pi/(2x)) e^{-x}.
double log_bessel_k_half(double x);

// Moments of the generalized inverse Gaussian distribution with order 1/2.
// e_value and e_inverse come from the closed half-order Bessel ratio
// K_{3/2}/K_{1/2}(w) = 1 + 1/w; e_log has no closed form and is computed by
// self-normalized adaptive quadrature of the log-transformed density.
struct GigMoments {
  double e_value;    // E(x)     = sqrt(chi/psi) + 1/psi
  double e_inverse;  // E(1/x)   = sqrt(psi/chi)
  double e_log;      // E(log x)
};

GigMoments gig_half_moments(double chi, double psi);

}  // namespace sofr
