#include "sofr/special.hpp"

#include <cmath>

#include "sofr/errors.hpp"

namespace sofr {

double digamma(double x) {
  if (!(x > 0.0)) throw InputError("digamma: argument must be positive");
  double acc = 0.0;
  while (x < 10.0) {  // psi(x) = psi(x + 1) - 1/x
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      std::log(x) - 0.5 * inv -
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
  return acc + series;
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw InputError("log_gamma: argument must be positive");
  double acc = 0.0;
  while (x < 10.0) {  // lgamma(x) = lgamma(x + 1) - log(x)
    acc -= std::log(x);
    x += 1.0;
  }
  constexpr double half_log_2pi = 0.91893853320467274178;
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      (x - 0.5) * std::log(x) - x + half_log_2pi +
      inv * (1.0 / 12.0 -
             inv2 * (1.0 / 360.0 -
                     inv2 * (1.0 / 1260.0 -
                             inv2 * (1.0 / 1680.0 - inv2 * (1.0 / 1188.0)))));
  return acc + series;
}

double log_bessel_k_half(double x) {
  if (!(x > 0.0)) throw InputError("log_bessel_k_half: argument must be positive");
  constexpr double log_pi_over_2 = 0.45158270528945486473;
  return 0.5 * (log_pi_over_2 - std::log(x)) - x;
}

namespace {

template <class F>
double simpson_rec(const F& f, double a, double m, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

GigMoments gig_half_moments(double chi, double psi) {
  if (!(chi > 0.0) || !(psi > 0.0))
    throw InputError("gig_half_moments: chi and psi must be positive");

  GigMoments m;
  m.e_value = std::sqrt(chi / psi) + 1.0 / psi;
  m.e_inverse = std::sqrt(psi / chi);

  // Substituting x = sqrt(chi/psi) e^s turns the GIG(1/2, chi, psi) density
  // into g(s) ∝ exp(s/2 - 2w sinh^2(s/2)) with w = sqrt(chi psi), so
  // E(log x) = 0.5 log(chi/psi) + E(s).
  const double omega = std::sqrt(chi) * std::sqrt(psi);
  auto log_g = [omega](double s) {
    const double sh = std::sinh(0.5 * s);
    return 0.5 * s - 2.0 * omega * sh * sh;
  };
  const double s_peak = std::asinh(0.5 / omega);
  const double peak = log_g(s_peak);
  auto g = [&](double s) { return std::exp(log_g(s) - peak); };

  double lo = s_peak, hi = s_peak;
  while (log_g(lo) - peak > -60.0 && s_peak - lo < 400.0) lo -= 1.0;
  while (log_g(hi) - peak > -60.0 && hi - s_peak < 400.0) hi += 1.0;

  const double z0 = adaptive_simpson(g, lo, hi, 1e-12);
  const double z1 =
      adaptive_simpson([&](double s) { return s * g(s); }, lo, hi, 1e-12);
  m.e_log = 0.5 * (std::log(chi) - std::log(psi)) + z1 / z0;
  return m;
}

}  // namespace sofr
