// Independent reference implementations used only by tests: a doubling
// trapezoid integrator (Romberg), direct quadrature of the GIG density,
// brute-force enumeration of Z expectations, and a derivative-free
// coordinate maximizer. None of these share code paths with the library
// routines they check.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

// Romberg integration by repeated trapezoid halving with Richardson
// extrapolation. abs_floor guards convergence on integrands whose value
// nearly cancels; min_level forces enough panels to resolve narrow peaks.
inline double romberg(const std::function<double(double)>& f, double a,
                      double b, double rel_tol = 1e-12, int max_level = 24,
                      double abs_floor = 0.0, int min_level = 10) {
  std::vector<std::vector<double>> r(1);
  r[0].push_back(0.5 * (b - a) * (f(a) + f(b)));
  double h = b - a;
  for (int level = 1; level < max_level; ++level) {
    h *= 0.5;
    double sum = 0.0;
    const long points = 1L << (level - 1);
    for (long i = 0; i < points; ++i) sum += f(a + (2 * i + 1) * h);
    r.emplace_back();
    r[level].push_back(0.5 * r[level - 1][0] + h * sum);
    for (int k = 1; k <= level; ++k) {
      const double factor = std::pow(4.0, k);
      r[level].push_back(
          (factor * r[level][k - 1] - r[level - 1][k - 1]) / (factor - 1.0));
    }
    const double cur = r[level][level];
    const double prevv = r[level - 1][level - 1];
    if (level >= min_level &&
        std::abs(cur - prevv) <=
            std::max(rel_tol * std::abs(cur), abs_floor))
      return cur;
  }
  return r.back().back();
}

// GIG(1/2, chi, psi) density in x, evaluated through its logarithm.
inline double gig_log_density(double x, double chi, double psi) {
  const double omega = std::sqrt(chi * psi);
  const double log_k_half =
      0.5 * (std::log(M_PI / 2.0) - std::log(omega)) - omega;
  return 0.25 * (std::log(psi) - std::log(chi)) - std::log(2.0) - log_k_half -
         0.5 * std::log(x) - 0.5 * (chi / x + psi * x);
}

// E h(x) for the GIG(1/2, chi, psi) law by Romberg over u = log x, with the
// window grown until the density tails are negligible.
inline double gig_expectation(const std::function<double(double)>& h,
                              double chi, double psi) {
  const double mode_u = 0.5 * (std::log(chi) - std::log(psi));
  auto log_integrand = [&](double u) {
    return gig_log_density(std::exp(u), chi, psi) + u;  // du = dx / x
  };
  double peak = log_integrand(mode_u);
  double lo = mode_u, hi = mode_u;
  while (log_integrand(lo) - peak > -65.0) {
    lo -= 0.5;
    peak = std::max(peak, log_integrand(lo));
  }
  while (log_integrand(hi) - peak > -65.0) {
    hi += 0.5;
    peak = std::max(peak, log_integrand(hi));
  }
  auto weight = [&](double u) { return std::exp(log_integrand(u) - peak); };
  const double z = romberg(weight, lo, hi, 1e-13);
  // the h-weighted integral can nearly cancel, so its convergence floor is
  // tied to the mass integral's scale
  const double zh =
      romberg([&](double u) { return h(std::exp(u)) * weight(u); }, lo, hi,
              1e-13, 24, 1e-13 * z);
  return zh / z;
}

// Exact expectation of Gamma W'W Gamma by summing all 2^p configurations.
inline Eigen::MatrixXd enumerate_gamma_wtw(const Eigen::VectorXd& pz,
                                           const Eigen::MatrixXd& wtw,
                                           const std::vector<int>& col_block) {
  const int p = static_cast<int>(pz.size());
  const int total = static_cast<int>(wtw.rows());
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(total, total);
  for (int mask = 0; mask < (1 << p); ++mask) {
    double prob = 1.0;
    for (int j = 0; j < p; ++j)
      prob *= (mask >> j & 1) ? pz[j] : 1.0 - pz[j];
    Eigen::VectorXd gamma(total);
    for (int c = 0; c < total; ++c)
      gamma[c] = (mask >> col_block[c] & 1) ? 1.0 : 0.0;
    acc += prob * (gamma.asDiagonal() * wtw * gamma.asDiagonal());
  }
  return acc;
}

// E_{q(Z)} |y - W Gamma b|^2 at a fixed coefficient vector b, by enumeration.
inline double enumerate_residual_quadform(const Eigen::VectorXd& pz,
                                          const Eigen::MatrixXd& w,
                                          const Eigen::VectorXd& y,
                                          const Eigen::VectorXd& b,
                                          const std::vector<int>& col_block) {
  const int p = static_cast<int>(pz.size());
  double acc = 0.0;
  for (int mask = 0; mask < (1 << p); ++mask) {
    double prob = 1.0;
    for (int j = 0; j < p; ++j)
      prob *= (mask >> j & 1) ? pz[j] : 1.0 - pz[j];
    Eigen::VectorXd gb = b;
    for (int c = 0; c < b.size(); ++c)
      if (!(mask >> col_block[c] & 1)) gb[c] = 0.0;
    acc += prob * (y - w * gb).squaredNorm();
  }
  return acc;
}

// Derivative-free maximizer: cyclic coordinate ascent with golden-section
// line search on each coordinate. Enough for smooth strictly concave
// objectives.
inline Eigen::VectorXd coordinate_maximize(
    const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd x,
    double span = 10.0, int sweeps = 600, double tol = 1e-12) {
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double moved = 0.0;
    for (int i = 0; i < x.size(); ++i) {
      double lo = x[i] - span, hi = x[i] + span;
      auto value = [&](double v) {
        Eigen::VectorXd probe = x;
        probe[i] = v;
        return f(probe);
      };
      double c = hi - golden * (hi - lo);
      double d = lo + golden * (hi - lo);
      double fc = value(c), fd = value(d);
      while (hi - lo > tol) {
        if (fc > fd) {
          hi = d;
          d = c;
          fd = fc;
          c = hi - golden * (hi - lo);
          fc = value(c);
        } else {
          lo = c;
          c = d;
          fc = fd;
          d = lo + golden * (hi - lo);
          fd = value(d);
        }
      }
      const double best = 0.5 * (lo + hi);
      moved = std::max(moved, std::abs(best - x[i]));
      x[i] = best;
    }
    span = std::max(1e-6, std::min(span, 4.0 * moved + 1e-6));
    if (moved < 1e-13) break;
  }
  return x;
}

// Exact Gram matrix of the cubic Bernstein basis on [0,1] (the K = 4 clamped
// B-spline system): integral of b_i b_j = C(3,i) C(3,j) / (C(6,i+j) * 7).
inline Eigen::MatrixXd bernstein_cubic_gram() {
  auto choose = [](int n, int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
  };
  Eigen::MatrixXd j(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      j(a, b) = choose(3, a) * choose(3, b) / (choose(6, a + b) * 7.0);
  return j;
}

}  // namespace oracle
