#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "sofr/errors.hpp"
#include "sofr/special.hpp"

using namespace sofr;

namespace {
constexpr double kEulerGamma = 0.57721566490153286061;
}

TEST_CASE("digamma matches known values") {
  CHECK(digamma(1.0) == doctest::Approx(-kEulerGamma).epsilon(1e-13));
  CHECK(digamma(0.5) ==
        doctest::Approx(-kEulerGamma - 2.0 * std::log(2.0)).epsilon(1e-13));
  CHECK(digamma(2.0) == doctest::Approx(1.0 - kEulerGamma).epsilon(1e-13));
  // recurrence psi(x+1) = psi(x) + 1/x over a range of arguments
  for (double x : {0.03, 0.31, 1.7, 5.5, 23.0, 811.0})
    CHECK(digamma(x + 1.0) == doctest::Approx(digamma(x) + 1.0 / x).epsilon(1e-12));
  CHECK_THROWS_AS(digamma(0.0), InputError);
  CHECK_THROWS_AS(digamma(-1.5), InputError);
}

TEST_CASE("log_gamma agrees with the standard library") {
  for (double x : {1e-6, 0.02, 0.5, 1.0, 1.5, 2.0, 3.7, 9.99, 10.5, 120.0, 5e4}) {
    const double ref = std::lgamma(x);
    CHECK(log_gamma(x) == doctest::Approx(ref).epsilon(1e-12));
  }
  CHECK_THROWS_AS(log_gamma(0.0), InputError);
}

TEST_CASE("digamma is the derivative of log_gamma") {
  for (double x : {0.7, 2.3, 15.0}) {
    const double h = 1e-6 * x;
    const double fd = (log_gamma(x + h) - log_gamma(x - h)) / (2.0 * h);
    CHECK(digamma(x) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("gig closed-form moments at chi = psi = 1") {
  const GigMoments m = gig_half_moments(1.0, 1.0);
  // quadrature oracle gives the same values from the density directly
  const double e_inv =
      oracle::gig_expectation([](double x) { return 1.0 / x; }, 1.0, 1.0);
  const double e_val =
      oracle::gig_expectation([](double x) { return x; }, 1.0, 1.0);
  CHECK(m.e_inverse == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(m.e_value == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(e_inv == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(e_val == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("gig moments satisfy Cauchy-Schwarz") {
  const GigMoments m = gig_half_moments(4.0, 9.0);
  CHECK(m.e_value * m.e_inverse >= 1.0);
}

TEST_CASE("gig moments match quadrature over a log-grid") {
  for (double lc = -6.0; lc <= 6.0; lc += 3.0)
    for (double lp = -6.0; lp <= 6.0; lp += 3.0) {
      const double chi = std::pow(10.0, lc);
      const double psi = std::pow(10.0, lp);
      const GigMoments m = gig_half_moments(chi, psi);
      const double e_val =
          oracle::gig_expectation([](double x) { return x; }, chi, psi);
      const double e_inv =
          oracle::gig_expectation([](double x) { return 1.0 / x; }, chi, psi);
      const double e_log =
          oracle::gig_expectation([](double x) { return std::log(x); }, chi, psi);
      CHECK(m.e_value == doctest::Approx(e_val).epsilon(1e-8));
      CHECK(m.e_inverse == doctest::Approx(e_inv).epsilon(1e-8));
      CHECK(std::abs(m.e_log - e_log) <=
            1e-8 * std::max(1.0, std::abs(e_log)));
    }
}

TEST_CASE("gig rejects non-positive parameters") {
  CHECK_THROWS_AS(gig_half_moments(0.0, 1.0), InputError);
  CHECK_THROWS_AS(gig_half_moments(1.0, -2.0), InputError);
}

TEST_CASE("log_bessel_k_half against the explicit formula") {
  for (double x : {1e-6, 0.1, 1.0, 30.0}) {
    const double ref = std::log(std::sqrt(M_PI / (2.0 * x)) * std::exp(-x));
    CHECK(log_bessel_k_half(x) == doctest::Approx(ref).epsilon(1e-12));
  }
}
