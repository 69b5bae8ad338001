#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "sofr/basis.hpp"
#include "sofr/errors.hpp"
#include "sofr/rng.hpp"

using namespace sofr;

TEST_CASE("partition of unity on the clamped interior") {
  for (int k : {4, 5, 7, 12}) {
    const BasisSystem basis = make_basis(0.0, 1.0, k, 3, linspace(0.0, 1.0, 100));
    const Eigen::VectorXd row_sums = basis.values.rowwise().sum();
    CHECK((row_sums.array() - 1.0).abs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("gram matrix symmetry and positive semidefiniteness") {
  const BasisSystem basis = make_basis(0.0, 1.0, 4, 3, linspace(0.0, 1.0, 100));
  CHECK((basis.gram - basis.gram.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(basis.gram);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
  CHECK(basis.knots.size() == basis.num_basis + basis.degree + 1);
}

TEST_CASE("fine-grid gram matches the analytic Bernstein integrals") {
  // K = 4 cubic on [0,1] has no interior knots, i.e. the Bernstein basis
  const BasisSystem basis =
      make_basis(0.0, 1.0, 4, 3, linspace(0.0, 1.0, 100000));
  const Eigen::MatrixXd exact = oracle::bernstein_cubic_gram();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      CHECK(basis.gram(a, b) == doctest::Approx(exact(a, b)).epsilon(1e-6));
}

TEST_CASE("gram converges to the oracle as the grid doubles") {
  const Eigen::MatrixXd exact = oracle::bernstein_cubic_gram();
  double prev_err = 1e100;
  for (int n_t : {100, 200, 400, 800, 1600}) {
    const BasisSystem basis = make_basis(0.0, 1.0, 4, 3, linspace(0.0, 1.0, n_t));
    const double err = (basis.gram - exact).cwiseAbs().maxCoeff() /
                       exact.cwiseAbs().maxCoeff();
    CHECK(err < prev_err);
    prev_err = err;
  }
}

TEST_CASE("smooth_fit recovers representable curves exactly") {
  const BasisSystem basis = make_basis(0.0, 1.0, 6, 3, linspace(0.0, 1.0, 60));
  Rng rng(7);
  Eigen::MatrixXd coef(3, 6);
  for (int i = 0; i < coef.size(); ++i) coef(i / 6, i % 6) = rng.normal(0.0, 2.0);
  const Eigen::MatrixXd curves = coef * basis.values.transpose();
  const CurveCoefficients fit = smooth_fit(curves, basis);
  CHECK((fit.coef - coef).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("smooth_fit reproduces constants through partition of unity") {
  const BasisSystem basis = make_basis(0.0, 1.0, 5, 3, linspace(0.0, 1.0, 40));
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(1, 40);
  const CurveCoefficients fit = smooth_fit(ones, basis);
  const Eigen::VectorXd recon = basis.values * fit.coef.row(0).transpose();
  CHECK((recon.array() - 1.0).abs().maxCoeff() <= 1e-10);
}

TEST_CASE("smooth_fit beats random coefficient vectors on a noisy sine") {
  const BasisSystem basis = make_basis(0.0, 1.0, 7, 3, linspace(0.0, 1.0, 81));
  Rng rng(11);
  Eigen::MatrixXd curve(1, 81);
  for (int m = 0; m < 81; ++m)
    curve(0, m) = std::sin(2.0 * M_PI * basis.grid[m]) + 0.3 * rng.normal();
  const CurveCoefficients fit = smooth_fit(curve, basis);
  const double fit_rss =
      (curve.row(0).transpose() - basis.values * fit.coef.row(0).transpose())
          .squaredNorm();
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd candidate(7);
    for (int i = 0; i < 7; ++i) candidate[i] = rng.normal(0.0, 2.0);
    const double rss =
        (curve.row(0).transpose() - basis.values * candidate).squaredNorm();
    CHECK(fit_rss <= rss + 1e-12);
  }
}

TEST_CASE("smooth_fit is idempotent on representable curves") {
  const BasisSystem basis = make_basis(0.0, 1.0, 5, 3, linspace(0.0, 1.0, 50));
  Rng rng(3);
  Eigen::MatrixXd coef(2, 5);
  for (int i = 0; i < coef.size(); ++i) coef(i / 5, i % 5) = rng.normal();
  const Eigen::MatrixXd curves = coef * basis.values.transpose();
  const CurveCoefficients first = smooth_fit(curves, basis);
  const Eigen::MatrixXd recon = first.coef * basis.values.transpose();
  const CurveCoefficients second = smooth_fit(recon, basis);
  CHECK((first.coef - second.coef).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("trapezoid on linear, constant and quadratic integrands") {
  CHECK(trapezoid(2.0 * linspace(0.0, 1.0, 17), linspace(0.0, 1.0, 17)) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(trapezoid(Eigen::VectorXd::Constant(9, 5.0), linspace(0.0, 2.0, 9)) ==
        doctest::Approx(10.0).epsilon(1e-14));
  const Eigen::VectorXd grid = linspace(0.0, 1.0, 100);
  CHECK(trapezoid(grid.cwiseAbs2(), grid) == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("basis construction rejects bad inputs") {
  CHECK_THROWS_AS(make_basis(0.0, 1.0, 3, 3, linspace(0.0, 1.0, 10)), InputError);
  Eigen::VectorXd bad(3);
  bad << 0.0, 0.5, 0.5;
  CHECK_THROWS_AS(make_basis(0.0, 1.0, 4, 3, bad), InputError);
  CHECK_THROWS_AS(make_basis(0.0, 1.0, 4, 3, Eigen::VectorXd(0)), InputError);
  Eigen::VectorXd a(2), b(3);
  a << 0.0, 1.0;
  b << 0.0, 0.5, 1.0;
  CHECK_THROWS_AS(trapezoid(a, b), InputError);
}

TEST_CASE("smooth_fit flags a grid too coarse for the basis") {
  // more basis functions than grid points cannot be identified
  const BasisSystem fine = make_basis(0.0, 1.0, 10, 3, linspace(0.0, 1.0, 60));
  Eigen::MatrixXd short_curve(1, 9);
  short_curve.setOnes();
  CHECK_THROWS_AS(smooth_fit(short_curve, fine), InputError);
}
