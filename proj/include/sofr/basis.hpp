#pragma once

#include <Eigen/Dense>

namespace sofr {

// Cubic B-spline system on a closed interval: clamped knot vector with
// equally spaced interior knots, values tabulated on an evaluation grid, and
// the cross-product (Gram) matrix J = integral of B(t) B(t)' dt computed with
// the trapezoidal rule on that grid. Immutable after construction.
struct BasisSystem {
  int degree = 3;
  int num_basis = 0;        // K
  double t_min = 0.0;
  double t_max = 1.0;
  Eigen::VectorXd knots;    // size K + degree + 1
  Eigen::VectorXd grid;     // n_t strictly increasing points in [t_min, t_max]
  Eigen::MatrixXd values;   // B: n_t x K
  Eigen::MatrixXd gram;     // J: K x K
};

BasisSystem make_basis(double t_min, double t_max, int num_basis, int degree,
                       const Eigen::VectorXd& grid);

// All K basis values at a single point (Cox--de Boor; the rightmost basis
// function evaluates to 1 at t_max).
Eigen::VectorXd eval_basis(const BasisSystem& basis, double t);

// Per-observation basis coefficients fitted by ordinary least squares.
struct CurveCoefficients {
  Eigen::MatrixXd coef;  // n x K; row i reconstructs curve i as B * coef.row(i)'
};

// curve_values: n x n_t matrix of curves sampled on basis.grid.
CurveCoefficients smooth_fit(const Eigen::MatrixXd& curve_values,
                             const BasisSystem& basis);

// Composite trapezoidal rule over a strictly increasing grid.
double trapezoid(const Eigen::VectorXd& values, const Eigen::VectorXd& grid);

// Trapezoid quadrature weights for a grid (so that trapezoid(v, g) equals
// weights(g).dot(v)).
Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& grid);

Eigen::VectorXd linspace(double a, double b, int n);

}  // namespace sofr
