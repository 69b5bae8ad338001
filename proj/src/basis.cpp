#include "sofr/basis.hpp"

#include <cmath>

#include "sofr/errors.hpp"

namespace sofr {

Eigen::VectorXd linspace(double a, double b, int n) {
  if (n < 2) throw InputError("linspace: need at least two points");
  Eigen::VectorXd out(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) out[i] = a + h * i;
  out[n - 1] = b;
  return out;
}

Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& grid) {
  const int m = static_cast<int>(grid.size());
  if (m < 2) throw InputError("trapezoid: need at least two grid points");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
  for (int i = 0; i + 1 < m; ++i) {
    const double h = grid[i + 1] - grid[i];
    if (!(h > 0.0)) throw InputError("trapezoid: grid must be strictly increasing");
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

double trapezoid(const Eigen::VectorXd& values, const Eigen::VectorXd& grid) {
  if (values.size() != grid.size())
    throw InputError("trapezoid: values and grid lengths differ");
  return trapezoid_weights(grid).dot(values);
}

namespace {

int find_span(const BasisSystem& basis, double t) {
  const int k = basis.num_basis;
  const int d = basis.degree;
  if (t >= basis.knots[k]) return k - 1;  // interval closed at t_max
  if (t <= basis.knots[d]) return d;
  int lo = d, hi = k;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (t < basis.knots[mid])
      hi = mid;
    else
      lo = mid;
  }
  return lo;
}

}  // namespace

Eigen::VectorXd eval_basis(const BasisSystem& basis, double t) {
  if (t < basis.t_min || t > basis.t_max)
    throw InputError("eval_basis: point outside basis domain");
  const int d = basis.degree;
  const int span = find_span(basis, t);

  // local triangular scheme; the d+1 values sum to one by construction
  Eigen::VectorXd n_loc = Eigen::VectorXd::Zero(d + 1);
  Eigen::VectorXd left(d + 1), right(d + 1);
  n_loc[0] = 1.0;
  for (int j = 1; j <= d; ++j) {
    left[j] = t - basis.knots[span + 1 - j];
    right[j] = basis.knots[span + j] - t;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = n_loc[r] / (right[r + 1] + left[j - r]);
      n_loc[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    n_loc[j] = saved;
  }

  Eigen::VectorXd out = Eigen::VectorXd::Zero(basis.num_basis);
  for (int r = 0; r <= d; ++r) out[span - d + r] = n_loc[r];
  return out;
}

BasisSystem make_basis(double t_min, double t_max, int num_basis, int degree,
                       const Eigen::VectorXd& grid) {
  if (degree < 0) throw InputError("make_basis: degree must be non-negative");
  if (num_basis < degree + 1)
    throw InputError("make_basis: need at least degree + 1 basis functions");
  if (!(t_max > t_min)) throw InputError("make_basis: empty domain");
  if (grid.size() < 2) throw InputError("make_basis: empty or degenerate grid");
  for (int i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i + 1] > grid[i]))
      throw InputError("make_basis: grid must be strictly increasing");
  if (grid[0] < t_min || grid[grid.size() - 1] > t_max)
    throw InputError("make_basis: grid outside domain");

  BasisSystem basis;
  basis.degree = degree;
  basis.num_basis = num_basis;
  basis.t_min = t_min;
  basis.t_max = t_max;
  basis.grid = grid;

  // clamped knots, interior knots equally spaced
  const int n_interior = num_basis - degree - 1;
  basis.knots.resize(num_basis + degree + 1);
  for (int i = 0; i <= degree; ++i) basis.knots[i] = t_min;
  for (int i = 1; i <= n_interior; ++i)
    basis.knots[degree + i] =
        t_min + (t_max - t_min) * static_cast<double>(i) / (n_interior + 1);
  for (int i = 0; i <= degree; ++i)
    basis.knots[num_basis + i] = t_max;

  const int n_t = static_cast<int>(grid.size());
  basis.values.resize(n_t, num_basis);
  for (int m = 0; m < n_t; ++m)
    basis.values.row(m) = eval_basis(basis, grid[m]).transpose();

  const Eigen::VectorXd w = trapezoid_weights(grid);
  basis.gram = basis.values.transpose() * w.asDiagonal() * basis.values;
  basis.gram = 0.5 * (basis.gram + basis.gram.transpose()).eval();
  return basis;
}

CurveCoefficients smooth_fit(const Eigen::MatrixXd& curve_values,
                             const BasisSystem& basis) {
  if (curve_values.cols() != basis.values.rows())
    throw InputError("smooth_fit: curve columns must match basis grid size");
  if (basis.values.rows() < basis.num_basis)
    throw InputError("smooth_fit: grid too coarse for basis size");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis.values);
  if (qr.rank() < basis.num_basis)
    throw NumericalError("smooth_fit: basis matrix rank deficient on this grid");

  CurveCoefficients out;
  out.coef = qr.solve(curve_values.transpose()).transpose();
  return out;
}

}  // namespace sofr
