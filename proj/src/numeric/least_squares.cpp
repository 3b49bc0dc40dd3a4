#include "ace/numeric/least_squares.hpp"

#include <algorithm>
#include <cmath>

#include "ace/core/error.hpp"

namespace ace::numeric {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool cholesky_solve(Matrix a, std::vector<double>& b, double relative_tolerance) {
  const std::size_t n = a.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));
  const double floor = relative_tolerance * std::max(max_diag, 1e-300);

  // Lower factor overwrites the lower triangle of a.
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (!(d > floor)) return false;
    const double l = std::sqrt(d);
    a(j, j) = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / l;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a(i, k) * b[k];
    b[i] = s / a(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a(k, i) * b[k];
    b[i] = s / a(i, i);
  }
  return true;
}

LeastSquaresFit least_squares(const Matrix& design, std::span<const double> targets) {
  const std::size_t n = design.rows(), k = design.cols();
  if (n == 0) throw Error("least squares needs at least one sample");
  if (targets.size() != n) throw Error("least squares: target count does not match row count");
  if (k == 0) throw Error("least squares needs at least one coefficient");

  Matrix normal(k, k);
  std::vector<double> rhs(k, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    auto row = design.row(r);
    for (std::size_t i = 0; i < k; ++i) {
      rhs[i] += row[i] * targets[r];
      for (std::size_t j = 0; j <= i; ++j) normal(i, j) += row[i] * row[j];
    }
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < i; ++j) normal(j, i) = normal(i, j);

  LeastSquaresFit fit;
  std::vector<double> x = rhs;
  if (!cholesky_solve(normal, x)) {
    fit.ridge_fallback = true;
    for (std::size_t i = 0; i < k; ++i) normal(i, i) += kRidgeLambda;
    x = rhs;
    if (!cholesky_solve(normal, x, 0.0)) throw Error("least squares: normal system could not be solved");
  }
  fit.coefficients = std::move(x);
  for (std::size_t r = 0; r < n; ++r) {
    double e = dot(design.row(r), fit.coefficients) - targets[r];
    fit.residual_sum_squares += e * e;
  }
  return fit;
}

}  // namespace ace::numeric
