#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ace::numeric {

/// Ridge term added to the normal-matrix diagonal when it is singular.
inline constexpr double kRidgeLambda = 1e-8;

struct LeastSquaresFit {
  std::vector<double> coefficients;
  /// Set when the normal matrix was singular and the ridge term was used.
  bool ridge_fallback = false;
  double residual_sum_squares = 0.0;
};

/// Dense row-major matrix, sized once.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

/// Solves the symmetric positive definite system `a x = b` by Cholesky
/// factorisation. Returns false when a pivot falls below
/// `relative_tolerance * max(diag(a))`.
bool cholesky_solve(Matrix a, std::vector<double>& b, double relative_tolerance = 1e-10);

/// Minimises sum_i (design_i . c - targets_i)^2 through the normal
/// equations, falling back to `kRidgeLambda` regularisation when the
/// normal matrix is singular.
LeastSquaresFit least_squares(const Matrix& design, std::span<const double> targets);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace ace::numeric
