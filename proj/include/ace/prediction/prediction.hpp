#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ace/diagnostics/classifiers.hpp"

namespace ace::prediction {

struct Sample {
  std::vector<double> inputs;
  double y = 0.0;
};

struct FitDiagnostics {
  std::size_t samples = 0;
  /// SSR / samples.
  double residual_variance = 0.0;
  /// 1 - SSR / SST. A constant target gives 1 when the residual variance
  /// is within 1e-12 of zero, else 0.
  double r_squared = 0.0;
  /// Pearson correlation of each regressor with the target, 0 for a
  /// constant column.
  std::vector<double> correlations;
  /// Fewer samples than coefficients.
  bool underdetermined = false;
  bool ridge_fallback = false;
};

struct Range {
  double lo = 0.0, hi = 0.0;
};

/// y = [a0 +] sum of a_k m_k(x) over the monomials of total degree 1..d in
/// graded lexicographic order. Degree 1 without intercept is the plain
/// linear form.
struct RegressionModel {
  std::size_t inputs = 0;
  int degree = 1;
  bool intercept = true;
  std::vector<double> coefficients;
  std::vector<Range> ranges;
};

struct RegressionFit {
  RegressionModel model;
  FitDiagnostics diagnostics;
};

struct RegressionPrediction {
  double value = 0.0;
  /// Some input lies outside its training range.
  bool extrapolated = false;
};

RegressionFit fit_regression(std::span<const Sample> samples, int degree = 1, bool intercept = true);
RegressionPrediction predict_regression(const RegressionModel& model, std::span<const double> inputs);
/// Feature vector the model's coefficients apply to.
std::vector<double> regression_features(const RegressionModel& model, std::span<const double> inputs);

/// y(t+1) = sum_{i=0..m} a_i y(t-i) + sum_j b_j v_j(t) [+ c].
struct DynamicalModel {
  int order = 0;
  std::size_t exogenous = 0;
  bool intercept = false;
  std::vector<double> a;  // order + 1 values
  std::vector<double> b;  // exogenous values
  double c = 0.0;
};

struct DynamicalFit {
  DynamicalModel model;
  FitDiagnostics diagnostics;
};

/// One application of the recurrence. `lags` holds y(t), y(t-1), ...,
/// y(t-m); `v` holds v_j(t).
double step(const DynamicalModel& model, std::span<const double> lags, std::span<const double> v);

/// `exogenous[j]` is the series v_j aligned with `history`.
DynamicalFit fit_dynamical(std::span<const double> history, const std::vector<std::vector<double>>& exogenous,
                           int order, bool intercept = false);

/// Future exogenous values: `steps[k]` is the vector v used for step k.
/// With `hold_last`, steps past the end repeat the last supplied vector.
struct ExogenousScenario {
  std::vector<std::vector<double>> steps;
  bool hold_last = false;
};

/// Iterates the recurrence `horizon` times from the tail of `seed`,
/// feeding predictions back as lags.
std::vector<double> simulate_dynamical(const DynamicalModel& model, std::span<const double> seed,
                                       const ExogenousScenario& scenario, std::size_t horizon);

struct DiscreteSample {
  diagnostics::LogicVector inputs;
  double y = 0.0;
};

/// Equal-width segmentation of [lo, hi] with a multiclass potential
/// classifier whose classes are the segments.
struct Discretizer {
  double lo = 0.0, hi = 0.0;
  std::size_t segments = 100;
  diagnostics::PotentialModel classifier;
  /// All training targets were equal; predictions return `lo`.
  bool degenerate = false;
  std::vector<std::string> warnings;

  double width() const { return degenerate ? 0.0 : (hi - lo) / static_cast<double>(segments); }
  double boundary(std::size_t j) const;
  double midpoint(std::size_t segment) const;
  /// Boundary values belong to the higher segment; `hi` to the last.
  std::size_t segment_of(double y) const;
};

struct DiscretePrediction {
  double value = 0.0;
  std::size_t segment = 0;  // 0-based
};

Discretizer fit_discretized(std::span<const DiscreteSample> samples, std::size_t segments = 100,
                            double floor = diagnostics::kDefaultPotentialFloor);
DiscretePrediction predict_discretized(const Discretizer& disc, const diagnostics::LogicVector& inputs);

/// Shared by both fitters.
FitDiagnostics diagnose(const std::vector<std::vector<double>>& regressors, std::span<const double> targets,
                        std::span<const double> fitted, std::size_t coefficient_count, bool ridge_fallback);

}  // namespace ace::prediction
