#include "ace/prediction/prediction.hpp"

#include <algorithm>
#include <cmath>

#include "ace/core/error.hpp"
#include "ace/numeric/least_squares.hpp"

namespace ace::prediction {

namespace {

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double correlation(std::span<const double> x, std::span<const double> y) {
  const double mx = mean(x), my = mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

numeric::Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
  numeric::Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

}  // namespace

FitDiagnostics diagnose(const std::vector<std::vector<double>>& regressors, std::span<const double> targets,
                        std::span<const double> fitted, std::size_t coefficient_count, bool ridge_fallback) {
  FitDiagnostics d;
  d.samples = targets.size();
  d.ridge_fallback = ridge_fallback;
  d.underdetermined = d.samples < coefficient_count;
  const double my = mean(targets);
  double ssr = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    ssr += (targets[i] - fitted[i]) * (targets[i] - fitted[i]);
    sst += (targets[i] - my) * (targets[i] - my);
  }
  d.residual_variance = d.samples ? ssr / static_cast<double>(d.samples) : 0.0;
  if (sst > 0.0)
    d.r_squared = 1.0 - ssr / sst;
  else
    d.r_squared = d.residual_variance <= 1e-12 ? 1.0 : 0.0;
  for (const auto& column : regressors) d.correlations.push_back(correlation(column, targets));
  return d;
}

// ---- regression ----

std::vector<double> regression_features(const RegressionModel& model, std::span<const double> inputs) {
  if (inputs.size() != model.inputs)
    throw Error("regression expects " + std::to_string(model.inputs) + " inputs, got " +
                std::to_string(inputs.size()));
  auto f = diagnostics::expand_features(inputs, model.degree);
  if (!model.intercept) f.erase(f.begin());
  return f;
}

RegressionFit fit_regression(std::span<const Sample> samples, int degree, bool intercept) {
  if (samples.empty()) throw Error("regression needs at least one sample");
  if (degree < 1) throw Error("degree >= 1 required");
  const std::size_t n = samples[0].inputs.size();
  RegressionFit out;
  RegressionModel& model = out.model;
  model.inputs = n;
  model.degree = degree;
  model.intercept = intercept;
  model.ranges.assign(n, Range{INFINITY, -INFINITY});

  std::vector<std::vector<double>> rows;
  std::vector<double> targets;
  std::vector<std::vector<double>> columns(n);
  for (const auto& s : samples) {
    if (s.inputs.size() != n) throw Error("inconsistent input dimension in regression samples");
    if (!std::isfinite(s.y)) throw Error("non-finite regression target");
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s.inputs[i])) throw Error("non-finite regression input");
      model.ranges[i].lo = std::min(model.ranges[i].lo, s.inputs[i]);
      model.ranges[i].hi = std::max(model.ranges[i].hi, s.inputs[i]);
      columns[i].push_back(s.inputs[i]);
    }
    rows.push_back(regression_features(model, s.inputs));
    targets.push_back(s.y);
  }
  if (rows[0].empty()) throw Error("regression has no coefficients to fit");
  auto fit = numeric::least_squares(to_matrix(rows), targets);
  model.coefficients = std::move(fit.coefficients);
  std::vector<double> fitted;
  for (const auto& r : rows) fitted.push_back(numeric::dot(r, model.coefficients));
  out.diagnostics = diagnose(columns, targets, fitted, model.coefficients.size(), fit.ridge_fallback);
  return out;
}

RegressionPrediction predict_regression(const RegressionModel& model, std::span<const double> inputs) {
  auto f = regression_features(model, inputs);
  RegressionPrediction p;
  p.value = numeric::dot(f, model.coefficients);
  for (std::size_t i = 0; i < inputs.size() && i < model.ranges.size(); ++i)
    if (inputs[i] < model.ranges[i].lo || inputs[i] > model.ranges[i].hi) p.extrapolated = true;
  return p;
}

// ---- dynamical model ----

double step(const DynamicalModel& model, std::span<const double> lags, std::span<const double> v) {
  double y = model.intercept ? model.c : 0.0;
  for (std::size_t i = 0; i < model.a.size(); ++i) y += model.a[i] * lags[i];
  for (std::size_t j = 0; j < model.b.size(); ++j) y += model.b[j] * v[j];
  return y;
}

namespace {

std::vector<double> lags_at(std::span<const double> y, std::size_t t, int order) {
  std::vector<double> lags;
  for (int i = 0; i <= order; ++i) lags.push_back(y[t - i]);
  return lags;
}

std::vector<double> exogenous_at(const std::vector<std::vector<double>>& v, std::size_t t) {
  std::vector<double> out;
  for (const auto& series : v) out.push_back(series[t]);
  return out;
}

}  // namespace

DynamicalFit fit_dynamical(std::span<const double> history, const std::vector<std::vector<double>>& exogenous,
                           int order, bool intercept) {
  if (order < 0) throw Error("autoregressive order must be non-negative");
  const std::size_t m = static_cast<std::size_t>(order);
  if (history.size() < m + 2)
    throw Error("insufficient history: " + std::to_string(history.size()) + " points, order " +
                std::to_string(order) + " needs " + std::to_string(m + 2));
  for (std::size_t j = 0; j < exogenous.size(); ++j)
    if (exogenous[j].size() != history.size())
      throw Error("exogenous series v" + std::to_string(j + 1) + " has " + std::to_string(exogenous[j].size()) +
                  " points, history has " + std::to_string(history.size()));

  DynamicalFit out;
  DynamicalModel& model = out.model;
  model.order = order;
  model.exogenous = exogenous.size();
  model.intercept = intercept;

  std::vector<std::vector<double>> rows;
  std::vector<double> targets;
  for (std::size_t t = m; t + 1 < history.size(); ++t) {
    auto row = lags_at(history, t, order);
    for (double x : exogenous_at(exogenous, t)) row.push_back(x);
    if (intercept) row.push_back(1.0);
    rows.push_back(std::move(row));
    targets.push_back(history[t + 1]);
  }
  auto fit = numeric::least_squares(to_matrix(rows), targets);
  model.a.assign(fit.coefficients.begin(), fit.coefficients.begin() + order + 1);
  model.b.assign(fit.coefficients.begin() + order + 1, fit.coefficients.begin() + order + 1 + exogenous.size());
  if (intercept) model.c = fit.coefficients.back();

  std::vector<double> fitted;
  std::vector<std::vector<double>> columns(rows[0].size() - (intercept ? 1 : 0));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::span<const double> row = rows[r];
    fitted.push_back(step(model, row.subspan(0, m + 1), row.subspan(m + 1, exogenous.size())));
    for (std::size_t c = 0; c < columns.size(); ++c) columns[c].push_back(row[c]);
  }
  out.diagnostics = diagnose(columns, targets, fitted, fit.coefficients.size(), fit.ridge_fallback);
  return out;
}

std::vector<double> simulate_dynamical(const DynamicalModel& model, std::span<const double> seed,
                                       const ExogenousScenario& scenario, std::size_t horizon) {
  const std::size_t m = static_cast<std::size_t>(model.order);
  if (seed.size() < m + 1)
    throw Error("seed history needs " + std::to_string(m + 1) + " points, got " + std::to_string(seed.size()));
  if (model.exogenous > 0 && horizon > 0) {
    if (scenario.steps.size() < horizon && !(scenario.hold_last && !scenario.steps.empty()))
      throw Error("missing exogenous scenario: " + std::to_string(scenario.steps.size()) + " steps for horizon " +
                  std::to_string(horizon) + " and no hold-last policy");
    for (const auto& s : scenario.steps)
      if (s.size() != model.exogenous) throw Error("scenario step has wrong exogenous count");
  }
  std::vector<double> y(seed.begin(), seed.end());
  std::vector<double> out;
  const std::vector<double> none;
  for (std::size_t k = 0; k < horizon; ++k) {
    const auto& v = model.exogenous == 0 ? none : scenario.steps[std::min(k, scenario.steps.size() - 1)];
    double next = step(model, lags_at(y, y.size() - 1, model.order), v);
    y.push_back(next);
    out.push_back(next);
  }
  return out;
}

// ---- discretized prediction ----

double Discretizer::boundary(std::size_t j) const {
  if (j >= segments) return hi;
  return lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(segments);
}

double Discretizer::midpoint(std::size_t segment) const {
  if (degenerate) return lo;
  return 0.5 * (boundary(segment) + boundary(segment + 1));
}

std::size_t Discretizer::segment_of(double y) const {
  if (degenerate || y <= lo) return 0;
  if (y >= hi) return segments - 1;
  auto j = static_cast<std::size_t>(std::floor((y - lo) * static_cast<double>(segments) / (hi - lo)));
  j = std::min(j, segments - 1);
  // Guard against rounding on either side of a boundary.
  while (j > 0 && y < boundary(j)) --j;
  while (j + 1 < segments && y >= boundary(j + 1)) ++j;
  return j;
}

Discretizer fit_discretized(std::span<const DiscreteSample> samples, std::size_t segments, double floor) {
  if (segments < 2) throw Error("segment count k >= 2 required");
  if (samples.empty()) throw Error("discretized prediction needs at least one sample");
  Discretizer d;
  d.segments = segments;
  d.lo = d.hi = samples[0].y;
  for (const auto& s : samples) {
    if (!std::isfinite(s.y)) throw Error("non-finite target in discretized samples");
    d.lo = std::min(d.lo, s.y);
    d.hi = std::max(d.hi, s.y);
  }
  diagnostics::ExperienceTable table(samples[0].inputs.size());
  if (d.lo == d.hi) {
    d.degenerate = true;
    d.warnings.push_back("constant target " + std::to_string(d.lo) + ": degenerate single-segment model");
  }
  for (const auto& s : samples) table.add(s.inputs, static_cast<int>(d.segment_of(s.y)) + 1);
  d.classifier = diagnostics::fit_potential(table, floor);
  d.classifier.class_count = static_cast<int>(segments);
  return d;
}

DiscretePrediction predict_discretized(const Discretizer& disc, const diagnostics::LogicVector& inputs) {
  if (inputs.size() != disc.classifier.dimension)
    throw Error("dimension mismatch: model expects " + std::to_string(disc.classifier.dimension) + ", got " +
                std::to_string(inputs.size()));
  if (disc.degenerate) return {disc.lo, 0};
  auto decision = diagnostics::classify_potential_multiclass(disc.classifier, inputs);
  std::size_t seg = static_cast<std::size_t>(decision.class_index - 1);
  return {disc.midpoint(seg), seg};
}

}  // namespace ace::prediction
