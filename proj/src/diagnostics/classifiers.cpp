#include "ace/diagnostics/classifiers.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "ace/core/error.hpp"
#include "ace/numeric/least_squares.hpp"

namespace ace::diagnostics {

LogicVector::LogicVector(std::vector<int> values) : values_(std::move(values)) {
  for (int v : values_)
    if (v < -1 || v > 1) throw Error("logic vector component " + std::to_string(v) + " is not in {-1, 0, 1}");
}

LogicVector encode_logic_vector(std::span<const Answer> answers) {
  if (answers.empty()) throw Error("logic vector needs at least one characteristic");
  std::vector<int> values;
  values.reserve(answers.size());
  for (Answer a : answers) {
    switch (a) {
      case Answer::Present: values.push_back(1); break;
      case Answer::Absent: values.push_back(-1); break;
      case Answer::Unknown: values.push_back(0); break;
    }
  }
  return LogicVector(std::move(values));
}

ExperienceTable::ExperienceTable(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw Error("experience table dimension must be at least 1");
}

void ExperienceTable::add(LogicVector x, int label) {
  if (x.size() != dimension_)
    throw Error("experience row has dimension " + std::to_string(x.size()) + ", table has " +
                std::to_string(dimension_));
  if (label < 1) throw Error("class label must be a positive integer");
  rows_.push_back({std::move(x), label});
}

int ExperienceTable::class_count() const {
  int m = 0;
  for (const auto& r : rows_) m = std::max(m, r.label);
  return m;
}

std::size_t ExperienceTable::count(int label) const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.label == label;
  return n;
}

std::size_t argmax_first(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

// ---- separating plane / surface ----

std::size_t monomial_count(std::size_t dimension, int degree) {
  // C(n + d, d)
  double c = 1.0;
  for (int k = 1; k <= degree; ++k) c = c * static_cast<double>(dimension + k) / k;
  return static_cast<std::size_t>(std::llround(c));
}

std::vector<std::vector<int>> monomial_exponents(std::size_t dimension, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<std::size_t> picks;
  // Non-decreasing index sequences of length k enumerate degree-k monomials.
  std::function<void(int, std::size_t)> rec = [&](int remaining, std::size_t from) {
    if (remaining == 0) {
      std::vector<int> e(dimension, 0);
      for (auto i : picks) ++e[i];
      out.push_back(std::move(e));
      return;
    }
    for (std::size_t i = from; i < dimension; ++i) {
      picks.push_back(i);
      rec(remaining - 1, i);
      picks.pop_back();
    }
  };
  for (int k = 0; k <= degree; ++k) rec(k, 0);
  return out;
}

std::vector<double> expand_features(std::span<const double> x, int degree) {
  std::vector<double> out;
  // Same ordering as monomial_exponents, built by multiplying prefixes.
  std::function<void(int, std::size_t, double)> rec = [&](int remaining, std::size_t from, double value) {
    if (remaining == 0) {
      out.push_back(value);
      return;
    }
    for (std::size_t i = from; i < x.size(); ++i) rec(remaining - 1, i, value * x[i]);
  };
  for (int k = 0; k <= degree; ++k) rec(k, 0, 1.0);
  return out;
}

namespace {

void require_two_classes(const ExperienceTable& table) {
  for (const auto& r : table.rows())
    if (r.label != 1 && r.label != 2) throw Error("two classes required (labels 1 and 2)");
  if (table.count(1) == 0 || table.count(2) == 0) throw Error("two classes required");
}

SurfaceModel fit_polynomial(const ExperienceTable& table, int degree, double margin) {
  if (degree < 1) throw Error("degree >= 1 required");
  if (!(margin > 0)) throw Error("decision margin must be positive");
  require_two_classes(table);
  const auto& rows = table.rows();
  const std::size_t k = monomial_count(table.dimension(), degree);
  numeric::Matrix design(rows.size(), k);
  std::vector<double> targets;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto f = expand_features(rows[r].x.as_reals(), degree);
    for (std::size_t c = 0; c < k; ++c) design(r, c) = f[c];
    targets.push_back(rows[r].label == 1 ? 1.0 : -1.0);
  }
  auto fit = numeric::least_squares(design, targets);
  SurfaceModel model;
  model.dimension = table.dimension();
  model.degree = degree;
  model.coefficients = std::move(fit.coefficients);
  model.margin = margin;
  model.metadata = {rows.size(), fit.ridge_fallback, k > rows.size(), fit.residual_sum_squares};
  return model;
}

ClassDecision threshold(double score, double margin) {
  ClassDecision d;
  d.scores = {score};
  if (score > margin) {
    d.outcome = Outcome::Class1;
    d.class_index = 1;
  } else if (score < -margin) {
    d.outcome = Outcome::Class2;
    d.class_index = 2;
  }
  return d;
}

void check_dimension(std::size_t expected, std::size_t got) {
  if (expected != got)
    throw Error("dimension mismatch: model expects " + std::to_string(expected) + ", got " + std::to_string(got));
}

}  // namespace

PlaneModel fit_separating_plane(const ExperienceTable& table, double margin) {
  SurfaceModel s = fit_polynomial(table, 1, margin);
  return {std::move(s.coefficients), margin, s.metadata};
}

SurfaceModel fit_separating_surface(const ExperienceTable& table, int degree, double margin) {
  return fit_polynomial(table, degree, margin);
}

double decision_score(const PlaneModel& model, const LogicVector& x) {
  check_dimension(model.dimension(), x.size());
  double phi = model.coefficients[0];
  for (std::size_t i = 0; i < x.size(); ++i) phi += model.coefficients[i + 1] * x[i];
  return phi;
}

double decision_score(const SurfaceModel& model, const LogicVector& x) {
  check_dimension(model.dimension, x.size());
  auto f = expand_features(x.as_reals(), model.degree);
  return numeric::dot(f, model.coefficients);
}

ClassDecision classify_geometric(const PlaneModel& model, const LogicVector& x) {
  return threshold(decision_score(model, x), model.margin);
}

ClassDecision classify_geometric(const SurfaceModel& model, const LogicVector& x) {
  return threshold(decision_score(model, x), model.margin);
}

// ---- frequencies ----

FrequenciesModel fit_frequencies(const ExperienceTable& table) {
  const int m = table.class_count();
  if (m < 1) throw Error("experience table is empty");
  FrequenciesModel model;
  model.dimension = table.dimension();
  for (int j = 1; j <= m; ++j) {
    const std::size_t total = table.count(j);
    if (total == 0) throw Error("class " + std::to_string(j) + " has no rows");
    std::vector<double> p(table.dimension()), a(table.dimension());
    for (std::size_t i = 0; i < table.dimension(); ++i) {
      std::size_t present = 0;
      for (const auto& r : table.rows())
        if (r.label == j && r.x[i] == 1) ++present;
      p[i] = (static_cast<double>(present) + 1.0) / (static_cast<double>(total) + 2.0);
      a[i] = std::log(p[i] / (1.0 - p[i]));
    }
    model.frequencies.push_back(std::move(p));
    model.coefficients.push_back(std::move(a));
  }
  return model;
}

std::vector<double> frequency_scores(const FrequenciesModel& model, const LogicVector& x) {
  check_dimension(model.dimension, x.size());
  std::vector<double> scores;
  auto xs = x.as_reals();
  for (const auto& a : model.coefficients) scores.push_back(numeric::dot(a, xs));
  return scores;
}

int classify_frequencies(const FrequenciesModel& model, const LogicVector& x) {
  auto scores = frequency_scores(model, x);
  return static_cast<int>(argmax_first(scores)) + 1;
}

// ---- potential functions ----

double potential_value(const LogicVector& x, const LogicVector& a, double floor) {
  if (!(floor > 0)) throw Error("potential floor must be positive");
  check_dimension(a.size(), x.size());
  double rho2 = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    double d = x[j] - a[j];
    rho2 += d * d;
  }
  return rho2 >= floor ? 1.0 / rho2 : 1.0 / floor;
}

PotentialModel fit_potential(const ExperienceTable& table, double floor, double margin) {
  if (!(floor > 0)) throw Error("potential floor must be positive");
  if (!(margin > 0)) throw Error("decision margin must be positive");
  if (table.rows().empty()) throw Error("potential model needs training rows");
  PotentialModel model;
  model.dimension = table.dimension();
  model.class_count = std::max(2, table.class_count());
  model.rows = table.rows();
  model.floor = floor;
  model.margin = margin;
  return model;
}

namespace {

/// Phi with gamma = +1 for rows of `positive`, -1 otherwise.
double one_vs_rest(const PotentialModel& model, const LogicVector& x, int positive) {
  double phi = 0.0;
  for (const auto& r : model.rows) {
    double v = potential_value(x, r.x, model.floor);
    phi += r.label == positive ? v : -v;
  }
  return phi;
}

void check_potential(const PotentialModel& model, const LogicVector& x) {
  if (model.rows.empty()) throw Error("potential model has no training rows");
  check_dimension(model.dimension, x.size());
}

}  // namespace

ClassDecision classify_potential(const PotentialModel& model, const LogicVector& x) {
  check_potential(model, x);
  if (model.class_count > 2) return classify_potential_multiclass(model, x);
  return threshold(one_vs_rest(model, x, 1), model.margin);
}

ClassDecision classify_potential_multiclass(const PotentialModel& model, const LogicVector& x) {
  check_potential(model, x);
  ClassDecision d;
  d.outcome = Outcome::Class;
  std::vector<double> v;
  v.reserve(model.rows.size());
  for (const auto& r : model.rows) v.push_back(potential_value(x, r.x, model.floor));
  for (int c = 1; c <= model.class_count; ++c) {
    double phi = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) phi += model.rows[i].label == c ? v[i] : -v[i];
    d.scores.push_back(phi);
  }
  d.class_index = static_cast<int>(argmax_first(d.scores)) + 1;
  return d;
}

}  // namespace ace::diagnostics
