#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace ace::diagnostics {

/// Default half-width of the undecided band around a zero score.
inline constexpr double kDefaultMargin = 1e-6;
/// Default floor on squared distance in the potential function.
inline constexpr double kDefaultPotentialFloor = 1e-3;

enum class Answer { Present, Absent, Unknown };

/// Characteristic vector with components in {-1, 0, +1}: present, absent,
/// no information.
class LogicVector {
 public:
  LogicVector() = default;
  explicit LogicVector(std::vector<int> values);
  LogicVector(std::initializer_list<int> values) : LogicVector(std::vector<int>(values)) {}

  std::size_t size() const { return values_.size(); }
  int operator[](std::size_t i) const { return values_[i]; }
  const std::vector<int>& values() const { return values_; }
  std::vector<double> as_reals() const { return {values_.begin(), values_.end()}; }

  friend bool operator==(const LogicVector&, const LogicVector&) = default;

 private:
  std::vector<int> values_;
};

LogicVector encode_logic_vector(std::span<const Answer> answers);

struct ExperienceRow {
  LogicVector x;
  int label = 1;  // class index, 1-based
};

/// Labeled training vectors of one fixed dimension.
class ExperienceTable {
 public:
  explicit ExperienceTable(std::size_t dimension);

  void add(LogicVector x, int label);

  std::size_t dimension() const { return dimension_; }
  const std::vector<ExperienceRow>& rows() const { return rows_; }
  /// Highest label present (the class count m).
  int class_count() const;
  std::size_t count(int label) const;

 private:
  std::size_t dimension_;
  std::vector<ExperienceRow> rows_;
};

struct FitMetadata {
  std::size_t rows = 0;
  bool ridge_fallback = false;
  /// More coefficients than training rows.
  bool underdetermined = false;
  double residual_sum_squares = 0.0;
};

/// Phi = a0 + a1 x1 + ... + an xn.
struct PlaneModel {
  std::vector<double> coefficients;
  double margin = kDefaultMargin;
  FitMetadata metadata;

  std::size_t dimension() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }
};

/// Polynomial decision function over every monomial of total degree <= d,
/// in graded lexicographic order (1, x1..xn, x1^2, x1 x2, ...).
struct SurfaceModel {
  std::size_t dimension = 0;
  int degree = 2;
  std::vector<double> coefficients;
  double margin = kDefaultMargin;
  FitMetadata metadata;
};

/// Per class j: a_i^j = ln(p_i^j / (1 - p_i^j)) with Laplace-smoothed
/// frequencies p_i^j = (k + 1) / (N_j + 2), k counting rows with x_i = +1.
struct FrequenciesModel {
  std::size_t dimension = 0;
  std::vector<std::vector<double>> frequencies;   // [class][characteristic]
  std::vector<std::vector<double>> coefficients;  // [class][characteristic]

  int class_count() const { return static_cast<int>(coefficients.size()); }
};

/// Training rows kept verbatim; Phi = sum_i gamma_i phi(x, x^i).
struct PotentialModel {
  std::size_t dimension = 0;
  int class_count = 0;
  std::vector<ExperienceRow> rows;
  double floor = kDefaultPotentialFloor;
  double margin = kDefaultMargin;
};

enum class Outcome { Class1, Class2, Undecided, Class };

struct ClassDecision {
  Outcome outcome = Outcome::Undecided;
  /// 1-based class, 0 when undecided.
  int class_index = 0;
  /// One score for two-class decisions, one per class otherwise.
  std::vector<double> scores;
};

std::size_t monomial_count(std::size_t dimension, int degree);
/// Exponent vectors in graded lexicographic order.
std::vector<std::vector<int>> monomial_exponents(std::size_t dimension, int degree);
std::vector<double> expand_features(std::span<const double> x, int degree);

PlaneModel fit_separating_plane(const ExperienceTable& table, double margin = kDefaultMargin);
SurfaceModel fit_separating_surface(const ExperienceTable& table, int degree = 2, double margin = kDefaultMargin);

double decision_score(const PlaneModel& model, const LogicVector& x);
double decision_score(const SurfaceModel& model, const LogicVector& x);
ClassDecision classify_geometric(const PlaneModel& model, const LogicVector& x);
ClassDecision classify_geometric(const SurfaceModel& model, const LogicVector& x);

FrequenciesModel fit_frequencies(const ExperienceTable& table);
std::vector<double> frequency_scores(const FrequenciesModel& model, const LogicVector& x);
/// argmax_j Phi_j, ties to the lowest class.
int classify_frequencies(const FrequenciesModel& model, const LogicVector& x);

/// 1 / rho^2(x, a), or 1 / floor when rho^2 < floor.
double potential_value(const LogicVector& x, const LogicVector& a, double floor);

PotentialModel fit_potential(const ExperienceTable& table, double floor = kDefaultPotentialFloor,
                             double margin = kDefaultMargin);
/// Two classes: sign of Phi with the undecided band. More classes:
/// one-vs-rest Phi per class, argmax with lowest-index ties.
ClassDecision classify_potential(const PotentialModel& model, const LogicVector& x);
ClassDecision classify_potential_multiclass(const PotentialModel& model, const LogicVector& x);

/// Index of the largest value, first one on ties.
std::size_t argmax_first(std::span<const double> values);

}  // namespace ace::diagnostics
