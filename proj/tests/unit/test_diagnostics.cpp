#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "ace/core/error.hpp"
#include "ace/diagnostics/classifiers.hpp"
#include "oracles.hpp"

using namespace ace;
using namespace ace::diagnostics;

namespace {

ExperienceTable two_point() {
  ExperienceTable t(1);
  t.add({1}, 1);
  t.add({-1}, 2);
  return t;
}

LogicVector random_vector(std::mt19937& rng, std::size_t n) {
  std::vector<int> v(n);
  for (auto& x : v) x = static_cast<int>(rng() % 3) - 1;
  return LogicVector(v);
}

}  // namespace

TEST(Encode, Answers) {
  std::vector<Answer> a{Answer::Present, Answer::Absent, Answer::Unknown};
  EXPECT_EQ(encode_logic_vector(a), (LogicVector{1, -1, 0}));
  EXPECT_THROW(encode_logic_vector({}), Error);
  std::vector<Answer> one{Answer::Present};
  EXPECT_EQ(encode_logic_vector(one), (LogicVector{1}));
  EXPECT_THROW(LogicVector({2}), Error);
}

TEST(Plane, TwoSymmetricPoints) {
  auto m = fit_separating_plane(two_point());
  ASSERT_EQ(m.coefficients.size(), 2u);
  EXPECT_NEAR(m.coefficients[0], 0.0, 1e-12);
  EXPECT_NEAR(m.coefficients[1], 1.0, 1e-12);
  EXPECT_NEAR(m.metadata.residual_sum_squares, 0.0, 1e-20);
  EXPECT_FALSE(m.metadata.ridge_fallback);
}

TEST(Plane, SingleClassRejected) {
  ExperienceTable t(1);
  t.add({1}, 1);
  t.add({-1}, 1);
  try {
    fit_separating_plane(t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("two classes required"), std::string::npos);
  }
}

TEST(Plane, LocallyOptimalAndMatchesQrOracle) {
  std::mt19937 rng(5);
  ExperienceTable t(3);
  for (int i = 0; i < 20; ++i) {
    auto x = random_vector(rng, 3);
    t.add(x, x[0] + x[1] >= 0 ? 1 : 2);
  }
  auto m = fit_separating_plane(t);
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (const auto& r : t.rows()) {
    a.push_back({1.0, double(r.x[0]), double(r.x[1]), double(r.x[2])});
    b.push_back(r.label == 1 ? 1.0 : -1.0);
  }
  auto ref = oracle::qr_least_squares(a, b);
  for (std::size_t j = 0; j < ref.size(); ++j) EXPECT_NEAR(m.coefficients[j], ref[j], 1e-9);
  double best = oracle::sum_squares(a, b, m.coefficients);
  for (std::size_t j = 0; j < 4; ++j)
    for (double d : {-1e-3, 1e-3}) {
      auto c = m.coefficients;
      c[j] += d;
      EXPECT_LE(best, oracle::sum_squares(a, b, c));
    }
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> c{u(rng), u(rng), u(rng), u(rng)};
    EXPECT_LE(best, oracle::sum_squares(a, b, c) + 1e-12);
  }
}

TEST(Surface, DegreeOneEqualsPlane) {
  std::mt19937 rng(9);
  for (int round = 0; round < 20; ++round) {
    ExperienceTable t(4);
    for (int i = 0; i < 15; ++i) t.add(random_vector(rng, 4), 1 + int(rng() % 2));
    t.add(random_vector(rng, 4), 1);
    t.add(random_vector(rng, 4), 2);
    auto p = fit_separating_plane(t);
    auto s = fit_separating_surface(t, 1);
    ASSERT_EQ(p.coefficients.size(), s.coefficients.size());
    for (std::size_t j = 0; j < p.coefficients.size(); ++j) EXPECT_NEAR(p.coefficients[j], s.coefficients[j], 1e-10);
  }
  auto s = fit_separating_surface(two_point(), 1);
  EXPECT_NEAR(s.coefficients[0], 0.0, 1e-12);
  EXPECT_NEAR(s.coefficients[1], 1.0, 1e-12);
}

TEST(Surface, XorAtDegreeTwo) {
  ExperienceTable t(2);
  t.add({1, 1}, 1);
  t.add({-1, -1}, 1);
  t.add({1, -1}, 2);
  t.add({-1, 1}, 2);
  auto m = fit_separating_surface(t, 2, 1e-6);
  // Features (1, x1, x2, x1^2, x1 x2, x2^2). The squares duplicate the
  // constant column, so the ridge fires; the minimum-norm-like ridge
  // solution puts everything on x1 x2 with weight 4 / (4 + lambda).
  EXPECT_TRUE(m.metadata.ridge_fallback);
  ASSERT_EQ(m.coefficients.size(), 6u);
  const double expected[] = {0, 0, 0, 0, 4.0 / (4.0 + 1e-8), 0};
  for (int j = 0; j < 6; ++j) EXPECT_NEAR(m.coefficients[j], expected[j], 1e-7) << j;
  for (const auto& r : t.rows()) {
    auto d = classify_geometric(m, r.x);
    EXPECT_EQ(d.class_index, r.label);
  }
  EXPECT_THROW(fit_separating_surface(t, 0), Error);
  auto plane = fit_separating_plane(t);
  EXPECT_EQ(classify_geometric(plane, LogicVector{1, 1}).outcome, Outcome::Undecided);
}

TEST(Surface, MonomialOrder) {
  auto e = monomial_exponents(2, 2);
  std::vector<std::vector<int>> expected{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  EXPECT_EQ(e, expected);
  EXPECT_EQ(monomial_count(2, 2), 6u);
  EXPECT_EQ(monomial_count(8, 3), 165u);
  std::vector<double> x{2, 3};
  EXPECT_EQ(expand_features(x, 2), (std::vector<double>{1, 2, 3, 4, 6, 9}));
}

TEST(Geometric, ClassifyExamples) {
  PlaneModel m{{0, 1}, 0.01, {}};
  auto d = classify_geometric(m, {1});
  EXPECT_EQ(d.outcome, Outcome::Class1);
  EXPECT_DOUBLE_EQ(d.scores[0], 1.0);
  EXPECT_EQ(classify_geometric(m, {0}).outcome, Outcome::Undecided);
  EXPECT_EQ(classify_geometric(m, {-1}).outcome, Outcome::Class2);
  EXPECT_THROW(classify_geometric(m, {1, 1}), Error);
}

TEST(Frequencies, WorkedExamples) {
  ExperienceTable t(1);
  t.add({1}, 1);
  t.add({1}, 1);
  t.add({-1}, 1);
  t.add({0}, 1);
  for (int i = 0; i < 4; ++i) t.add({1}, 2);
  auto m = fit_frequencies(t);
  EXPECT_DOUBLE_EQ(m.frequencies[0][0], 0.5);
  EXPECT_EQ(m.coefficients[0][0], 0.0);
  EXPECT_DOUBLE_EQ(m.frequencies[1][0], 5.0 / 6.0);
  EXPECT_NEAR(m.coefficients[1][0], 1.6094379124341003, 1e-12);

  ExperienceTable gap(1);
  gap.add({1}, 1);
  gap.add({1}, 3);
  EXPECT_THROW(fit_frequencies(gap), Error);
}

TEST(Frequencies, ClassifyExamples) {
  FrequenciesModel m{2, {}, {{1, 0}, {0, 1}}};
  EXPECT_EQ(classify_frequencies(m, {1, -1}), 1);
  auto s = frequency_scores(m, {1, -1});
  EXPECT_EQ(s, (std::vector<double>{1, -1}));
  FrequenciesModel tie{2, {}, {{0.3, 0.2}, {0.3, 0.2}}};
  EXPECT_EQ(classify_frequencies(tie, {1, 1}), 1);
  EXPECT_THROW(classify_frequencies(m, {1}), Error);
}

TEST(Frequencies, MonotoneAndPermutationInvariant) {
  double prev = -INFINITY;
  for (int k = 0; k <= 10; ++k) {
    ExperienceTable t(1);
    for (int i = 0; i < 10; ++i) t.add({i < k ? 1 : -1}, 1);
    double a = fit_frequencies(t).coefficients[0][0];
    EXPECT_GT(a, prev);
    prev = a;
  }
  std::mt19937 rng(3);
  for (int round = 0; round < 200; ++round) {
    const int m = 3;
    FrequenciesModel model{3, {}, {}};
    for (int j = 0; j < m; ++j) model.coefficients.push_back({double(rng() % 5), double(rng() % 5), double(rng() % 5)});
    auto x = random_vector(rng, 3);
    int base = classify_frequencies(model, x);
    // Constant shift of every score: add a constant column matched by a fixed +1 input.
    FrequenciesModel shifted{4, {}, model.coefficients};
    for (auto& a : shifted.coefficients) a.push_back(7.0);
    auto xs = x.values();
    xs.push_back(1);
    EXPECT_EQ(classify_frequencies(shifted, LogicVector(xs)), base);
    // Permuting the classes permutes the answer, up to the lowest-index tie rule.
    std::vector<int> perm{2, 0, 1};
    FrequenciesModel permuted{3, {}, std::vector<std::vector<double>>(3)};
    for (int j = 0; j < m; ++j) permuted.coefficients[perm[j]] = model.coefficients[j];
    auto scores = frequency_scores(model, x);
    int got = classify_frequencies(permuted, x);
    int original = 0;
    for (int j = 0; j < m; ++j)
      if (perm[j] == got - 1) original = j;
    EXPECT_EQ(scores[original], scores[base - 1]);
    bool ties = std::set<double>(scores.begin(), scores.end()).size() < scores.size();
    if (!ties) EXPECT_EQ(original, base - 1);
  }
}

TEST(Potential, Values) {
  EXPECT_DOUBLE_EQ(potential_value({1, 0}, {1, 0}, 1e-3), 1000.0);
  EXPECT_DOUBLE_EQ(potential_value({1, -1}, {1, 1}, 0.001), 0.25);
  EXPECT_THROW(potential_value({1}, {1}, 0.0), Error);
  std::mt19937 rng(1);
  for (int i = 0; i < 200; ++i) {
    auto a = random_vector(rng, 5), b = random_vector(rng, 5);
    EXPECT_EQ(potential_value(a, b, 1e-3), potential_value(b, a, 1e-3));
    EXPECT_LE(potential_value(a, b, 1e-3), 1e3);
  }
}

TEST(Potential, TwoClassExamples) {
  ExperienceTable t(1);
  t.add({1}, 1);
  t.add({-1}, 2);
  auto m = fit_potential(t, 0.01, 0.01);
  auto d = classify_potential(m, {1});
  EXPECT_EQ(d.outcome, Outcome::Class1);
  EXPECT_DOUBLE_EQ(d.scores[0], 99.75);
  auto e = classify_potential(m, {-1});
  EXPECT_EQ(e.outcome, Outcome::Class2);
  EXPECT_DOUBLE_EQ(e.scores[0], -99.75);
  EXPECT_THROW(fit_potential(ExperienceTable(1)), Error);
  EXPECT_THROW(classify_potential(PotentialModel{}, {1}), Error);
}

TEST(Potential, TrainingSetConsistency) {
  std::mt19937 rng(17);
  for (int round = 0; round < 20; ++round) {
    ExperienceTable t(8);
    std::set<std::vector<int>> seen;
    while (t.rows().size() < 50) {
      auto x = random_vector(rng, 8);
      if (!seen.insert(x.values()).second) continue;
      t.add(x, 1 + int(rng() % 2));
    }
    auto m = fit_potential(t, 1e-3);
    for (const auto& r : t.rows()) EXPECT_EQ(classify_potential(m, r.x).class_index, r.label);
  }
}

TEST(Potential, MulticlassOneVsRest) {
  ExperienceTable t(2);
  t.add({1, 1}, 1);
  t.add({-1, -1}, 2);
  t.add({1, -1}, 3);
  auto m = fit_potential(t, 1e-3);
  EXPECT_EQ(m.class_count, 3);
  for (const auto& r : t.rows()) {
    auto d = classify_potential(m, r.x);
    EXPECT_EQ(d.outcome, Outcome::Class);
    EXPECT_EQ(d.class_index, r.label);
    EXPECT_EQ(d.scores.size(), 3u);
  }
  // Query equidistant from every training row: all one-vs-rest scores tie.
  ExperienceTable sym(1);
  sym.add({1}, 1);
  sym.add({-1}, 2);
  sym.add({1}, 3);
  sym.add({-1}, 3);
  auto ms = fit_potential(sym, 1e-3);
  auto d = classify_potential_multiclass(ms, {0});
  EXPECT_EQ(d.class_index, 3);
}
