#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "ace/core/error.hpp"
#include "ace/prediction/prediction.hpp"

using namespace ace;
using namespace ace::prediction;

TEST(Regression, ExactLine) {
  std::vector<Sample> s{{{1}, 2}, {{2}, 4}};
  auto fit = fit_regression(s);
  EXPECT_NEAR(fit.model.coefficients[0], 0.0, 1e-12);
  EXPECT_NEAR(fit.model.coefficients[1], 2.0, 1e-12);
  EXPECT_NEAR(fit.diagnostics.residual_variance, 0.0, 1e-20);
  EXPECT_THROW(fit_regression(std::vector<Sample>{}), Error);
}

TEST(Regression, PlaneRecovery) {
  std::vector<Sample> s;
  for (int i = 0; i < 10; ++i) {
    double x1 = i % 4, x2 = i / 3.0;
    s.push_back({{x1, x2}, 3 + 2 * x1 - x2});
  }
  auto fit = fit_regression(s);
  EXPECT_NEAR(fit.model.coefficients[0], 3, 1e-6);
  EXPECT_NEAR(fit.model.coefficients[1], 2, 1e-6);
  EXPECT_NEAR(fit.model.coefficients[2], -1, 1e-6);
  EXPECT_DOUBLE_EQ(fit.diagnostics.r_squared, 1.0);
  EXPECT_EQ(fit.diagnostics.samples, 10u);
  EXPECT_GT(fit.diagnostics.correlations[0], 0.0);
}

TEST(Regression, PredictFlagsExtrapolation) {
  std::vector<Sample> s{{{1}, 2}, {{2}, 4}};
  auto m = fit_regression(s, 1, false).model;
  ASSERT_EQ(m.coefficients.size(), 1u);
  auto p = predict_regression(m, std::vector<double>{3});
  EXPECT_NEAR(p.value, 6.0, 1e-12);
  EXPECT_TRUE(p.extrapolated);
  auto q = predict_regression(m, std::vector<double>{1.5});
  EXPECT_NEAR(q.value, 3.0, 1e-12);
  EXPECT_FALSE(q.extrapolated);
  EXPECT_THROW(predict_regression(m, std::vector<double>{1, 2}), Error);
}

TEST(Regression, RandomPolynomialRecovery) {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> coef(-2, 2), x(-3, 3);
  for (int round = 0; round < 30; ++round) {
    int degree = 1 + round % 2;
    RegressionModel truth{2, degree, true, {}, {}};
    std::size_t k = regression_features(truth, std::vector<double>{0, 0}).size();
    for (std::size_t j = 0; j < k; ++j) truth.coefficients.push_back(coef(rng));
    std::vector<Sample> s;
    for (std::size_t i = 0; i < 3 * k + 2; ++i) {
      std::vector<double> in{x(rng), x(rng)};
      s.push_back({in, predict_regression(truth, in).value});
    }
    auto fit = fit_regression(s, degree, true);
    for (std::size_t j = 0; j < k; ++j) EXPECT_NEAR(fit.model.coefficients[j], truth.coefficients[j], 1e-6);
    EXPECT_NEAR(fit.diagnostics.r_squared, 1.0, 1e-9);
  }
}

TEST(Regression, RSquaredOneIffZeroResidual) {
  std::vector<Sample> noisy{{{0}, 1}, {{1}, 2.5}, {{2}, 2.9}, {{3}, 4.2}};
  auto f = fit_regression(noisy);
  EXPECT_GT(f.diagnostics.residual_variance, 1e-12);
  EXPECT_LT(f.diagnostics.r_squared, 1.0);
  EXPECT_GE(f.diagnostics.r_squared, 0.0);
  std::vector<Sample> flat{{{0}, 5}, {{1}, 5}};
  auto g = fit_regression(flat);
  EXPECT_NEAR(g.diagnostics.residual_variance, 0.0, 1e-12);
  EXPECT_EQ(g.diagnostics.r_squared, 1.0);
}

TEST(Dynamical, RecoversArx) {
  std::vector<double> y{2.0}, v;
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 30; ++t) {
    v.push_back(u(rng));
    y.push_back(0.5 * y.back() + 1.0 * v.back());
  }
  v.push_back(0.0);
  auto fit = fit_dynamical(y, {v}, 0);
  EXPECT_NEAR(fit.model.a[0], 0.5, 1e-8);
  EXPECT_NEAR(fit.model.b[0], 1.0, 1e-8);
}

TEST(Dynamical, InsufficientHistory) {
  std::vector<double> y{1, 2};
  try {
    fit_dynamical(y, {}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("insufficient history"), std::string::npos);
  }
  EXPECT_THROW(fit_dynamical(std::vector<double>{1, 2, 3}, {{1, 2}}, 0), Error);
}

TEST(Dynamical, ConstantSeriesNoIntercept) {
  std::vector<double> y(12, 4.0);
  auto fit = fit_dynamical(y, {}, 0);
  EXPECT_NEAR(fit.model.a[0], 1.0, 1e-12);
  EXPECT_NEAR(fit.diagnostics.residual_variance, 0.0, 1e-20);
}

TEST(Dynamical, Simulate) {
  DynamicalModel decay{0, 0, false, {0.5}, {}, 0};
  auto out = simulate_dynamical(decay, std::vector<double>{2.0}, {}, 2);
  EXPECT_EQ(out, (std::vector<double>{1.0, 0.5}));
  EXPECT_TRUE(simulate_dynamical(decay, std::vector<double>{2.0}, {}, 0).empty());
  DynamicalModel driven{0, 1, false, {0.0}, {1.0}, 0};
  auto d = simulate_dynamical(driven, std::vector<double>{0.0}, {{{1}, {1}}, false}, 2);
  EXPECT_EQ(d, (std::vector<double>{1, 1}));
  EXPECT_THROW(simulate_dynamical(driven, std::vector<double>{0.0}, {{{1}}, false}, 2), Error);
  auto held = simulate_dynamical(driven, std::vector<double>{0.0}, {{{3}}, true}, 3);
  EXPECT_EQ(held, (std::vector<double>{3, 3, 3}));
}

TEST(Dynamical, RandomRecoveryAndOneStepReplay) {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> coef(-2, 2), u(-1, 1);
  for (int round = 0; round < 30; ++round) {
    int order = round % 3;
    std::size_t n = round % 2 + 1;
    DynamicalModel truth{order, n, false, {}, {}, 0};
    // Keep the AR part stable so the series stays well scaled.
    for (int i = 0; i <= order; ++i) truth.a.push_back(coef(rng) / (2.0 * (order + 1)));
    for (std::size_t j = 0; j < n; ++j) truth.b.push_back(coef(rng));
    std::size_t coefficients = order + 1 + n;
    std::size_t length = 3 * coefficients + order + 2;
    std::vector<double> y;
    std::vector<std::vector<double>> v(n);
    for (int i = 0; i <= order; ++i) y.push_back(u(rng));
    for (auto& s : v)
      for (std::size_t t = 0; t < length; ++t) s.push_back(u(rng));
    while (y.size() < length) {
      std::size_t t = y.size() - 1;
      std::vector<double> lags, vt;
      for (int i = 0; i <= order; ++i) lags.push_back(y[t - i]);
      for (auto& s : v) vt.push_back(s[t]);
      y.push_back(step(truth, lags, vt));
    }
    auto fit = fit_dynamical(y, v, order);
    for (int i = 0; i <= order; ++i) EXPECT_NEAR(fit.model.a[i], truth.a[i], 1e-6);
    for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(fit.model.b[j], truth.b[j], 1e-6);
    // One-step simulation from each training time reproduces the fitted value.
    for (std::size_t t = order; t + 1 < y.size(); ++t) {
      std::vector<double> vt;
      for (auto& s : v) vt.push_back(s[t]);
      auto sim = simulate_dynamical(fit.model, std::span<const double>(y).subspan(0, t + 1), {{vt}, false}, 1);
      std::vector<double> lags;
      for (int i = 0; i <= order; ++i) lags.push_back(y[t - i]);
      EXPECT_EQ(sim[0], step(fit.model, lags, vt));
    }
  }
}

TEST(Discretizer, SegmentsAndBoundaries) {
  std::vector<DiscreteSample> s{{{1}, 0.0}, {{-1}, 100.0}, {{0}, 50.0}};
  auto d = fit_discretized(s, 100);
  EXPECT_DOUBLE_EQ(d.width(), 1.0);
  EXPECT_EQ(d.segment_of(0.0), 0u);
  EXPECT_EQ(d.segment_of(12.0), 12u);
  EXPECT_EQ(d.segment_of(12.5), 12u);
  EXPECT_EQ(d.segment_of(100.0), 99u);
  EXPECT_DOUBLE_EQ(d.midpoint(12), 12.5);
  EXPECT_THROW(fit_discretized(s, 1), Error);
  auto p = predict_discretized(d, {0});
  EXPECT_EQ(p.segment, 50u);
  EXPECT_LE(std::abs(p.value - 50.0), 0.5);
  EXPECT_THROW(predict_discretized(d, {0, 1}), Error);
}

TEST(Discretizer, ConstantTargetIsDegenerate) {
  std::vector<DiscreteSample> s{{{1}, 7.0}, {{-1}, 7.0}};
  auto d = fit_discretized(s);
  EXPECT_TRUE(d.degenerate);
  EXPECT_FALSE(d.warnings.empty());
  EXPECT_EQ(predict_discretized(d, {0}).value, 7.0);
}

TEST(Discretizer, TrainingPointsWithinHalfSegment) {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0, 100);
  for (int round = 0; round < 5; ++round) {
    std::vector<DiscreteSample> s;
    std::set<std::vector<int>> seen;
    while (s.size() < 60) {
      std::vector<int> x(8);
      for (auto& c : x) c = int(rng() % 3) - 1;
      if (!seen.insert(x).second) continue;
      s.push_back({diagnostics::LogicVector(x), u(rng)});
    }
    auto d = fit_discretized(s, 100);
    for (const auto& sample : s) {
      auto p = predict_discretized(d, sample.inputs);
      EXPECT_LE(std::abs(p.value - sample.y), d.width() / 2 + 1e-12);
      EXPECT_GE(p.value, d.lo);
      EXPECT_LE(p.value, d.hi);
    }
  }
}
