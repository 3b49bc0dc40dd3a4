#include "ace/gateway/models.hpp"

#include <cmath>

#include "ace/core/error.hpp"
#include "ace/prediction/prediction.hpp"

namespace ace::gateway {

using nlohmann::json;
namespace dx = diagnostics;

core::NumericTable read_csv_table(std::string_view csv, const std::string& name) {
  auto store = core::parse_store("table " + name + ":\n" + std::string(csv) + "\n", name + ".csv");
  const auto* t = store.table(name);
  if (!t) throw Error(name + ": CSV has no header row");
  return *t;
}

namespace {

dx::LogicVector features_of(const core::NumericTable& t, const core::TableRow& row, std::optional<std::size_t> skip) {
  std::vector<int> x;
  for (std::size_t j = 0; j < row.values.size(); ++j) {
    if (skip && j == *skip) continue;
    double v = row.values[j];
    if (v != -1.0 && v != 0.0 && v != 1.0)
      throw Error("row '" + row.label + "': feature '" + t.columns[j + 1] + "' must be -1, 0 or 1");
    x.push_back(static_cast<int>(v));
  }
  return dx::LogicVector(std::move(x));
}

json metadata_json(const dx::FitMetadata& m) {
  return {{"rows", m.rows},
          {"ridge_fallback", m.ridge_fallback},
          {"underdetermined", m.underdetermined},
          {"residual_sum_squares", m.residual_sum_squares}};
}

json diagnostics_json(const prediction::FitDiagnostics& d) {
  return {{"samples", d.samples},
          {"residual_variance", d.residual_variance},
          {"r_squared", d.r_squared},
          {"correlations", d.correlations},
          {"underdetermined", d.underdetermined},
          {"ridge_fallback", d.ridge_fallback}};
}

json decision_json(const std::string& label, const dx::ClassDecision& d) {
  json cls = d.outcome == dx::Outcome::Undecided ? json("undecided") : json(d.class_index);
  return {{"label", label}, {"class", cls}, {"scores", d.scores}};
}

}  // namespace

dx::ExperienceTable experience_table(const core::NumericTable& t) {
  auto cls = t.value_index("class");
  if (!cls) throw Error("experience table needs a 'class' column");
  dx::ExperienceTable out(t.columns.size() - 2);
  for (const auto& row : t.rows) {
    double c = row.values[*cls];
    if (c < 1 || c != std::floor(c)) throw Error("row '" + row.label + "': class must be a positive integer");
    out.add(features_of(t, row, cls), static_cast<int>(c));
  }
  return out;
}

json fit_model(const std::string& kind, const core::NumericTable& t, const FitOptions& o) {
  if (kind == "plane") {
    auto m = dx::fit_separating_plane(experience_table(t));
    return {{"kind", kind}, {"coefficients", m.coefficients}, {"margin", m.margin}, {"metadata", metadata_json(m.metadata)}};
  }
  if (kind == "surface") {
    auto m = dx::fit_separating_surface(experience_table(t), o.degree);
    return {{"kind", kind},          {"dimension", m.dimension}, {"degree", m.degree},
            {"coefficients", m.coefficients}, {"margin", m.margin}, {"metadata", metadata_json(m.metadata)}};
  }
  if (kind == "freq") {
    auto m = dx::fit_frequencies(experience_table(t));
    return {{"kind", kind}, {"dimension", m.dimension}, {"frequencies", m.frequencies}, {"coefficients", m.coefficients}};
  }
  if (kind == "potential") {
    auto m = dx::fit_potential(experience_table(t));
    json rows = json::array();
    for (const auto& r : m.rows) rows.push_back({{"x", r.x.values()}, {"label", r.label}});
    return {{"kind", kind},         {"dimension", m.dimension}, {"class_count", m.class_count},
            {"floor", m.floor},     {"margin", m.margin},       {"rows", rows}};
  }
  auto y = t.value_index("y");
  if (kind == "regression" || kind == "dynamical") {
    if (!y) throw Error(kind + " fitting needs a 'y' column");
  }
  std::vector<std::size_t> others;
  std::vector<std::string> names;
  for (std::size_t j = 0; j + 1 < t.columns.size(); ++j)
    if (!y || j != *y) others.push_back(j), names.push_back(t.columns[j + 1]);
  if (kind == "regression") {
    std::vector<prediction::Sample> samples;
    for (const auto& row : t.rows) {
      prediction::Sample s;
      for (auto j : others) s.inputs.push_back(row.values[j]);
      s.y = row.values[*y];
      samples.push_back(std::move(s));
    }
    auto f = prediction::fit_regression(samples, o.regression_degree);
    json ranges = json::array();
    for (const auto& r : f.model.ranges) ranges.push_back({r.lo, r.hi});
    return {{"kind", kind},
            {"inputs", names},
            {"degree", f.model.degree},
            {"intercept", f.model.intercept},
            {"coefficients", f.model.coefficients},
            {"ranges", ranges},
            {"diagnostics", diagnostics_json(f.diagnostics)}};
  }
  if (kind == "dynamical") {
    std::vector<double> history;
    std::vector<std::vector<double>> exo(others.size());
    for (const auto& row : t.rows) {
      history.push_back(row.values[*y]);
      for (std::size_t k = 0; k < others.size(); ++k) exo[k].push_back(row.values[others[k]]);
    }
    auto f = prediction::fit_dynamical(history, exo, o.order);
    return {{"kind", kind},         {"order", f.model.order}, {"exogenous", names}, {"intercept", f.model.intercept},
            {"a", f.model.a},       {"b", f.model.b},         {"c", f.model.c},      {"diagnostics", diagnostics_json(f.diagnostics)}};
  }
  throw Error("unknown model kind '" + kind + "'; expected plane, surface, freq, potential, regression or dynamical");
}

json classify_rows(const json& model, const core::NumericTable& inputs) {
  auto kind = model.at("kind").get<std::string>();
  auto skip = inputs.value_index("class");
  json out = json::array();
  for (const auto& row : inputs.rows) {
    auto x = features_of(inputs, row, skip);
    if (kind == "plane") {
      dx::PlaneModel m;
      m.coefficients = model.at("coefficients").get<std::vector<double>>();
      m.margin = model.value("margin", dx::kDefaultMargin);
      if (x.size() != m.dimension()) throw Error("row '" + row.label + "' has the wrong number of features");
      out.push_back(decision_json(row.label, dx::classify_geometric(m, x)));
    } else if (kind == "surface") {
      dx::SurfaceModel m;
      m.dimension = model.at("dimension").get<std::size_t>();
      m.degree = model.at("degree").get<int>();
      m.coefficients = model.at("coefficients").get<std::vector<double>>();
      m.margin = model.value("margin", dx::kDefaultMargin);
      if (x.size() != m.dimension) throw Error("row '" + row.label + "' has the wrong number of features");
      out.push_back(decision_json(row.label, dx::classify_geometric(m, x)));
    } else if (kind == "freq") {
      dx::FrequenciesModel m;
      m.dimension = model.at("dimension").get<std::size_t>();
      m.frequencies = model.at("frequencies").get<std::vector<std::vector<double>>>();
      m.coefficients = model.at("coefficients").get<std::vector<std::vector<double>>>();
      if (x.size() != m.dimension) throw Error("row '" + row.label + "' has the wrong number of features");
      dx::ClassDecision d;
      d.outcome = dx::Outcome::Class;
      d.class_index = dx::classify_frequencies(m, x);
      d.scores = dx::frequency_scores(m, x);
      out.push_back(decision_json(row.label, d));
    } else if (kind == "potential") {
      dx::PotentialModel m;
      m.dimension = model.at("dimension").get<std::size_t>();
      m.class_count = model.at("class_count").get<int>();
      m.floor = model.value("floor", dx::kDefaultPotentialFloor);
      m.margin = model.value("margin", dx::kDefaultMargin);
      for (const auto& r : model.at("rows"))
        m.rows.push_back({dx::LogicVector(r.at("x").get<std::vector<int>>()), r.at("label").get<int>()});
      if (x.size() != m.dimension) throw Error("row '" + row.label + "' has the wrong number of features");
      out.push_back(decision_json(row.label, dx::classify_potential(m, x)));
    } else {
      throw Error("model kind '" + kind + "' is not a classifier");
    }
  }
  return out;
}

}  // namespace ace::gateway
