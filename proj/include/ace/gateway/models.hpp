#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "ace/core/fact_store.hpp"
#include "ace/diagnostics/classifiers.hpp"

namespace ace::gateway {

/// CSV with a header row; first column labels, the rest numbers.
core::NumericTable read_csv_table(std::string_view csv, const std::string& name = "input");

/// `class` column plus feature columns (every other value column, in order).
diagnostics::ExperienceTable experience_table(const core::NumericTable& t);

struct FitOptions {
  int degree = 2;  // surface; regression uses 1 unless set
  int regression_degree = 1;
  int order = 1;   // dynamical
};

/// Kinds: plane, surface, freq, potential, regression, dynamical. The result
/// carries "kind" and every model parameter.
nlohmann::json fit_model(const std::string& kind, const core::NumericTable& t, const FitOptions& options = {});

/// Classifies each row of `inputs` (a `class` column, if present, is
/// ignored). Rows: {label, class (number or "undecided"), scores}.
nlohmann::json classify_rows(const nlohmann::json& model, const core::NumericTable& inputs);

}  // namespace ace::gateway
