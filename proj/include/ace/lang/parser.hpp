#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ace/core/fact_store.hpp"
#include "ace/core/knowledge_base.hpp"
#include "ace/core/term.hpp"

namespace ace::lang {

/// 1-based, inclusive on both ends.
struct SourceSpan {
  std::string file;
  std::size_t start_line = 1;
  std::size_t start_column = 1;
  std::size_t end_line = 1;
  std::size_t end_column = 1;
};

enum class Severity { Error, Warning };

struct ParseDiagnostic {
  Severity severity = Severity::Error;
  std::string message;
  SourceSpan span;
};

struct ParseResult {
  core::KnowledgeBase kb;
  core::FactStore store;
  std::vector<ParseDiagnostic> diagnostics;
  /// Starting line of each parsed clause, parallel to `kb.clauses()`.
  std::vector<std::size_t> clause_lines;

  bool ok() const;
  /// First error formatted as `file:line:col: message`, or empty.
  std::string first_error() const;
};

/// Parses a `.kb` document.
///
/// Grammar (`#` starts a comment that runs to end of line):
///
///     clause := atom [ "<-" atom { "," atom } ] "."
///     prop   := "prop" prop_ref { "&" prop_ref } "->" ident [ "?" string ] "."
///     prop_ref := ident [ "?" string ]
///     atom   := ident [ "(" term { "," term } ")" ]
///     term   := Variable | number | string | atom | list
///     list   := "[" [ term { "," term } [ "|" term ] ] "]"
///
/// A trailing question after the consequent belongs to the first
/// antecedent. Lines `table <name>:` open a CSV block (header row, then
/// `label,num,...` rows) ending at the next blank line; those tables land
/// in the returned store. `#@name` and `#@version` comment lines set the
/// metadata.
ParseResult parse_kb(std::string_view text, const std::string& file = "<input>");

/// Parses exactly one goal, optionally prefixed by `?-`.
core::Atom parse_query(std::string_view text);

/// Parses a single term (no trailing period).
core::Term parse_term(std::string_view text);

std::string serialize_kb(const core::KnowledgeBase& kb);
std::string serialize_clause(const core::HornClause& clause);
std::string serialize_rule(const core::PropRule& rule);

/// The slice of `text` covered by `span`.
std::string span_text(std::string_view text, const SourceSpan& span);

}  // namespace ace::lang
