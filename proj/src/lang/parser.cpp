#include "ace/lang/parser.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <regex>
#include <sstream>

#include "ace/core/error.hpp"

namespace ace::lang {

using core::Atom;
using core::HornClause;
using core::KnowledgeBase;
using core::PropRule;
using core::Term;

bool ParseResult::ok() const {
  for (const auto& d : diagnostics)
    if (d.severity == Severity::Error) return false;
  return true;
}

std::string ParseResult::first_error() const {
  for (const auto& d : diagnostics) {
    if (d.severity != Severity::Error) continue;
    std::ostringstream out;
    out << d.span.file << ':' << d.span.start_line << ':' << d.span.start_column << ": " << d.message;
    return out.str();
  }
  return {};
}

namespace {

enum class Tok {
  Ident,
  Var,
  Number,
  String,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Pipe,
  Comma,
  Dot,
  Arrow,    // <-
  Implies,  // ->
  Amp,
  Question,
  Query,  // ?-
  End,
  Bad,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  std::size_t line = 1, col = 1, end_line = 1, end_col = 1;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::String: return "string " + core::quote_text(t.text);
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) break;
      out.push_back(next());
    }
    Token end;
    end.kind = Tok::End;
    end.text = "";
    // End-of-input errors point at the last visible character.
    end.line = last_line_;
    end.col = last_col_;
    end.end_line = last_line_;
    end.end_col = last_col_;
    out.push_back(end);
    return out;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_word(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || is_digit(c) || c == '_';
  }

  Token next() {
    Token t;
    t.line = line_;
    t.col = col_;
    std::size_t start = pos_;
    char c = peek();
    auto single = [&](Tok k) {
      advance();
      t.kind = k;
    };
    if (is_word(c) && !is_digit(c)) {
      while (is_word(peek())) advance();
      t.kind = core::is_variable_name(std::string_view(&text_[start], 1)) ? Tok::Var : Tok::Ident;
    } else if (is_digit(c) || (c == '-' && is_digit(peek(1)))) {
      advance();
      while (is_digit(peek())) advance();
      if (peek() == '.' && is_digit(peek(1))) {
        advance();
        while (is_digit(peek())) advance();
      }
      t.kind = Tok::Number;
      auto lexeme = text_.substr(start, pos_ - start);
      auto res = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), t.number);
      if (res.ec != std::errc() || !std::isfinite(t.number)) t.kind = Tok::Bad;
    } else if (c == '"') {
      advance();
      std::string value;
      bool closed = false;
      while (pos_ < text_.size() && peek() != '\n') {
        char ch = advance();
        if (ch == '"') {
          closed = true;
          break;
        }
        if (ch == '\\' && pos_ < text_.size()) {
          char e = advance();
          switch (e) {
            case 'n': value += '\n'; break;
            case 't': value += '\t'; break;
            default: value += e;
          }
        } else {
          value += ch;
        }
      }
      t.kind = closed ? Tok::String : Tok::Bad;
      finish(t, start);
      if (closed) t.text = std::move(value);
      else t.text = "unterminated string";
      return t;
    } else if (c == '<' && peek(1) == '-') {
      advance();
      advance();
      t.kind = Tok::Arrow;
    } else if (c == '-' && peek(1) == '>') {
      advance();
      advance();
      t.kind = Tok::Implies;
    } else if (c == '?' && peek(1) == '-') {
      advance();
      advance();
      t.kind = Tok::Query;
    } else {
      switch (c) {
        case '(': single(Tok::LParen); break;
        case ')': single(Tok::RParen); break;
        case '[': single(Tok::LBracket); break;
        case ']': single(Tok::RBracket); break;
        case '|': single(Tok::Pipe); break;
        case ',': single(Tok::Comma); break;
        case '.': single(Tok::Dot); break;
        case '&': single(Tok::Amp); break;
        case '?': single(Tok::Question); break;
        default:
          // Consume a whole UTF-8 sequence so the span stays on one character.
          advance();
          while (pos_ < text_.size() && (static_cast<unsigned char>(peek()) & 0xC0) == 0x80) advance();
          t.kind = Tok::Bad;
      }
    }
    finish(t, start);
    return t;
  }

  void finish(Token& t, std::size_t start) {
    t.text = std::string(text_.substr(start, pos_ - start));
    t.end_line = line_;
    t.end_col = col_ - 1;
    if (t.end_col == 0) t.end_col = 1;
    last_line_ = t.end_line;
    last_col_ = t.end_col;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1, col_ = 1;
  std::size_t last_line_ = 1, last_col_ = 1;
};

struct SyntaxError {
  std::string message;
  const Token* at;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string file, std::vector<ParseDiagnostic>& diags)
      : toks_(std::move(tokens)), file_(std::move(file)), diags_(diags) {}

  void program(KnowledgeBase& kb, std::vector<std::size_t>& clause_lines) {
    while (cur().kind != Tok::End) {
      std::size_t start = pos_;
      try {
        std::size_t before = kb.clauses().size();
        std::size_t line = cur().line;
        item(kb);
        if (kb.clauses().size() != before) clause_lines.push_back(line);
      } catch (const SyntaxError& e) {
        diags_.push_back({Severity::Error, e.message, span(*e.at)});
        sync(start);
      }
    }
  }

  Atom single_goal() {
    if (cur().kind == Tok::Query) ++pos_;
    Atom goal = atom(false);
    if (cur().kind == Tok::Dot) ++pos_;
    if (cur().kind != Tok::End) fail("single goal expected", cur());
    return goal;
  }

  Term single_term() {
    Term t = term(0);
    if (cur().kind != Tok::End) fail("unexpected " + describe(cur()) + " after term", cur());
    return t;
  }

  SourceSpan span(const Token& t) const { return {file_, t.line, t.col, t.end_line, t.end_col}; }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t n = 1) const { return toks_[std::min(pos_ + n, toks_.size() - 1)]; }

  [[noreturn]] void fail(std::string message, const Token& at) { throw SyntaxError{std::move(message), &at}; }

  const Token& expect(Tok kind, const char* what) {
    if (cur().kind != kind) {
      if (cur().kind == Tok::Bad) fail("invalid token " + describe(cur()), cur());
      fail(std::string("expected ") + what + " but found " + describe(cur()), cur());
    }
    return toks_[pos_++];
  }

  void sync(std::size_t start) {
    if (pos_ == start && cur().kind != Tok::End) ++pos_;
    while (cur().kind != Tok::End && cur().kind != Tok::Dot) ++pos_;
    if (cur().kind == Tok::Dot) ++pos_;
  }

  void item(KnowledgeBase& kb) {
    if (cur().kind == Tok::Ident && cur().text == "prop" && peek().kind != Tok::LParen && peek().kind != Tok::Dot &&
        peek().kind != Tok::Arrow) {
      prop_rule(kb);
      return;
    }
    HornClause clause;
    clause.head = atom(true);
    if (cur().kind == Tok::Arrow) {
      ++pos_;
      clause.body.push_back(atom(true));
      while (cur().kind == Tok::Comma) {
        ++pos_;
        clause.body.push_back(atom(true));
      }
    }
    expect(Tok::Dot, "'.' to end the clause");
    kb.add_clause(std::move(clause));
  }

  std::string prop_name() {
    if (cur().kind != Tok::Ident && cur().kind != Tok::Var)
      fail("expected a proposition name but found " + describe(cur()), cur());
    return toks_[pos_++].text;
  }

  std::optional<std::string> question() {
    if (cur().kind != Tok::Question) return std::nullopt;
    ++pos_;
    return expect(Tok::String, "question text").text;
  }

  void prop_rule(KnowledgeBase& kb) {
    const Token& kw = toks_[pos_++];
    PropRule rule;
    for (;;) {
      std::string name = prop_name();
      if (auto q = question()) rule.questions[name] = *q;
      rule.antecedents.push_back(std::move(name));
      if (cur().kind != Tok::Amp) break;
      ++pos_;
    }
    expect(Tok::Implies, "'->' or '&'");
    const Token& cons = cur();
    rule.consequent = prop_name();
    if (auto q = question()) {
      const std::string& first = rule.antecedents.front();
      if (rule.questions.count(first)) fail("proposition '" + first + "' already has a question", cons);
      rule.questions[first] = *q;
    }
    expect(Tok::Dot, "'.' to end the rule");
    for (const auto& a : rule.antecedents)
      if (a == rule.consequent) fail("proposition '" + a + "' is both antecedent and consequent", cons);
    (void)kw;
    kb.add_rule(std::move(rule));
  }

  Atom atom(bool track_arity) {
    const Token& name = cur();
    if (name.kind != Tok::Ident) {
      if (name.kind == Tok::Var) fail("expected a predicate name but found variable " + describe(name), name);
      if (name.kind == Tok::Bad) fail("invalid token " + describe(name), name);
      fail("expected a predicate name but found " + describe(name), name);
    }
    ++pos_;
    Atom a{name.text, {}};
    if (cur().kind == Tok::LParen) a.args = arguments(0);
    if (track_arity) note_arity(a, name);
    return a;
  }

  std::vector<Term> arguments(int depth) {
    const Token& open = toks_[pos_++];
    std::vector<Term> args;
    args.push_back(term(depth + 1));
    for (;;) {
      if (cur().kind == Tok::Comma) {
        ++pos_;
        args.push_back(term(depth + 1));
        continue;
      }
      if (cur().kind == Tok::RParen) {
        ++pos_;
        return args;
      }
      fail("unclosed '(': expected ',' or ')' but found " + describe(cur()), open);
    }
  }

  Term term(int depth) {
    if (depth > 200) fail("terms nested too deeply", cur());
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Var:
        ++pos_;
        return Term::variable(t.text);
      case Tok::Number:
        ++pos_;
        return Term::number(t.number);
      case Tok::String:
        ++pos_;
        return Term::text(t.text);
      case Tok::Ident: {
        ++pos_;
        if (cur().kind == Tok::LParen) return Term::compound(t.text, arguments(depth));
        return Term::symbol(t.text);
      }
      case Tok::LBracket:
        return list(depth);
      case Tok::Bad:
        fail("invalid token " + describe(t), t);
      default:
        fail("expected a term but found " + describe(t), t);
    }
  }

  Term list(int depth) {
    const Token& open = toks_[pos_++];
    std::vector<Term> items;
    std::optional<Term> tail;
    if (cur().kind == Tok::RBracket) {
      ++pos_;
      return Term::empty_list();
    }
    items.push_back(term(depth + 1));
    for (;;) {
      if (cur().kind == Tok::Comma) {
        ++pos_;
        items.push_back(term(depth + 1));
        continue;
      }
      if (cur().kind == Tok::Pipe) {
        ++pos_;
        tail = term(depth + 1);
      }
      if (cur().kind == Tok::RBracket) {
        ++pos_;
        return Term::list(std::move(items), std::move(tail));
      }
      fail("unclosed '[': expected ',', '|' or ']' but found " + describe(cur()), open);
    }
  }

  void note_arity(const Atom& a, const Token& at) {
    auto it = arity_sites_.find(a.predicate);
    if (it == arity_sites_.end()) {
      arity_sites_.emplace(a.predicate, std::make_pair(a.arity(), span(at)));
      return;
    }
    if (it->second.first == a.arity()) return;
    const auto& first = it->second.second;
    std::ostringstream msg;
    msg << "predicate '" << a.predicate << "' used with arity " << a.arity() << " here and with arity "
        << it->second.first << " at " << first.file << ':' << first.start_line << ':' << first.start_column;
    diags_.push_back({Severity::Warning, msg.str(), span(at)});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::string file_;
  std::vector<ParseDiagnostic>& diags_;
  std::map<std::string, std::pair<std::size_t, SourceSpan>> arity_sites_;
};

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cell);
      cell.clear();
    } else {
      cell += c;
    }
  }
  out.push_back(cell);
  for (auto& s : out) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return out;
}

bool blank(std::string_view line) { return line.find_first_not_of(" \t\r") == std::string_view::npos; }

/// Pulls table blocks and metadata lines out of the document, blanking
/// them so token positions of the remaining text are unchanged.
std::string extract_tables(std::string_view text, const std::string& file, ParseResult& result) {
  static const std::regex table_open(R"(^\s*table\s+([a-z][A-Za-z0-9_]*)\s*:\s*$)");
  static const std::regex meta(R"(^\s*#@(name|version)\s+(.*?)\s*$)");
  std::string out(text);
  std::vector<std::pair<std::size_t, std::size_t>> lines;  // offset, length
  for (std::size_t pos = 0; pos <= text.size();) {
    std::size_t nl = text.find('\n', pos);
    std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    lines.emplace_back(pos, end - pos);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  auto line_at = [&](std::size_t i) { return std::string(text.substr(lines[i].first, lines[i].second)); };
  auto erase = [&](std::size_t i) {
    for (std::size_t k = 0; k < lines[i].second; ++k) out[lines[i].first + k] = ' ';
  };
  auto line_span = [&](std::size_t i) {
    std::size_t len = std::max<std::size_t>(1, lines[i].second);
    return SourceSpan{file, i + 1, 1, i + 1, len};
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = line_at(i);
    std::smatch m;
    if (std::regex_match(line, m, meta)) {
      if (m[1] == "name") result.kb.metadata.name = m[2];
      else result.kb.metadata.version = m[2];
      continue;
    }
    if (!std::regex_match(line, m, table_open)) continue;
    std::string name = m[1];
    erase(i);
    core::NumericTable table;
    bool have_header = false;
    bool bad = false;
    std::size_t j = i + 1;
    for (; j < lines.size(); ++j) {
      std::string row = line_at(j);
      if (blank(row)) break;
      erase(j);
      auto first = row.find_first_not_of(" \t");
      if (row[first] == '#') continue;
      auto cells = split_csv(row);
      if (!have_header) {
        table.columns = cells;
        have_header = true;
        continue;
      }
      if (cells.size() != table.columns.size()) {
        result.diagnostics.push_back({Severity::Error,
                                      "table '" + name + "' row has " + std::to_string(cells.size()) +
                                          " cells, header has " + std::to_string(table.columns.size()),
                                      line_span(j)});
        bad = true;
        continue;
      }
      core::TableRow r{cells[0], {}};
      for (std::size_t k = 1; k < cells.size(); ++k) {
        double v = 0;
        auto res = std::from_chars(cells[k].data(), cells[k].data() + cells[k].size(), v);
        if (cells[k].empty() || res.ec != std::errc() || res.ptr != cells[k].data() + cells[k].size() ||
            !std::isfinite(v)) {
          result.diagnostics.push_back(
              {Severity::Error, "table '" + name + "': '" + cells[k] + "' is not a number", line_span(j)});
          bad = true;
          break;
        }
        r.values.push_back(v);
      }
      if (r.values.size() + 1 == cells.size()) table.rows.push_back(std::move(r));
    }
    if (!have_header) {
      result.diagnostics.push_back({Severity::Error, "table '" + name + "' has no header row", line_span(i)});
    } else if (!bad) {
      result.store.put_table(name, std::move(table));
    }
    i = j;
  }
  return out;
}

}  // namespace

ParseResult parse_kb(std::string_view text, const std::string& file) {
  ParseResult result;
  std::string body = extract_tables(text, file, result);
  Lexer lexer(body);
  Parser parser(lexer.run(), file, result.diagnostics);
  parser.program(result.kb, result.clause_lines);
  return result;
}

core::Atom parse_query(std::string_view text) {
  std::vector<ParseDiagnostic> diags;
  Lexer lexer(text);
  Parser parser(lexer.run(), "<query>", diags);
  try {
    return parser.single_goal();
  } catch (const SyntaxError& e) {
    throw ParseError(e.message, e.at->line, e.at->col);
  }
}

core::Term parse_term(std::string_view text) {
  std::vector<ParseDiagnostic> diags;
  Lexer lexer(text);
  Parser parser(lexer.run(), "<term>", diags);
  try {
    return parser.single_term();
  } catch (const SyntaxError& e) {
    throw ParseError(e.message, e.at->line, e.at->col);
  }
}

std::string serialize_clause(const HornClause& clause) {
  std::string out = core::to_string(clause.head);
  for (std::size_t i = 0; i < clause.body.size(); ++i) {
    out += i == 0 ? " <- " : ", ";
    out += core::to_string(clause.body[i]);
  }
  out += '.';
  return out;
}

std::string serialize_rule(const PropRule& rule) {
  std::string out = "prop ";
  for (std::size_t i = 0; i < rule.antecedents.size(); ++i) {
    if (i) out += " & ";
    const auto& name = rule.antecedents[i];
    out += name;
    auto q = rule.questions.find(name);
    if (q != rule.questions.end()) out += " ? " + core::quote_text(q->second);
  }
  out += " -> " + rule.consequent + '.';
  return out;
}

std::string serialize_kb(const KnowledgeBase& kb) {
  std::string out = "# ace knowledge base\n";
  if (!kb.metadata.name.empty()) out += "#@name " + kb.metadata.name + '\n';
  if (!kb.metadata.version.empty()) out += "#@version " + kb.metadata.version + '\n';
  for (const auto& c : kb.clauses()) out += serialize_clause(c) + '\n';
  for (const auto& r : kb.prop_rules()) out += serialize_rule(r) + '\n';
  return out;
}

std::string span_text(std::string_view text, const SourceSpan& span) {
  std::size_t line = 1, col = 1;
  std::string out;
  for (char c : text) {
    bool after_start = line > span.start_line || (line == span.start_line && col >= span.start_column);
    bool before_end = line < span.end_line || (line == span.end_line && col <= span.end_column);
    if (after_start && before_end) out += c;
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return out;
}

}  // namespace ace::lang
