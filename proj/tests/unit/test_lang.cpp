#include <gtest/gtest.h>

#include <random>

#include "ace/core/error.hpp"
#include "ace/lang/parser.hpp"
#include "generators.hpp"

using namespace ace;
using namespace ace::lang;

TEST(Parse, HornClause) {
  auto r = parse_kb("g(X,Z) <- p(X,Y), p(Y,Z).");
  ASSERT_TRUE(r.ok()) << r.first_error();
  ASSERT_EQ(r.kb.clauses().size(), 1u);
  const auto& c = r.kb.clauses()[0];
  EXPECT_EQ(c.head.predicate, "g");
  EXPECT_EQ(c.head.arity(), 2u);
  ASSERT_EQ(c.body.size(), 2u);
  EXPECT_EQ(c.body[0].predicate, "p");
  EXPECT_EQ(c.body[1].arity(), 2u);
}

TEST(Parse, PropRuleTrailingQuestionAttachesToFirstAntecedent) {
  auto r = parse_kb("prop A & B -> C ? \"Is A true?\" .");
  ASSERT_TRUE(r.ok()) << r.first_error();
  ASSERT_EQ(r.kb.prop_rules().size(), 1u);
  const auto& rule = r.kb.prop_rules()[0];
  EXPECT_EQ(rule.antecedents, (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(rule.consequent, "C");
  ASSERT_EQ(rule.questions.count("A"), 1u);
  EXPECT_EQ(rule.questions.at("A"), "Is A true?");
}

TEST(Parse, InlineQuestionsAndPropAsAtom) {
  auto r = parse_kb("prop leak ? \"Leak?\" & hot ? \"Hot?\" -> alarm.\nprop(x).\nprop.\n");
  ASSERT_TRUE(r.ok()) << r.first_error();
  EXPECT_EQ(r.kb.prop_rules()[0].questions.size(), 2u);
  EXPECT_EQ(r.kb.clauses().size(), 2u);
}

TEST(Parse, UnclosedParenPointsAtParen) {
  std::string text = "g(X,Z <- p(X).";
  auto r = parse_kb(text);
  ASSERT_FALSE(r.ok());
  const auto& d = r.diagnostics[0];
  EXPECT_EQ(d.severity, Severity::Error);
  EXPECT_EQ(d.span.start_line, 1u);
  EXPECT_EQ(d.span.start_column, 2u);
  EXPECT_EQ(span_text(text, d.span), "(");
}

TEST(Parse, RecoversAfterError) {
  auto r = parse_kb("p(a).\nq(( .\nr(b).\n");
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.kb.clauses().size(), 2u);
}

TEST(Parse, ArityConflictWarnsWithBothSites) {
  auto r = parse_kb("p(a).\np(a, b).\n");
  EXPECT_TRUE(r.ok());
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].severity, Severity::Warning);
  EXPECT_NE(r.diagnostics[0].message.find("1:"), std::string::npos) << r.diagnostics[0].message;
  EXPECT_EQ(r.diagnostics[0].span.start_line, 2u);
}

TEST(Parse, TablesAndMetadata) {
  auto r = parse_kb("#@name demo\n#@version 3\np(a).\ntable prices:\nproduct,price\niron,300\n\nq(b).\n");
  ASSERT_TRUE(r.ok()) << r.first_error();
  EXPECT_EQ(r.kb.metadata.name, "demo");
  EXPECT_EQ(r.kb.metadata.version, "3");
  EXPECT_EQ(r.kb.clauses().size(), 2u);
  ASSERT_NE(r.store.table("prices"), nullptr);
  EXPECT_EQ(*r.store.table("prices")->value("iron", "price"), 300.0);
}

TEST(Query, SingleGoal) {
  auto a = parse_query("?- handle_event(E).");
  EXPECT_EQ(a.predicate, "handle_event");
  ASSERT_EQ(a.arity(), 1u);
  EXPECT_TRUE(a.args[0].is_variable());
  EXPECT_TRUE(parse_query("?- p(1,2).").is_ground());
  try {
    parse_query("?- p(1). q(2).");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("single goal expected"), std::string::npos);
  }
  EXPECT_THROW(parse_query("?- p(1) q"), Error);
}

TEST(Serialize, Basics) {
  core::KnowledgeBase empty;
  auto text = serialize_kb(empty);
  EXPECT_EQ(text.rfind("#", 0), 0u);
  EXPECT_TRUE(parse_kb(text).kb.clauses().empty());

  core::KnowledgeBase one;
  one.add_clause({parse_query("p(a)"), {}});
  EXPECT_NE(serialize_kb(one).find("\np(a).\n"), std::string::npos);

  auto two = parse_kb("b(x).\na(y) <- b(y).\n").kb;
  auto s = serialize_kb(two);
  EXPECT_LT(s.find("b(x)."), s.find("a(y) <- b(y)."));
}

TEST(Serialize, RoundTripRandomKbs) {
  std::mt19937 rng(2024);
  for (int i = 0; i < 300; ++i) {
    auto kb = gen::random_kb(rng);
    auto text = serialize_kb(kb);
    auto r = parse_kb(text);
    ASSERT_TRUE(r.ok()) << r.first_error() << "\n" << text;
    ASSERT_TRUE(r.kb == kb) << text << "\n---\n" << serialize_kb(r.kb);
  }
}

TEST(Parse, IsPure) {
  std::string text = "a(X) <- b(X, [1, 2 | T]), c(\"s\").\nprop x -> y.\n";
  auto r1 = parse_kb(text), r2 = parse_kb(text);
  EXPECT_TRUE(r1.kb == r2.kb);
  EXPECT_EQ(serialize_kb(r1.kb), serialize_kb(r2.kb));
}

struct ErrorFixture {
  const char* text;
  std::size_t line, column;
};

TEST(Parse, ErrorFixturesHavePositionedSpans) {
  const ErrorFixture fixtures[] = {
      {"g(X,Z <- p(X).", 1, 2},
      {"p(a)", 1, 4},
      {"p(a) <- .", 1, 9},
      {"ok(1).\nbad(1,,2).", 2, 7},
      {"x(\"open string).", 1, 3},
      {"prop -> b.", 1, 6},
      {"prop a -> .", 1, 11},
      {"prop a -> a.", 1, 11},
      {"p([1, 2).", 1, 3},
      {"p(a) q(b).", 1, 6},
      {"p(X) <- q(X), .", 1, 15},
      {"P(a).", 1, 1},
      {"p(a) @ q.", 1, 6},
  };
  for (const auto& f : fixtures) {
    auto r = parse_kb(f.text);
    ASSERT_FALSE(r.ok()) << f.text;
    const ParseDiagnostic* err = nullptr;
    for (const auto& d : r.diagnostics)
      if (d.severity == Severity::Error) {
        err = &d;
        break;
      }
    ASSERT_NE(err, nullptr);
    EXPECT_EQ(err->span.start_line, f.line) << f.text << ": " << err->message;
    EXPECT_EQ(err->span.start_column, f.column) << f.text << ": " << err->message;
    EXPECT_FALSE(span_text(f.text, err->span).empty()) << f.text;
  }
}
