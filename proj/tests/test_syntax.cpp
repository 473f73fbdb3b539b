#include <gtest/gtest.h>

#include <random>

#include "intensio/error.hpp"
#include "intensio/syntax.hpp"
#include "random_ast.hpp"

using namespace intensio;

namespace {

GroupTerm v(const char* n) { return GroupTerm::var(n); }
Formula p(const char* n) { return Formula::prop(n); }

}  // namespace

TEST(ParseTerm, SumWithZero) {
  EXPECT_EQ(parse_term("a + 0", Signature::sl()), GroupTerm::plus(v("a"), GroupTerm::zero()));
}

TEST(ParseTerm, NestedCompositionWithUnit) {
  EXPECT_EQ(parse_term("(a . b) . 1", Signature::rum()),
            GroupTerm::dot(GroupTerm::dot(v("a"), v("b")), GroupTerm::one()));
}

TEST(ParseTerm, PostfixCap) {
  EXPECT_EQ(parse_term("a^", Signature::csl()), GroupTerm::cap(v("a")));
  EXPECT_EQ(parse_term("a^^ + b", Signature::csl()),
            GroupTerm::plus(GroupTerm::cap(GroupTerm::cap(v("a"))), v("b")));
}

TEST(ParseTerm, CompositionIsLeftAssociativeAndBindsTighter) {
  EXPECT_EQ(parse_term("a . b . c", Signature::rum()),
            GroupTerm::dot(GroupTerm::dot(v("a"), v("b")), v("c")));
  EXPECT_EQ(parse_term("a . b", Signature::ba()),
            GroupTerm::apply(Op::Meet, {v("a"), v("b")}));
  EXPECT_EQ(parse_term("-a + b . c", Signature::ba()),
            GroupTerm::apply(Op::Join, {GroupTerm::apply(Op::Complement, {v("a")}),
                                        GroupTerm::apply(Op::Meet, {v("b"), v("c")})}));
}

TEST(ParseTerm, RejectsOperatorsOutsideSignature) {
  EXPECT_THROW(parse_term("a + b", Signature::rum()), ParseError);
  EXPECT_THROW(parse_term("a . b", Signature::sl()), ParseError);
  EXPECT_THROW(parse_term("1", Signature::csl()), ParseError);
  EXPECT_THROW(parse_term("a^", Signature::empty()), ParseError);
}

TEST(ParseTerm, ErrorPositions) {
  try {
    parse_term("a + + b", Signature::sl());
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
  try {
    parse_term("(a + b", Signature::sl());
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 6u);
  }
}

TEST(ParseFormula, ImplicationDesugars) {
  EXPECT_EQ(parse_formula("[a](p -> q)", Signature::empty()),
            Formula::box(v("a"), Formula::negation(Formula::conjunction(
                                     p("p"), Formula::negation(p("q"))))));
}

TEST(ParseFormula, DiamondOverSum) {
  EXPECT_EQ(parse_formula("<a+b>p", Signature::sl()),
            Formula::dia(GroupTerm::plus(v("a"), v("b")), p("p")));
}

TEST(ParseFormula, DualDiamondIsNotBoxNot) {
  EXPECT_EQ(parse_formula("<a}p", Signature::empty()),
            Formula::negation(Formula::box(v("a"), Formula::negation(p("p")))));
  EXPECT_EQ(parse_formula("[a}p", Signature::empty()),
            Formula::negation(Formula::dia(v("a"), Formula::negation(p("p")))));
}

TEST(ParseFormula, DerivedConnectives) {
  const auto& sig = Signature::empty();
  EXPECT_EQ(parse_formula("false", sig), Formula::negation(Formula::top()));
  EXPECT_EQ(parse_formula("p | q", sig),
            Formula::negation(Formula::conjunction(Formula::negation(p("p")),
                                                   Formula::negation(p("q")))));
  EXPECT_EQ(parse_formula("p <-> q", sig), Formula::equivalence(p("p"), p("q")));
  EXPECT_EQ(parse_formula("p -> q -> r", sig),
            Formula::implication(p("p"), Formula::implication(p("q"), p("r"))));
  EXPECT_EQ(parse_formula("p & q | r", sig),
            Formula::disjunction(Formula::conjunction(p("p"), p("q")), p("r")));
  EXPECT_EQ(parse_formula("~[a]p & q", sig),
            Formula::conjunction(Formula::negation(Formula::box(v("a"), p("p"))), p("q")));
}

TEST(ParseFormula, CommentsAndWhitespace) {
  EXPECT_EQ(parse_formula("  [a] # everyone in a\n  p  ", Signature::empty()),
            Formula::box(v("a"), p("p")));
}

TEST(ParseFormula, SortCollisionIsRejectedWithPosition) {
  try {
    parse_formula("[a]p & a", Signature::empty());
    FAIL();
  } catch (const SortError& e) {
    EXPECT_EQ(e.position(), 7u);
  }
  EXPECT_THROW(parse_formula("p & [p]q", Signature::empty()), SortError);
  EXPECT_THROW(parse_formula("[true]p", Signature::empty()), SortError);
  EXPECT_THROW(parse_formula("[a]0", Signature::sl()), SortError);
}

TEST(ParseFormula, SyntaxErrors) {
  EXPECT_THROW(parse_formula("", Signature::empty()), ParseError);
  EXPECT_THROW(parse_formula("p &", Signature::empty()), ParseError);
  EXPECT_THROW(parse_formula("[a p", Signature::empty()), ParseError);
  EXPECT_THROW(parse_formula("p q", Signature::empty()), ParseError);
  EXPECT_THROW(parse_formula("P", Signature::empty()), ParseError);
  EXPECT_THROW(parse_formula("p $ q", Signature::empty()), ParseError);
}

TEST(Render, Examples) {
  EXPECT_EQ(render_term(GroupTerm::plus(v("a"), v("b"))), "a + b");
  EXPECT_EQ(render_formula(Formula::box(v("a"), p("p"))), "[a]p");
  EXPECT_EQ(render_formula(Formula::negation(Formula::conjunction(p("p"), p("q")))), "~(p & q)");
}

TEST(Render, MinimalParentheses) {
  EXPECT_EQ(render_term(parse_term("a + (b + c)", Signature::sl())), "a + (b + c)");
  EXPECT_EQ(render_term(parse_term("(a + b) + c", Signature::sl())), "a + b + c");
  EXPECT_EQ(render_term(parse_term("(a + b)^", Signature::csl())), "(a + b)^");
  EXPECT_EQ(render_term(parse_term("-(a . b)", Signature::ba())), "-(a . b)");
  EXPECT_EQ(render_formula(parse_formula("[a + b](p & q)", Signature::sl())), "[a + b](p & q)");
}

TEST(Render, SugaredStyle) {
  const auto& sig = Signature::empty();
  for (const char* text : {"p -> q", "p | q", "p <-> q", "[a}p", "<a}p", "false",
                           "(p -> q) -> r", "p -> q -> r", "~(p <-> q)"}) {
    Formula f = parse_formula(text, sig);
    std::string out = render_formula(f, RenderStyle::Sugared);
    EXPECT_EQ(parse_formula(out, sig), f) << text << " rendered as " << out;
  }
  EXPECT_EQ(render_formula(parse_formula("[a](p -> q)", sig), RenderStyle::Sugared),
            "[a](p -> q)");
  EXPECT_EQ(render_formula(parse_formula("<a}p", sig), RenderStyle::Sugared), "<a}p");
}

TEST(Variables, Examples) {
  const auto& sig = Signature::empty();
  Formula f = parse_formula("[a]p & <b>q", sig);
  EXPECT_EQ(variables_of(f).props, (std::set<std::string>{"p", "q"}));
  EXPECT_EQ(variables_of(f).groups, (std::set<std::string>{"a", "b"}));
  EXPECT_EQ(modal_depth(f), 1u);

  Formula g = parse_formula("p", sig);
  EXPECT_EQ(variables_of(g).props, (std::set<std::string>{"p"}));
  EXPECT_TRUE(variables_of(g).groups.empty());
  EXPECT_EQ(modal_depth(g), 0u);

  Formula h = parse_formula("[a][b]p", sig);
  EXPECT_EQ(variables_of(h).props, (std::set<std::string>{"p"}));
  EXPECT_EQ(variables_of(h).groups, (std::set<std::string>{"a", "b"}));
  EXPECT_EQ(modal_depth(h), 2u);
}

TEST(Subformulas, ChildrenBeforeParents) {
  Formula f = parse_formula("[a]p & p", Signature::empty());
  auto subs = subformulas(f);
  ASSERT_EQ(subs.size(), 3u);
  EXPECT_EQ(subs[0], p("p"));
  EXPECT_EQ(subs.back(), f);
  EXPECT_EQ(subterms(parse_term("a + (a + b)", Signature::sl())).size(), 4u);
}

TEST(CheckFormula, RejectsForeignOperators) {
  Formula f = Formula::box(GroupTerm::dot(v("a"), v("b")), p("p"));
  EXPECT_NO_THROW(check_formula(f, Signature::rum()));
  EXPECT_THROW(check_formula(f, Signature::sl()), EvalError);
}

TEST(SyntaxProperty, RandomRoundTrip) {
  std::mt19937_64 rng(7);
  for (const Signature* sig : {&Signature::empty(), &Signature::sl(), &Signature::rum(),
                               &Signature::csl(), &Signature::ba()}) {
    for (int i = 0; i < 400; ++i) {
      GroupTerm t = testgen::random_term(rng, *sig, 4);
      EXPECT_EQ(parse_term(render_term(t), *sig), t) << render_term(t);
      Formula f = testgen::random_formula(rng, *sig, 6);
      EXPECT_EQ(parse_formula(render_formula(f), *sig), f) << render_formula(f);
      EXPECT_EQ(parse_formula(render_formula(f, RenderStyle::Sugared), *sig), f)
          << render_formula(f, RenderStyle::Sugared);
    }
  }
}
