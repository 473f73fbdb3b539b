#include <gtest/gtest.h>

#include <random>

#include "intensio/duality.hpp"
#include "intensio/error.hpp"
#include "intensio/relational.hpp"
#include "model_builders.hpp"

namespace {

using namespace intensio;
using testgen::ws;

/// One group element over `atoms` atoms with explicit box and dia tables
/// (indexed by the element's bits).
SigmaFrame one_element(TheoryKind theory, std::size_t atoms, std::vector<WorldSet> box,
                       std::vector<WorldSet> dia) {
  SigmaFrame sf;
  sf.theory = theory;
  sf.props.atoms = atoms;
  sf.group_elements = {"a"};
  sf.box = std::move(box);
  sf.dia = std::move(dia);
  return sf;
}

std::vector<Intension> random_seeds(std::mt19937_64& rng, const RelationalFrame& fr, std::size_t count) {
  std::vector<Intension> out;
  for (std::size_t i = 0; i < count; ++i) {
    Intension f = Intension::empty(fr.world_count());
    for (World w = 0; w < fr.world_count(); ++w) {
      for (RelationId r = 0; r < fr.relation_count(); ++r) {
        if (rng() & 1U) f.extent[w].push_back(r);
      }
    }
    out.push_back(f);
  }
  return out;
}

/// A small random relational frame with two random seeds, and its complex algebra.
ComplexAlgebra random_complex(std::mt19937_64& rng, TheoryKind theory) {
  const std::size_t n = 1 + rng() % 2;
  const std::size_t m = rng() % 3;
  auto model = testgen::random_model(rng, theory, n, m, {}, {});
  return complex_algebra(model.frame, random_seeds(rng, model.frame, 2));
}

const TheoryKind kTheories[] = {TheoryKind::Empty, TheoryKind::SL, TheoryKind::RUM, TheoryKind::CSL,
                                TheoryKind::BA};

TEST(ComplexAlgebra, OneWorldNoRelations) {
  RelationalFrame fr(1, TheoryKind::SL);
  ComplexAlgebra ca = complex_algebra(fr, {Intension::empty(1)}, {"a"});
  ASSERT_EQ(ca.algebra.group_count(), 1u);
  EXPECT_EQ(ca.algebra.group_elements[0], "a");
  EXPECT_EQ(ca.algebra.props.atoms, 1u);
  for (std::size_t x = 0; x < 2; ++x) {
    EXPECT_EQ(ca.algebra.box_of(0, WorldSet(x)), ws({0}));
    EXPECT_EQ(ca.algebra.dia_of(0, WorldSet(x)), WorldSet{});
  }
  const std::size_t none[] = {0, 0};
  EXPECT_EQ(ca.algebra.apply(Op::Plus, none), 0u);
  EXPECT_EQ(ca.algebra.apply(Op::Zero, {}), 0u);
  EXPECT_FALSE(check_sigma_frame(ca.algebra));
}

TEST(ComplexAlgebra, NamesDerivedElements) {
  auto model = testgen::composition_model();
  ComplexAlgebra ca = complex_algebra(model.frame, {model.groups.at("a"), model.groups.at("b")}, {"a", "b"});
  const auto& names = ca.algebra.group_elements;
  EXPECT_NE(std::find(names.begin(), names.end(), "1"), names.end());
  EXPECT_NE(std::find(names.begin(), names.end(), "(a . b)"), names.end());
}

// Oracle: box and dia tables agree with the relational evaluator on [a]p and <a>p.
TEST(ComplexAlgebra, TablesMatchRelationalTruth) {
  std::mt19937_64 rng(11);
  const Formula box = Formula::box(GroupTerm::var("a"), Formula::prop("p"));
  const Formula dia = Formula::dia(GroupTerm::var("a"), Formula::prop("p"));
  for (TheoryKind theory : kTheories) {
    for (int iter = 0; iter < 60; ++iter) {
      ComplexAlgebra ca = random_complex(rng, theory);
      for (std::size_t e = 0; e < ca.carrier.size(); ++e) {
        for (std::size_t x = 0; x < ca.algebra.props.size(); ++x) {
          RelationalModel m{ca.frame, {{"p", WorldSet(x)}}, {{"a", ca.carrier[e]}}};
          ASSERT_EQ(eval_formula(m, box), ca.algebra.box_of(e, WorldSet(x)));
          ASSERT_EQ(eval_formula(m, dia), ca.algebra.dia_of(e, WorldSet(x)));
        }
      }
    }
  }
}

// Oracle: each table entry is the class of the relational operation on representatives.
TEST(ComplexAlgebra, OperationTablesMatchRelationalTerms) {
  std::mt19937_64 rng(12);
  for (TheoryKind theory : kTheories) {
    for (int iter = 0; iter < 40; ++iter) {
      ComplexAlgebra ca = random_complex(rng, theory);
      const std::size_t g = ca.carrier.size();
      for (const OperatorSpec& spec : signature_of(theory).operators()) {
        std::vector<GroupTerm> vars;
        for (int i = 0; i < spec.arity; ++i) vars.push_back(GroupTerm::var("v" + std::to_string(i)));
        const GroupTerm t = GroupTerm::apply(spec.op, vars);
        const std::size_t tuples = spec.arity == 0 ? 1 : (spec.arity == 1 ? g : g * g);
        for (std::size_t flat = 0; flat < tuples; ++flat) {
          std::vector<std::size_t> idx;
          if (spec.arity == 1) idx = {flat};
          if (spec.arity == 2) idx = {flat / g, flat % g};
          RelationalModel m{ca.frame, {}, {}};
          for (std::size_t i = 0; i < idx.size(); ++i) m.groups["v" + std::to_string(i)] = ca.carrier[idx[i]];
          Intension value = eval_term(m, t);
          const Intension& expect = ca.carrier[ca.algebra.apply(spec.op, idx)];
          for (World w = 0; w < m.frame.world_count(); ++w) {
            if (theory == TheoryKind::BA) {
              ASSERT_EQ(value.extent[w], expect.extent[w]);
            } else {
              ASSERT_EQ(image_family(m.frame, value, w), image_family(ca.frame, expect, w));
            }
          }
        }
      }
    }
  }
}

TEST(ComplexAlgebra, FramesOfTheTheoriesPassTheirEquations) {
  std::mt19937_64 rng(13);
  for (TheoryKind theory : {TheoryKind::Empty, TheoryKind::SL, TheoryKind::RUM, TheoryKind::BA}) {
    for (int iter = 0; iter < 200; ++iter) {
      ComplexAlgebra ca = random_complex(rng, theory);
      auto v = check_sigma_frame(ca.algebra);
      ASSERT_FALSE(v) << theory_name(theory) << ": " << v->equation << " " << v->witness;
    }
  }
}

TEST(ComplexAlgebra, CslZeroBreaksBoxReflexivity) {
  RelationalFrame fr(2, TheoryKind::CSL);
  RelationId r = fr.add_relation("r", {ws({0}), ws({1})});
  ComplexAlgebra ca = complex_algebra(fr, {Intension{{{r}, {r}}}});
  auto v = check_sigma_frame(ca.algebra);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->equation, "cs-box-reflexive");
  EXPECT_NE(v->witness.find("a=0"), std::string::npos) << v->witness;
}

TEST(ComplexAlgebra, CapsOnCarrierAndWorlds) {
  ResourceCaps caps = default_caps();
  caps.carrier_elements = 2;
  RelationalFrame fr(2, TheoryKind::BA);
  RelationId r = fr.add_relation("r", {ws({0}), ws({1})});
  EXPECT_THROW(complex_algebra(fr, {Intension{{{r}, {}}}}, {}, caps), CapExceeded);
  EXPECT_THROW(complex_algebra(RelationalFrame(11, TheoryKind::SL), {}), CapExceeded);
}

TEST(SigmaFrame, MutatedBoxIsReportedAsBoxMeet) {
  // box = dia = identity on two atoms
  std::vector<WorldSet> id{WorldSet(0), WorldSet(1), WorldSet(2), WorldSet(3)};
  SigmaFrame sf = one_element(TheoryKind::Empty, 2, id, id);
  EXPECT_FALSE(check_sigma_frame(sf));
  sf.box[1] = ws({0, 1});
  auto v = check_sigma_frame(sf);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->equation, "box-meet");
}

TEST(SigmaFrame, NonMonotoneDiamondPassesTheNormalLawsOnly) {
  // box is constantly top; dia holds exactly at bottom
  SigmaFrame sf = one_element(TheoryKind::Empty, 1, {ws({0}), ws({0})}, {ws({0}), WorldSet{}});
  auto v = check_sigma_frame(sf);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->equation, "dia-monotone");
  MorphismReport report = canonical_morphism_check(sf);
  EXPECT_FALSE(report.ok);
  EXPECT_EQ(report.clause, "m4");
}

TEST(SigmaFrame, DiamondBoxMeetFailureBreaksTheEmbedding) {
  // box is constantly top, dia(x) = x: <a>top & [a]bottom is not below <a>bottom
  SigmaFrame sf = one_element(TheoryKind::Empty, 1, {ws({0}), ws({0})}, {WorldSet{}, ws({0})});
  auto v = check_sigma_frame(sf);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->equation, "dia-box-meet");
  // G(a) has one relation, with empty image, so its diamond holds of bottom
  MorphismReport report = canonical_morphism_check(sf);
  EXPECT_FALSE(report.ok);
  EXPECT_EQ(report.clause, "m4");
}

TEST(SigmaFrame, RumCompositionBoxViolation) {
  SigmaFrame sf;
  sf.theory = TheoryKind::RUM;
  sf.props.atoms = 1;
  sf.group_elements = {"1", "a"};
  // a is a single relation with empty image; a . a = 1 although [a] is constantly top
  sf.ops = {OpTable{Op::Dot, {0, 1, 1, 0}}, OpTable{Op::One, {0}}};
  sf.box = {WorldSet(0), WorldSet(1), WorldSet(1), WorldSet(1)};
  sf.dia = {WorldSet(0), WorldSet(1), WorldSet(1), WorldSet(1)};
  auto v = check_sigma_frame(sf);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->equation, "rum-compose-box");
  sf.ops[0].values = {0, 1, 1, 1};
  EXPECT_FALSE(check_sigma_frame(sf));
}

TEST(SigmaFrame, ShapeErrors) {
  SigmaFrame sf = one_element(TheoryKind::Empty, 1, {ws({0})}, {ws({0}), ws({0})});
  EXPECT_THROW(check_shape(sf), DocumentError);
  sf.box.push_back(ws({0}));
  EXPECT_NO_THROW(check_shape(sf));
  sf.theory = TheoryKind::SL;
  EXPECT_THROW(check_shape(sf), DocumentError);
  sf.ops = {OpTable{Op::Plus, {0}}, OpTable{Op::Zero, {1}}};
  EXPECT_THROW(check_shape(sf), DocumentError);
  sf.ops[1].values = {0};
  EXPECT_NO_THROW(check_shape(sf));
  sf.box[0] = ws({1});
  EXPECT_THROW(check_shape(sf), DocumentError);
}

TEST(SigmaFrame, RandomFramesOfConsistentTheoriesPass) {
  std::mt19937_64 rng(21);
  for (TheoryKind theory : {TheoryKind::Empty, TheoryKind::SL, TheoryKind::RUM, TheoryKind::BA}) {
    for (int iter = 0; iter < 200; ++iter) {
      SigmaFrame sf = random_sigma_frame_candidate(rng, theory);
      auto v = check_sigma_frame(sf);
      ASSERT_FALSE(v) << theory_name(theory) << ": " << v->equation << " " << v->witness;
    }
  }
}

TEST(SigmaFrame, NoCslCandidatePasses) {
  std::mt19937_64 rng(22);
  for (int iter = 0; iter < 200; ++iter) {
    SigmaFrame sf = random_sigma_frame_candidate(rng, TheoryKind::CSL);
    auto v = check_sigma_frame(sf);
    ASSERT_TRUE(v);
    EXPECT_EQ(v->equation, "cs-box-reflexive");
  }
  EXPECT_THROW(random_sigma_frame(rng, TheoryKind::CSL, 3, 4, 20), EvalError);
}

// Oracle: check_sigma_frame's verdict on the join equations matches
// equation_valid on the corresponding formulas.
TEST(Equations, JoinEquationsAgreeWithEquationValid) {
  std::mt19937_64 rng(23);
  const Signature& sig = Signature::sl();
  const Formula box_l = parse_formula("[a + b]p", sig), box_r = parse_formula("[a]p & [b]p", sig);
  const Formula dia_l = parse_formula("<a + b>p", sig), dia_r = parse_formula("<a>p | <b>p", sig);
  for (int iter = 0; iter < 300; ++iter) {
    SigmaFrame sf = random_sigma_frame_candidate(rng, TheoryKind::SL, 2, 4);
    // scramble one join entry
    auto& plus = sf.ops[0].values;
    const std::size_t g = sf.group_count();
    if (iter % 2 == 1) plus[rng() % plus.size()] = rng() % g;
    auto v = check_sigma_frame(sf);
    const bool equations = equation_valid(sf, box_l, box_r).valid && equation_valid(sf, dia_l, dia_r).valid;
    if (!v) EXPECT_TRUE(equations);
    if (!equations) {
      ASSERT_TRUE(v);
      EXPECT_TRUE(v->equation.starts_with("sl-join") || v->equation.starts_with("join-")) << v->equation;
    }
  }
}

// Oracle: on a complex algebra, an equation holds iff the biconditional is
// frame-valid over the carrier.
TEST(Equations, AgreeWithRelationalFrameValidity) {
  std::mt19937_64 rng(24);
  const char* pairs[][2] = {{"[a + b]p", "[a]p & [b]p"}, {"<a>p", "<b>p"},      {"[a](p & q)", "[a]p"},
                            {"<a + 0>p", "<a>p"},        {"[a]p | [b]q", "true"}, {"<a>[b]p", "[b]<a>p"}};
  for (int iter = 0; iter < 80; ++iter) {
    ComplexAlgebra ca = random_complex(rng, TheoryKind::SL);
    for (const auto& pair : pairs) {
      const Formula l = parse_formula(pair[0], Signature::sl()), r = parse_formula(pair[1], Signature::sl());
      const bool relational = frame_valid(ca.frame, Formula::equivalence(l, r), &ca.carrier).valid;
      ASSERT_EQ(equation_valid(ca.algebra, l, r).valid, relational) << pair[0] << " = " << pair[1];
    }
  }
}

TEST(Equations, CounterEvaluationFails) {
  RelationalFrame fr(2, TheoryKind::SL);
  RelationId r = fr.add_relation("r", {ws({1}), ws({0})});
  ComplexAlgebra ca = complex_algebra(fr, {Intension{{{r}, {}}}}, {"a"});
  const Formula l = parse_formula("[a]p", Signature::sl()), rhs = parse_formula("p", Signature::sl());
  EquationResult res = equation_valid(ca.algebra, l, rhs);
  ASSERT_FALSE(res.valid);
  ASSERT_TRUE(res.counter);
  EXPECT_NE(evaluate(ca.algebra, *res.counter, l), evaluate(ca.algebra, *res.counter, rhs));
}

TEST(Equations, CapOnEvaluations) {
  std::mt19937_64 rng(5);
  SigmaFrame sf = random_sigma_frame(rng, TheoryKind::SL, 3, 4);
  ResourceCaps caps = default_caps();
  caps.valuations = 3;
  EXPECT_THROW(equation_valid(sf, parse_formula("[a]p", Signature::sl()), parse_formula("p", Signature::sl()), caps),
               CapExceeded);
}

TEST(Canonical, ComplexAlgebrasEmbed) {
  std::mt19937_64 rng(31);
  for (TheoryKind theory : {TheoryKind::Empty, TheoryKind::SL, TheoryKind::RUM, TheoryKind::CSL}) {
    for (int iter = 0; iter < 100; ++iter) {
      ComplexAlgebra ca = random_complex(rng, theory);
      MorphismReport report = canonical_morphism_check(ca.algebra);
      ASSERT_TRUE(report.ok) << theory_name(theory) << ": " << report.clause << " " << report.witness;
    }
  }
}

TEST(Canonical, RandomFramesEmbed) {
  std::mt19937_64 rng(32);
  for (TheoryKind theory : {TheoryKind::Empty, TheoryKind::SL, TheoryKind::RUM, TheoryKind::CSL}) {
    for (int iter = 0; iter < 150; ++iter) {
      // csl candidates fail only the theory equations, which the embedding does not use
      SigmaFrame sf = theory == TheoryKind::CSL ? random_sigma_frame_candidate(rng, theory)
                                                : random_sigma_frame(rng, theory);
      MorphismReport report = canonical_morphism_check(sf);
      ASSERT_TRUE(report.ok) << theory_name(theory) << ": " << report.clause << " " << report.witness;
    }
  }
}

// Boolean complement is not determined by box and dia, so G(a) = G(b) does not
// give G(-a) = G(-b) and the lifted complement is not a function.
TEST(Canonical, BooleanComplementDoesNotLift) {
  RelationalFrame fr(1, TheoryKind::BA);
  RelationId r = fr.add_relation("r", {ws({0})});
  RelationId q = fr.add_relation("q", {ws({0})});
  ComplexAlgebra ca = complex_algebra(fr, {Intension{{{r}}}, Intension{{{r, q}}}}, {"a", "b"});
  const SigmaFrame& sf = ca.algebra;
  for (std::size_t x = 0; x < sf.props.size(); ++x) {
    ASSERT_EQ(sf.box_of(0, WorldSet(x)), sf.box_of(1, WorldSet(x)));
    ASSERT_EQ(sf.dia_of(0, WorldSet(x)), sf.dia_of(1, WorldSet(x)));
  }
  CanonicalAlgebra canon = canonical_embedding_algebra(sf);
  EXPECT_EQ(canon.element_of[0], canon.element_of[1]);
  const std::size_t a[] = {0}, b[] = {1};
  EXPECT_NE(canon.element_of[sf.apply(Op::Complement, a)], canon.element_of[sf.apply(Op::Complement, b)]);
  MorphismReport report = canonical_morphism_check(sf);
  EXPECT_FALSE(report.ok);
  EXPECT_EQ(report.clause, "m2");
}

TEST(Canonical, BooleanFramesKeepTheModalClauses) {
  std::mt19937_64 rng(34);
  int m2 = 0;
  for (int iter = 0; iter < 150; ++iter) {
    SigmaFrame sf = iter % 2 == 0 ? random_sigma_frame(rng, TheoryKind::BA) : random_complex(rng, TheoryKind::BA).algebra;
    MorphismReport report = canonical_morphism_check(sf);
    if (!report.ok) {
      ASSERT_EQ(report.clause, "m2") << report.witness;
      ++m2;
    }
  }
  EXPECT_GT(m2, 0);
}

TEST(Canonical, UltrafilterWorldsAreAtoms) {
  std::mt19937_64 rng(33);
  for (int iter = 0; iter < 50; ++iter) {
    SigmaFrame sf = random_sigma_frame(rng, TheoryKind::SL);
    UltrafilterFrame uf = ultrafilter_frame(sf);
    EXPECT_EQ(uf.frame.world_count(), sf.props.atoms);
    EXPECT_EQ(uf.g.size(), sf.group_count());
    EXPECT_EQ(uf.relation_keys.size(), uf.frame.relation_count());
    CanonicalAlgebra ca = canonical_embedding_algebra(sf);
    EXPECT_EQ(ca.algebra.props.atoms, sf.props.atoms);
    EXPECT_LE(ca.algebra.group_count(), sf.group_count());
  }
  SigmaFrame empty = one_element(TheoryKind::Empty, 0, {WorldSet{}}, {WorldSet{}});
  EXPECT_THROW(ultrafilter_frame(empty), EvalError);
}

TEST(Canonical, ExtensionOfOneWorldFrame) {
  RelationalFrame fr(1, TheoryKind::SL);
  RelationId r = fr.add_relation("r", {ws({0})});
  UltrafilterFrame uf = ultrafilter_extension(fr, {Intension{{{r}}}});
  ASSERT_EQ(uf.frame.world_count(), 1u);
  // elements a and 0; G(0) is empty, G(a) holds one relation with image {u0}
  ASSERT_EQ(uf.g.size(), 2u);
  EXPECT_TRUE(uf.g[1].extent[0].empty());
  ASSERT_EQ(uf.g[0].extent[0].size(), 1u);
  for (RelationId q : uf.g[0].extent[0]) EXPECT_EQ(uf.frame.image(q, 0), ws({0}));
}

TEST(Canonical, JoinIsNotUnionInTheUltrafilterFrame) {
  RelationalFrame fr(2, TheoryKind::SL);
  RelationId r = fr.add_relation("r", {ws({0}), {}});
  RelationId q = fr.add_relation("q", {ws({1}), {}});
  ComplexAlgebra ca = complex_algebra(fr, {Intension{{{r}, {}}}, Intension{{{q}, {}}}}, {"a", "b"});
  UltrafilterFrame uf = ultrafilter_frame(ca.algebra);
  auto witness = join_union_witness(ca.algebra, uf);
  ASSERT_TRUE(witness);
  EXPECT_NE(witness->find("a + b"), std::string::npos) << *witness;
  // the embedding still holds
  EXPECT_TRUE(canonical_morphism_check(ca.algebra).ok);

  ComplexAlgebra single = complex_algebra(fr, {Intension::empty(2)});
  EXPECT_FALSE(join_union_witness(single.algebra, ultrafilter_frame(single.algebra)));
}

}  // namespace
