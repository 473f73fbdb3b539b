#ifndef INTENSIO_THEORIES_HPP
#define INTENSIO_THEORIES_HPP

#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "intensio/caps.hpp"
#include "intensio/frame.hpp"
#include "intensio/syntax.hpp"

namespace intensio {

// Semantic operations on intensions. Operations that need relations absent
// from the frame materialize them (see RelationalFrame::materialize).

Intension sl_zero(const RelationalFrame& fr);
Intension sl_plus(const RelationalFrame& fr, const Intension& f, const Intension& g);

/// Images at `w` of the variants of `g`: {q(w) : q in g(w)}, or {{}} if g(w) is empty.
std::vector<WorldSet> variant_images(const RelationalFrame& fr, const Intension& g, World w);

/// Every world mapped to {id}, with the identity relation materialized if absent.
Intension rum_one(RelationalFrame& fr);
/// Intensional composition. At each world one relation is materialized per
/// distinct image of f(w) composed with the variants of g. Throws CapExceeded
/// when the choice combinations at a world exceed caps.compose_combinations.
Intension rum_compose(RelationalFrame& fr, const Intension& f, const Intension& g,
                      const ResourceCaps& caps = default_caps());

/// Intersection closure: at w, every relation whose image at w is the
/// intersection of the images of a nonempty subset of f(w).
Intension cs_closure(RelationalFrame& fr, const Intension& f);

/// Complement relative to the frame's relation set.
Intension ba_complement(const RelationalFrame& fr, const Intension& f);
Intension ba_meet(const RelationalFrame& fr, const Intension& f, const Intension& g);
Intension ba_join(const RelationalFrame& fr, const Intension& f, const Intension& g);

Intension apply_operation(RelationalFrame& fr, Op op, std::span<const Intension> args,
                          const ResourceCaps& caps = default_caps());

/// A named formula schema. Metavariables: phi, psi, chi, psi1, psi2 stand for
/// formulas; alpha, beta stand for group terms.
struct Schema {
  std::string name;
  std::string text;
  bool base;  // shared by every theory
};

struct RuleSchema {
  std::string name;
  std::vector<std::string> premises;
  std::string conclusion;
};

struct Theory {
  TheoryKind kind;
  const Signature* signature;
  std::vector<Schema> axioms;
  std::vector<RuleSchema> rules;

  std::string_view name() const { return theory_name(kind); }
  /// True iff `fr` meets the frame constraints (CSL: every relation reflexive).
  bool frame_conforms(const RelationalFrame& fr) const;
};

const Theory& theory(TheoryKind kind);
const std::vector<Schema>& axiom_suite(TheoryKind kind);
const std::vector<RuleSchema>& rule_suite(TheoryKind kind);

bool is_formula_metavariable(const std::string& name);
bool is_term_metavariable(const std::string& name);

struct InstantiationSet {
  std::vector<Formula> formulas;
  std::vector<GroupTerm> terms;
  /// Added to `formulas` for rules with a single formula metavariable, so
  /// that some premises are valid and the rule is not checked vacuously.
  std::vector<Formula> extra_premises;
};

/// phi, psi in {p, q, p & q, ~p}; alpha, beta in {a, b} plus a + b (sl, csl),
/// a . b (rum), a^ (csl), -a (ba).
InstantiationSet default_instantiation(TheoryKind kind);

struct SchemaInstance {
  std::string schema;
  std::vector<std::pair<std::string, Formula>> formula_subst;
  std::vector<std::pair<std::string, GroupTerm>> term_subst;
  std::vector<Formula> premises;  // empty for axioms
  Formula conclusion;
};

Formula substitute(const Formula& f, std::span<const std::pair<std::string, Formula>> formulas,
                   std::span<const std::pair<std::string, GroupTerm>> terms);
GroupTerm substitute(const GroupTerm& t, std::span<const std::pair<std::string, GroupTerm>> terms);

std::vector<SchemaInstance> instantiate(const Schema& schema, TheoryKind kind,
                                        const InstantiationSet& set);
std::vector<SchemaInstance> instantiate(const RuleSchema& rule, TheoryKind kind,
                                        const InstantiationSet& set);

/// Smallest set containing f and true, closed under subformulas and the
/// closure-semilattice conditions linking [t], <t>, t + u and t^.
std::set<Formula> lcs_closure_set(const Formula& f);

}  // namespace intensio

#endif  // INTENSIO_THEORIES_HPP
