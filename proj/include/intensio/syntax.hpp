#ifndef INTENSIO_SYNTAX_HPP
#define INTENSIO_SYNTAX_HPP

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace intensio {

/// Group operators of the built-in signatures.
enum class Op : std::uint8_t {
  Plus,        // SL/CSL join, "+"
  Zero,        // SL/CSL bottom, "0"
  Dot,         // RUM intensional composition, "."
  One,         // RUM unit, "1"
  Cap,         // CSL intersection closure, postfix "^"
  Complement,  // BA negation, prefix "-"
  Meet,        // BA conjunction, "."
  Join,        // BA disjunction, "+"
};

int arity(Op op);
/// Mathematical symbol used in messages ("+", "·", "∩", ...).
std::string_view symbol(Op op);
/// Concrete ASCII token of the term grammar.
std::string_view token(Op op);

struct OperatorSpec {
  Op op;
  std::string symbol;
  int arity;
};

/// An algebraic similarity type: a name and pairwise distinct operators.
class Signature {
 public:
  Signature(std::string name, std::vector<OperatorSpec> operators);

  const std::string& name() const { return name_; }
  std::span<const OperatorSpec> operators() const { return operators_; }
  bool has(Op op) const;

  static const Signature& empty();
  static const Signature& sl();
  static const Signature& rum();
  static const Signature& csl();
  static const Signature& ba();
  /// One of "empty", "sl", "rum", "csl", "ba"; throws Error otherwise.
  static const Signature& named(std::string_view name);

 private:
  std::string name_;
  std::vector<OperatorSpec> operators_;
};

/// A group term: a group variable or an operator applied to terms.
class GroupTerm {
 public:
  enum class Kind : std::uint8_t { Var, Apply };

  static GroupTerm var(std::string name);
  static GroupTerm apply(Op op, std::vector<GroupTerm> args);
  static GroupTerm zero() { return apply(Op::Zero, {}); }
  static GroupTerm one() { return apply(Op::One, {}); }
  static GroupTerm plus(GroupTerm a, GroupTerm b) { return apply(Op::Plus, {std::move(a), std::move(b)}); }
  static GroupTerm dot(GroupTerm a, GroupTerm b) { return apply(Op::Dot, {std::move(a), std::move(b)}); }
  static GroupTerm cap(GroupTerm a) { return apply(Op::Cap, {std::move(a)}); }

  Kind kind() const { return node_->kind; }
  bool is_var() const { return node_->kind == Kind::Var; }
  const std::string& name() const { return node_->name; }
  Op op() const { return node_->op; }
  std::span<const GroupTerm> args() const { return node_->args; }

  friend bool operator==(const GroupTerm& a, const GroupTerm& b);
  friend std::strong_ordering operator<=>(const GroupTerm& a, const GroupTerm& b);

 private:
  struct Node {
    Kind kind;
    std::string name;
    Op op = Op::Plus;
    std::vector<GroupTerm> args;
  };
  explicit GroupTerm(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// A formula over the primitive connectives. Derived connectives are
/// desugared by the builders below and by the parser.
class Formula {
 public:
  enum class Kind : std::uint8_t { Top, Prop, Not, And, Box, Dia };

  static Formula top();
  static Formula prop(std::string name);
  static Formula negation(Formula f);
  static Formula conjunction(Formula a, Formula b);
  static Formula box(GroupTerm t, Formula f);
  static Formula dia(GroupTerm t, Formula f);

  // Derived forms; each returns a primitive AST.
  static Formula bottom();
  static Formula disjunction(Formula a, Formula b);
  static Formula implication(Formula a, Formula b);
  static Formula equivalence(Formula a, Formula b);
  static Formula dual_box(GroupTerm t, Formula f);  // [t}f == ~<t>~f
  static Formula dual_dia(GroupTerm t, Formula f);  // <t}f == ~[t]~f

  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  /// Group term of Box/Dia.
  const GroupTerm& term() const { return *node_->term; }
  /// Operand of Not/Box/Dia, left operand of And.
  const Formula& lhs() const { return node_->children[0]; }
  const Formula& rhs() const { return node_->children[1]; }
  bool is_modal() const { return kind() == Kind::Box || kind() == Kind::Dia; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::optional<GroupTerm> term;
    std::vector<Formula> children;
  };
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

GroupTerm parse_term(std::string_view text, const Signature& sig);
Formula parse_formula(std::string_view text, const Signature& sig);

/// Throws EvalError if `t` uses an operator outside `sig` or has a wrong arity.
void check_term(const GroupTerm& t, const Signature& sig);
void check_formula(const Formula& f, const Signature& sig);

std::string render_term(const GroupTerm& t);

enum class RenderStyle {
  Primitive,  // only ~ & [] <> true false
  Sugared,    // re-sugars | -> <-> and the dual modalities
};
std::string render_formula(const Formula& f, RenderStyle style = RenderStyle::Primitive);

struct Variables {
  std::set<std::string> props;
  std::set<std::string> groups;
};

Variables variables_of(const Formula& f);
std::set<std::string> variables_of(const GroupTerm& t);
std::size_t modal_depth(const Formula& f);

/// Distinct subterms and subformulas, children before parents.
std::vector<GroupTerm> subterms(const GroupTerm& t);
std::vector<Formula> subformulas(const Formula& f);

}  // namespace intensio

#endif  // INTENSIO_SYNTAX_HPP
