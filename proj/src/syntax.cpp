#include "intensio/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <utility>

#include "intensio/error.hpp"

namespace intensio {

// {{{ Operators and signatures

int arity(Op op) {
  switch (op) {
    case Op::Zero:
    case Op::One:
      return 0;
    case Op::Cap:
    case Op::Complement:
      return 1;
    case Op::Plus:
    case Op::Dot:
    case Op::Meet:
    case Op::Join:
      return 2;
  }
  return 0;
}

std::string_view symbol(Op op) {
  switch (op) {
    case Op::Plus: return "+";
    case Op::Zero: return "0";
    case Op::Dot: return "·";
    case Op::One: return "1";
    case Op::Cap: return "∩";
    case Op::Complement: return "¬";
    case Op::Meet: return "∧";
    case Op::Join: return "∨";
  }
  return "?";
}

std::string_view token(Op op) {
  switch (op) {
    case Op::Plus:
    case Op::Join:
      return "+";
    case Op::Zero: return "0";
    case Op::Dot:
    case Op::Meet:
      return ".";
    case Op::One: return "1";
    case Op::Cap: return "^";
    case Op::Complement: return "-";
  }
  return "?";
}

Signature::Signature(std::string name, std::vector<OperatorSpec> operators)
    : name_(std::move(name)), operators_(std::move(operators)) {
  for (std::size_t i = 0; i < operators_.size(); ++i) {
    for (std::size_t j = i + 1; j < operators_.size(); ++j) {
      if (operators_[i].symbol == operators_[j].symbol || operators_[i].op == operators_[j].op) {
        throw Error("signature " + name_ + ": duplicate operator " + operators_[i].symbol);
      }
    }
    if (operators_[i].arity != arity(operators_[i].op)) {
      throw Error("signature " + name_ + ": wrong arity for " + operators_[i].symbol);
    }
  }
}

bool Signature::has(Op op) const {
  return std::any_of(operators_.begin(), operators_.end(),
                     [op](const OperatorSpec& s) { return s.op == op; });
}

namespace {

OperatorSpec spec_of(Op op) { return {op, std::string(symbol(op)), arity(op)}; }

}  // namespace

const Signature& Signature::empty() {
  static const Signature sig("empty", {});
  return sig;
}
const Signature& Signature::sl() {
  static const Signature sig("sl", {spec_of(Op::Plus), spec_of(Op::Zero)});
  return sig;
}
const Signature& Signature::rum() {
  static const Signature sig("rum", {spec_of(Op::Dot), spec_of(Op::One)});
  return sig;
}
const Signature& Signature::csl() {
  static const Signature sig("csl", {spec_of(Op::Plus), spec_of(Op::Zero), spec_of(Op::Cap)});
  return sig;
}
const Signature& Signature::ba() {
  static const Signature sig(
      "ba", {spec_of(Op::Complement), spec_of(Op::Meet), spec_of(Op::Join)});
  return sig;
}

const Signature& Signature::named(std::string_view name) {
  if (name == "empty") return empty();
  if (name == "sl") return sl();
  if (name == "rum") return rum();
  if (name == "csl") return csl();
  if (name == "ba") return ba();
  throw Error("unknown signature '" + std::string(name) + "'");
}

// }}}
// {{{ AST construction and comparison

GroupTerm GroupTerm::var(std::string name) {
  return GroupTerm(std::make_shared<const Node>(Node{Kind::Var, std::move(name), Op::Plus, {}}));
}

GroupTerm GroupTerm::apply(Op op, std::vector<GroupTerm> args) {
  if (static_cast<int>(args.size()) != arity(op)) {
    throw EvalError("operator " + std::string(symbol(op)) + " expects " +
                    std::to_string(arity(op)) + " arguments, got " + std::to_string(args.size()));
  }
  return GroupTerm(std::make_shared<const Node>(Node{Kind::Apply, {}, op, std::move(args)}));
}

bool operator==(const GroupTerm& a, const GroupTerm& b) {
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const GroupTerm& a, const GroupTerm& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (a.is_var()) return a.name() <=> b.name();
  if (auto c = a.op() <=> b.op(); c != 0) return c;
  for (std::size_t i = 0; i < a.args().size(); ++i) {
    if (auto c = a.args()[i] <=> b.args()[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

Formula Formula::top() {
  static const Formula t(std::make_shared<const Node>(Node{Kind::Top, {}, {}, {}}));
  return t;
}

Formula Formula::prop(std::string name) {
  return Formula(std::make_shared<const Node>(Node{Kind::Prop, std::move(name), {}, {}}));
}

Formula Formula::negation(Formula f) {
  return Formula(std::make_shared<const Node>(Node{Kind::Not, {}, {}, {std::move(f)}}));
}

Formula Formula::conjunction(Formula a, Formula b) {
  return Formula(
      std::make_shared<const Node>(Node{Kind::And, {}, {}, {std::move(a), std::move(b)}}));
}

Formula Formula::box(GroupTerm t, Formula f) {
  return Formula(std::make_shared<const Node>(Node{Kind::Box, {}, std::move(t), {std::move(f)}}));
}

Formula Formula::dia(GroupTerm t, Formula f) {
  return Formula(std::make_shared<const Node>(Node{Kind::Dia, {}, std::move(t), {std::move(f)}}));
}

Formula Formula::bottom() { return negation(top()); }

Formula Formula::disjunction(Formula a, Formula b) {
  return negation(conjunction(negation(std::move(a)), negation(std::move(b))));
}

Formula Formula::implication(Formula a, Formula b) {
  return negation(conjunction(std::move(a), negation(std::move(b))));
}

Formula Formula::equivalence(Formula a, Formula b) {
  return conjunction(implication(a, b), implication(b, a));
}

Formula Formula::dual_box(GroupTerm t, Formula f) {
  return negation(dia(std::move(t), negation(std::move(f))));
}

Formula Formula::dual_dia(GroupTerm t, Formula f) {
  return negation(box(std::move(t), negation(std::move(f))));
}

bool operator==(const Formula& a, const Formula& b) {
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case Formula::Kind::Top:
      return std::strong_ordering::equal;
    case Formula::Kind::Prop:
      return a.name() <=> b.name();
    case Formula::Kind::Not:
      return a.lhs() <=> b.lhs();
    case Formula::Kind::And:
      if (auto c = a.lhs() <=> b.lhs(); c != 0) return c;
      return a.rhs() <=> b.rhs();
    case Formula::Kind::Box:
    case Formula::Kind::Dia:
      if (auto c = a.term() <=> b.term(); c != 0) return c;
      return a.lhs() <=> b.lhs();
  }
  return std::strong_ordering::equal;
}

// }}}
// {{{ Lexer

namespace {

enum class Tok {
  Ident, Zero, One, LParen, RParen, LBracket, RBracket, LAngle, RAngle, RBrace,
  Plus, Dot, Caret, Minus, Tilde, Amp, Bar, Arrow, Iff, True, False, End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    std::size_t start = i;
    if (c >= 'a' && c <= 'z') {
      while (i < text.size() && ((text[i] >= 'a' && text[i] <= 'z') ||
                                 (text[i] >= '0' && text[i] <= '9'))) {
        ++i;
      }
      std::string word(text.substr(start, i - start));
      Tok kind = word == "true" ? Tok::True : word == "false" ? Tok::False : Tok::Ident;
      out.push_back({kind, std::move(word), start});
      continue;
    }
    if (c >= '0' && c <= '9') {
      while (i < text.size() && std::isalnum(static_cast<unsigned char>(text[i]))) ++i;
      std::string num(text.substr(start, i - start));
      if (num == "0") {
        out.push_back({Tok::Zero, num, start});
      } else if (num == "1") {
        out.push_back({Tok::One, num, start});
      } else {
        throw ParseError("unexpected token '" + num + "'", start);
      }
      continue;
    }
    if (text.substr(i, 3) == "<->") {
      out.push_back({Tok::Iff, "<->", start});
      i += 3;
      continue;
    }
    if (text.substr(i, 2) == "->") {
      out.push_back({Tok::Arrow, "->", start});
      i += 2;
      continue;
    }
    Tok kind;
    switch (c) {
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '[': kind = Tok::LBracket; break;
      case ']': kind = Tok::RBracket; break;
      case '<': kind = Tok::LAngle; break;
      case '>': kind = Tok::RAngle; break;
      case '}': kind = Tok::RBrace; break;
      case '+': kind = Tok::Plus; break;
      case '.': kind = Tok::Dot; break;
      case '^': kind = Tok::Caret; break;
      case '-': kind = Tok::Minus; break;
      case '~': kind = Tok::Tilde; break;
      case '&': kind = Tok::Amp; break;
      case '|': kind = Tok::Bar; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
    out.push_back({kind, std::string(1, c), start});
    ++i;
  }
  out.push_back({Tok::End, "", text.size()});
  return out;
}

// }}}
// {{{ Parser

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : tokens_(lex(text)), sig_(sig) {}

  GroupTerm whole_term() {
    GroupTerm t = term();
    expect_end();
    return t;
  }

  Formula whole_formula() {
    Formula f = iff();
    expect_end();
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    ++pos_;
    return true;
  }

  void expect_end() {
    if (peek().kind != Tok::End) {
      throw ParseError("unexpected " + describe(peek()), peek().pos);
    }
  }

  Op resolve(const Token& tok, Op first, Op second) const {
    if (sig_.has(first)) return first;
    if (sig_.has(second)) return second;
    throw ParseError("unknown operator '" + tok.text + "' in signature " + sig_.name(), tok.pos);
  }

  void bind_group(const Token& tok) {
    if (props_.contains(tok.text)) {
      throw SortError("'" + tok.text + "' is a proposition variable, used as a group variable",
                      tok.pos);
    }
    groups_.insert(tok.text);
  }

  void bind_prop(const Token& tok) {
    if (groups_.contains(tok.text)) {
      throw SortError("'" + tok.text + "' is a group variable, used as a proposition variable",
                      tok.pos);
    }
    props_.insert(tok.text);
  }

  // term := comp ("+" comp)*
  GroupTerm term() {
    GroupTerm t = comp();
    while (peek().kind == Tok::Plus) {
      Op op = resolve(advance(), Op::Plus, Op::Join);
      t = GroupTerm::apply(op, {t, comp()});
    }
    return t;
  }

  // comp := pre ("." pre)*
  GroupTerm comp() {
    GroupTerm t = pre();
    while (peek().kind == Tok::Dot) {
      Op op = resolve(advance(), Op::Dot, Op::Meet);
      t = GroupTerm::apply(op, {t, pre()});
    }
    return t;
  }

  // pre := "-" pre | post
  GroupTerm pre() {
    if (peek().kind == Tok::Minus) {
      resolve(advance(), Op::Complement, Op::Complement);
      return GroupTerm::apply(Op::Complement, {pre()});
    }
    return post();
  }

  // post := atom "^"*
  GroupTerm post() {
    GroupTerm t = atom();
    while (peek().kind == Tok::Caret) {
      resolve(advance(), Op::Cap, Op::Cap);
      t = GroupTerm::cap(t);
    }
    return t;
  }

  GroupTerm atom() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::Ident:
        advance();
        bind_group(tok);
        return GroupTerm::var(tok.text);
      case Tok::Zero:
        advance();
        resolve(tok, Op::Zero, Op::Zero);
        return GroupTerm::zero();
      case Tok::One:
        advance();
        resolve(tok, Op::One, Op::One);
        return GroupTerm::one();
      case Tok::LParen: {
        advance();
        GroupTerm t = term();
        if (!accept(Tok::RParen)) {
          throw ParseError("expected ')' but found " + describe(peek()), peek().pos);
        }
        return t;
      }
      case Tok::True:
      case Tok::False:
      case Tok::Tilde:
        throw SortError("formula " + describe(tok) + " used where a group term is expected",
                        tok.pos);
      default:
        throw ParseError("expected a group term but found " + describe(tok), tok.pos);
    }
  }

  // iff := imp ("<->" imp)*
  Formula iff() {
    Formula f = imp();
    while (accept(Tok::Iff)) f = Formula::equivalence(f, imp());
    return f;
  }

  // imp := or ("->" imp)?
  Formula imp() {
    Formula f = disj();
    if (accept(Tok::Arrow)) return Formula::implication(f, imp());
    return f;
  }

  // or := and ("|" and)*
  Formula disj() {
    Formula f = conj();
    while (accept(Tok::Bar)) f = Formula::disjunction(f, conj());
    return f;
  }

  // and := unary ("&" unary)*
  Formula conj() {
    Formula f = unary();
    while (accept(Tok::Amp)) f = Formula::conjunction(f, unary());
    return f;
  }

  Formula unary() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::Tilde:
        advance();
        return Formula::negation(unary());
      case Tok::LBracket: {
        advance();
        GroupTerm t = term();
        if (accept(Tok::RBracket)) return Formula::box(t, unary());
        if (accept(Tok::RBrace)) return Formula::dual_box(t, unary());
        throw ParseError("expected ']' or '}' but found " + describe(peek()), peek().pos);
      }
      case Tok::LAngle: {
        advance();
        GroupTerm t = term();
        if (accept(Tok::RAngle)) return Formula::dia(t, unary());
        if (accept(Tok::RBrace)) return Formula::dual_dia(t, unary());
        throw ParseError("expected '>' or '}' but found " + describe(peek()), peek().pos);
      }
      case Tok::True:
        advance();
        return Formula::top();
      case Tok::False:
        advance();
        return Formula::bottom();
      case Tok::Ident:
        advance();
        bind_prop(tok);
        return Formula::prop(tok.text);
      case Tok::LParen: {
        advance();
        Formula f = iff();
        if (!accept(Tok::RParen)) {
          throw ParseError("expected ')' but found " + describe(peek()), peek().pos);
        }
        return f;
      }
      case Tok::Zero:
      case Tok::One:
      case Tok::Minus:
        throw SortError("group term " + describe(tok) + " used where a formula is expected",
                        tok.pos);
      default:
        throw ParseError("expected a formula but found " + describe(tok), tok.pos);
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Signature& sig_;
  std::set<std::string> props_;
  std::set<std::string> groups_;
};

}  // namespace

GroupTerm parse_term(std::string_view text, const Signature& sig) {
  return Parser(text, sig).whole_term();
}

Formula parse_formula(std::string_view text, const Signature& sig) {
  return Parser(text, sig).whole_formula();
}

void check_term(const GroupTerm& t, const Signature& sig) {
  if (t.is_var()) return;
  if (!sig.has(t.op())) {
    throw EvalError("operator " + std::string(symbol(t.op())) + " is not in signature " +
                    sig.name());
  }
  for (const GroupTerm& a : t.args()) check_term(a, sig);
}

void check_formula(const Formula& f, const Signature& sig) {
  switch (f.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Prop:
      return;
    case Formula::Kind::Not:
      check_formula(f.lhs(), sig);
      return;
    case Formula::Kind::And:
      check_formula(f.lhs(), sig);
      check_formula(f.rhs(), sig);
      return;
    case Formula::Kind::Box:
    case Formula::Kind::Dia:
      check_term(f.term(), sig);
      check_formula(f.lhs(), sig);
      return;
  }
}

// }}}
// {{{ Rendering

namespace {

// Term precedence: sum 1, comp 2, prefix 3, postfix 4, atom 5.
int term_level(const GroupTerm& t) {
  if (t.is_var()) return 5;
  switch (t.op()) {
    case Op::Plus:
    case Op::Join:
      return 1;
    case Op::Dot:
    case Op::Meet:
      return 2;
    case Op::Complement:
      return 3;
    case Op::Cap:
      return 4;
    case Op::Zero:
    case Op::One:
      return 5;
  }
  return 5;
}

void render_term_into(const GroupTerm& t, int min_level, std::string& out) {
  int level = term_level(t);
  bool parens = level < min_level;
  if (parens) out += '(';
  if (t.is_var()) {
    out += t.name();
  } else {
    switch (arity(t.op())) {
      case 0:
        out += token(t.op());
        break;
      case 1:
        if (t.op() == Op::Complement) {
          out += token(t.op());
          render_term_into(t.args()[0], level, out);
        } else {
          render_term_into(t.args()[0], level, out);
          out += token(t.op());
        }
        break;
      default:
        render_term_into(t.args()[0], level, out);
        out += ' ';
        out += token(t.op());
        out += ' ';
        render_term_into(t.args()[1], level + 1, out);
        break;
    }
  }
  if (parens) out += ')';
}

// Formula precedence: iff 1, imp 2, or 3, and 4, unary 5.
enum class Shape { Iff, Imp, Or, And, Not, False, DualBox, DualDia, Modal, Atom };

struct View {
  Shape shape;
  const Formula* a = nullptr;
  const Formula* b = nullptr;
};

bool is_not(const Formula& f) { return f.kind() == Formula::Kind::Not; }

View view(const Formula& f, RenderStyle style) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Top:
    case K::Prop:
      return {Shape::Atom};
    case K::Box:
    case K::Dia:
      return {Shape::Modal, &f.lhs()};
    case K::And:
      if (style == RenderStyle::Sugared && is_not(f.lhs()) && is_not(f.rhs())) {
        const Formula& l = f.lhs().lhs();
        const Formula& r = f.rhs().lhs();
        if (l.kind() == K::And && r.kind() == K::And && is_not(l.rhs()) && is_not(r.rhs()) &&
            l.lhs() == r.rhs().lhs() && l.rhs().lhs() == r.lhs()) {
          return {Shape::Iff, &l.lhs(), &l.rhs().lhs()};
        }
      }
      return {Shape::And, &f.lhs(), &f.rhs()};
    case K::Not: {
      const Formula& g = f.lhs();
      if (g.kind() == K::Top) return {Shape::False};
      if (style == RenderStyle::Sugared) {
        if (g.kind() == K::And && is_not(g.lhs()) && is_not(g.rhs())) {
          return {Shape::Or, &g.lhs().lhs(), &g.rhs().lhs()};
        }
        if (g.kind() == K::And && is_not(g.rhs())) {
          return {Shape::Imp, &g.lhs(), &g.rhs().lhs()};
        }
        if (g.kind() == K::Dia && is_not(g.lhs())) return {Shape::DualBox, &g.lhs().lhs()};
        if (g.kind() == K::Box && is_not(g.lhs())) return {Shape::DualDia, &g.lhs().lhs()};
      }
      return {Shape::Not, &g};
    }
  }
  return {Shape::Atom};
}

int formula_level(Shape s) {
  switch (s) {
    case Shape::Iff: return 1;
    case Shape::Imp: return 2;
    case Shape::Or: return 3;
    case Shape::And: return 4;
    default: return 5;
  }
}

void render_formula_into(const Formula& f, RenderStyle style, int min_level, std::string& out) {
  View v = view(f, style);
  int level = formula_level(v.shape);
  bool parens = level < min_level;
  if (parens) out += '(';
  auto binary = [&](std::string_view op, int left, int right) {
    render_formula_into(*v.a, style, left, out);
    out += ' ';
    out += op;
    out += ' ';
    render_formula_into(*v.b, style, right, out);
  };
  switch (v.shape) {
    case Shape::Iff: binary("<->", 1, 2); break;
    case Shape::Imp: binary("->", 3, 2); break;
    case Shape::Or: binary("|", 3, 4); break;
    case Shape::And: binary("&", 4, 5); break;
    case Shape::False: out += "false"; break;
    case Shape::Not:
      out += '~';
      render_formula_into(*v.a, style, 5, out);
      break;
    case Shape::DualBox:
    case Shape::DualDia: {
      const Formula& inner = f.lhs();
      out += inner.kind() == Formula::Kind::Dia ? '[' : '<';
      render_term_into(inner.term(), 1, out);
      out += '}';
      render_formula_into(*v.a, style, 5, out);
      break;
    }
    case Shape::Modal:
      out += f.kind() == Formula::Kind::Box ? '[' : '<';
      render_term_into(f.term(), 1, out);
      out += f.kind() == Formula::Kind::Box ? ']' : '>';
      render_formula_into(*v.a, style, 5, out);
      break;
    case Shape::Atom:
      out += f.kind() == Formula::Kind::Top ? "true" : f.name();
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string render_term(const GroupTerm& t) {
  std::string out;
  render_term_into(t, 1, out);
  return out;
}

std::string render_formula(const Formula& f, RenderStyle style) {
  std::string out;
  render_formula_into(f, style, 1, out);
  return out;
}

// }}}
// {{{ Structural queries

namespace {

void collect_term_vars(const GroupTerm& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.name());
    return;
  }
  for (const GroupTerm& a : t.args()) collect_term_vars(a, out);
}

void collect_vars(const Formula& f, Variables& out) {
  switch (f.kind()) {
    case Formula::Kind::Top:
      return;
    case Formula::Kind::Prop:
      out.props.insert(f.name());
      return;
    case Formula::Kind::And:
      collect_vars(f.rhs(), out);
      [[fallthrough]];
    case Formula::Kind::Not:
      collect_vars(f.lhs(), out);
      return;
    case Formula::Kind::Box:
    case Formula::Kind::Dia:
      collect_term_vars(f.term(), out.groups);
      collect_vars(f.lhs(), out);
      return;
  }
}

template <typename T>
void push_unique(std::vector<T>& out, std::set<T>& seen, const T& x) {
  if (seen.insert(x).second) out.push_back(x);
}

void collect_subterms(const GroupTerm& t, std::vector<GroupTerm>& out, std::set<GroupTerm>& seen) {
  for (const GroupTerm& a : t.args()) collect_subterms(a, out, seen);
  push_unique(out, seen, t);
}

void collect_subformulas(const Formula& f, std::vector<Formula>& out, std::set<Formula>& seen) {
  switch (f.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Prop:
      break;
    case Formula::Kind::And:
      collect_subformulas(f.lhs(), out, seen);
      collect_subformulas(f.rhs(), out, seen);
      break;
    default:
      collect_subformulas(f.lhs(), out, seen);
      break;
  }
  push_unique(out, seen, f);
}

}  // namespace

Variables variables_of(const Formula& f) {
  Variables out;
  collect_vars(f, out);
  return out;
}

std::set<std::string> variables_of(const GroupTerm& t) {
  std::set<std::string> out;
  collect_term_vars(t, out);
  return out;
}

std::size_t modal_depth(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Prop:
      return 0;
    case Formula::Kind::Not:
      return modal_depth(f.lhs());
    case Formula::Kind::And:
      return std::max(modal_depth(f.lhs()), modal_depth(f.rhs()));
    case Formula::Kind::Box:
    case Formula::Kind::Dia:
      return 1 + modal_depth(f.lhs());
  }
  return 0;
}

std::vector<GroupTerm> subterms(const GroupTerm& t) {
  std::vector<GroupTerm> out;
  std::set<GroupTerm> seen;
  collect_subterms(t, out, seen);
  return out;
}

std::vector<Formula> subformulas(const Formula& f) {
  std::vector<Formula> out;
  std::set<Formula> seen;
  collect_subformulas(f, out, seen);
  return out;
}

// }}}

}  // namespace intensio
