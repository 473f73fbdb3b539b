#include "intensio/theories.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "intensio/error.hpp"

namespace intensio {

// {{{ Operations

Intension sl_zero(const RelationalFrame& fr) { return Intension::empty(fr.world_count()); }

Intension sl_plus(const RelationalFrame& fr, const Intension& f, const Intension& g) {
  Intension out = Intension::empty(fr.world_count());
  for (World w = 0; w < fr.world_count(); ++w) {
    std::set_union(f.extent[w].begin(), f.extent[w].end(), g.extent[w].begin(),
                   g.extent[w].end(), std::back_inserter(out.extent[w]));
  }
  return out;
}

std::vector<WorldSet> variant_images(const RelationalFrame& fr, const Intension& g, World w) {
  if (g.extent[w].empty()) return {WorldSet{}};
  return image_family(fr, g, w);
}

Intension rum_one(RelationalFrame& fr) {
  std::vector<WorldSet> identity;
  for (World w = 0; w < fr.world_count(); ++w) identity.push_back(WorldSet::single(w));
  RelationId id = fr.materialize(std::move(identity), "id");
  Intension out = Intension::empty(fr.world_count());
  for (auto& rs : out.extent) rs = {id};
  return out;
}

Intension rum_compose(RelationalFrame& fr, const Intension& f, const Intension& g,
                      const ResourceCaps& caps) {
  const std::size_t n = fr.world_count();
  std::vector<std::vector<WorldSet>> variants(n);
  for (World u = 0; u < n; ++u) variants[u] = variant_images(fr, g, u);

  std::vector<std::vector<WorldSet>> results(n);
  for (World w = 0; w < n; ++w) {
    std::size_t combinations = 0;
    std::set<WorldSet> images;
    for (WorldSet x : image_family(fr, f, w)) {
      std::size_t count = 1;
      for (World u : x) {
        count *= variants[u].size();
        if (count > caps.compose_combinations) break;
      }
      combinations += count;
      if (combinations > caps.compose_combinations) {
        throw CapExceeded("intensional composition needs more than " +
                          std::to_string(caps.compose_combinations) +
                          " choice combinations at world '" + fr.labels()[w] + "'");
      }
      // Fold the choices one successor at a time; duplicates collapse early.
      std::set<WorldSet> acc{WorldSet{}};
      for (World u : x) {
        std::set<WorldSet> next;
        for (WorldSet a : acc) {
          for (WorldSet c : variants[u]) next.insert(a | c);
        }
        acc = std::move(next);
      }
      images.insert(acc.begin(), acc.end());
    }
    results[w].assign(images.begin(), images.end());
  }

  Intension out = Intension::empty(n);
  for (World w = 0; w < n; ++w) {
    for (WorldSet img : results[w]) out.extent[w].push_back(fr.materialize(fr.local_images(w, img)));
    std::sort(out.extent[w].begin(), out.extent[w].end());
    out.extent[w].erase(std::unique(out.extent[w].begin(), out.extent[w].end()),
                        out.extent[w].end());
  }
  return out;
}

Intension cs_closure(RelationalFrame& fr, const Intension& f) {
  const std::size_t n = fr.world_count();
  std::vector<std::set<WorldSet>> closed(n);
  for (World w = 0; w < n; ++w) {
    std::vector<WorldSet> family = image_family(fr, f, w);
    std::set<WorldSet> acc(family.begin(), family.end());
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<WorldSet> snapshot(acc.begin(), acc.end());
      for (WorldSet a : snapshot) {
        for (WorldSet b : family) grew |= acc.insert(a & b).second;
      }
    }
    closed[w] = std::move(acc);
  }
  for (World w = 0; w < n; ++w) {
    for (WorldSet img : closed[w]) {
      bool present = false;
      for (RelationId r = 0; r < fr.relation_count() && !present; ++r) {
        present = fr.image(r, w) == img;
      }
      if (!present) fr.materialize(fr.local_images(w, img), "cap");
    }
  }
  Intension out = Intension::empty(n);
  for (World w = 0; w < n; ++w) {
    for (RelationId r = 0; r < fr.relation_count(); ++r) {
      if (closed[w].contains(fr.image(r, w))) out.extent[w].push_back(r);
    }
  }
  return out;
}

Intension ba_complement(const RelationalFrame& fr, const Intension& f) {
  Intension out = Intension::empty(fr.world_count());
  for (World w = 0; w < fr.world_count(); ++w) {
    for (RelationId r = 0; r < fr.relation_count(); ++r) {
      if (!std::binary_search(f.extent[w].begin(), f.extent[w].end(), r)) {
        out.extent[w].push_back(r);
      }
    }
  }
  return out;
}

Intension ba_meet(const RelationalFrame& fr, const Intension& f, const Intension& g) {
  Intension out = Intension::empty(fr.world_count());
  for (World w = 0; w < fr.world_count(); ++w) {
    std::set_intersection(f.extent[w].begin(), f.extent[w].end(), g.extent[w].begin(),
                          g.extent[w].end(), std::back_inserter(out.extent[w]));
  }
  return out;
}

Intension ba_join(const RelationalFrame& fr, const Intension& f, const Intension& g) {
  return sl_plus(fr, f, g);
}

Intension apply_operation(RelationalFrame& fr, Op op, std::span<const Intension> args,
                          const ResourceCaps& caps) {
  if (!signature_of(fr.theory()).has(op)) {
    throw EvalError("operator " + std::string(symbol(op)) + " is not part of theory " +
                    std::string(theory_name(fr.theory())));
  }
  if (static_cast<int>(args.size()) != arity(op)) {
    throw EvalError("operator " + std::string(symbol(op)) + " applied to " +
                    std::to_string(args.size()) + " arguments");
  }
  switch (op) {
    case Op::Zero: return sl_zero(fr);
    case Op::Plus: return sl_plus(fr, args[0], args[1]);
    case Op::One: return rum_one(fr);
    case Op::Dot: return rum_compose(fr, args[0], args[1], caps);
    case Op::Cap: return cs_closure(fr, args[0]);
    case Op::Complement: return ba_complement(fr, args[0]);
    case Op::Meet: return ba_meet(fr, args[0], args[1]);
    case Op::Join: return ba_join(fr, args[0], args[1]);
  }
  throw EvalError("unknown operator");
}

// }}}
// {{{ Axioms and rules

namespace {

std::vector<Schema> base_axioms() {
  return {
      {"k", "[alpha](phi -> psi) -> ([alpha]phi -> [alpha]psi)", true},
      {"box-bottom-dia-top", "~[alpha]false -> <alpha>true", true},
      {"dia-box-conj", "<alpha>phi & [alpha]psi -> <alpha>(phi & psi)", true},
      {"box-top", "[alpha]true <-> true", true},
      {"box-conj", "[alpha](phi & psi) <-> [alpha]phi & [alpha]psi", true},
  };
}

std::vector<Schema> sl_axioms() {
  return {
      {"sl-zero-box", "true -> [0]phi", false},
      {"sl-zero-dia", "<0>phi -> false", false},
      {"sl-join-box", "[alpha + beta]phi <-> [alpha]phi & [beta]phi", false},
      {"sl-join-dia", "<alpha + beta>phi <-> <alpha>phi | <beta>phi", false},
  };
}

std::vector<Schema> rum_axioms() {
  return {
      {"rum-unit-box", "[1]phi <-> phi", false},
      {"rum-unit-dia", "<1>phi <-> phi", false},
      {"rum-compose-box", "[alpha . beta]phi <-> [alpha][beta]phi", false},
      {"rum-compose-dia", "<alpha . beta>phi <-> <alpha>([beta]false | <beta>phi)", false},
  };
}

std::vector<Schema> cs_axioms() {
  return {
      {"cs-reflexive", "[alpha]phi -> phi", false},
      {"cs-cap-conj", "<alpha^>phi & <alpha^>psi -> <alpha^>(phi & psi)", false},
      {"cs-cap-extensive", "<alpha>phi -> <alpha^>phi", false},
      {"cs-cap-box", "[alpha^]phi <-> [alpha]phi", false},
      {"cs-cap-nonempty", "<alpha^>phi -> <alpha>true", false},
      {"cs-cap-idempotent", "<alpha^^>phi -> <alpha^>phi", false},
  };
}

std::vector<RuleSchema> base_rules() {
  return {
      {"nec", {"phi"}, "[alpha]phi"},
      {"dia-box-rule-0", {"phi -> chi"}, "<alpha>phi -> <alpha>chi"},
      {"dia-box-rule-1", {"phi & psi1 -> chi"}, "<alpha>phi & [alpha]psi1 -> <alpha>chi"},
      {"dia-box-rule-2", {"phi & psi1 & psi2 -> chi"},
       "<alpha>phi & [alpha]psi1 & [alpha]psi2 -> <alpha>chi"},
  };
}

Theory make_theory(TheoryKind kind) {
  Theory t{kind, &signature_of(kind), base_axioms(), base_rules()};
  auto append = [&t](std::vector<Schema> more) {
    t.axioms.insert(t.axioms.end(), more.begin(), more.end());
  };
  switch (kind) {
    case TheoryKind::SL:
      append(sl_axioms());
      break;
    case TheoryKind::RUM:
      append(rum_axioms());
      break;
    case TheoryKind::CSL:
      append(sl_axioms());
      append(cs_axioms());
      t.rules.push_back({"cs-cap-rule", {"<alpha>phi -> <beta>phi"}, "<alpha^>phi -> <beta^>phi"});
      break;
    default:
      break;
  }
  return t;
}

}  // namespace

bool Theory::frame_conforms(const RelationalFrame& fr) const {
  if (kind != TheoryKind::CSL) return true;
  for (RelationId r = 0; r < fr.relation_count(); ++r) {
    for (World w = 0; w < fr.world_count(); ++w) {
      if (!fr.image(r, w).contains(w)) return false;
    }
  }
  return true;
}

const Theory& theory(TheoryKind kind) {
  static const Theory theories[] = {make_theory(TheoryKind::Empty), make_theory(TheoryKind::SL),
                                    make_theory(TheoryKind::RUM), make_theory(TheoryKind::CSL),
                                    make_theory(TheoryKind::BA)};
  return theories[static_cast<int>(kind)];
}

const std::vector<Schema>& axiom_suite(TheoryKind kind) { return theory(kind).axioms; }
const std::vector<RuleSchema>& rule_suite(TheoryKind kind) { return theory(kind).rules; }

bool is_formula_metavariable(const std::string& name) {
  return name == "phi" || name == "psi" || name == "chi" || name == "psi1" || name == "psi2";
}

bool is_term_metavariable(const std::string& name) { return name == "alpha" || name == "beta"; }

// }}}
// {{{ Instantiation

GroupTerm substitute(const GroupTerm& t, std::span<const std::pair<std::string, GroupTerm>> terms) {
  if (t.is_var()) {
    for (const auto& [name, value] : terms) {
      if (name == t.name()) return value;
    }
    return t;
  }
  std::vector<GroupTerm> args;
  for (const GroupTerm& a : t.args()) args.push_back(substitute(a, terms));
  return GroupTerm::apply(t.op(), std::move(args));
}

Formula substitute(const Formula& f, std::span<const std::pair<std::string, Formula>> formulas,
                   std::span<const std::pair<std::string, GroupTerm>> terms) {
  switch (f.kind()) {
    case Formula::Kind::Top:
      return f;
    case Formula::Kind::Prop:
      for (const auto& [name, value] : formulas) {
        if (name == f.name()) return value;
      }
      return f;
    case Formula::Kind::Not:
      return Formula::negation(substitute(f.lhs(), formulas, terms));
    case Formula::Kind::And:
      return Formula::conjunction(substitute(f.lhs(), formulas, terms),
                                  substitute(f.rhs(), formulas, terms));
    case Formula::Kind::Box:
      return Formula::box(substitute(f.term(), terms), substitute(f.lhs(), formulas, terms));
    case Formula::Kind::Dia:
      return Formula::dia(substitute(f.term(), terms), substitute(f.lhs(), formulas, terms));
  }
  return f;
}

namespace {

template <typename T>
std::vector<std::vector<std::pair<std::string, T>>> product(const std::vector<std::string>& names,
                                                            const std::vector<T>& values) {
  std::vector<std::vector<std::pair<std::string, T>>> out{{}};
  for (const std::string& name : names) {
    std::vector<std::vector<std::pair<std::string, T>>> next;
    for (const auto& partial : out) {
      for (const T& v : values) {
        auto extended = partial;
        extended.emplace_back(name, v);
        next.push_back(std::move(extended));
      }
    }
    out = std::move(next);
  }
  return out;
}

void collect_metavariables(const Formula& f, std::set<std::string>& fvars,
                           std::set<std::string>& tvars) {
  Variables vars = variables_of(f);
  for (const std::string& p : vars.props) {
    if (!is_formula_metavariable(p)) throw Error("schema uses non-metavariable '" + p + "'");
    fvars.insert(p);
  }
  for (const std::string& g : vars.groups) {
    if (!is_term_metavariable(g)) throw Error("schema uses non-metavariable '" + g + "'");
    tvars.insert(g);
  }
}

std::vector<SchemaInstance> instantiate_parsed(const std::string& name,
                                               const std::vector<Formula>& premises,
                                               const Formula& conclusion,
                                               const std::vector<Formula>& formula_values,
                                               const std::vector<GroupTerm>& term_values) {
  std::set<std::string> fvars, tvars;
  for (const Formula& p : premises) collect_metavariables(p, fvars, tvars);
  collect_metavariables(conclusion, fvars, tvars);
  auto fassign = product(std::vector<std::string>(fvars.begin(), fvars.end()), formula_values);
  auto tassign = product(std::vector<std::string>(tvars.begin(), tvars.end()), term_values);
  std::vector<SchemaInstance> out;
  for (const auto& ta : tassign) {
    for (const auto& fa : fassign) {
      SchemaInstance inst{name, fa, ta, {}, substitute(conclusion, fa, ta)};
      for (const Formula& p : premises) inst.premises.push_back(substitute(p, fa, ta));
      out.push_back(std::move(inst));
    }
  }
  return out;
}

}  // namespace

InstantiationSet default_instantiation(TheoryKind kind) {
  const Signature& sig = signature_of(kind);
  InstantiationSet set;
  for (const char* text : {"p", "q", "p & q", "~p"}) set.formulas.push_back(parse_formula(text, sig));
  set.terms = {GroupTerm::var("a"), GroupTerm::var("b")};
  switch (kind) {
    case TheoryKind::SL:
      set.terms.push_back(parse_term("a + b", sig));
      break;
    case TheoryKind::RUM:
      set.terms.push_back(parse_term("a . b", sig));
      break;
    case TheoryKind::CSL:
      set.terms.push_back(parse_term("a + b", sig));
      set.terms.push_back(parse_term("a^", sig));
      break;
    case TheoryKind::BA:
      set.terms.push_back(parse_term("-a", sig));
      break;
    case TheoryKind::Empty:
      break;
  }
  for (const char* text : {"true", "p | ~p", "[a]true"}) {
    set.extra_premises.push_back(parse_formula(text, sig));
  }
  const std::vector<std::pair<std::string, Formula>> fa{
      {"phi", Formula::prop("p")},  {"psi", Formula::prop("q")},   {"chi", Formula::prop("p")},
      {"psi1", Formula::prop("q")}, {"psi2", Formula::prop("q")}};
  const std::vector<std::pair<std::string, GroupTerm>> ta{{"alpha", GroupTerm::var("a")},
                                                          {"beta", GroupTerm::var("b")}};
  for (const Schema& s : axiom_suite(kind)) {
    set.extra_premises.push_back(substitute(parse_formula(s.text, sig), fa, ta));
  }
  return set;
}

std::vector<SchemaInstance> instantiate(const Schema& schema, TheoryKind kind,
                                        const InstantiationSet& set) {
  Formula parsed = parse_formula(schema.text, signature_of(kind));
  return instantiate_parsed(schema.name, {}, parsed, set.formulas, set.terms);
}

std::vector<SchemaInstance> instantiate(const RuleSchema& rule, TheoryKind kind,
                                        const InstantiationSet& set) {
  std::vector<Formula> premises;
  for (const std::string& p : rule.premises) {
    premises.push_back(parse_formula(p, signature_of(kind)));
  }
  Formula conclusion = parse_formula(rule.conclusion, signature_of(kind));
  std::set<std::string> fvars, tvars;
  for (const Formula& p : premises) collect_metavariables(p, fvars, tvars);
  collect_metavariables(conclusion, fvars, tvars);
  std::vector<Formula> values = set.formulas;
  values.push_back(Formula::top());
  if (fvars.size() <= 1) {
    for (const Formula& extra : set.extra_premises) {
      if (std::find(values.begin(), values.end(), extra) == values.end()) values.push_back(extra);
    }
  }
  return instantiate_parsed(rule.name, premises, conclusion, values, set.terms);
}

// }}}
// {{{ Closure set

std::set<Formula> lcs_closure_set(const Formula& f) {
  std::set<Formula> gamma;
  std::deque<Formula> work;
  auto add = [&](const Formula& g) {
    if (gamma.insert(g).second) work.push_back(g);
  };
  add(f);
  add(Formula::top());
  while (!work.empty()) {
    Formula g = work.front();
    work.pop_front();
    switch (g.kind()) {
      case Formula::Kind::Top:
      case Formula::Kind::Prop:
        break;
      case Formula::Kind::Not:
        add(g.lhs());
        break;
      case Formula::Kind::And:
        add(g.lhs());
        add(g.rhs());
        break;
      case Formula::Kind::Box: {
        const GroupTerm& t = g.term();
        add(g.lhs());
        add(Formula::dia(t, g.lhs()));
        if (!t.is_var() && t.op() == Op::Plus) {
          add(Formula::box(t.args()[0], g.lhs()));
          add(Formula::box(t.args()[1], g.lhs()));
        }
        if (!t.is_var() && t.op() == Op::Cap) add(Formula::box(t.args()[0], g.lhs()));
        break;
      }
      case Formula::Kind::Dia: {
        const GroupTerm& t = g.term();
        add(g.lhs());
        add(Formula::box(t, g.lhs()));
        if (!t.is_var() && t.op() == Op::Plus) {
          const GroupTerm& b = t.args()[1];
          add(Formula::dia(t.args()[0],
                           Formula::disjunction(Formula::negation(Formula::dia(b, Formula::top())),
                                                Formula::dia(b, g.lhs()))));
        }
        if (!t.is_var() && t.op() == Op::Cap) add(Formula::dia(t.args()[0], Formula::top()));
        break;
      }
    }
  }
  return gamma;
}

// }}}

}  // namespace intensio
