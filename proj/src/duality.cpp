#include "intensio/duality.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "intensio/error.hpp"
#include "intensio/theories.hpp"

namespace intensio {

namespace {

std::string set_text(WorldSet s) {
  std::string out = "{";
  bool first = true;
  for (World w : s) {
    if (!first) out += ",";
    out += std::to_string(w);
    first = false;
  }
  return out + "}";
}

std::size_t power(std::size_t base, int exp) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

/// Calls fn on every tuple in [0, k)^arity in lexicographic order; stops
/// early when fn returns false.
bool all_tuples(std::size_t k, int arity, const std::function<bool(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(arity), 0);
  if (arity > 0 && k == 0) return true;
  while (true) {
    if (!fn(idx)) return false;
    std::size_t i = idx.size();
    while (i > 0) {
      --i;
      if (++idx[i] < k) break;
      idx[i] = 0;
      if (i == 0) return true;
    }
    if (idx.empty()) return true;
  }
}

class FrameChecker {
 public:
  explicit FrameChecker(const SigmaFrame& sf) : sf_(sf), f_(sf.props) {}

  std::optional<EquationViolation> run() {
    base();
    if (found_) return found_;
    switch (sf_.theory) {
      case TheoryKind::SL:
        semilattice();
        if (!found_) sl_equations();
        break;
      case TheoryKind::RUM:
        rum();
        break;
      case TheoryKind::CSL:
        semilattice();
        if (!found_) sl_equations();
        if (!found_) closure();
        if (!found_) cs_equations();
        break;
      case TheoryKind::Empty:
      case TheoryKind::BA:
        break;
    }
    return found_;
  }

 private:
  const SigmaFrame& sf_;
  const FiniteBooleanAlgebra& f_;
  std::optional<EquationViolation> found_;

  std::size_t g() const { return sf_.group_count(); }
  const std::string& name(std::size_t a) const { return sf_.group_elements[a]; }

  void fail(const std::string& eq, const std::string& witness) {
    if (!found_) found_ = EquationViolation{eq, witness};
  }

  // Runs body(a, x) over all a and x until a violation.
  template <typename Body>
  void each_ax(Body body) {
    for (std::size_t a = 0; a < g() && !found_; ++a) {
      for (std::size_t i = 0; i < f_.size() && !found_; ++i) body(a, f_.element(i));
    }
  }

  template <typename Body>
  void each_axy(Body body) {
    for (std::size_t a = 0; a < g() && !found_; ++a) {
      for (std::size_t i = 0; i < f_.size() && !found_; ++i) {
        for (std::size_t j = 0; j < f_.size() && !found_; ++j) body(a, f_.element(i), f_.element(j));
      }
    }
  }

  std::string w(std::size_t a, WorldSet x) const { return "a=" + name(a) + ", x=" + set_text(x); }
  std::string w(std::size_t a, WorldSet x, WorldSet y) const { return w(a, x) + ", y=" + set_text(y); }

  void base() {
    const WorldSet top = f_.top();
    for (std::size_t a = 0; a < g() && !found_; ++a) {
      if (sf_.box_of(a, top) != top) fail("box-top", "a=" + name(a));
    }
    each_axy([&](std::size_t a, WorldSet x, WorldSet y) {
      if (sf_.box_of(a, x & y) != (sf_.box_of(a, x) & sf_.box_of(a, y))) fail("box-meet", w(a, x, y));
    });
    for (std::size_t a = 0; a < g() && !found_; ++a) {
      if (!f_.complement(sf_.box_of(a, f_.bottom())).subset_of(sf_.dia_of(a, top))) {
        fail("box-bottom-dia-top", "a=" + name(a));
      }
    }
    each_axy([&](std::size_t a, WorldSet x, WorldSet y) {
      if (!(sf_.dia_of(a, x) & sf_.box_of(a, y)).subset_of(sf_.dia_of(a, x & y))) {
        fail("dia-box-meet", w(a, x, y));
      }
    });
    each_axy([&](std::size_t a, WorldSet x, WorldSet y) {
      if (x.subset_of(y) && !sf_.dia_of(a, x).subset_of(sf_.dia_of(a, y))) {
        fail("dia-monotone", w(a, x, y));
      }
    });
  }

  std::size_t join(std::size_t a, std::size_t b) const {
    const std::size_t args[] = {a, b};
    return sf_.apply(Op::Plus, args);
  }
  std::size_t zero() const { return sf_.apply(Op::Zero, {}); }
  std::size_t cap(std::size_t a) const {
    const std::size_t args[] = {a};
    return sf_.apply(Op::Cap, args);
  }

  void semilattice() {
    for (std::size_t a = 0; a < g() && !found_; ++a) {
      if (join(a, a) != a) fail("join-idempotent", "a=" + name(a));
      if (join(zero(), a) != a) fail("join-unit", "a=" + name(a));
      for (std::size_t b = 0; b < g() && !found_; ++b) {
        if (join(a, b) != join(b, a)) fail("join-commutative", "a=" + name(a) + ", b=" + name(b));
        for (std::size_t c = 0; c < g() && !found_; ++c) {
          if (join(join(a, b), c) != join(a, join(b, c))) {
            fail("join-associative", "a=" + name(a) + ", b=" + name(b) + ", c=" + name(c));
          }
        }
      }
    }
  }

  void sl_equations() {
    const std::size_t z = zero();
    for (std::size_t i = 0; i < f_.size() && !found_; ++i) {
      const WorldSet x = f_.element(i);
      if (sf_.box_of(z, x) != f_.top()) fail("sl-zero-box", "x=" + set_text(x));
      if (sf_.dia_of(z, x) != f_.bottom()) fail("sl-zero-dia", "x=" + set_text(x));
    }
    for (std::size_t a = 0; a < g() && !found_; ++a) {
      for (std::size_t b = 0; b < g() && !found_; ++b) {
        const std::size_t s = join(a, b);
        for (std::size_t i = 0; i < f_.size() && !found_; ++i) {
          const WorldSet x = f_.element(i);
          const std::string wit = "a=" + name(a) + ", b=" + name(b) + ", x=" + set_text(x);
          if (sf_.box_of(s, x) != (sf_.box_of(a, x) & sf_.box_of(b, x))) fail("sl-join-box", wit);
          if (sf_.dia_of(s, x) != (sf_.dia_of(a, x) | sf_.dia_of(b, x))) fail("sl-join-dia", wit);
        }
      }
    }
  }

  void rum() {
    const std::size_t one = sf_.apply(Op::One, {});
    auto dot = [&](std::size_t a, std::size_t b) {
      const std::size_t args[] = {a, b};
      return sf_.apply(Op::Dot, args);
    };
    for (std::size_t a = 0; a < g() && !found_; ++a) {
      if (dot(a, one) != a) fail("rum-right-unit", "a=" + name(a));
    }
    for (std::size_t i = 0; i < f_.size() && !found_; ++i) {
      const WorldSet x = f_.element(i);
      if (sf_.box_of(one, x) != x) fail("rum-unit-box", "x=" + set_text(x));
      if (sf_.dia_of(one, x) != x) fail("rum-unit-dia", "x=" + set_text(x));
    }
    for (std::size_t a = 0; a < g() && !found_; ++a) {
      for (std::size_t b = 0; b < g() && !found_; ++b) {
        const std::size_t ab = dot(a, b);
        for (std::size_t i = 0; i < f_.size() && !found_; ++i) {
          const WorldSet x = f_.element(i);
          const std::string wit = "a=" + name(a) + ", b=" + name(b) + ", x=" + set_text(x);
          if (sf_.box_of(ab, x) != sf_.box_of(a, sf_.box_of(b, x))) fail("rum-compose-box", wit);
          const WorldSet inner = sf_.box_of(b, f_.bottom()) | sf_.dia_of(b, x);
          if (sf_.dia_of(ab, x) != sf_.dia_of(a, inner)) fail("rum-compose-dia", wit);
        }
      }
    }
  }

  void closure() {
    if (cap(zero()) != zero()) fail("cap-zero", "");
    for (std::size_t a = 0; a < g() && !found_; ++a) {
      if (join(a, cap(a)) != cap(a)) fail("cap-extensive", "a=" + name(a));
      if (cap(cap(a)) != cap(a)) fail("cap-idempotent", "a=" + name(a));
      for (std::size_t b = 0; b < g() && !found_; ++b) {
        if (join(a, b) == b && join(cap(a), cap(b)) != cap(b)) {
          fail("cap-monotone", "a=" + name(a) + ", b=" + name(b));
        }
      }
    }
  }

  void cs_equations() {
    each_ax([&](std::size_t a, WorldSet x) {
      if (!sf_.box_of(a, x).subset_of(x)) fail("cs-box-reflexive", w(a, x));
    });
    each_axy([&](std::size_t a, WorldSet x, WorldSet y) {
      const std::size_t c = cap(a);
      if (!(sf_.dia_of(c, x) & sf_.dia_of(c, y)).subset_of(sf_.dia_of(c, x & y))) {
        fail("cs-cap-meet", w(a, x, y));
      }
    });
    each_ax([&](std::size_t a, WorldSet x) {
      if (sf_.box_of(cap(a), x) != sf_.box_of(a, x)) fail("cs-cap-box", w(a, x));
      if (!sf_.dia_of(cap(a), x).subset_of(sf_.dia_of(a, f_.top()))) fail("cs-cap-nonempty", w(a, x));
    });
  }
};

}  // namespace

const OpTable& SigmaFrame::table(Op op) const {
  for (const auto& t : ops) {
    if (t.op == op) return t;
  }
  throw EvalError("no table for operator '" + std::string(symbol(op)) + "'");
}

std::size_t SigmaFrame::apply(Op op, std::span<const std::size_t> args) const {
  const OpTable& t = table(op);
  std::size_t index = 0;
  for (std::size_t a : args) index = index * group_count() + a;
  return t.values.at(index);
}

void check_shape(const SigmaFrame& sf) {
  if (sf.props.atoms > 10) throw DocumentError("at most 10 atoms are supported");
  const std::size_t g = sf.group_count();
  const std::size_t cells = g * sf.props.size();
  if (sf.box.size() != cells || sf.dia.size() != cells) {
    throw DocumentError("box and dia tables need " + std::to_string(cells) + " entries");
  }
  const WorldSet top = sf.props.top();
  for (std::size_t i = 0; i < cells; ++i) {
    if (!sf.box[i].subset_of(top) || !sf.dia[i].subset_of(top)) {
      throw DocumentError("modal table entry outside the Boolean algebra");
    }
  }
  const Signature& sig = signature_of(sf.theory);
  if (sf.ops.size() != sig.operators().size()) {
    throw DocumentError("expected exactly the operators of the " + sig.name() + " signature");
  }
  for (const OperatorSpec& spec : sig.operators()) {
    const OpTable* t = nullptr;
    for (const auto& candidate : sf.ops) {
      if (candidate.op == spec.op) t = &candidate;
    }
    if (t == nullptr) throw DocumentError("missing table for '" + spec.symbol + "'");
    if (spec.arity == 0 && g == 0) throw DocumentError("a constant needs a group element");
    if (t->values.size() != power(g, spec.arity)) {
      throw DocumentError("table for '" + spec.symbol + "' has the wrong size");
    }
    for (std::size_t v : t->values) {
      if (v >= g) throw DocumentError("table for '" + spec.symbol + "' names an unknown element");
    }
  }
}

std::optional<EquationViolation> check_sigma_frame(const SigmaFrame& sf) {
  check_shape(sf);
  return FrameChecker(sf).run();
}

std::size_t evaluate(const SigmaFrame& sf, const Evaluation& e, const GroupTerm& t) {
  if (t.is_var()) {
    auto it = e.groups.find(t.name());
    if (it == e.groups.end()) throw EvalError("unbound group variable '" + t.name() + "'");
    return it->second;
  }
  std::vector<std::size_t> args;
  for (const GroupTerm& a : t.args()) args.push_back(evaluate(sf, e, a));
  return sf.apply(t.op(), args);
}

WorldSet evaluate(const SigmaFrame& sf, const Evaluation& e, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Top:
      return sf.props.top();
    case Formula::Kind::Prop: {
      auto it = e.props.find(f.name());
      if (it == e.props.end()) throw EvalError("unbound proposition variable '" + f.name() + "'");
      return it->second;
    }
    case Formula::Kind::Not:
      return sf.props.complement(evaluate(sf, e, f.lhs()));
    case Formula::Kind::And:
      return evaluate(sf, e, f.lhs()) & evaluate(sf, e, f.rhs());
    case Formula::Kind::Box:
      return sf.box_of(evaluate(sf, e, f.term()), evaluate(sf, e, f.lhs()));
    case Formula::Kind::Dia:
      return sf.dia_of(evaluate(sf, e, f.term()), evaluate(sf, e, f.lhs()));
  }
  return {};
}

EquationResult equation_valid(const SigmaFrame& sf, const Formula& lhs, const Formula& rhs,
                              const ResourceCaps& caps) {
  check_shape(sf);
  Variables vars = variables_of(lhs);
  Variables more = variables_of(rhs);
  vars.props.insert(more.props.begin(), more.props.end());
  vars.groups.insert(more.groups.begin(), more.groups.end());
  const std::vector<std::string> props(vars.props.begin(), vars.props.end());
  const std::vector<std::string> groups(vars.groups.begin(), vars.groups.end());

  double total = 1;
  for (std::size_t i = 0; i < props.size(); ++i) total *= static_cast<double>(sf.props.size());
  for (std::size_t i = 0; i < groups.size(); ++i) total *= static_cast<double>(sf.group_count());
  if (total > static_cast<double>(caps.valuations)) {
    throw CapExceeded("equation check needs " + std::to_string(total) + " evaluations, cap is " +
                      std::to_string(caps.valuations));
  }
  if (!groups.empty() && sf.group_count() == 0) return {true, std::nullopt};

  // props vary fastest
  std::vector<std::size_t> radix;
  for (std::size_t i = 0; i < groups.size(); ++i) radix.push_back(sf.group_count());
  for (std::size_t i = 0; i < props.size(); ++i) radix.push_back(sf.props.size());
  std::vector<std::size_t> idx(radix.size(), 0);
  Evaluation e;
  while (true) {
    for (std::size_t i = 0; i < groups.size(); ++i) e.groups[groups[i]] = idx[i];
    for (std::size_t i = 0; i < props.size(); ++i) {
      e.props[props[i]] = sf.props.element(idx[groups.size() + i]);
    }
    if (evaluate(sf, e, lhs) != evaluate(sf, e, rhs)) return {false, e};
    std::size_t i = idx.size();
    while (i > 0) {
      --i;
      if (++idx[i] < radix[i]) break;
      idx[i] = 0;
      if (i == 0) return {true, std::nullopt};
    }
    if (idx.empty()) return {true, std::nullopt};
  }
}

namespace {

std::string derived_name(Op op, const std::vector<std::size_t>& args,
                         const std::vector<std::string>& names) {
  switch (arity(op)) {
    case 0:
      return std::string(token(op));
    case 1:
      if (op == Op::Cap) return names[args[0]] + "^";
      return std::string(token(op)) + names[args[0]];
    default:
      return "(" + names[args[0]] + " " + std::string(token(op)) + " " + names[args[1]] + ")";
  }
}

}  // namespace

ComplexAlgebra complex_algebra(const RelationalFrame& fr, const std::vector<Intension>& seeds,
                               const std::vector<std::string>& seed_names, const ResourceCaps& caps) {
  const std::size_t n = fr.world_count();
  if (n > 10) throw CapExceeded("complex algebras are built for at most 10 worlds");
  if (!seed_names.empty() && seed_names.size() != seeds.size()) {
    throw EvalError("seed names and seeds differ in length");
  }
  RelationalFrame work = fr;
  for (const Intension& s : seeds) check_intension(work, s);
  const bool by_intension = fr.theory() == TheoryKind::BA;

  using Key = std::vector<std::vector<WorldSet>>;
  auto key_of = [&](const Intension& f) {
    Key key;
    if (by_intension) {
      for (const RelationSet& rs : f.extent) {
        std::vector<WorldSet> row;
        for (RelationId r : rs) row.push_back(WorldSet(r));
        key.push_back(std::move(row));
      }
    } else {
      for (World w = 0; w < n; ++w) key.push_back(image_family(work, f, w));
    }
    return key;
  };

  std::vector<Intension> carrier;
  std::vector<std::string> names;
  std::map<Key, std::size_t> index;
  auto add = [&](const Intension& f, const std::string& name) -> std::pair<std::size_t, bool> {
    auto [it, fresh] = index.emplace(key_of(f), carrier.size());
    if (fresh) {
      if (carrier.size() >= caps.carrier_elements) {
        throw CapExceeded("group carrier exceeds " + std::to_string(caps.carrier_elements) + " elements");
      }
      carrier.push_back(f);
      names.push_back(name);
    }
    return {it->second, fresh};
  };
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    add(seeds[i], seed_names.empty() ? "g" + std::to_string(i) : seed_names[i]);
  }

  const Signature& sig = signature_of(fr.theory());
  std::map<std::pair<Op, std::vector<std::size_t>>, std::size_t> results;
  bool grew = true;
  while (grew) {
    grew = false;
    const std::size_t k = carrier.size();
    for (const OperatorSpec& spec : sig.operators()) {
      all_tuples(k, spec.arity, [&](const std::vector<std::size_t>& idx) {
        if (results.contains({spec.op, idx})) return true;
        std::vector<Intension> args;
        for (std::size_t i : idx) args.push_back(carrier[i]);
        Intension value = apply_operation(work, spec.op, args, caps);
        auto [id, fresh] = add(value, derived_name(spec.op, idx, names));
        results[{spec.op, idx}] = id;
        grew = grew || fresh;
        return true;
      });
    }
  }

  SigmaFrame sf;
  sf.theory = fr.theory();
  sf.props.atoms = n;
  sf.group_elements = names;
  const std::size_t g = carrier.size();
  for (const OperatorSpec& spec : sig.operators()) {
    OpTable t{spec.op, std::vector<std::size_t>(power(g, spec.arity))};
    all_tuples(g, spec.arity, [&](const std::vector<std::size_t>& idx) {
      std::size_t flat = 0;
      for (std::size_t i : idx) flat = flat * g + i;
      t.values[flat] = results.at({spec.op, idx});
      return true;
    });
    sf.ops.push_back(std::move(t));
  }
  sf.box.resize(g * sf.props.size());
  sf.dia.resize(g * sf.props.size());
  for (std::size_t a = 0; a < g; ++a) {
    std::vector<std::vector<WorldSet>> fam(n);
    for (World w = 0; w < n; ++w) fam[w] = image_family(work, carrier[a], w);
    for (std::size_t i = 0; i < sf.props.size(); ++i) {
      const WorldSet x(i);
      WorldSet box, dia;
      for (World w = 0; w < n; ++w) {
        const auto& images = fam[w];
        if (std::all_of(images.begin(), images.end(), [&](WorldSet y) { return y.subset_of(x); })) box.insert(w);
        if (std::any_of(images.begin(), images.end(), [&](WorldSet y) { return y.subset_of(x); })) dia.insert(w);
      }
      sf.box[a * sf.props.size() + i] = box;
      sf.dia[a * sf.props.size() + i] = dia;
    }
  }
  return ComplexAlgebra{std::move(sf), std::move(work), std::move(carrier)};
}

UltrafilterFrame ultrafilter_frame(const SigmaFrame& sf) {
  check_shape(sf);
  const std::size_t k = sf.props.atoms;
  if (k == 0) throw EvalError("the one-element algebra has no ultrafilters");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < k; ++i) labels.push_back("u" + std::to_string(i));
  UltrafilterFrame out{RelationalFrame(labels, TheoryKind::Empty), {}, {}};

  // u_i = {y : atom i <= y}
  auto in_u = [](std::size_t i, WorldSet y) { return y.contains(static_cast<World>(i)); };
  const std::size_t size = sf.props.size();
  std::map<std::vector<WorldSet>, RelationId> ids;
  std::vector<std::vector<RelationId>> rel(sf.group_count(), std::vector<RelationId>(size));
  for (std::size_t a = 0; a < sf.group_count(); ++a) {
    std::vector<WorldSet> core(k, sf.props.top());
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t y = 0; y < size; ++y) {
        if (in_u(i, sf.box_of(a, WorldSet(y)))) core[i] = core[i] & WorldSet(y);
      }
    }
    for (std::size_t x = 0; x < size; ++x) {
      std::vector<WorldSet> images(k);
      for (std::size_t i = 0; i < k; ++i) images[i] = core[i] & WorldSet(x);
      auto it = ids.find(images);
      if (it == ids.end()) {
        RelationId r = out.frame.add_relation(
            "r_" + sf.group_elements[a] + "_" + set_text(WorldSet(x)), images);
        it = ids.emplace(images, r).first;
        out.relation_keys.emplace_back(a, WorldSet(x));
      }
      rel[a][x] = it->second;
    }
  }
  for (std::size_t a = 0; a < sf.group_count(); ++a) {
    Intension ga = Intension::empty(k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t x = 0; x < size; ++x) {
        if (in_u(i, sf.dia_of(a, WorldSet(x)))) ga.extent[i].push_back(rel[a][x]);
      }
      std::sort(ga.extent[i].begin(), ga.extent[i].end());
      ga.extent[i].erase(std::unique(ga.extent[i].begin(), ga.extent[i].end()), ga.extent[i].end());
    }
    out.g.push_back(std::move(ga));
  }
  return out;
}

CanonicalAlgebra canonical_embedding_algebra(const SigmaFrame& sf) {
  UltrafilterFrame uf = ultrafilter_frame(sf);
  const std::size_t k = sf.props.atoms;
  std::vector<Intension> carrier;
  std::vector<std::string> names;
  std::vector<std::size_t> element_of;
  for (std::size_t a = 0; a < sf.group_count(); ++a) {
    auto it = std::find(carrier.begin(), carrier.end(), uf.g[a]);
    if (it == carrier.end()) {
      element_of.push_back(carrier.size());
      carrier.push_back(uf.g[a]);
      names.push_back("G(" + sf.group_elements[a] + ")");
    } else {
      element_of.push_back(static_cast<std::size_t>(it - carrier.begin()));
    }
  }

  SigmaFrame plus;
  plus.theory = sf.theory;
  plus.props.atoms = k;
  plus.group_elements = names;
  const std::size_t g = carrier.size();
  for (const OpTable& src : sf.ops) {
    const int n_args = arity(src.op);
    OpTable t{src.op, std::vector<std::size_t>(power(g, n_args), 0)};
    std::vector<bool> set(t.values.size(), false);
    all_tuples(sf.group_count(), n_args, [&](const std::vector<std::size_t>& idx) {
      std::size_t flat = 0;
      for (std::size_t i : idx) flat = flat * g + element_of[i];
      if (!set[flat]) {
        t.values[flat] = element_of[sf.apply(src.op, idx)];
        set[flat] = true;
      }
      return true;
    });
    plus.ops.push_back(std::move(t));
  }
  const std::size_t size = plus.props.size();
  plus.box.resize(g * size);
  plus.dia.resize(g * size);
  for (std::size_t e = 0; e < g; ++e) {
    for (std::size_t x = 0; x < size; ++x) {
      WorldSet box, dia;
      for (World u = 0; u < k; ++u) {
        bool all = true, any = false;
        for (RelationId r : carrier[e].extent[u]) {
          const bool inside = uf.frame.image(r, u).subset_of(WorldSet(x));
          all = all && inside;
          any = any || inside;
        }
        if (all) box.insert(u);
        if (any) dia.insert(u);
      }
      plus.box[e * size + x] = box;
      plus.dia[e * size + x] = dia;
    }
  }
  return CanonicalAlgebra{std::move(uf), std::move(plus), std::move(element_of)};
}

MorphismReport canonical_morphism_check(const SigmaFrame& sf) {
  CanonicalAlgebra ca = canonical_embedding_algebra(sf);
  const FiniteBooleanAlgebra& f = sf.props;
  const std::size_t size = f.size();
  // x-hat: the ultrafilters (atoms) containing x
  std::vector<WorldSet> hat(size);
  for (std::size_t x = 0; x < size; ++x) {
    for (World u = 0; u < f.atoms; ++u) {
      if (WorldSet(x).contains(u)) hat[x].insert(u);
    }
  }
  const FiniteBooleanAlgebra& f2 = ca.algebra.props;
  if (hat[f.top().bits()] != f2.top() || hat[0] != f2.bottom()) return {false, "m1", "top or bottom"};
  for (std::size_t x = 0; x < size; ++x) {
    if (hat[f.complement(WorldSet(x)).bits()] != f2.complement(hat[x])) {
      return {false, "m1", "complement of " + set_text(WorldSet(x))};
    }
    for (std::size_t y = 0; y < size; ++y) {
      if (hat[(WorldSet(x) & WorldSet(y)).bits()] != (hat[x] & hat[y]) ||
          hat[(WorldSet(x) | WorldSet(y)).bits()] != (hat[x] | hat[y])) {
        return {false, "m1", "x=" + set_text(WorldSet(x)) + ", y=" + set_text(WorldSet(y))};
      }
      if (x < y && hat[x] == hat[y]) {
        return {false, "injective", set_text(WorldSet(x)) + " and " + set_text(WorldSet(y))};
      }
    }
  }
  for (std::size_t a = 0; a < sf.group_count(); ++a) {
    const std::size_t ga = ca.element_of[a];
    for (std::size_t x = 0; x < size; ++x) {
      const std::string wit = "a=" + sf.group_elements[a] + ", x=" + set_text(WorldSet(x));
      if (hat[sf.box_of(a, WorldSet(x)).bits()] != ca.algebra.box_of(ga, hat[x])) return {false, "m3", wit};
    }
  }
  for (std::size_t a = 0; a < sf.group_count(); ++a) {
    const std::size_t ga = ca.element_of[a];
    for (std::size_t x = 0; x < size; ++x) {
      const std::string wit = "a=" + sf.group_elements[a] + ", x=" + set_text(WorldSet(x));
      if (hat[sf.dia_of(a, WorldSet(x)).bits()] != ca.algebra.dia_of(ga, hat[x])) return {false, "m4", wit};
    }
  }
  // last, so a failure here means the modal clauses held
  for (const OpTable& t : sf.ops) {
    MorphismReport bad;
    all_tuples(sf.group_count(), arity(t.op), [&](const std::vector<std::size_t>& idx) {
      std::vector<std::size_t> lifted;
      for (std::size_t i : idx) lifted.push_back(ca.element_of[i]);
      if (ca.element_of[sf.apply(t.op, idx)] != ca.algebra.apply(t.op, lifted)) {
        std::string args;
        for (std::size_t i : idx) args += (args.empty() ? "" : ", ") + sf.group_elements[i];
        bad = {false, "m2", std::string(symbol(t.op)) + "(" + args + ")"};
        return false;
      }
      return true;
    });
    if (!bad.ok) return bad;
  }
  return {};
}

UltrafilterFrame ultrafilter_extension(const RelationalFrame& fr, const std::vector<Intension>& seeds,
                                       const ResourceCaps& caps) {
  return ultrafilter_frame(complex_algebra(fr, seeds, {}, caps).algebra);
}

std::optional<std::string> join_union_witness(const SigmaFrame& sf, const UltrafilterFrame& uf) {
  if (!signature_of(sf.theory).has(Op::Plus)) return std::nullopt;
  for (std::size_t a = 0; a < sf.group_count(); ++a) {
    for (std::size_t b = 0; b < sf.group_count(); ++b) {
      const std::size_t args[] = {a, b};
      const Intension& sum = uf.g[sf.apply(Op::Plus, args)];
      for (std::size_t u = 0; u < uf.frame.world_count(); ++u) {
        RelationSet both;
        std::set_union(uf.g[a].extent[u].begin(), uf.g[a].extent[u].end(), uf.g[b].extent[u].begin(),
                       uf.g[b].extent[u].end(), std::back_inserter(both));
        if (both != sum.extent[u]) {
          return "G(" + sf.group_elements[a] + " + " + sf.group_elements[b] + ")(u" + std::to_string(u) +
                 ") has " + std::to_string(sum.extent[u].size()) + " relations, the union has " +
                 std::to_string(both.size());
        }
      }
    }
  }
  return std::nullopt;
}

namespace {

/// Per atom i: box set B_i and a dia family of subsets of B_i (kept as its
/// minimal members, so equal data means equal box and dia).
struct Core {
  std::vector<WorldSet> b;
  std::vector<std::vector<WorldSet>> n;
  friend bool operator==(const Core&, const Core&) = default;
  friend auto operator<=>(const Core&, const Core&) = default;
};

std::vector<WorldSet> minimal(std::vector<WorldSet> family) {
  std::sort(family.begin(), family.end());
  family.erase(std::unique(family.begin(), family.end()), family.end());
  std::vector<WorldSet> out;
  for (WorldSet x : family) {
    bool dominated = std::any_of(family.begin(), family.end(),
                                 [&](WorldSet y) { return y != x && y.subset_of(x); });
    if (!dominated) out.push_back(x);
  }
  return out;
}

WorldSet random_subset(std::mt19937_64& rng, WorldSet of) {
  WorldSet out;
  for (World w : of) {
    if (rng() & 1U) out.insert(w);
  }
  return out;
}

Core random_core(std::mt19937_64& rng, std::size_t k, bool reflexive) {
  Core c{std::vector<WorldSet>(k), std::vector<std::vector<WorldSet>>(k)};
  for (std::size_t i = 0; i < k; ++i) {
    c.b[i] = random_subset(rng, WorldSet::full(k));
    if (reflexive) c.b[i].insert(static_cast<World>(i));
    if (c.b[i].empty()) {
      if (rng() & 1U) c.n[i].push_back(WorldSet{});
    } else {
      const std::size_t count = 1 + rng() % 2;
      for (std::size_t j = 0; j < count; ++j) c.n[i].push_back(random_subset(rng, c.b[i]));
    }
    c.n[i] = minimal(c.n[i]);
  }
  return c;
}

Core join_core(const Core& x, const Core& y) {
  Core out = x;
  for (std::size_t i = 0; i < x.b.size(); ++i) {
    out.b[i] = x.b[i] | y.b[i];
    out.n[i].insert(out.n[i].end(), y.n[i].begin(), y.n[i].end());
    out.n[i] = minimal(out.n[i]);
  }
  return out;
}

Core zero_core(std::size_t k) { return Core{std::vector<WorldSet>(k), std::vector<std::vector<WorldSet>>(k)}; }

Core cap_core(const Core& x) {
  Core out = x;
  for (auto& family : out.n) {
    std::set<WorldSet> closed(family.begin(), family.end());
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<WorldSet> now(closed.begin(), closed.end());
      for (WorldSet p : now) {
        for (WorldSet q : now) grew = closed.insert(p & q).second || grew;
      }
    }
    family = minimal(std::vector<WorldSet>(closed.begin(), closed.end()));
  }
  return out;
}

Core one_core(std::size_t k) {
  Core out = zero_core(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.b[i] = WorldSet::single(static_cast<World>(i));
    out.n[i] = {WorldSet::single(static_cast<World>(i))};
  }
  return out;
}

Core dot_core(const Core& x, const Core& y) {
  const std::size_t k = x.b.size();
  Core out = zero_core(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (World j : x.b[i]) out.b[i] = out.b[i] | y.b[j];
    std::vector<WorldSet> family;
    for (WorldSet big : x.n[i]) {
      // one choice per j in big: any member of y.n[j], or nothing when y.b[j] is empty
      std::vector<WorldSet> partial{WorldSet{}};
      for (World j : big) {
        if (y.b[j].empty()) continue;
        std::vector<WorldSet> next;
        for (WorldSet p : partial) {
          for (WorldSet q : y.n[j]) next.push_back(p | q);
        }
        partial = minimal(next);
      }
      family.insert(family.end(), partial.begin(), partial.end());
    }
    out.n[i] = minimal(family);
  }
  return out;
}

/// Closes `cores` under the ops, deduplicating by data; nullopt past `limit`.
std::optional<std::pair<std::vector<Core>, std::vector<OpTable>>> close_cores(
    std::vector<Core> cores, TheoryKind theory, std::size_t k, std::size_t limit) {
  const Signature& sig = signature_of(theory);
  std::vector<Core> distinct;
  for (Core& c : cores) {
    if (std::find(distinct.begin(), distinct.end(), c) == distinct.end()) distinct.push_back(std::move(c));
  }
  cores = std::move(distinct);
  std::map<std::pair<Op, std::vector<std::size_t>>, std::size_t> results;
  auto index_of = [&](const Core& c) -> std::optional<std::size_t> {
    auto it = std::find(cores.begin(), cores.end(), c);
    if (it != cores.end()) return static_cast<std::size_t>(it - cores.begin());
    if (cores.size() >= limit) return std::nullopt;
    cores.push_back(c);
    return cores.size() - 1;
  };
  bool grew = true;
  while (grew) {
    grew = false;
    const std::size_t n = cores.size();
    for (const OperatorSpec& spec : sig.operators()) {
      bool ok = all_tuples(n, spec.arity, [&](const std::vector<std::size_t>& idx) {
        if (results.contains({spec.op, idx})) return true;
        Core value;
        switch (spec.op) {
          case Op::Zero: value = zero_core(k); break;
          case Op::One: value = one_core(k); break;
          case Op::Plus: value = join_core(cores[idx[0]], cores[idx[1]]); break;
          case Op::Dot: value = dot_core(cores[idx[0]], cores[idx[1]]); break;
          case Op::Cap: value = cap_core(cores[idx[0]]); break;
          default: throw EvalError("no data semantics for this operator");
        }
        const std::size_t before = cores.size();
        auto id = index_of(value);
        if (!id) return false;
        grew = grew || cores.size() != before;
        results[{spec.op, idx}] = *id;
        return true;
      });
      if (!ok) return std::nullopt;
    }
  }
  std::vector<OpTable> tables;
  const std::size_t g = cores.size();
  for (const OperatorSpec& spec : sig.operators()) {
    OpTable t{spec.op, std::vector<std::size_t>(power(g, spec.arity))};
    all_tuples(g, spec.arity, [&](const std::vector<std::size_t>& idx) {
      std::size_t flat = 0;
      for (std::size_t i : idx) flat = flat * g + i;
      t.values[flat] = results.at({spec.op, idx});
      return true;
    });
    tables.push_back(std::move(t));
  }
  return std::make_pair(std::move(cores), std::move(tables));
}

SigmaFrame frame_from_cores(TheoryKind theory, std::size_t k, const std::vector<Core>& cores,
                            std::vector<OpTable> tables) {
  SigmaFrame sf;
  sf.theory = theory;
  sf.props.atoms = k;
  for (std::size_t i = 0; i < cores.size(); ++i) sf.group_elements.push_back("e" + std::to_string(i));
  sf.ops = std::move(tables);
  const std::size_t size = sf.props.size();
  sf.box.resize(cores.size() * size);
  sf.dia.resize(cores.size() * size);
  for (std::size_t a = 0; a < cores.size(); ++a) {
    for (std::size_t x = 0; x < size; ++x) {
      WorldSet box, dia;
      for (std::size_t i = 0; i < k; ++i) {
        if (cores[a].b[i].subset_of(WorldSet(x))) box.insert(static_cast<World>(i));
        const auto& fam = cores[a].n[i];
        if (std::any_of(fam.begin(), fam.end(), [&](WorldSet y) { return y.subset_of(WorldSet(x)); })) {
          dia.insert(static_cast<World>(i));
        }
      }
      sf.box[a * size + x] = box;
      sf.dia[a * size + x] = dia;
    }
  }
  return sf;
}

}  // namespace

SigmaFrame random_sigma_frame_candidate(std::mt19937_64& rng, TheoryKind theory, std::size_t max_atoms,
                                        std::size_t max_groups) {
  if (max_atoms == 0 || max_atoms > 6) throw EvalError("random frames need between 1 and 6 atoms");
  if (max_groups == 0) throw EvalError("random frames need a group element");
  const std::size_t k = 1 + rng() % max_atoms;
  const bool reflexive = theory == TheoryKind::CSL;

  switch (theory) {
    case TheoryKind::Empty: {
      std::vector<Core> cores;
      const std::size_t g = 1 + rng() % max_groups;
      for (std::size_t i = 0; i < g; ++i) cores.push_back(random_core(rng, k, false));
      return frame_from_cores(theory, k, cores, {});
    }
    case TheoryKind::BA: {
      // the four-element algebra 0, a, -a, 1; elements as bitmasks of two atoms
      const std::size_t g = max_groups >= 4 ? 4 : (max_groups >= 2 ? 2 : 1);
      std::vector<Core> cores;
      for (std::size_t i = 0; i < g; ++i) cores.push_back(random_core(rng, k, false));
      const std::size_t full = g - 1;
      OpTable comp{Op::Complement, {}}, meet{Op::Meet, {}}, join{Op::Join, {}};
      for (std::size_t a = 0; a < g; ++a) {
        comp.values.push_back(full & ~a);
        for (std::size_t b = 0; b < g; ++b) {
          meet.values.push_back(a & b);
          join.values.push_back(a | b);
        }
      }
      return frame_from_cores(theory, k, cores, {comp, meet, join});
    }
    case TheoryKind::SL:
      if (max_groups >= 4 && (rng() & 1U)) {
        // free semilattice on two generators: elements stay distinct even
        // when their data coincide
        const Core a = random_core(rng, k, false), b = random_core(rng, k, false);
        std::vector<Core> cores{zero_core(k), a, b, join_core(a, b)};
        OpTable plus{Op::Plus, {}};
        for (std::size_t x = 0; x < 4; ++x) {
          for (std::size_t y = 0; y < 4; ++y) plus.values.push_back(x | y);
        }
        return frame_from_cores(theory, k, cores, {plus, OpTable{Op::Zero, {0}}});
      }
      [[fallthrough]];
    case TheoryKind::RUM:
    case TheoryKind::CSL:
      for (int attempt = 0; attempt < 1000; ++attempt) {
        const std::size_t gens = 1 + rng() % std::min<std::size_t>(2, max_groups);
        std::vector<Core> seeds;
        for (std::size_t i = 0; i < gens; ++i) seeds.push_back(random_core(rng, k, reflexive));
        auto closed = close_cores(seeds, theory, k, max_groups);
        if (closed) return frame_from_cores(theory, k, closed->first, std::move(closed->second));
      }
      throw EvalError("no small group algebra found for the random frame");
  }
  throw EvalError("unknown theory");
}

SigmaFrame random_sigma_frame(std::mt19937_64& rng, TheoryKind theory, std::size_t max_atoms,
                              std::size_t max_groups, std::size_t attempts) {
  std::optional<EquationViolation> last;
  for (std::size_t i = 0; i < attempts; ++i) {
    SigmaFrame sf = random_sigma_frame_candidate(rng, theory, max_atoms, max_groups);
    last = check_sigma_frame(sf);
    if (!last) return sf;
  }
  throw EvalError("no valid " + std::string(theory_name(theory)) + " frame in " + std::to_string(attempts) +
                  " attempts; last violation: " + last->equation + " (" + last->witness + ")");
}

}  // namespace intensio
