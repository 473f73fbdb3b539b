#include "intensio/neighborhood.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "intensio/error.hpp"
#include "intensio/theories.hpp"

namespace intensio {

namespace {

template <typename TermFn, typename PropFn>
WorldSet eval_with(const Formula& f, WorldSet all, TermFn& term, PropFn& prop) {
  switch (f.kind()) {
    case Formula::Kind::Top:
      return all;
    case Formula::Kind::Prop:
      return prop(f.name());
    case Formula::Kind::Not:
      return all - eval_with(f.lhs(), all, term, prop);
    case Formula::Kind::And:
      return eval_with(f.lhs(), all, term, prop) & eval_with(f.rhs(), all, term, prop);
    case Formula::Kind::Box:
      return box_set(term(f.term()), eval_with(f.lhs(), all, term, prop));
    case Formula::Kind::Dia:
      return dia_set(term(f.term()), eval_with(f.lhs(), all, term, prop));
  }
  return {};
}

bool pointwise(Op op) { return op == Op::Plus || op == Op::Zero; }

std::vector<std::string> shared_keys(const auto& a, const auto& b) {
  std::vector<std::string> out;
  for (const auto& [k, v] : a) {
    if (b.contains(k)) out.push_back(k);
  }
  return out;
}

std::string world_label(const NeighborhoodModel& m, World w) {
  return w < m.labels.size() ? m.labels[w] : std::to_string(w);
}

std::string set_text(const NeighborhoodModel& m, WorldSet s) {
  std::string out = "{";
  bool first = true;
  for (World w : s) {
    if (!first) out += ",";
    out += world_label(m, w);
    first = false;
  }
  return out + "}";
}

WorldSet image_under(const std::vector<World>& f, WorldSet x) {
  WorldSet out;
  for (World w : x) out.insert(f[w]);
  return out;
}

/// Every tuple of indices in [0, k)^arity, in lexicographic order.
void for_each_tuple(std::size_t k, int arity, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(arity), 0);
  if (arity > 0 && k == 0) return;
  while (true) {
    fn(idx);
    std::size_t i = idx.size();
    while (i > 0) {
      --i;
      if (++idx[i] < k) break;
      idx[i] = 0;
      if (i == 0) return;
    }
    if (idx.empty()) return;
  }
}

using ValuePairs = std::vector<std::pair<NeighborhoodFunction, NeighborhoodFunction>>;

ValuePairs pair_values(NeighborhoodEvaluator& e1, NeighborhoodEvaluator& e2,
                       const std::vector<std::pair<GroupTerm, GroupTerm>>& pairs) {
  ValuePairs out;
  for (const auto& [s, t] : pairs) out.emplace_back(e1.term(s), e2.term(t));
  return out;
}

GroupTerm apply_to(Op op, const std::vector<std::size_t>& idx,
                   const std::vector<std::pair<GroupTerm, GroupTerm>>& pairs, bool source) {
  std::vector<GroupTerm> args;
  for (std::size_t i : idx) args.push_back(source ? pairs[i].first : pairs[i].second);
  return GroupTerm::apply(op, std::move(args));
}

bool transfer(const NeighborhoodFunction& nu1, World w1, const NeighborhoodFunction& nu2, World w2,
              const std::vector<std::vector<bool>>& b) {
  for (WorldSet x : nu1.at[w1]) {
    bool found = false;
    for (WorldSet y : nu2.at[w2]) {
      if (lifted(b, x, y)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  for (WorldSet y : nu2.at[w2]) {
    bool found = false;
    for (WorldSet x : nu1.at[w1]) {
      if (lifted(b, x, y)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool agree_on_props(const NeighborhoodModel& m1, World w1, const NeighborhoodModel& m2, World w2,
                    const std::vector<std::string>& props) {
  for (const auto& p : props) {
    if (m1.props.at(p).contains(w1) != m2.props.at(p).contains(w2)) return false;
  }
  return true;
}

}  // namespace

Neighborhoods normalized(std::vector<WorldSet> family) {
  std::sort(family.begin(), family.end());
  family.erase(std::unique(family.begin(), family.end()), family.end());
  return family;
}

void normalize(NeighborhoodFunction& nu) {
  for (auto& family : nu.at) family = normalized(std::move(family));
}

void check_model(const NeighborhoodModel& m) {
  const std::size_t n = m.world_count();
  if (n == 0 || n > kMaxWorlds) throw EvalError("a model needs between 1 and 64 worlds");
  const WorldSet all = m.all_worlds();
  for (const auto& [name, value] : m.props) {
    if (!value.subset_of(all)) {
      throw EvalError("proposition '" + name + "' holds at a world outside the frame");
    }
  }
  for (const auto& [name, nu] : m.groups) {
    if (nu.at.size() != n) throw EvalError("group '" + name + "' has the wrong number of worlds");
    for (World w = 0; w < n; ++w) {
      const Neighborhoods& family = nu.at[w];
      if (!std::is_sorted(family.begin(), family.end()) ||
          std::adjacent_find(family.begin(), family.end()) != family.end()) {
        throw EvalError("group '" + name + "' has an unnormalized family at " + m.labels[w]);
      }
      for (WorldSet x : family) {
        if (!x.subset_of(all)) {
          throw EvalError("group '" + name + "' has a neighborhood outside the frame");
        }
        if (m.theory == TheoryKind::CSL && !x.contains(w)) {
          throw EvalError("group '" + name + "': neighborhood " + set_text(m, x) + " at " +
                          m.labels[w] + " misses its own world (csl frames are reflexive)");
        }
      }
    }
  }
}

NeighborhoodFunction neighborhoods_of(const RelationalFrame& fr, const Intension& f) {
  NeighborhoodFunction nu = NeighborhoodFunction::empty(fr.world_count());
  for (World w = 0; w < fr.world_count(); ++w) nu.at[w] = image_family(fr, f, w);
  return nu;
}

WorldSet box_set(const NeighborhoodFunction& nu, WorldSet p) {
  WorldSet out;
  for (World w = 0; w < nu.at.size(); ++w) {
    if (std::all_of(nu.at[w].begin(), nu.at[w].end(), [&](WorldSet x) { return x.subset_of(p); })) {
      out.insert(w);
    }
  }
  return out;
}

WorldSet dia_set(const NeighborhoodFunction& nu, WorldSet p) {
  WorldSet out;
  for (World w = 0; w < nu.at.size(); ++w) {
    if (std::any_of(nu.at[w].begin(), nu.at[w].end(), [&](WorldSet x) { return x.subset_of(p); })) {
      out.insert(w);
    }
  }
  return out;
}

NeighborhoodEvaluator::NeighborhoodEvaluator(NeighborhoodModel m, ResourceCaps caps)
    : model_(std::move(m)), caps_(caps) {}

NeighborhoodFunction NeighborhoodEvaluator::term(const GroupTerm& t) {
  if (auto it = cache_.find(t); it != cache_.end()) return it->second;
  NeighborhoodFunction value = NeighborhoodFunction::empty(model_.world_count());
  if (t.is_var()) {
    auto it = model_.groups.find(t.name());
    if (it == model_.groups.end()) throw EvalError("unbound group variable '" + t.name() + "'");
    value = it->second;
  } else if (pointwise(t.op())) {
    if (!signature_of(model_.theory).has(t.op())) {
      throw EvalError("operator '" + std::string(symbol(t.op())) + "' is not in the " +
                      std::string(theory_name(model_.theory)) + " signature");
    }
    for (const GroupTerm& a : t.args()) {
      NeighborhoodFunction arg = term(a);
      for (World w = 0; w < value.at.size(); ++w) {
        value.at[w].insert(value.at[w].end(), arg.at[w].begin(), arg.at[w].end());
      }
    }
    normalize(value);
  } else {
    if (!relational_) relational_.emplace(nbhd_to_rel(model_), caps_);
    const Intension f = relational_->term(t);
    value = neighborhoods_of(relational_->frame(), f);
  }
  cache_.emplace(t, value);
  return value;
}

WorldSet NeighborhoodEvaluator::formula(const Formula& f) {
  auto term_fn = [this](const GroupTerm& t) { return term(t); };
  auto prop_fn = [this](const std::string& name) {
    auto it = model_.props.find(name);
    if (it == model_.props.end()) throw EvalError("unbound proposition variable '" + name + "'");
    return it->second;
  };
  return eval_with(f, model_.all_worlds(), term_fn, prop_fn);
}

NeighborhoodFunction n_eval_term(const NeighborhoodModel& m, const GroupTerm& t,
                                 const ResourceCaps& caps) {
  return NeighborhoodEvaluator(m, caps).term(t);
}

WorldSet n_eval(const NeighborhoodModel& m, const Formula& f, const ResourceCaps& caps) {
  return NeighborhoodEvaluator(m, caps).formula(f);
}

NeighborhoodModel rel_to_nbhd(const RelationalModel& m) {
  NeighborhoodModel out;
  out.labels = m.frame.labels();
  out.theory = m.frame.theory();
  out.props = m.props;
  for (const auto& [name, f] : m.groups) out.groups[name] = neighborhoods_of(m.frame, f);
  return out;
}

RelationalModel nbhd_to_rel(const NeighborhoodModel& m) {
  RelationalFrame fr(m.labels, m.theory);
  for (const auto& [name, nu] : m.groups) {
    for (World w = 0; w < m.world_count(); ++w) {
      for (WorldSet x : nu.at[w]) fr.materialize(fr.local_images(w, x), "n");
    }
  }
  RelationalModel out{fr, m.props, {}};
  for (const auto& [name, nu] : m.groups) {
    Intension f = Intension::empty(m.world_count());
    for (World w = 0; w < m.world_count(); ++w) {
      for (RelationId r = 0; r < fr.relation_count(); ++r) {
        if (std::binary_search(nu.at[w].begin(), nu.at[w].end(), fr.image(r, w))) {
          f.extent[w].push_back(r);
        }
      }
    }
    out.groups[name] = std::move(f);
  }
  return out;
}

MorphismCandidate MorphismCandidate::identity(const NeighborhoodModel& m) {
  MorphismCandidate out;
  for (World w = 0; w < m.world_count(); ++w) out.world_map.push_back(w);
  for (const auto& [name, nu] : m.groups) {
    out.group_pairs.emplace_back(GroupTerm::var(name), GroupTerm::var(name));
  }
  return out;
}

std::optional<Violation> check_morphism(const NeighborhoodModel& src, const NeighborhoodModel& dst,
                                        const MorphismCandidate& cand,
                                        const MorphismOptions& options, const ResourceCaps& caps) {
  const auto& f = cand.world_map;
  if (f.size() != src.world_count()) {
    return Violation{"domain", "world map has " + std::to_string(f.size()) + " entries, source has " +
                                   std::to_string(src.world_count()) + " worlds"};
  }
  for (World w = 0; w < f.size(); ++w) {
    if (f[w] >= dst.world_count()) {
      return Violation{"domain", world_label(src, w) + " is mapped outside the target"};
    }
  }
  NeighborhoodEvaluator e1(src, caps);
  NeighborhoodEvaluator e2(dst, caps);
  const ValuePairs values = pair_values(e1, e2, cand.group_pairs);
  const std::size_t k = values.size();

  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (values[i].first == values[j].first && values[i].second != values[j].second) {
        return Violation{"well-defined", render_term(cand.group_pairs[i].first) + " and " +
                                             render_term(cand.group_pairs[j].first) +
                                             " have the same value but different images"};
      }
    }
  }

  const Signature& sig = signature_of(src.theory);
  for (const OperatorSpec& spec : sig.operators()) {
    std::optional<Violation> found;
    for_each_tuple(k, arity(spec.op), [&](const std::vector<std::size_t>& idx) {
      if (found) return;
      const GroupTerm s = apply_to(spec.op, idx, cand.group_pairs, true);
      const NeighborhoodFunction sv = e1.term(s);
      for (std::size_t i = 0; i < k; ++i) {
        if (values[i].first != sv) continue;
        const GroupTerm t = apply_to(spec.op, idx, cand.group_pairs, false);
        if (e2.term(t) != values[i].second) {
          found = Violation{"homomorphism", "g(" + render_term(s) + ") differs from " + render_term(t)};
        }
        return;
      }
    });
    if (found) return found;
  }

  if (options.preserve_valuation) {
    for (const auto& name : shared_keys(src.groups, dst.groups)) {
      const NeighborhoodFunction& a1 = src.groups.at(name);
      auto it = std::find_if(values.begin(), values.end(), [&](const auto& v) { return v.first == a1; });
      if (it == values.end()) {
        return Violation{"valuation", "the value of " + name + " is not covered by g"};
      }
      if (it->second != dst.groups.at(name)) {
        return Violation{"valuation", "g does not send the value of " + name + " to its target value"};
      }
    }
    for (const auto& name : shared_keys(src.props, dst.props)) {
      for (World w = 0; w < f.size(); ++w) {
        if (src.props.at(name).contains(w) != dst.props.at(name).contains(f[w])) {
          return Violation{"atom", name + " differs at " + world_label(src, w) + " and its image " +
                                       world_label(dst, f[w])};
        }
      }
    }
  }

  for (std::size_t i = 0; i < k; ++i) {
    const auto& [nu1, nu2] = values[i];
    const std::string label = render_term(cand.group_pairs[i].first);
    for (World w = 0; w < f.size(); ++w) {
      const Neighborhoods& target = nu2.at[f[w]];
      for (WorldSet x : nu1.at[w]) {
        if (!std::binary_search(target.begin(), target.end(), image_under(f, x))) {
          return Violation{"there", "f" + set_text(src, x) + " is not a neighborhood of g(" + label +
                                        ") at " + world_label(dst, f[w]) + " (from " +
                                        world_label(src, w) + ")"};
        }
      }
      for (WorldSet y : target) {
        bool found = std::any_of(nu1.at[w].begin(), nu1.at[w].end(),
                                 [&](WorldSet x) { return image_under(f, x) == y; });
        if (!found) {
          return Violation{"back", set_text(dst, y) + " in g(" + label + ") at " +
                                       world_label(dst, f[w]) + " has no preimage at " +
                                       world_label(src, w)};
        }
      }
    }
  }
  return std::nullopt;
}

BisimulationCandidate BisimulationCandidate::graph_of(const MorphismCandidate& morphism) {
  BisimulationCandidate out;
  out.group_relation = morphism.group_pairs;
  for (World w = 0; w < morphism.world_map.size(); ++w) {
    out.world_relation.emplace_back(w, morphism.world_map[w]);
  }
  return out;
}

bool lifted(const std::vector<std::vector<bool>>& b, WorldSet x, WorldSet y) {
  for (World u : x) {
    if (std::none_of(y.begin(), y.end(), [&](World v) { return b[u][v]; })) return false;
  }
  for (World v : y) {
    if (std::none_of(x.begin(), x.end(), [&](World u) { return b[u][v]; })) return false;
  }
  return true;
}

std::optional<Violation> check_bisimulation(const NeighborhoodModel& m1,
                                            const NeighborhoodModel& m2,
                                            const BisimulationCandidate& cand,
                                            const ResourceCaps& caps) {
  std::vector<std::vector<bool>> b(m1.world_count(), std::vector<bool>(m2.world_count(), false));
  for (const auto& [u, v] : cand.world_relation) {
    if (u >= m1.world_count() || v >= m2.world_count()) {
      return Violation{"domain", "world pair out of range"};
    }
    b[u][v] = true;
  }
  NeighborhoodEvaluator e1(m1, caps);
  NeighborhoodEvaluator e2(m2, caps);
  const ValuePairs values = pair_values(e1, e2, cand.group_relation);
  const std::size_t k = values.size();
  auto related = [&](const NeighborhoodFunction& x, const NeighborhoodFunction& y) {
    return std::any_of(values.begin(), values.end(),
                       [&](const auto& v) { return v.first == x && v.second == y; });
  };
  auto covered = [&](const NeighborhoodFunction& x, bool source) {
    return std::any_of(values.begin(), values.end(),
                       [&](const auto& v) { return (source ? v.first : v.second) == x; });
  };

  for (const OperatorSpec& spec : signature_of(m1.theory).operators()) {
    std::optional<Violation> found;
    for_each_tuple(k, arity(spec.op), [&](const std::vector<std::size_t>& idx) {
      if (found) return;
      const GroupTerm s = apply_to(spec.op, idx, cand.group_relation, true);
      const GroupTerm t = apply_to(spec.op, idx, cand.group_relation, false);
      const NeighborhoodFunction sv = e1.term(s);
      const NeighborhoodFunction tv = e2.term(t);
      if (covered(sv, true) && covered(tv, false) && !related(sv, tv)) {
        found = Violation{"congruence", render_term(s) + " and " + render_term(t) + " are not related"};
      }
    });
    if (found) return found;
  }

  for (const auto& name : shared_keys(m1.groups, m2.groups)) {
    if (!related(m1.groups.at(name), m2.groups.at(name))) {
      return Violation{"valuation", "the values of " + name + " are not related"};
    }
  }
  const std::vector<std::string> props = shared_keys(m1.props, m2.props);
  for (const auto& [u, v] : cand.world_relation) {
    for (const auto& p : props) {
      if (m1.props.at(p).contains(u) != m2.props.at(p).contains(v)) {
        return Violation{"atom", world_label(m1, u) + " and " + world_label(m2, v) + " disagree on " + p};
      }
    }
  }
  for (const auto& [u, v] : cand.world_relation) {
    for (std::size_t i = 0; i < k; ++i) {
      const auto& [nu1, nu2] = values[i];
      for (WorldSet x : nu1.at[u]) {
        if (std::none_of(nu2.at[v].begin(), nu2.at[v].end(), [&](WorldSet y) { return lifted(b, x, y); })) {
          return Violation{"there", set_text(m1, x) + " at " + world_label(m1, u) + " has no partner at " +
                                        world_label(m2, v) + " for " +
                                        render_term(cand.group_relation[i].first)};
        }
      }
      for (WorldSet y : nu2.at[v]) {
        if (std::none_of(nu1.at[u].begin(), nu1.at[u].end(), [&](WorldSet x) { return lifted(b, x, y); })) {
          return Violation{"back", set_text(m2, y) + " at " + world_label(m2, v) + " has no partner at " +
                                       world_label(m1, u) + " for " +
                                       render_term(cand.group_relation[i].second)};
        }
      }
    }
  }
  return std::nullopt;
}

std::vector<WorldPair> greatest_bisimulation(
    const NeighborhoodModel& m1, const NeighborhoodModel& m2,
    const std::vector<std::pair<GroupTerm, GroupTerm>>& group_relation, const ResourceCaps& caps) {
  NeighborhoodEvaluator e1(m1, caps);
  NeighborhoodEvaluator e2(m2, caps);
  const ValuePairs values = pair_values(e1, e2, group_relation);
  const std::vector<std::string> props = shared_keys(m1.props, m2.props);
  const std::size_t n1 = m1.world_count();
  const std::size_t n2 = m2.world_count();
  std::vector<std::vector<bool>> b(n1, std::vector<bool>(n2, false));
  for (World u = 0; u < n1; ++u) {
    for (World v = 0; v < n2; ++v) b[u][v] = agree_on_props(m1, u, m2, v, props);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (World u = 0; u < n1; ++u) {
      for (World v = 0; v < n2; ++v) {
        if (!b[u][v]) continue;
        for (const auto& [nu1, nu2] : values) {
          if (!transfer(nu1, u, nu2, v, b)) {
            b[u][v] = false;
            changed = true;
            break;
          }
        }
      }
    }
  }
  std::vector<WorldPair> out;
  for (World u = 0; u < n1; ++u) {
    for (World v = 0; v < n2; ++v) {
      if (b[u][v]) out.emplace_back(u, v);
    }
  }
  return out;
}

std::optional<std::size_t> separation_depth(const NeighborhoodModel& m1, World w1,
                                            const NeighborhoodModel& m2, World w2,
                                            std::size_t max_depth,
                                            const std::vector<std::string>& props,
                                            const std::vector<std::string>& groups,
                                            const ResourceCaps& caps) {
  if (m1.theory != m2.theory) throw EvalError("models of different theories");
  if (w1 >= m1.world_count() || w2 >= m2.world_count()) throw EvalError("world index out of range");
  NeighborhoodEvaluator e1(m1, caps);
  NeighborhoodEvaluator e2(m2, caps);

  // joint values of all terms over `groups`, closed under the signature
  std::vector<GroupTerm> reps;
  std::set<std::pair<NeighborhoodFunction, NeighborhoodFunction>> seen;
  std::vector<std::pair<NeighborhoodFunction, NeighborhoodFunction>> values;
  auto offer = [&](const GroupTerm& t) {
    auto v = std::make_pair(e1.term(t), e2.term(t));
    if (!seen.insert(v).second) return false;
    if (seen.size() > caps.term_values) {
      throw CapExceeded("more than " + std::to_string(caps.term_values) + " joint term values");
    }
    reps.push_back(t);
    values.push_back(std::move(v));
    return true;
  };
  for (const auto& g : groups) offer(GroupTerm::var(g));
  const Signature& sig = signature_of(m1.theory);
  bool grew = true;
  while (grew) {
    grew = false;
    const std::size_t k = reps.size();
    for (const OperatorSpec& spec : sig.operators()) {
      std::vector<GroupTerm> fresh;
      for_each_tuple(k, arity(spec.op), [&](const std::vector<std::size_t>& idx) {
        std::vector<GroupTerm> args;
        for (std::size_t i : idx) args.push_back(reps[i]);
        fresh.push_back(GroupTerm::apply(spec.op, std::move(args)));
      });
      for (const auto& t : fresh) grew = offer(t) || grew;
    }
  }

  const std::size_t n1 = m1.world_count();
  const std::size_t total = n1 + m2.world_count();
  auto model_of = [&](std::size_t u) { return u < n1 ? 0 : 1; };
  auto local = [&](std::size_t u) { return static_cast<World>(u < n1 ? u : u - n1); };

  std::vector<std::size_t> cls(total);
  std::size_t class_count = 0;
  {
    std::map<std::vector<bool>, std::size_t> ids;
    for (std::size_t u = 0; u < total; ++u) {
      const NeighborhoodModel& m = model_of(u) == 0 ? m1 : m2;
      std::vector<bool> key;
      for (const auto& p : props) {
        auto it = m.props.find(p);
        if (it == m.props.end()) throw EvalError("unbound proposition variable '" + p + "'");
        key.push_back(it->second.contains(local(u)));
      }
      cls[u] = ids.emplace(key, ids.size()).first->second;
    }
    class_count = ids.size();
  }

  for (std::size_t depth = 0;; ++depth) {
    if (cls[w1] != cls[n1 + w2]) return depth;
    if (depth == max_depth) return std::nullopt;
    if (class_count >= 63 ||
        (std::uint64_t{1} << class_count) * std::max<std::size_t>(values.size(), 1) > caps.valuations) {
      throw CapExceeded("too many definable sets at depth " + std::to_string(depth + 1));
    }
    const std::uint64_t unions = std::uint64_t{1} << class_count;
    // truth of [t]U and <t>U for every joint term t and union U of classes
    std::vector<std::vector<bool>> keys(total);
    for (std::uint64_t mask = 0; mask < unions; ++mask) {
      WorldSet p[2];
      for (std::size_t u = 0; u < total; ++u) {
        if ((mask >> cls[u]) & 1U) p[model_of(u)].insert(local(u));
      }
      for (const auto& [nu1, nu2] : values) {
        const WorldSet box1 = box_set(nu1, p[0]), dia1 = dia_set(nu1, p[0]);
        const WorldSet box2 = box_set(nu2, p[1]), dia2 = dia_set(nu2, p[1]);
        for (std::size_t u = 0; u < total; ++u) {
          const bool first = model_of(u) == 0;
          keys[u].push_back((first ? box1 : box2).contains(local(u)));
          keys[u].push_back((first ? dia1 : dia2).contains(local(u)));
        }
      }
    }
    std::map<std::pair<std::size_t, std::vector<bool>>, std::size_t> ids;
    std::vector<std::size_t> next(total);
    for (std::size_t u = 0; u < total; ++u) {
      next[u] = ids.emplace(std::make_pair(cls[u], keys[u]), ids.size()).first->second;
    }
    const bool stable = ids.size() == class_count;
    cls = std::move(next);
    class_count = ids.size();
    if (stable) {
      // a stable partition never splits again
      return cls[w1] != cls[n1 + w2] ? std::optional<std::size_t>(depth + 1) : std::nullopt;
    }
  }
}

bool modal_equiv_up_to_depth(const NeighborhoodModel& m1, World w1, const NeighborhoodModel& m2,
                             World w2, std::size_t depth, const std::vector<std::string>& props,
                             const std::vector<std::string>& groups, const ResourceCaps& caps) {
  return !separation_depth(m1, w1, m2, w2, depth, props, groups, caps).has_value();
}

Neighborhoods upward_closure(const Neighborhoods& family, std::size_t world_count) {
  if (world_count > 20) throw CapExceeded("upward closure over more than 20 worlds");
  Neighborhoods out;
  const std::uint64_t count = std::uint64_t{1} << world_count;
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    const WorldSet y(bits);
    if (std::any_of(family.begin(), family.end(), [&](WorldSet x) { return x.subset_of(y); })) {
      out.push_back(y);
    }
  }
  return out;
}

namespace {

void check_free_frame(const FreeJoinFrame& frame) {
  if (frame.generators.size() > 6) throw CapExceeded("free join frame with more than 6 generators");
  const std::size_t elements = std::size_t{1} << frame.generators.size();
  if (frame.nu.size() != elements) throw EvalError("free join frame needs one function per element");
  for (const auto& nu : frame.nu) {
    if (nu.at.size() != frame.world_count) throw EvalError("neighborhood function of the wrong size");
  }
  for (const auto& family : frame.nu[0].at) {
    if (!family.empty()) throw EvalError("the zero element must have no neighborhoods");
  }
}

std::size_t element_of(const GroupTerm& t, const std::map<std::string, std::size_t>& assignment) {
  if (t.is_var()) return assignment.at(t.name());
  switch (t.op()) {
    case Op::Zero:
      return 0;
    case Op::Plus:
      return element_of(t.args()[0], assignment) | element_of(t.args()[1], assignment);
    default:
      throw EvalError("free join frames only interpret join and zero");
  }
}

}  // namespace

bool frame_valid(const FreeJoinFrame& frame, const Formula& f) {
  check_free_frame(frame);
  const Variables vars = variables_of(f);
  const std::vector<std::string> props(vars.props.begin(), vars.props.end());
  const std::vector<std::string> groups(vars.groups.begin(), vars.groups.end());
  const std::size_t n = frame.world_count;
  if (props.size() * n > 24) throw CapExceeded("too many proposition valuations");
  const std::size_t elements = frame.nu.size();
  const WorldSet all = WorldSet::full(n);

  std::map<std::string, std::size_t> assignment;
  for (const auto& g : groups) assignment[g] = 0;
  std::map<std::string, WorldSet> valuation;
  auto term_fn = [&](const GroupTerm& t) -> const NeighborhoodFunction& {
    return frame.nu[element_of(t, assignment)];
  };
  auto prop_fn = [&](const std::string& name) { return valuation.at(name); };

  std::vector<std::size_t> choice(groups.size(), 0);
  while (true) {
    for (std::size_t i = 0; i < groups.size(); ++i) assignment[groups[i]] = choice[i];
    const std::uint64_t count = std::uint64_t{1} << (props.size() * n);
    for (std::uint64_t v = 0; v < count; ++v) {
      for (std::size_t i = 0; i < props.size(); ++i) {
        valuation[props[i]] = WorldSet((v >> (i * n)) & all.bits());
      }
      if (eval_with(f, all, term_fn, prop_fn) != all) return false;
    }
    std::size_t i = groups.size();
    while (i > 0) {
      --i;
      if (++choice[i] < elements) break;
      choice[i] = 0;
      if (i == 0) return true;
    }
    if (groups.empty()) return true;
  }
}

bool upward_join_condition(const FreeJoinFrame& frame) {
  check_free_frame(frame);
  const std::size_t elements = frame.nu.size();
  for (std::size_t x = 0; x < elements; ++x) {
    for (std::size_t y = 0; y < elements; ++y) {
      for (World w = 0; w < frame.world_count; ++w) {
        Neighborhoods joined = upward_closure(frame.nu[x].at[w], frame.world_count);
        Neighborhoods other = upward_closure(frame.nu[y].at[w], frame.world_count);
        joined.insert(joined.end(), other.begin(), other.end());
        if (normalized(std::move(joined)) != upward_closure(frame.nu[x | y].at[w], frame.world_count)) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace intensio
