#include "intensio/relational.hpp"

#include "intensio/error.hpp"
#include "intensio/theories.hpp"

namespace intensio {

void check_model(const RelationalModel& m) {
  m.frame.check_constraints();
  for (const auto& [name, value] : m.props) {
    if (!value.subset_of(m.frame.all_worlds())) {
      throw EvalError("proposition '" + name + "' holds at a world outside the frame");
    }
  }
  for (const auto& [name, value] : m.groups) {
    try {
      check_intension(m.frame, value);
    } catch (const EvalError& e) {
      throw EvalError("group '" + name + "': " + e.what());
    }
  }
}

RelationalEvaluator::RelationalEvaluator(const RelationalModel& m, ResourceCaps caps)
    : frame_(m.frame), props_(m.props), groups_(m.groups), caps_(caps) {}

void RelationalEvaluator::set_props(std::map<std::string, WorldSet> props) {
  props_ = std::move(props);
}

void RelationalEvaluator::set_group(const std::string& name, Intension value) {
  groups_[name] = std::move(value);
  term_cache_.clear();
}

Intension RelationalEvaluator::term(const GroupTerm& t) {
  if (auto it = term_cache_.find(t); it != term_cache_.end()) return it->second;
  Intension value;
  if (t.is_var()) {
    auto it = groups_.find(t.name());
    if (it == groups_.end()) throw EvalError("unbound group variable '" + t.name() + "'");
    value = it->second;
  } else {
    std::vector<Intension> args;
    for (const GroupTerm& a : t.args()) args.push_back(term(a));
    value = apply_operation(frame_, t.op(), args, caps_);
  }
  term_cache_.emplace(t, value);
  return value;
}

WorldSet RelationalEvaluator::formula(const Formula& f) {
  const WorldSet all = frame_.all_worlds();
  switch (f.kind()) {
    case Formula::Kind::Top:
      return all;
    case Formula::Kind::Prop: {
      auto it = props_.find(f.name());
      if (it == props_.end()) throw EvalError("unbound proposition variable '" + f.name() + "'");
      return it->second;
    }
    case Formula::Kind::Not:
      return all - formula(f.lhs());
    case Formula::Kind::And:
      return formula(f.lhs()) & formula(f.rhs());
    case Formula::Kind::Box:
    case Formula::Kind::Dia: {
      const bool box = f.kind() == Formula::Kind::Box;
      Intension g = term(f.term());
      WorldSet p = formula(f.lhs());
      WorldSet out;
      for (World w = 0; w < frame_.world_count(); ++w) {
        bool holds = box;
        for (RelationId r : g.extent[w]) {
          if (frame_.image(r, w).subset_of(p) != box) {
            holds = !box;
            break;
          }
        }
        if (holds) out.insert(w);
      }
      return out;
    }
  }
  return {};
}

Intension eval_term(RelationalModel& m, const GroupTerm& t) {
  if (t.is_var()) {
    auto it = m.groups.find(t.name());
    if (it == m.groups.end()) throw EvalError("unbound group variable '" + t.name() + "'");
    return it->second;
  }
  std::vector<Intension> args;
  for (const GroupTerm& a : t.args()) args.push_back(eval_term(m, a));
  return apply_operation(m.frame, t.op(), args);
}

WorldSet eval_formula(const RelationalModel& m, const Formula& f) {
  return RelationalEvaluator(m).formula(f);
}

bool satisfies(const RelationalModel& m, World w, const Formula& f) {
  if (w >= m.frame.world_count()) throw EvalError("world index out of range");
  return eval_formula(m, f).contains(w);
}

bool model_valid(const RelationalModel& m, const Formula& f) {
  return eval_formula(m, f) == m.frame.all_worlds();
}

std::vector<TraceEntry> eval_trace(const RelationalModel& m, const Formula& f) {
  RelationalEvaluator ev(m);
  std::vector<TraceEntry> out;
  for (const Formula& g : subformulas(f)) out.push_back({g, ev.formula(g)});
  return out;
}

std::vector<Intension> all_intensions(const RelationalFrame& fr, const ResourceCaps& caps) {
  const std::size_t n = fr.world_count();
  const std::size_t r = fr.relation_count();
  if (n * r > caps.choice_bits) {
    throw CapExceeded("enumerating all intensions needs " + std::to_string(n * r) +
                      " bits of choice, cap is " + std::to_string(caps.choice_bits));
  }
  std::vector<Intension> out;
  const std::uint64_t count = std::uint64_t{1} << (n * r);
  out.reserve(count);
  for (std::uint64_t index = 0; index < count; ++index) {
    Intension f = Intension::empty(n);
    for (World w = 0; w < n; ++w) {
      for (RelationId q = 0; q < r; ++q) {
        if ((index >> (w * r + q)) & 1U) f.extent[w].push_back(q);
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

FrameValidity frame_valid(const RelationalFrame& fr, const Formula& f,
                          const std::vector<Intension>* group_domain, const ResourceCaps& caps) {
  fr.check_constraints();
  const Variables vars = variables_of(f);
  const std::vector<std::string> props(vars.props.begin(), vars.props.end());
  const std::vector<std::string> groups(vars.groups.begin(), vars.groups.end());
  const std::size_t n = fr.world_count();

  std::vector<Intension> domain_storage;
  const std::vector<Intension>* domain = group_domain;
  if (domain == nullptr && !groups.empty()) {
    domain_storage = all_intensions(fr, caps);
    domain = &domain_storage;
  }
  if (domain != nullptr) {
    for (const Intension& g : *domain) check_intension(fr, g);
  }

  if (props.size() * n >= 63) throw CapExceeded("too many proposition valuations");
  const std::uint64_t prop_count = std::uint64_t{1} << (props.size() * n);
  double total = static_cast<double>(prop_count);
  for (std::size_t i = 0; i < groups.size(); ++i) total *= static_cast<double>(domain->size());
  if (total > static_cast<double>(caps.valuations)) {
    throw CapExceeded("frame validity needs " + std::to_string(total) + " valuations, cap is " +
                      std::to_string(caps.valuations));
  }
  if (domain != nullptr && domain->empty() && !groups.empty()) return {true, std::nullopt};

  RelationalModel base{fr, {}, {}};
  std::vector<std::size_t> choice(groups.size(), 0);
  while (true) {
    for (std::size_t i = 0; i < groups.size(); ++i) base.groups[groups[i]] = (*domain)[choice[i]];
    RelationalEvaluator ev(base, caps);
    for (std::uint64_t v = 0; v < prop_count; ++v) {
      std::map<std::string, WorldSet> valuation;
      for (std::size_t i = 0; i < props.size(); ++i) {
        valuation[props[i]] = WorldSet((v >> (i * n)) & WorldSet::full(n).bits());
      }
      ev.set_props(valuation);
      WorldSet truth = ev.formula(f);
      if (truth != fr.all_worlds()) {
        World w = *(fr.all_worlds() - truth).begin();
        return {false, CounterValuation{std::move(valuation), base.groups, w}};
      }
    }
    std::size_t i = groups.size();
    while (i > 0) {
      --i;
      if (++choice[i] < domain->size()) break;
      choice[i] = 0;
      if (i == 0) return {true, std::nullopt};
    }
    if (groups.empty()) return {true, std::nullopt};
  }
}

}  // namespace intensio
