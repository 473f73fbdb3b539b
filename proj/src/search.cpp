#include "intensio/search.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>

#include "intensio/error.hpp"
#include "intensio/kernel.hpp"

namespace intensio {

void SearchBounds::validate() const {
  if (min_worlds == 0 || max_worlds == 0) throw Error("bounds need at least one world");
  if (min_worlds > max_worlds) throw Error("min_worlds exceeds max_worlds");
  if (max_worlds > kMaxWorlds) throw Error("at most " + std::to_string(kMaxWorlds) + " worlds");
  if (valuation_cap == 0) throw Error("the valuation cap must be positive");
  if (!(time_cap_seconds > 0)) throw Error("the time cap must be positive");
}

namespace {

std::uint64_t mul_capped(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
  if (a != 0 && b > cap / a) throw CapExceeded("enumeration exceeds the valuation cap of " + std::to_string(cap));
  return a * b;
}

std::uint64_t pow_capped(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) out = mul_capped(out, base, cap);
  return out;
}

// CSL images at w must contain w; their digit drops that bit.
std::uint64_t image_digit(TheoryKind theory, World w, WorldSet image) {
  const std::uint64_t bits = image.bits();
  if (theory != TheoryKind::CSL) return bits;
  const std::uint64_t low = bits & ((std::uint64_t{1} << w) - 1);
  return low | ((bits >> (w + 1)) << w);
}

WorldSet image_of_digit(TheoryKind theory, World w, std::uint64_t digit) {
  if (theory != TheoryKind::CSL) return WorldSet(digit);
  const std::uint64_t low = digit & ((std::uint64_t{1} << w) - 1);
  return WorldSet(low | (std::uint64_t{1} << w) | ((digit >> w) << (w + 1)));
}

WorldSet permute(WorldSet s, const std::vector<World>& pi) {
  WorldSet out;
  for (World w : s) out.insert(pi[w]);
  return out;
}

}  // namespace

ModelEnumerator::ModelEnumerator(TheoryKind theory, SearchBounds bounds, std::vector<std::string> props,
                                 std::vector<std::string> groups)
    : theory_(theory), bounds_(bounds), props_(std::move(props)), groups_(std::move(groups)) {
  bounds_.validate();
  const std::uint64_t cap = bounds_.valuation_cap;
  for (std::size_t n = bounds_.min_worlds; n <= bounds_.max_worlds; ++n) {
    const std::uint64_t images = theory_ == TheoryKind::CSL ? std::uint64_t{1} << (n - 1) : std::uint64_t{1} << n;
    for (std::size_t m = 0; m <= bounds_.max_relations; ++m) {
      Component c{n, m, pow_capped(images, n * m, cap), pow_capped(2, n * m, cap), 0, size_};
      if (bounds_.max_group_values != 0) c.group_values = std::min<std::uint64_t>(c.group_values, bounds_.max_group_values);
      c.count = mul_capped(c.frames, pow_capped(c.group_values, groups_.size(), cap), cap);
      c.count = mul_capped(c.count, pow_capped(std::uint64_t{1} << n, props_.size(), cap), cap);
      if (c.count > cap - size_) throw CapExceeded("enumeration exceeds the valuation cap of " + std::to_string(cap));
      size_ += c.count;
      components_.push_back(c);
    }
  }
}

ModelEnumerator::Decoded ModelEnumerator::decode(std::uint64_t index) const {
  if (index >= size_) throw Error("model index out of range");
  std::size_t ci = 0;
  while (index >= components_[ci].first + components_[ci].count) ++ci;
  const Component& c = components_[ci];
  std::uint64_t local = index - c.first;
  const std::uint64_t p = pow_capped(std::uint64_t{1} << c.worlds, props_.size(), ~std::uint64_t{0});
  const std::uint64_t g = pow_capped(c.group_values, groups_.size(), ~std::uint64_t{0});
  Decoded d{ci, 0, 0, local % p};
  local /= p;
  d.groups = local % g;
  d.frame = local / g;
  return d;
}

std::uint64_t ModelEnumerator::encode(const Decoded& d) const {
  const Component& c = components_[d.component];
  const std::uint64_t p = pow_capped(std::uint64_t{1} << c.worlds, props_.size(), ~std::uint64_t{0});
  const std::uint64_t g = pow_capped(c.group_values, groups_.size(), ~std::uint64_t{0});
  return c.first + (d.frame * g + d.groups) * p + d.props;
}

RelationalFrame ModelEnumerator::frame_at(const Component& c, std::uint64_t frame) const {
  const std::size_t n = c.worlds;
  const std::uint64_t base = theory_ == TheoryKind::CSL ? std::uint64_t{1} << (n - 1) : std::uint64_t{1} << n;
  std::vector<std::vector<WorldSet>> images(c.relations, std::vector<WorldSet>(n));
  for (std::size_t i = c.relations; i-- > 0;) {
    for (std::size_t w = n; w-- > 0;) {
      images[i][w] = image_of_digit(theory_, static_cast<World>(w), frame % base);
      frame /= base;
    }
  }
  RelationalFrame fr(n, theory_);
  for (std::size_t i = 0; i < c.relations; ++i) fr.add_relation("r" + std::to_string(i), images[i]);
  return fr;
}

RelationalModel ModelEnumerator::at(std::uint64_t index) const {
  const Decoded d = decode(index);
  const Component& c = components_[d.component];
  RelationalModel model{frame_at(c, d.frame), {}, {}};
  const std::size_t n = c.worlds, m = c.relations;
  std::uint64_t rest = d.groups;
  for (std::size_t v = groups_.size(); v-- > 0;) {
    std::uint64_t value = rest % c.group_values;
    rest /= c.group_values;
    Intension f = Intension::empty(n);
    for (World w = 0; w < n; ++w) {
      for (RelationId r = 0; r < m; ++r) {
        if ((value >> (w * m + r)) & 1U) f.extent[w].push_back(r);
      }
    }
    model.groups[groups_[v]] = f;
  }
  rest = d.props;
  for (std::size_t i = props_.size(); i-- > 0;) {
    model.props[props_[i]] = WorldSet(rest % (std::uint64_t{1} << n));
    rest >>= n;
  }
  return model;
}

void ModelEnumerator::for_each(const std::function<bool(std::uint64_t, const RelationalModel&)>& fn) const {
  for (std::uint64_t i = 0; i < size_; ++i) {
    if (!fn(i, at(i))) return;
  }
}

bool ModelEnumerator::is_canonical(std::uint64_t index) const {
  const Decoded d = decode(index);
  const Component& c = components_[d.component];
  const std::size_t n = c.worlds, m = c.relations;
  const RelationalModel model = at(index);
  std::vector<World> pi(n);
  std::iota(pi.begin(), pi.end(), World{0});
  const std::uint64_t base = theory_ == TheoryKind::CSL ? std::uint64_t{1} << (n - 1) : std::uint64_t{1} << n;
  while (std::next_permutation(pi.begin(), pi.end())) {
    Decoded e{d.component, 0, 0, 0};
    for (RelationId r = 0; r < m; ++r) {
      std::vector<WorldSet> images(n);
      for (World w = 0; w < n; ++w) images[pi[w]] = permute(model.frame.image(r, w), pi);
      for (World w = 0; w < n; ++w) e.frame = e.frame * base + image_digit(theory_, w, images[w]);
    }
    bool in_range = true;
    for (const std::string& g : groups_) {
      std::uint64_t value = 0;
      const Intension& f = model.groups.at(g);
      for (World w = 0; w < n; ++w) {
        for (RelationId r : f.extent[w]) value |= std::uint64_t{1} << (pi[w] * m + r);
      }
      if (value >= c.group_values) in_range = false;
      e.groups = e.groups * c.group_values + value;
    }
    for (const std::string& p : props_) e.props = (e.props << n) | permute(model.props.at(p), pi).bits();
    if (in_range && encode(e) < index) return false;
  }
  return true;
}

namespace {

struct Reference {
  static std::vector<std::optional<RelationalModel>> run(std::span<const Formula> formulas, TheoryKind theory,
                                                         const SearchBounds& bounds,
                                                         const std::vector<std::string>& props,
                                                         const std::vector<std::string>& groups,
                                                         const ResourceCaps& caps) {
    ModelEnumerator en(theory, bounds, props, groups);
    std::vector<std::optional<RelationalModel>> found(formulas.size());
    std::size_t open = formulas.size();
    const auto start = std::chrono::steady_clock::now();
    for (std::uint64_t i = 0; i < en.size() && open > 0;) {
      // one evaluator per frame and group valuation; props vary fastest
      RelationalModel base = en.at(i);
      RelationalEvaluator ev(base, caps);
      const std::uint64_t props_count =
          std::uint64_t{1} << (base.frame.world_count() * props.size());
      const WorldSet all = base.frame.all_worlds();
      for (std::uint64_t k = 0; k < props_count && open > 0; ++k, ++i) {
        if ((i & 1023) == 0) {
          const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          if (elapsed > bounds.time_cap_seconds) throw CapExceeded("search exceeded the time cap");
        }
        if (bounds.symmetry_reduction && !en.is_canonical(i)) continue;
        RelationalModel model = base;
        const std::size_t n = base.frame.world_count();
        for (std::size_t v = 0; v < props.size(); ++v) {
          model.props[props[v]] = WorldSet((k >> ((props.size() - 1 - v) * n)) & all.bits());
        }
        ev.set_props(model.props);
        for (std::size_t f = 0; f < formulas.size(); ++f) {
          if (found[f]) continue;
          if (ev.formula(formulas[f]) != all) {
            found[f] = model;
            --open;
          }
        }
      }
    }
    return found;
  }
};

CountermodelReport verified_report(RelationalModel model, const Formula& f) {
  const WorldSet truth = eval_formula(model, f);
  const WorldSet failing = model.frame.all_worlds() - truth;
  if (failing.empty()) throw Error("internal error: a countermodel did not re-verify");
  const World w = *failing.begin();
  std::vector<TraceEntry> trace = eval_trace(model, f);
  return CountermodelReport{std::move(model), w, f, std::move(trace)};
}

}  // namespace

bool kernel_supports(TheoryKind theory, const SearchBounds& bounds) {
  return theory != TheoryKind::BA && bounds.max_worlds <= kernel::kMaxWorlds && bounds.max_group_values == 0;
}

std::vector<SearchOutcome> find_countermodels(std::span<const Formula> formulas, TheoryKind theory,
                                              const SearchBounds& bounds, const SearchOptions& options) {
  bounds.validate();
  for (const Formula& f : formulas) check_formula(f, signature_of(theory));
  Engine engine = options.engine;
  if (engine == Engine::Auto) engine = kernel_supports(theory, bounds) ? Engine::Kernel : Engine::Reference;
  if (engine == Engine::Kernel && !kernel_supports(theory, bounds)) {
    throw Error("the kernel does not support these bounds or this theory");
  }

  // one enumeration per variable set
  using Key = std::pair<std::vector<std::string>, std::vector<std::string>>;
  std::map<Key, std::vector<std::size_t>> batches;
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    Variables v = variables_of(formulas[i]);
    batches[Key{{v.props.begin(), v.props.end()}, {v.groups.begin(), v.groups.end()}}].push_back(i);
  }

  std::vector<SearchOutcome> out(formulas.size(), SearchOutcome{std::nullopt, engine});
  for (const auto& [key, members] : batches) {
    std::vector<Formula> batch;
    for (std::size_t i : members) batch.push_back(formulas[i]);
    if (engine == Engine::Kernel) {
      kernel::Search search(theory, bounds, key.first, key.second, options.caps);
      auto hits = search.run(batch, options.workers);
      for (std::size_t j = 0; j < members.size(); ++j) {
        if (hits[j]) out[members[j]].counter = verified_report(search.model(*hits[j]), batch[j]);
      }
    } else {
      auto found = Reference::run(batch, theory, bounds, key.first, key.second, options.caps);
      for (std::size_t j = 0; j < members.size(); ++j) {
        if (found[j]) out[members[j]].counter = verified_report(*found[j], batch[j]);
      }
    }
  }
  return out;
}

SearchOutcome find_countermodel(const Formula& f, TheoryKind theory, const SearchBounds& bounds,
                                const SearchOptions& options) {
  return find_countermodels(std::span<const Formula>(&f, 1), theory, bounds, options).front();
}

HarnessReport soundness_harness(TheoryKind theory, const SearchBounds& bounds, const InstantiationSet& set,
                                const SearchOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  HarnessReport report;
  report.theory = theory;
  report.bounds = bounds;

  std::vector<Formula> formulas;
  std::map<Formula, std::size_t> ids;
  auto id_of = [&](const Formula& f) {
    auto [it, fresh] = ids.emplace(f, formulas.size());
    if (fresh) formulas.push_back(f);
    return it->second;
  };
  struct Item {
    std::string schema;
    bool rule;
    std::vector<std::size_t> premises;
    std::size_t conclusion;
    std::string text;
  };
  std::vector<Item> items;
  for (const Schema& s : axiom_suite(theory)) {
    for (const SchemaInstance& inst : instantiate(s, theory, set)) {
      items.push_back({s.name, false, {}, id_of(inst.conclusion), render_formula(inst.conclusion, RenderStyle::Sugared)});
      ++report.axiom_instances;
    }
  }
  for (const RuleSchema& r : rule_suite(theory)) {
    for (const SchemaInstance& inst : instantiate(r, theory, set)) {
      Item item{r.name, true, {}, id_of(inst.conclusion), ""};
      for (const Formula& p : inst.premises) {
        item.premises.push_back(id_of(p));
        item.text += render_formula(p, RenderStyle::Sugared) + " ; ";
      }
      item.text += "/ " + render_formula(inst.conclusion, RenderStyle::Sugared);
      items.push_back(std::move(item));
      ++report.rule_instances;
    }
  }

  const std::vector<SearchOutcome> outcomes = find_countermodels(formulas, theory, bounds, options);
  for (const Item& item : items) {
    if (item.rule) {
      const bool premises_valid = std::all_of(item.premises.begin(), item.premises.end(),
                                              [&](std::size_t p) { return !outcomes[p].counter; });
      if (!premises_valid) continue;
      ++report.rule_instances_with_valid_premises;
    }
    const auto& counter = outcomes[item.conclusion].counter;
    if (!counter) continue;
    report.findings.push_back({item.schema, item.text, item.rule, *counter});
    if (std::find(report.failed_schemata.begin(), report.failed_schemata.end(), item.schema) ==
        report.failed_schemata.end()) {
      report.failed_schemata.push_back(item.schema);
    }
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace intensio
