// Acceptance run: one PASS/FAIL line per criterion. Arguments select
// criteria by number; none runs all nine.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "intensio/duality.hpp"
#include "intensio/error.hpp"
#include "intensio/neighborhood.hpp"
#include "intensio/relational.hpp"
#include "intensio/search.hpp"
#include "intensio/theories.hpp"
#include "model_builders.hpp"
#include "random_ast.hpp"

namespace {

using namespace intensio;

// Every criterion is exact: booleans and set equality, no numeric slack.
// Wall-clock budgets in seconds; exceeding one fails the criterion.
constexpr double kBudget[] = {0, 5, 600, 120, 300, 300, 120, 300, 120, 30};

constexpr std::size_t kSearchWorlds = 3;
constexpr std::size_t kSearchRelations = 2;
constexpr std::size_t kRandomSigmaFrames = 100;
constexpr std::size_t kBisimulationPairs = 200;
constexpr std::size_t kRoundTripAsts = 10000;
constexpr int kRoundTripDepth = 6;
// Every k-th enumerated three-world relational model is also checked literally.
constexpr std::uint64_t kThreeWorldStride = 4099;

const TheoryKind kAllTheories[] = {TheoryKind::Empty, TheoryKind::SL, TheoryKind::RUM, TheoryKind::CSL,
                                   TheoryKind::BA};

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;

  void note(const std::string& s) { lines.push_back(s); }
  void fail(const std::string& s) {
    pass = false;
    lines.push_back("failure: " + s);
  }
};

std::string name_of(TheoryKind k) { return std::string(theory_name(k)); }

std::string show(WorldSet s) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (World w : s) {
    out << (first ? "" : ",") << w;
    first = false;
  }
  out << "}";
  return out.str();
}

std::string show(const NeighborhoodFunction& nu) {
  std::string out;
  for (std::size_t w = 0; w < nu.at.size(); ++w) {
    out += (w ? " | " : "") + std::to_string(w) + ":";
    for (WorldSet x : nu.at[w]) out += show(x);
  }
  return out;
}

/// Families of at most `max_members` distinct subsets of W, sorted; for csl
/// only subsets containing `w`.
std::vector<Neighborhoods> small_families(std::size_t n, World w, bool reflexive, std::size_t max_members) {
  std::vector<WorldSet> subsets;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    WorldSet x(bits);
    if (!reflexive || x.contains(w)) subsets.push_back(x);
  }
  std::vector<Neighborhoods> out{{}};
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    out.push_back({subsets[i]});
    if (max_members < 2) continue;
    for (std::size_t j = i + 1; j < subsets.size(); ++j) out.push_back({subsets[i], subsets[j]});
  }
  return out;
}

/// Calls fn for every neighborhood function with the given per-world choices.
void for_each_function(const std::vector<std::vector<Neighborhoods>>& choices,
                       const std::function<void(const NeighborhoodFunction&)>& fn) {
  const std::size_t n = choices.size();
  std::vector<std::size_t> idx(n, 0);
  NeighborhoodFunction nu = NeighborhoodFunction::empty(n);
  while (true) {
    for (std::size_t w = 0; w < n; ++w) nu.at[w] = choices[w][idx[w]];
    fn(nu);
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++idx[k] < choices[k].size()) break;
      idx[k] = 0;
      if (k == 0) return;
    }
    if (n == 0) return;
  }
}

std::vector<std::vector<Neighborhoods>> choices_for(std::size_t n, TheoryKind theory) {
  std::vector<std::vector<Neighborhoods>> out;
  for (World w = 0; w < n; ++w) out.push_back(small_families(n, w, theory == TheoryKind::CSL, 2));
  return out;
}

NeighborhoodModel nbhd_model(std::size_t n, TheoryKind theory, const NeighborhoodFunction& nu) {
  NeighborhoodModel m;
  for (std::size_t i = 0; i < n; ++i) m.labels.push_back("w" + std::to_string(i));
  m.theory = theory;
  m.groups["a"] = nu;
  return m;
}

/// Terms over the single variable a with at most `depth` nested operators.
std::vector<GroupTerm> terms_up_to(const Signature& sig, int depth) {
  std::vector<std::vector<GroupTerm>> levels(1);
  levels[0].push_back(GroupTerm::var("a"));
  for (const auto& spec : sig.operators()) {
    if (spec.arity == 0) levels[0].push_back(GroupTerm::apply(spec.op, {}));
  }
  for (int d = 1; d <= depth; ++d) {
    std::vector<GroupTerm> below;
    for (const auto& level : levels) below.insert(below.end(), level.begin(), level.end());
    const auto& previous = levels.back();
    std::vector<GroupTerm> level;
    for (const auto& spec : sig.operators()) {
      if (spec.arity == 1) {
        for (const auto& t : previous) level.push_back(GroupTerm::apply(spec.op, {t}));
      } else if (spec.arity == 2) {
        for (const auto& l : below) {
          for (const auto& r : below) {
            const bool fresh = std::find(previous.begin(), previous.end(), l) != previous.end() ||
                               std::find(previous.begin(), previous.end(), r) != previous.end();
            if (fresh) level.push_back(GroupTerm::apply(spec.op, {l, r}));
          }
        }
      }
    }
    levels.push_back(std::move(level));
  }
  std::vector<GroupTerm> out;
  for (const auto& level : levels) out.insert(out.end(), level.begin(), level.end());
  return out;
}

/// Modal depth two over p and a: [t]b, <t>b with b in {p, ~p} and t of
/// operator depth <= 1, and [t]c, <t>c with c a depth-one formula whose
/// term is a variable or a constant.
std::vector<Formula> depth_two_formulas(const Signature& sig) {
  const auto inner_terms = terms_up_to(sig, 0);
  const auto outer_terms = terms_up_to(sig, 1);
  const Formula p = Formula::prop("p");
  const std::vector<Formula> bases{p, Formula::negation(p)};
  std::vector<Formula> out;
  for (const auto& t : outer_terms) {
    for (const auto& b : bases) {
      out.push_back(Formula::box(t, b));
      out.push_back(Formula::dia(t, b));
    }
  }
  std::vector<Formula> inner;
  for (const auto& s : inner_terms) {
    for (const auto& b : bases) {
      inner.push_back(Formula::box(s, b));
      inner.push_back(Formula::dia(s, b));
    }
  }
  for (const auto& t : outer_terms) {
    for (const auto& c : inner) {
      out.push_back(Formula::box(t, c));
      out.push_back(Formula::dia(t, c));
    }
  }
  return out;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------

Outcome composition_example() {
  Outcome out;
  const RelationalModel m = testgen::composition_model();
  const World w = 0;
  const Signature& sig = Signature::rum();
  struct Expect {
    const char* text;
    bool truth;
  };
  for (const Expect& e : {Expect{"<a . b>p", true}, Expect{"<a><b>p", false}, Expect{"<a>([b]false | <b>p)", true}}) {
    const bool got = satisfies(m, w, parse_formula(e.text, sig));
    out.note(std::string("w ") + (got ? "|= " : "|/= ") + e.text);
    if (got != e.truth) out.fail(std::string("wrong truth value for ") + e.text);
  }
  SearchBounds b;
  b.max_worlds = kSearchWorlds;
  b.max_relations = kSearchRelations;
  const Formula f = parse_formula("<a . b>p -> <a><b>p", sig);
  const auto found = find_countermodel(f, TheoryKind::RUM, b);
  if (!found.counter) {
    out.fail("no countermodel to <a . b>p -> <a><b>p within (3, 2)");
  } else {
    const auto& c = *found.counter;
    if (satisfies(c.model, c.world, f)) out.fail("reported countermodel satisfies the formula");
    out.note("countermodel with " + std::to_string(c.model.frame.world_count()) + " world(s), " +
             std::to_string(c.model.frame.relation_count()) + " relation(s)");
  }
  return out;
}

Outcome soundness_suites() {
  Outcome out;
  SearchBounds b;
  b.max_worlds = kSearchWorlds;
  b.max_relations = kSearchRelations;
  for (TheoryKind k : {TheoryKind::Empty, TheoryKind::SL, TheoryKind::RUM, TheoryKind::CSL}) {
    const HarnessReport r = soundness_harness(k, b, default_instantiation(k));
    std::ostringstream line;
    line << name_of(k) << ": " << r.axiom_instances << " axiom instances, " << r.rule_instances
         << " rule instances (" << r.rule_instances_with_valid_premises << " with valid premises), "
         << r.findings.size() << " counterexamples, " << r.seconds << " s";
    out.note(line.str());
    for (const auto& schema : r.failed_schemata) {
      const auto it = std::find_if(r.findings.begin(), r.findings.end(),
                                   [&](const HarnessFinding& f) { return f.schema == schema; });
      out.fail(name_of(k) + " " + schema + ": " + it->instance + " fails at world " +
               it->report.model.frame.labels()[it->report.world] + " of a " +
               std::to_string(it->report.model.frame.world_count()) + "-world model");
    }
  }
  return out;
}

Outcome non_theorems() {
  Outcome out;
  SearchBounds b;
  b.max_worlds = kSearchWorlds;
  b.max_relations = kSearchRelations;
  struct Case {
    TheoryKind theory;
    const char* text;
  };
  for (const Case& c : {Case{TheoryKind::SL, "[a]p -> <a>p"}, Case{TheoryKind::RUM, "<a . b>p -> <a><b>p"},
                        Case{TheoryKind::Empty, "<a>p & <a>q -> <a>(p & q)"},
                        Case{TheoryKind::CSL, "<a^>p -> <a>p"}}) {
    const Formula f = parse_formula(c.text, signature_of(c.theory));
    const auto found = find_countermodel(f, c.theory, b);
    if (!found.counter) {
      out.fail(name_of(c.theory) + ": no countermodel to " + c.text);
      continue;
    }
    const auto& r = *found.counter;
    if (satisfies(r.model, r.world, f)) out.fail(name_of(c.theory) + ": reported model satisfies " + c.text);
    try {
      check_model(r.model);
    } catch (const Error& e) {
      out.fail(name_of(c.theory) + ": countermodel breaks the theory: " + e.what());
    }
    out.note(name_of(c.theory) + ": " + c.text + " refuted on " + std::to_string(r.model.frame.world_count()) +
             " world(s), " + std::to_string(r.model.frame.relation_count()) + " relation(s)");
  }
  return out;
}

Outcome canonical_embedding() {
  Outcome out;
  std::mt19937_64 rng(20240401);
  for (TheoryKind k : kAllTheories) {
    std::size_t frames = 0, failures = 0;
    std::string first;
    try {
      for (std::size_t i = 0; i < kRandomSigmaFrames; ++i) {
        const SigmaFrame sf = random_sigma_frame(rng, k);
        ++frames;
        const MorphismReport r = canonical_morphism_check(sf);
        if (!r.ok && failures++ == 0) first = r.clause + " " + r.witness;
      }
    } catch (const EvalError& e) {
      out.fail(name_of(k) + ": no random frame satisfies the equations (" + e.what() + ")");
    }
    out.note(name_of(k) + ": " + std::to_string(frames) + " random frames, " + std::to_string(failures) +
             " embedding failures");
    if (failures) out.fail(name_of(k) + " random frame: " + first);
  }
  // Complex algebras generated by every pair of intensions on every frame.
  SearchBounds b;
  b.max_worlds = 2;
  b.max_relations = 2;
  for (TheoryKind k : kAllTheories) {
    const ModelEnumerator models(k, b, {}, {"a", "b"});
    std::size_t algebras = 0, failures = 0, capped = 0;
    std::string first;
    models.for_each([&](std::uint64_t, const RelationalModel& m) {
      try {
        const ComplexAlgebra ca =
            complex_algebra(m.frame, {m.groups.at("a"), m.groups.at("b")}, {"a", "b"});
        ++algebras;
        const MorphismReport r = canonical_morphism_check(ca.algebra);
        if (!r.ok && failures++ == 0) first = r.clause + " " + r.witness;
      } catch (const CapExceeded&) {
        ++capped;
      }
      return true;
    });
    out.note(name_of(k) + ": " + std::to_string(algebras) + " complex algebras, " + std::to_string(failures) +
             " embedding failures, " + std::to_string(capped) + " over the carrier cap");
    if (failures) out.fail(name_of(k) + " complex algebra: " + first);
    if (capped) out.fail(name_of(k) + ": " + std::to_string(capped) + " complex algebras exceeded the carrier cap");
  }
  return out;
}

struct Mismatch {
  std::string what;
};

/// Compares term neighborhoods and formula truth on a relational model, its
/// neighborhood translation, and the translation back.
std::optional<Mismatch> compare_translations(const RelationalModel& m, const std::vector<GroupTerm>& terms,
                                             const std::vector<Formula>& formulas) {
  const NeighborhoodModel nm = rel_to_nbhd(m);
  const RelationalModel back = nbhd_to_rel(nm);
  RelationalEvaluator re(m);
  RelationalEvaluator rb(back);
  NeighborhoodEvaluator ne(nm);
  for (const GroupTerm& t : terms) {
    const NeighborhoodFunction expected = neighborhoods_of(re.frame(), re.term(t));
    const NeighborhoodFunction via_nbhd = ne.term(t);
    const NeighborhoodFunction via_back = neighborhoods_of(rb.frame(), rb.term(t));
    if (via_nbhd != expected || via_back != expected) {
      return Mismatch{"term " + render_term(t) + ": relational " + show(expected) + ", neighborhood " +
                      show(via_nbhd) + ", back " + show(via_back)};
    }
  }
  if (formulas.empty()) return std::nullopt;
  const std::size_t n = m.frame.world_count();
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    const std::map<std::string, WorldSet> props{{"p", WorldSet(bits)}};
    re.set_props(props);
    rb.set_props(props);
    ne.set_props(props);
    for (const Formula& f : formulas) {
      const WorldSet expected = re.formula(f);
      const WorldSet a = ne.formula(f);
      const WorldSet b = rb.formula(f);
      if (a != expected || b != expected) {
        return Mismatch{render_formula(f, RenderStyle::Sugared) + " with p = " + show(WorldSet(bits)) +
                        ": relational " + show(expected) + ", neighborhood " + show(a) + ", back " + show(b)};
      }
    }
  }
  return std::nullopt;
}

/// One relational model per assignment of families to worlds: relation i
/// has the i-th family member as its image at each world.
RelationalModel realize(std::size_t n, TheoryKind theory, const NeighborhoodFunction& nu) {
  RelationalFrame fr(n, theory);
  std::vector<std::vector<WorldSet>> images(2, std::vector<WorldSet>(n));
  Intension a = Intension::empty(n);
  for (World w = 0; w < n; ++w) {
    for (std::size_t i = 0; i < 2; ++i) {
      if (i < nu.at[w].size()) {
        images[i][w] = nu.at[w][i];
        a.extent[w].push_back(static_cast<RelationId>(i));
      } else if (theory == TheoryKind::CSL) {
        images[i][w] = WorldSet::single(w);
      }
    }
  }
  fr.add_relation("r0", images[0]);
  fr.add_relation("r1", images[1]);
  return RelationalModel{fr, {}, {{"a", a}}};
}

Outcome translation_round_trips() {
  Outcome out;
  // Neighborhood side: rel_to_nbhd after nbhd_to_rel gives back nu exactly.
  for (TheoryKind k : kAllTheories) {
    std::size_t models = 0, failures = 0;
    std::string first;
    for (std::size_t n = 1; n <= 3; ++n) {
      for_each_function(choices_for(n, k), [&](const NeighborhoodFunction& nu) {
        ++models;
        const NeighborhoodModel m = nbhd_model(n, k, nu);
        const NeighborhoodModel back = rel_to_nbhd(nbhd_to_rel(m));
        if (back.groups != m.groups && failures++ == 0) first = show(nu) + " came back as " + show(back.groups.at("a"));
      });
    }
    out.note(name_of(k) + ": " + std::to_string(models) + " neighborhood models round-tripped, " +
             std::to_string(failures) + " changed");
    if (failures) out.fail(name_of(k) + " neighborhood round trip: " + first);
  }
  // Relational side.
  for (TheoryKind k : kAllTheories) {
    const Signature& sig = signature_of(k);
    const auto terms = terms_up_to(sig, 2);
    const auto formulas = depth_two_formulas(sig);
    std::size_t literal = 0, sampled = 0, representatives = 0, failures = 0;
    std::string first;
    auto record = [&](const RelationalModel& m, const std::optional<Mismatch>& bad) {
      if (bad && failures++ == 0) {
        first = bad->what + " on " + std::to_string(m.frame.world_count()) + " world(s), " +
                std::to_string(m.frame.relation_count()) + " relation(s)";
      }
    };
    SearchBounds small;
    small.max_worlds = 2;
    small.max_relations = 2;
    ModelEnumerator(k, small, {}, {"a"}).for_each([&](std::uint64_t, const RelationalModel& m) {
      ++literal;
      record(m, compare_translations(m, terms, formulas));
      return true;
    });
    SearchBounds three;
    three.min_worlds = 3;
    three.max_worlds = 3;
    three.max_relations = 2;
    const ModelEnumerator big(k, three, {}, {"a"});
    for (std::uint64_t i = 0; i < big.size(); i += kThreeWorldStride) {
      ++sampled;
      const RelationalModel m = big.at(i);
      record(m, compare_translations(m, terms, formulas));
    }
    if (k != TheoryKind::BA) {
      // Image-level representatives of every three-world model.
      for_each_function(choices_for(3, k), [&](const NeighborhoodFunction& nu) {
        ++representatives;
        const RelationalModel m = realize(3, k, nu);
        record(m, compare_translations(m, terms, {}));
      });
    }
    std::ostringstream line;
    line << name_of(k) << ": " << terms.size() << " terms, " << formulas.size() << " formulas; " << literal
         << " models with |W| <= 2, " << sampled << " sampled and " << representatives
         << " image-level three-world models; " << failures << " disagreements";
    out.note(line.str());
    if (failures) out.fail(name_of(k) + " relational round trip: " + first);
  }
  return out;
}

std::set<WorldSet> images_at(const RelationalFrame& fr, const Intension& f, World w) {
  const auto v = image_family(fr, f, w);
  return {v.begin(), v.end()};
}

/// Builds every variant of g as a full relation, composes it with each r
/// in f(w), and collects the images at w.
std::set<WorldSet> compose_oracle(const RelationalFrame& fr, const Intension& f, const Intension& g, World w) {
  const std::size_t n = fr.world_count();
  std::vector<std::vector<WorldSet>> variants{{}};
  for (World u = 0; u < n; ++u) {
    std::vector<WorldSet> options;
    if (g.extent[u].empty()) options.push_back(WorldSet{});
    for (RelationId q : g.extent[u]) options.push_back(fr.image(q, u));
    std::vector<std::vector<WorldSet>> next;
    for (const auto& partial : variants) {
      for (WorldSet img : options) {
        auto extended = partial;
        extended.push_back(img);
        next.push_back(std::move(extended));
      }
    }
    variants = std::move(next);
  }
  std::set<WorldSet> out;
  for (RelationId r : f.extent[w]) {
    for (const auto& variant : variants) {
      WorldSet composed;
      for (World u : fr.image(r, w)) composed |= variant[u];
      out.insert(composed);
    }
  }
  return out;
}

Outcome composition_oracle() {
  Outcome out;
  std::size_t checks = 0, failures = 0;
  std::string first;
  auto compare = [&](const RelationalFrame& fr, const Intension& f, const Intension& g) {
    RelationalFrame scratch = fr;
    const Intension composed = rum_compose(scratch, f, g);
    for (World w = 0; w < fr.world_count(); ++w) {
      ++checks;
      const auto got = images_at(scratch, composed, w);
      if (got != compose_oracle(fr, f, g, w) && failures++ == 0) {
        first = "at world " + std::to_string(w) + " of a " + std::to_string(fr.world_count()) + "-world frame";
      }
    }
  };
  // Every frame with |W| <= 2 and |R| <= 2, every pair of intensions.
  SearchBounds small;
  small.max_worlds = 2;
  small.max_relations = 2;
  ModelEnumerator(TheoryKind::RUM, small, {}, {"a", "b"}).for_each([&](std::uint64_t, const RelationalModel& m) {
    compare(m.frame, m.groups.at("a"), m.groups.at("b"));
    return true;
  });
  // |W| = 3: g realizes every assignment of at most two options per world,
  // and f is a single relation with image X everywhere, for every X.
  for_each_function(choices_for(3, TheoryKind::RUM), [&](const NeighborhoodFunction& options) {
    const RelationalModel gm = realize(3, TheoryKind::RUM, options);
    for (std::uint64_t bits = 0; bits < 8; ++bits) {
      RelationalFrame fr = gm.frame;
      const RelationId r = fr.add_relation("x", std::vector<WorldSet>(3, WorldSet(bits)));
      Intension f = Intension::empty(3);
      for (World w = 0; w < 3; ++w) f.extent[w] = {r};
      compare(fr, f, gm.groups.at("a"));
    }
  });
  out.note(std::to_string(checks) + " world-level comparisons, " + std::to_string(failures) + " mismatches");
  if (failures) out.fail("composition differs from the variant oracle " + first);
  return out;
}

NeighborhoodModel permuted(std::mt19937_64& rng, const NeighborhoodModel& m) {
  const std::size_t n = m.world_count();
  std::vector<World> to(n);
  for (World w = 0; w < n; ++w) to[w] = w;
  std::shuffle(to.begin(), to.end(), rng);
  auto map_set = [&](WorldSet x) {
    WorldSet y;
    for (World w : x) y.insert(to[w]);
    return y;
  };
  NeighborhoodModel out = m;
  for (auto& [name, x] : out.props) x = map_set(m.props.at(name));
  for (auto& [name, nu] : out.groups) {
    for (World w = 0; w < n; ++w) {
      Neighborhoods family;
      for (WorldSet x : m.groups.at(name).at[w]) family.push_back(map_set(x));
      nu.at[to[w]] = normalized(family);
    }
  }
  return out;
}

Outcome bisimulation() {
  Outcome out;
  std::mt19937_64 rng(77);
  const std::vector<std::pair<GroupTerm, GroupTerm>> aa{{GroupTerm::var("a"), GroupTerm::var("a")}};
  std::size_t related = 0, unrelated = 0, disagree = 0, inseparable = 0;
  std::string first_disagree, first_inseparable;
  for (std::size_t i = 0; i < kBisimulationPairs; ++i) {
    const TheoryKind k = i % 2 ? TheoryKind::SL : TheoryKind::Empty;
    const std::size_t n1 = 1 + testgen::pick(rng, 3);
    const auto m1 = testgen::random_nbhd_model(rng, k, n1, {"p"}, {"a"});
    // every fourth pair is m1 against a world-permuted copy, so that the
    // related side is not left to chance
    const auto m2 = i % 4 == 3 ? permuted(rng, m1)
                               : testgen::random_nbhd_model(rng, k, 1 + testgen::pick(rng, 3), {"p"}, {"a"});
    const std::size_t n2 = m2.world_count();
    const auto b = greatest_bisimulation(m1, m2, aa);
    for (World u = 0; u < n1; ++u) {
      for (World v = 0; v < n2; ++v) {
        const bool in_b = std::binary_search(b.begin(), b.end(), WorldPair{u, v});
        const std::string where = "pair " + std::to_string(i) + " (" + name_of(k) + ") worlds " +
                                  std::to_string(u) + "," + std::to_string(v) + ": " + show(m1.groups.at("a")) +
                                  " vs " + show(m2.groups.at("a"));
        if (in_b) {
          ++related;
          if (!modal_equiv_up_to_depth(m1, u, m2, v, 3, {"p"}, {"a"}) && disagree++ == 0) first_disagree = where;
        } else {
          ++unrelated;
          if (!separation_depth(m1, u, m2, v, n1 * n2, {"p"}, {"a"}) && inseparable++ == 0) {
            first_inseparable = where;
          }
        }
      }
    }
  }
  out.note(std::to_string(related) + " related pairs (" + std::to_string(disagree) + " disagree), " +
           std::to_string(unrelated) + " unrelated pairs (" + std::to_string(inseparable) + " not separated)");
  if (disagree) out.fail("bisimilar points disagree: " + first_disagree);
  if (inseparable) out.fail("unrelated points agree on every formula up to |W1|*|W2|: " + first_inseparable);
  return out;
}

Outcome join_diamond_correspondence() {
  Outcome out;
  const Formula a8 = parse_formula("<alpha + beta>p <-> <alpha>p | <beta>p", Signature::sl());
  std::size_t frames = 0, valid = 0, mismatches = 0;
  std::string first;
  for (std::size_t n = 1; n <= 2; ++n) {
    const auto choices = choices_for(n, TheoryKind::SL);
    std::vector<NeighborhoodFunction> functions;
    for_each_function(choices, [&](const NeighborhoodFunction& nu) { functions.push_back(nu); });
    for (const auto& nu_a : functions) {
      for (const auto& nu_b : functions) {
        for (const auto& nu_ab : functions) {
          const FreeJoinFrame frame{n, {"a", "b"}, {NeighborhoodFunction::empty(n), nu_a, nu_b, nu_ab}};
          ++frames;
          const bool v = frame_valid(frame, a8);
          valid += v;
          if (v != upward_join_condition(frame) && mismatches++ == 0) {
            first = "a: " + show(nu_a) + ", b: " + show(nu_b) + ", a+b: " + show(nu_ab);
          }
        }
      }
    }
  }
  out.note(std::to_string(frames) + " frames, " + std::to_string(valid) + " validate the join-diamond axiom, " +
           std::to_string(mismatches) + " mismatches");
  if (mismatches) out.fail("validity and the upward-closure condition differ on " + first);
  return out;
}

Outcome syntax_round_trip() {
  Outcome out;
  std::mt19937_64 rng(99);
  const Signature* sigs[] = {&Signature::empty(), &Signature::sl(), &Signature::rum(), &Signature::csl(),
                             &Signature::ba()};
  std::size_t failures = 0;
  std::string first;
  for (std::size_t i = 0; i < kRoundTripAsts; ++i) {
    const Signature& sig = *sigs[i % 5];
    const Formula f = testgen::random_formula(rng, sig, kRoundTripDepth);
    for (RenderStyle style : {RenderStyle::Primitive, RenderStyle::Sugared}) {
      const std::string text = render_formula(f, style);
      bool same = false;
      try {
        same = parse_formula(text, sig) == f;
      } catch (const Error&) {
      }
      if (!same && failures++ == 0) first = text;
    }
  }
  out.note(std::to_string(kRoundTripAsts) + " formulas, both render styles, " + std::to_string(failures) +
           " failures");
  if (failures) out.fail("render/parse changed " + first);
  return out;
}

struct Criterion {
  int number;
  const char* title;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "composition example", composition_example},
    {2, "soundness suites", soundness_suites},
    {3, "non-theorem discrimination", non_theorems},
    {4, "canonical quasi-embedding", canonical_embedding},
    {5, "relational/neighborhood round trips", translation_round_trips},
    {6, "composition oracle", composition_oracle},
    {7, "bisimulation and modal equivalence", bisimulation},
    {8, "join-diamond correspondence", join_diamond_correspondence},
    {9, "syntax round trip", syntax_round_trip},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const Criterion& c : kCriteria) {
    if (!selected.empty() && !selected.count(c.number)) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double elapsed = seconds_since(start);
    if (elapsed > kBudget[c.number]) {
      o.fail("took " + std::to_string(elapsed) + " s, budget " + std::to_string(kBudget[c.number]) + " s");
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.number << ": " << c.title << " ("
              << std::fixed;
    std::cout.precision(2);
    std::cout << elapsed << " s)\n";
    for (const auto& line : o.lines) std::cout << "    " << line << "\n";
    std::cout.flush();
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
