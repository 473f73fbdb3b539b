// Command-line front end. Exit codes: 0 success or expectation met,
// 1 logical failure or unmet expectation, 2 parse/document/validation
// error, 3 resource cap exceeded.

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "intensio/document.hpp"
#include "intensio/duality.hpp"
#include "intensio/error.hpp"
#include "intensio/neighborhood.hpp"
#include "intensio/relational.hpp"
#include "intensio/search.hpp"
#include "intensio/theories.hpp"

using namespace intensio;

namespace {

constexpr int kFailure = 1;
constexpr int kInputError = 2;
constexpr int kCapError = 3;

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

std::string braces(WorldSet s, const std::vector<std::string>& labels) {
  std::string out = "{";
  bool first = true;
  for (World w : s) {
    out += (first ? "" : ", ") + labels.at(w);
    first = false;
  }
  return out + "}";
}

/// Accepts a model document, or a search report whose "model" is one.
Json model_document(const std::string& path) {
  Json j = read_json_file(path);
  if (j.is_object() && j.contains("report") && j["report"].is_object()) j = j["report"];
  if (j.is_object() && j.contains("model") && j["model"].is_object()) j = j["model"];
  return j;
}

// parse ---------------------------------------------------------------------

struct ParseArgs {
  std::string theory = "empty";
  std::string formula, term;
  bool json = false;
};

int cmd_parse(const ParseArgs& a) {
  const Signature& sig = Signature::named(a.theory);
  if (!a.term.empty()) {
    const GroupTerm t = parse_term(a.term, sig);
    if (a.json) {
      print(Json{{"term", render_term(t)}});
    } else {
      std::cout << render_term(t) << '\n';
    }
  }
  if (!a.formula.empty()) {
    const Formula f = parse_formula(a.formula, sig);
    const Variables v = variables_of(f);
    if (a.json) {
      print(Json{{"formula", render_formula(f, RenderStyle::Sugared)},
                 {"primitive", render_formula(f)},
                 {"props", v.props},
                 {"groups", v.groups}});
    } else {
      std::cout << render_formula(f, RenderStyle::Sugared) << '\n';
    }
  }
  return 0;
}

// check ---------------------------------------------------------------------

struct CheckArgs {
  std::string model, formula, world;
  bool trace = false, json = false;
};

int cmd_check(const CheckArgs& a) {
  const Json doc = model_document(a.model);
  WorldSet truth;
  std::vector<std::string> labels;
  Json trace;
  if (document_kind(doc) == DocumentKind::Relational) {
    const RelationalModel m = relational_from_json(doc);
    const Formula f = parse_formula(a.formula, signature_of(m.frame.theory()));
    labels = m.frame.labels();
    truth = eval_formula(m, f);
    if (a.trace) trace = trace_json(eval_trace(m, f), labels);
  } else if (document_kind(doc) == DocumentKind::Neighborhood) {
    const NeighborhoodModel m = neighborhood_from_json(doc);
    const Formula f = parse_formula(a.formula, signature_of(m.theory));
    labels = m.labels;
    truth = n_eval(m, f);
    if (a.trace) trace = trace_json(eval_trace(nbhd_to_rel(m), f), labels);
  } else {
    throw DocumentError("check needs a relational or neighborhood model");
  }
  int status = 0;
  if (!a.world.empty()) {
    auto it = std::find(labels.begin(), labels.end(), a.world);
    if (it == labels.end()) throw DocumentError("unknown world '" + a.world + "'");
    status = truth.contains(static_cast<World>(it - labels.begin())) ? 0 : kFailure;
  }
  if (a.json) {
    Json out{{"formula", a.formula}, {"truth", world_list(truth, labels)}};
    if (!a.world.empty()) out["holds_at_world"] = status == 0;
    if (a.trace) out["trace"] = trace;
    print(out);
  } else {
    std::cout << braces(truth, labels) << '\n';
    if (a.trace) {
      for (const Json& e : trace) {
        std::cout << "  " << e["formula"].get<std::string>() << " : " << e["truth"].dump() << '\n';
      }
    }
  }
  return status;
}

// search --------------------------------------------------------------------

struct SearchArgs {
  std::string theory = "empty";
  std::string formula, engine = "auto", out;
  std::size_t min_worlds = 1, max_worlds = 3, max_rels = 2, max_group_values = 0;
  double time_cap = 600;
  int workers = 0;
  bool expect_counter = false, expect_valid = false, symmetry = false;
};

Json bounds_json(const SearchBounds& b) {
  return Json{{"min_worlds", b.min_worlds}, {"max_worlds", b.max_worlds}, {"max_relations", b.max_relations}};
}

int cmd_search(const SearchArgs& a) {
  const TheoryKind theory = theory_from_name(a.theory);
  const Formula f = parse_formula(a.formula, signature_of(theory));
  SearchBounds b;
  b.min_worlds = a.min_worlds;
  b.max_worlds = a.max_worlds;
  b.max_relations = a.max_rels;
  b.max_group_values = a.max_group_values;
  b.time_cap_seconds = a.time_cap;
  b.symmetry_reduction = a.symmetry;
  b.validate();
  SearchOptions opt;
  opt.workers = a.workers;
  opt.engine = a.engine == "kernel" ? Engine::Kernel : a.engine == "reference" ? Engine::Reference : Engine::Auto;
  const SearchOutcome outcome = find_countermodel(f, theory, b, opt);

  Json out{{"theory", std::string(theory_name(theory))},
           {"formula", render_formula(f, RenderStyle::Sugared)},
           {"bounds", bounds_json(b)},
           {"engine", outcome.engine == Engine::Kernel ? "kernel" : "reference"}};
  if (outcome.counter) {
    out["result"] = "countermodel";
    out["report"] = to_json(*outcome.counter);
    if (!a.out.empty()) {
      std::ofstream file(a.out);
      if (!file) throw DocumentError("cannot write '" + a.out + "'");
      file << to_json(outcome.counter->model).dump(2) << '\n';
    }
  } else {
    out["result"] = "none within bounds";
    out["note"] = "bounded search; this is not a validity proof";
  }
  print(out);
  if (a.expect_counter) return outcome.counter ? 0 : kFailure;
  if (a.expect_valid) return outcome.counter ? kFailure : 0;
  return 0;
}

// translate -----------------------------------------------------------------

int cmd_translate(const std::string& path, const std::string& to) {
  const Json doc = model_document(path);
  if (to == "nbhd") {
    if (document_kind(doc) != DocumentKind::Relational) throw DocumentError("--to nbhd needs a relational model");
    print(to_json(rel_to_nbhd(relational_from_json(doc))));
  } else {
    if (document_kind(doc) != DocumentKind::Neighborhood) throw DocumentError("--to rel needs a neighborhood model");
    print(to_json(nbhd_to_rel(neighborhood_from_json(doc))));
  }
  return 0;
}

// dual ----------------------------------------------------------------------

struct DualArgs {
  std::string complex, ultrafilter;
  bool check = false;
};

Json check_json(const SigmaFrame& sf, bool& ok) {
  Json out = Json::object();
  if (auto v = check_sigma_frame(sf)) {
    out["equations"] = Json{{"ok", false}, {"equation", v->equation}, {"witness", v->witness}};
    ok = false;
    return out;
  }
  out["equations"] = Json{{"ok", true}};
  const MorphismReport r = canonical_morphism_check(sf);
  out["canonical_morphism"] = r.ok ? Json{{"ok", true}} : Json{{"ok", false}, {"clause", r.clause}, {"witness", r.witness}};
  ok = r.ok;
  return out;
}

int cmd_dual(const DualArgs& a) {
  if (a.complex.empty() == a.ultrafilter.empty()) throw DocumentError("dual needs --complex or --ultrafilter");
  bool ok = true;
  if (!a.complex.empty()) {
    const RelationalModel m = relational_from_json(model_document(a.complex));
    std::vector<Intension> seeds;
    std::vector<std::string> names;
    for (const auto& [name, f] : m.groups) {
      names.push_back(name);
      seeds.push_back(f);
    }
    const ComplexAlgebra ca = complex_algebra(m.frame, seeds, names);
    Json out = to_json(ca.algebra);
    if (a.check) out["check"] = check_json(ca.algebra, ok);
    print(out);
  } else {
    const SigmaFrame sf = sigma_frame_from_json(read_json_file(a.ultrafilter));
    const UltrafilterFrame uf = ultrafilter_frame(sf);
    RelationalModel m{uf.frame, {}, {}};
    for (std::size_t e = 0; e < sf.group_count(); ++e) m.groups[sf.group_elements[e]] = uf.g[e];
    Json out = to_json(m);
    if (a.check) {
      out["check"] = check_json(sf, ok);
      if (sf.theory == TheoryKind::SL || sf.theory == TheoryKind::CSL) {
        auto w = join_union_witness(sf, uf);
        out["check"]["join_is_union"] = w ? Json{{"holds", false}, {"witness", *w}} : Json{{"holds", true}};
      }
    }
    print(out);
  }
  return ok ? 0 : kFailure;
}

// bisim ---------------------------------------------------------------------

NeighborhoodModel any_model(const std::string& path) {
  const Json doc = model_document(path);
  if (document_kind(doc) == DocumentKind::Relational) return rel_to_nbhd(relational_from_json(doc));
  if (document_kind(doc) == DocumentKind::Neighborhood) return neighborhood_from_json(doc);
  throw DocumentError("bisim needs relational or neighborhood models");
}

struct BisimArgs {
  std::string left, right, world1, world2;
  std::size_t depth = 0;
};

World world_in(const std::vector<std::string>& labels, const std::string& label) {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw DocumentError("unknown world '" + label + "'");
  return static_cast<World>(it - labels.begin());
}

int cmd_bisim(const BisimArgs& a) {
  const NeighborhoodModel m1 = any_model(a.left), m2 = any_model(a.right);
  if (m1.theory != m2.theory) throw DocumentError("both models need the same signature");
  std::vector<std::pair<GroupTerm, GroupTerm>> groups;
  std::vector<std::string> group_names, props;
  for (const auto& [name, nu] : m1.groups) {
    if (m2.groups.contains(name)) {
      groups.emplace_back(GroupTerm::var(name), GroupTerm::var(name));
      group_names.push_back(name);
    }
  }
  for (const auto& [name, s] : m1.props) {
    if (m2.props.contains(name)) props.push_back(name);
  }
  const auto pairs = greatest_bisimulation(m1, m2, groups);
  Json out{{"groups", group_names}, {"pairs", Json::array()}};
  for (auto [w1, w2] : pairs) out["pairs"].push_back(Json::array({m1.labels[w1], m2.labels[w2]}));
  int status = 0;
  if (!a.world1.empty() || !a.world2.empty()) {
    const World w1 = world_in(m1.labels, a.world1), w2 = world_in(m2.labels, a.world2);
    const bool related = std::find(pairs.begin(), pairs.end(), std::pair{w1, w2}) != pairs.end();
    out["related"] = related;
    if (!related) {
      const std::size_t depth = a.depth != 0 ? a.depth : m1.world_count() * m2.world_count();
      auto d = separation_depth(m1, w1, m2, w2, depth, props, group_names);
      out["separation_depth"] = d ? Json(*d) : Json(nullptr);
    }
    status = related ? 0 : kFailure;
  }
  print(out);
  return status;
}

// closure -------------------------------------------------------------------

int cmd_closure(const std::string& formula, bool json) {
  const Formula f = parse_formula(formula, Signature::csl());
  const auto gamma = lcs_closure_set(f);
  Json out = Json::array();
  for (const Formula& g : gamma) out.push_back(render_formula(g, RenderStyle::Sugared));
  if (json) {
    print(Json{{"formula", render_formula(f, RenderStyle::Sugared)}, {"closure", out}});
  } else {
    for (const Json& g : out) std::cout << g.get<std::string>() << '\n';
  }
  return 0;
}

// suite ---------------------------------------------------------------------

struct SuiteArgs {
  std::string theory = "sl";
  std::size_t max_worlds = 0, max_rels = 0;  // 0: (3, 2), or (2, 1) for ba
  int workers = 0;
  unsigned seed = 1;
};

struct CheckLine {
  std::string name;
  std::string status;  // PASS, FAIL or CAP
  std::string detail;
  double seconds;
};

template <typename Fn>
CheckLine timed(const std::string& name, Fn fn) {
  const auto start = std::chrono::steady_clock::now();
  CheckLine line{name, "PASS", "", 0};
  try {
    std::string detail = fn();
    if (!detail.empty()) {
      line.status = "FAIL";
      line.detail = detail;
    }
  } catch (const CapExceeded& e) {
    line.status = "CAP";
    line.detail = e.what();
  } catch (const EvalError& e) {
    line.status = "FAIL";
    line.detail = e.what();
  }
  line.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return line;
}

RelationalModel random_relational(std::mt19937_64& rng, TheoryKind theory, std::size_t n, std::size_t m) {
  RelationalFrame fr(n, theory);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<WorldSet> images;
    for (World w = 0; w < n; ++w) {
      WorldSet img(rng() & WorldSet::full(n).bits());
      if (theory == TheoryKind::CSL) img.insert(w);
      images.push_back(img);
    }
    fr.add_relation("r" + std::to_string(i), images);
  }
  RelationalModel model{fr, {}, {}};
  for (const char* p : {"p", "q"}) model.props[p] = WorldSet(rng() & WorldSet::full(n).bits());
  for (const char* g : {"a", "b"}) {
    Intension f = Intension::empty(n);
    for (World w = 0; w < n; ++w) {
      for (RelationId r = 0; r < m; ++r) {
        if (rng() & 1U) f.extent[w].push_back(r);
      }
    }
    model.groups[g] = f;
  }
  return model;
}

int cmd_suite(const SuiteArgs& a) {
  const TheoryKind theory = theory_from_name(a.theory);
  // ba runs on the reference engine, which cannot cover (3, 2)
  const bool ba = theory == TheoryKind::BA;
  SearchBounds b;
  b.max_worlds = a.max_worlds != 0 ? a.max_worlds : ba ? 2 : 3;
  b.max_relations = a.max_rels != 0 ? a.max_rels : ba ? 1 : 2;
  b.validate();
  std::cout << "bounds: " << b.max_worlds << " worlds, " << b.max_relations << " relations\n";
  SearchOptions opt;
  opt.workers = a.workers;
  std::mt19937_64 rng(a.seed);
  std::vector<CheckLine> lines;

  lines.push_back(timed("soundness harness", [&]() -> std::string {
    const HarnessReport r = soundness_harness(theory, b, default_instantiation(theory), opt);
    if (r.ok()) return "";
    std::string detail = "countermodels for";
    for (const auto& s : r.failed_schemata) detail += " " + s;
    return detail + "; first: " + r.findings.front().instance;
  }));

  lines.push_back(timed("translation round trips", [&]() -> std::string {
    const InstantiationSet set = default_instantiation(theory);
    for (int i = 0; i < 40; ++i) {
      const RelationalModel m = random_relational(rng, theory, 1 + i % 3, i % 3);
      const NeighborhoodModel n = rel_to_nbhd(m);
      if (rel_to_nbhd(nbhd_to_rel(n)).groups != n.groups) return "nbhd -> rel -> nbhd changed a neighborhood function";
      for (const Schema& s : axiom_suite(theory)) {
        for (const SchemaInstance& inst : instantiate(s, theory, set)) {
          const Formula& f = inst.conclusion;
          if (eval_formula(m, f) != n_eval(n, f)) return "evaluation differs on " + render_formula(f, RenderStyle::Sugared);
        }
      }
    }
    return "";
  }));

  lines.push_back(timed("duality", [&]() -> std::string {
    for (int i = 0; i < 20; ++i) {
      const RelationalModel m = random_relational(rng, theory, 1 + i % 2, 1 + i % 2);
      const ComplexAlgebra ca = complex_algebra(m.frame, {m.groups.at("a"), m.groups.at("b")}, {"a", "b"});
      if (auto v = check_sigma_frame(ca.algebra)) return "complex algebra breaks " + v->equation + ": " + v->witness;
      const MorphismReport r = canonical_morphism_check(ca.algebra);
      if (!r.ok) return "canonical morphism fails " + r.clause + ": " + r.witness;
    }
    for (int i = 0; i < 20; ++i) {
      const SigmaFrame sf = random_sigma_frame(rng, theory);
      const MorphismReport r = canonical_morphism_check(sf);
      if (!r.ok) return "canonical morphism fails " + r.clause + " on a random frame: " + r.witness;
    }
    return "";
  }));

  if (theory == TheoryKind::RUM) {
    lines.push_back(timed("composition counterexample rediscovered", [&]() -> std::string {
      SearchBounds small = b;
      small.max_worlds = std::max<std::size_t>(3, b.max_worlds);
      const auto out = find_countermodel(parse_formula("<a . b>p -> <a><b>p", Signature::rum()), theory, small, opt);
      return out.counter ? "" : "no countermodel within bounds";
    }));
  }

  int status = 0;
  for (const CheckLine& l : lines) {
    std::cout << l.status << "  " << l.name << "  (" << l.seconds << " s)";
    if (!l.detail.empty()) std::cout << "  " << l.detail;
    std::cout << '\n';
    if (l.status == "CAP") status = std::max(status, kCapError);
    if (l.status == "FAIL" && status == 0) status = kFailure;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"intensio: epistemic logics of structured intensional groups"};
  app.require_subcommand(1);
  const std::vector<std::string> theories{"empty", "sl", "rum", "csl", "ba"};

  ParseArgs parse_args;
  auto* parse = app.add_subcommand("parse", "Parse and render a term or formula");
  parse->add_option("--theory", parse_args.theory)->check(CLI::IsMember(theories));
  parse->add_option("--formula", parse_args.formula);
  parse->add_option("--term", parse_args.term);
  parse->add_flag("--json", parse_args.json);

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "Evaluate a formula on a model document");
  check->add_option("--model", check_args.model)->required();
  check->add_option("--formula", check_args.formula)->required();
  check->add_option("--world", check_args.world, "Exit 1 unless the formula holds there");
  check->add_flag("--trace", check_args.trace);
  check->add_flag("--json", check_args.json);

  SearchArgs search_args;
  auto* search = app.add_subcommand("search", "Bounded countermodel search");
  search->add_option("--theory", search_args.theory)->check(CLI::IsMember(theories));
  search->add_option("--formula", search_args.formula)->required();
  search->add_option("--min-worlds", search_args.min_worlds);
  search->add_option("--max-worlds", search_args.max_worlds);
  search->add_option("--max-rels", search_args.max_rels);
  search->add_option("--max-group-values", search_args.max_group_values);
  search->add_option("--time-cap", search_args.time_cap, "Seconds");
  search->add_option("--workers", search_args.workers);
  search->add_option("--engine", search_args.engine)->check(CLI::IsMember({"auto", "kernel", "reference"}));
  search->add_option("--out", search_args.out, "Write the countermodel document here");
  search->add_flag("--symmetry", search_args.symmetry, "Reference engine: skip world-permuted duplicates");
  auto* expect_counter = search->add_flag("--expect-countermodel", search_args.expect_counter);
  auto* expect_valid = search->add_flag("--expect-valid", search_args.expect_valid);
  expect_counter->excludes(expect_valid);

  std::string translate_model, translate_to;
  auto* translate = app.add_subcommand("translate", "Convert between relational and neighborhood models");
  translate->add_option("--model", translate_model)->required();
  translate->add_option("--to", translate_to)->required()->check(CLI::IsMember({"nbhd", "rel"}));

  DualArgs dual_args;
  auto* dual = app.add_subcommand("dual", "Complex algebras and ultrafilter frames");
  auto* complex = dual->add_option("--complex", dual_args.complex, "Relational model; its groups seed the carrier");
  auto* ultra = dual->add_option("--ultrafilter", dual_args.ultrafilter, "Sigma frame document");
  complex->excludes(ultra);
  dual->add_flag("--check", dual_args.check, "Check the equations and the canonical morphism");

  BisimArgs bisim_args;
  auto* bisim = app.add_subcommand("bisim", "Greatest bisimulation between two models");
  bisim->add_option("--left", bisim_args.left)->required();
  bisim->add_option("--right", bisim_args.right)->required();
  bisim->add_option("--world1", bisim_args.world1);
  bisim->add_option("--world2", bisim_args.world2);
  bisim->add_option("--depth", bisim_args.depth, "Separation depth bound (default |W1|*|W2|)");

  SuiteArgs suite_args;
  auto* suite = app.add_subcommand("suite", "Soundness harness, translation and duality checks");
  suite->add_option("--theory", suite_args.theory)->check(CLI::IsMember(theories));
  suite->add_option("--max-worlds", suite_args.max_worlds, "Default 3 (2 for ba)");
  suite->add_option("--max-rels", suite_args.max_rels, "Default 2 (1 for ba)");
  suite->add_option("--workers", suite_args.workers);
  suite->add_option("--seed", suite_args.seed);

  std::string closure_formula;
  bool closure_json = false;
  auto* closure = app.add_subcommand("closure", "The finite closure set of a csl formula");
  closure->add_option("--formula", closure_formula)->required();
  closure->add_flag("--json", closure_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    default_caps();
    if (*parse) return cmd_parse(parse_args);
    if (*check) return cmd_check(check_args);
    if (*search) return cmd_search(search_args);
    if (*translate) return cmd_translate(translate_model, translate_to);
    if (*dual) return cmd_dual(dual_args);
    if (*bisim) return cmd_bisim(bisim_args);
    if (*suite) return cmd_suite(suite_args);
    if (*closure) return cmd_closure(closure_formula, closure_json);
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << '\n';
    return kCapError;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return 0;
}
