#include "intensio/document.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "intensio/error.hpp"

namespace intensio {

namespace {

[[noreturn]] void fail(const std::string& message) { throw DocumentError(message); }

const Json& member(const Json& j, const char* key, const char* where) {
  if (!j.is_object()) fail(std::string(where) + " must be an object");
  auto it = j.find(key);
  if (it == j.end()) fail(std::string(where) + " needs \"" + key + "\"");
  return *it;
}

const Json* optional_member(const Json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

std::string string_of(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where + " must be a string");
  return j.get<std::string>();
}

const Json& object_of(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where + " must be an object");
  return j;
}

const Json& array_of(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where + " must be an array");
  return j;
}

TheoryKind theory_of(const Json& j) {
  const Json* sig = optional_member(j, "signature");
  if (sig == nullptr) return TheoryKind::Empty;
  try {
    return theory_from_name(string_of(*sig, "\"signature\""));
  } catch (const DocumentError&) {
    throw;
  } catch (const Error& e) {
    fail(e.what());
  }
}

std::vector<std::string> labels_of(const Json& j) {
  std::vector<std::string> labels;
  for (const Json& w : array_of(member(j, "worlds", "model"), "\"worlds\"")) labels.push_back(string_of(w, "a world label"));
  if (labels.empty()) fail("a model needs at least one world");
  if (labels.size() > kMaxWorlds) fail("at most " + std::to_string(kMaxWorlds) + " worlds");
  std::vector<std::string> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) fail("duplicate world label");
  return labels;
}

World world_of(const std::vector<std::string>& labels, const std::string& label) {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) fail("unknown world '" + label + "'");
  return static_cast<World>(it - labels.begin());
}

WorldSet world_set_of(const Json& j, const std::vector<std::string>& labels, const std::string& where) {
  WorldSet s;
  for (const Json& w : array_of(j, where)) s.insert(world_of(labels, string_of(w, "a world label in " + where)));
  return s;
}

std::map<std::string, WorldSet> props_of(const Json& j, const std::vector<std::string>& labels) {
  std::map<std::string, WorldSet> props;
  if (const Json* p = optional_member(j, "props")) {
    for (const auto& [name, worlds] : object_of(*p, "\"props\"").items()) {
      props[name] = world_set_of(worlds, labels, "prop '" + name + "'");
    }
  }
  return props;
}

Json props_json(const std::map<std::string, WorldSet>& props, const std::vector<std::string>& labels) {
  Json out = Json::object();
  for (const auto& [name, s] : props) out[name] = world_list(s, labels);
  return out;
}

Op op_of_token(TheoryKind theory, const std::string& tok) {
  for (const OperatorSpec& spec : signature_of(theory).operators()) {
    if (token(spec.op) == tok || spec.symbol == tok) return spec.op;
  }
  fail("operator '" + tok + "' is not in the " + std::string(theory_name(theory)) + " signature");
}

std::size_t element_of(const Json& j, const std::vector<std::string>& names) {
  if (j.is_number_unsigned()) {
    const auto i = j.get<std::size_t>();
    if (i >= names.size()) fail("group element index out of range");
    return i;
  }
  const std::string name = string_of(j, "a group element");
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) fail("unknown group element '" + name + "'");
  return static_cast<std::size_t>(it - names.begin());
}

WorldSet atoms_of(const Json& j, std::size_t atoms) {
  WorldSet s;
  for (const Json& a : array_of(j, "an atom list")) {
    if (!a.is_number_unsigned() || a.get<std::size_t>() >= atoms) fail("atom index out of range");
    s.insert(static_cast<World>(a.get<std::size_t>()));
  }
  return s;
}

Json atom_list(WorldSet s) {
  Json out = Json::array();
  for (World w : s) out.push_back(w);
  return out;
}

std::vector<WorldSet> modal_table(const Json& j, const SigmaFrame& sf, const char* key) {
  const Json& rows = array_of(member(j, key, "sigma frame"), std::string("\"") + key + "\"");
  if (rows.size() != sf.group_count()) fail(std::string("\"") + key + "\" needs one row per group element");
  std::vector<WorldSet> out;
  for (const Json& row : rows) {
    if (!row.is_array() || row.size() != sf.props.size()) {
      fail(std::string("each \"") + key + "\" row needs one entry per prop element");
    }
    for (const Json& cell : row) out.push_back(atoms_of(cell, sf.props.atoms));
  }
  return out;
}

Json modal_json(const std::vector<WorldSet>& table, const SigmaFrame& sf) {
  Json out = Json::array();
  for (std::size_t a = 0; a < sf.group_count(); ++a) {
    Json row = Json::array();
    for (std::size_t x = 0; x < sf.props.size(); ++x) row.push_back(atom_list(table[a * sf.props.size() + x]));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text, nullptr, true, true);
  } catch (const Json::exception& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str());
}

DocumentKind document_kind(const Json& j) {
  if (!j.is_object()) fail("a document must be a JSON object");
  if (j.contains("atoms")) return DocumentKind::SigmaFrame;
  if (j.contains("relations")) return DocumentKind::Relational;
  return DocumentKind::Neighborhood;
}

RelationalModel relational_from_json(const Json& j) {
  const TheoryKind theory = theory_of(j);
  const std::vector<std::string> labels = labels_of(j);
  RelationalFrame fr(labels, theory);
  for (const auto& [rid, images] : object_of(member(j, "relations", "model"), "\"relations\"").items()) {
    std::vector<WorldSet> per_world(labels.size());
    for (const auto& [w, image] : object_of(images, "relation '" + rid + "'").items()) {
      per_world[world_of(labels, w)] = world_set_of(image, labels, "relation '" + rid + "' at '" + w + "'");
    }
    try {
      fr.add_relation(rid, std::move(per_world));
    } catch (const EvalError& e) {
      fail(e.what());
    }
  }
  RelationalModel m{fr, props_of(j, labels), {}};
  if (const Json* g = optional_member(j, "groups")) {
    for (const auto& [name, extents] : object_of(*g, "\"groups\"").items()) {
      Intension f = Intension::empty(labels.size());
      for (const auto& [w, rids] : object_of(extents, "group '" + name + "'").items()) {
        RelationSet& set = f.extent[world_of(labels, w)];
        for (const Json& rid : array_of(rids, "group '" + name + "' at '" + w + "'")) {
          auto r = fr.find_relation(string_of(rid, "a relation id"));
          if (!r) fail("group '" + name + "' names unknown relation '" + rid.get<std::string>() + "'");
          set.push_back(*r);
        }
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
      }
      m.groups[name] = std::move(f);
    }
  }
  check_model(m);
  return m;
}

NeighborhoodModel neighborhood_from_json(const Json& j) {
  NeighborhoodModel m;
  m.theory = theory_of(j);
  m.labels = labels_of(j);
  m.props = props_of(j, m.labels);
  if (const Json* g = optional_member(j, "groups")) {
    for (const auto& [name, families] : object_of(*g, "\"groups\"").items()) {
      NeighborhoodFunction nu = NeighborhoodFunction::empty(m.labels.size());
      for (const auto& [w, family] : object_of(families, "group '" + name + "'").items()) {
        std::vector<WorldSet> sets;
        for (const Json& x : array_of(family, "group '" + name + "' at '" + w + "'")) {
          sets.push_back(world_set_of(x, m.labels, "a neighborhood of '" + name + "'"));
        }
        nu.at[world_of(m.labels, w)] = normalized(std::move(sets));
      }
      m.groups[name] = std::move(nu);
    }
  }
  check_model(m);
  return m;
}

SigmaFrame sigma_frame_from_json(const Json& j) {
  SigmaFrame sf;
  sf.theory = theory_of(j);
  const Json& atoms = member(j, "atoms", "sigma frame");
  if (!atoms.is_number_unsigned() || atoms.get<std::size_t>() > 6) fail("\"atoms\" must be an integer from 0 to 6");
  sf.props.atoms = atoms.get<std::size_t>();
  for (const Json& name : array_of(member(j, "group_elements", "sigma frame"), "\"group_elements\"")) {
    sf.group_elements.push_back(string_of(name, "a group element name"));
  }
  if (const Json* ops = optional_member(j, "ops")) {
    for (const auto& [tok, table] : object_of(*ops, "\"ops\"").items()) {
      OpTable t{op_of_token(sf.theory, tok), {}};
      for (const Json& v : array_of(table, "the table of '" + tok + "'")) t.values.push_back(element_of(v, sf.group_elements));
      sf.ops.push_back(std::move(t));
    }
  }
  sf.box = modal_table(j, sf, "box");
  sf.dia = modal_table(j, sf, "dia");
  check_shape(sf);
  return sf;
}

Json world_list(WorldSet s, const std::vector<std::string>& labels) {
  Json out = Json::array();
  for (World w : s) out.push_back(labels.at(w));
  return out;
}

Json to_json(const RelationalFrame& fr) {
  Json out;
  out["signature"] = std::string(theory_name(fr.theory()));
  out["worlds"] = fr.labels();
  Json relations = Json::object();
  for (RelationId r = 0; r < fr.relation_count(); ++r) {
    Json images = Json::object();
    for (World w = 0; w < fr.world_count(); ++w) {
      if (!fr.image(r, w).empty()) images[fr.labels()[w]] = world_list(fr.image(r, w), fr.labels());
    }
    relations[fr.relation_name(r)] = std::move(images);
  }
  out["relations"] = std::move(relations);
  out["groups"] = Json::object();
  out["props"] = Json::object();
  return out;
}

Json to_json(const RelationalModel& m) {
  Json out = to_json(m.frame);
  const auto& labels = m.frame.labels();
  Json groups = Json::object();
  for (const auto& [name, f] : m.groups) {
    Json extents = Json::object();
    for (World w = 0; w < f.extent.size(); ++w) {
      if (f.extent[w].empty()) continue;
      Json rids = Json::array();
      for (RelationId r : f.extent[w]) rids.push_back(m.frame.relation_name(r));
      extents[labels[w]] = std::move(rids);
    }
    groups[name] = std::move(extents);
  }
  out["groups"] = std::move(groups);
  out["props"] = props_json(m.props, labels);
  return out;
}

Json to_json(const NeighborhoodModel& m) {
  Json out;
  out["signature"] = std::string(theory_name(m.theory));
  out["worlds"] = m.labels;
  Json groups = Json::object();
  for (const auto& [name, nu] : m.groups) {
    Json families = Json::object();
    for (World w = 0; w < nu.at.size(); ++w) {
      if (nu.at[w].empty()) continue;
      Json family = Json::array();
      for (WorldSet x : nu.at[w]) family.push_back(world_list(x, m.labels));
      families[m.labels[w]] = std::move(family);
    }
    groups[name] = std::move(families);
  }
  out["groups"] = std::move(groups);
  out["props"] = props_json(m.props, m.labels);
  return out;
}

Json to_json(const SigmaFrame& sf) {
  Json out;
  out["signature"] = std::string(theory_name(sf.theory));
  out["atoms"] = sf.props.atoms;
  out["group_elements"] = sf.group_elements;
  Json ops = Json::object();
  for (const OpTable& t : sf.ops) {
    Json values = Json::array();
    for (std::size_t v : t.values) values.push_back(sf.group_elements.at(v));
    ops[std::string(token(t.op))] = std::move(values);
  }
  out["ops"] = std::move(ops);
  out["box"] = modal_json(sf.box, sf);
  out["dia"] = modal_json(sf.dia, sf);
  return out;
}

Json trace_json(const std::vector<TraceEntry>& trace, const std::vector<std::string>& labels) {
  Json out = Json::array();
  for (const TraceEntry& e : trace) {
    out.push_back(Json{{"formula", render_formula(e.formula, RenderStyle::Sugared)}, {"truth", world_list(e.truth, labels)}});
  }
  return out;
}

Json to_json(const CountermodelReport& r) {
  const auto& labels = r.model.frame.labels();
  Json out;
  out["model"] = to_json(r.model);
  out["world"] = labels.at(r.world);
  out["formula"] = render_formula(r.formula, RenderStyle::Sugared);
  out["trace"] = trace_json(r.trace, labels);
  return out;
}

}  // namespace intensio
