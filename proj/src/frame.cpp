#include "intensio/frame.hpp"

#include <algorithm>

#include "intensio/error.hpp"

namespace intensio {

std::string_view theory_name(TheoryKind kind) {
  switch (kind) {
    case TheoryKind::Empty: return "empty";
    case TheoryKind::SL: return "sl";
    case TheoryKind::RUM: return "rum";
    case TheoryKind::CSL: return "csl";
    case TheoryKind::BA: return "ba";
  }
  return "?";
}

TheoryKind theory_from_name(std::string_view name) {
  for (TheoryKind k : {TheoryKind::Empty, TheoryKind::SL, TheoryKind::RUM, TheoryKind::CSL,
                       TheoryKind::BA}) {
    if (theory_name(k) == name) return k;
  }
  throw Error("unknown theory '" + std::string(name) + "'");
}

const Signature& signature_of(TheoryKind kind) { return Signature::named(theory_name(kind)); }

namespace {

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("w" + std::to_string(i));
  return out;
}

}  // namespace

RelationalFrame::RelationalFrame(std::vector<std::string> world_labels, TheoryKind theory)
    : labels_(std::move(world_labels)), theory_(theory) {
  if (labels_.empty()) throw EvalError("a frame needs at least one world");
  if (labels_.size() > kMaxWorlds) {
    throw EvalError("at most " + std::to_string(kMaxWorlds) + " worlds are supported");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    for (std::size_t j = i + 1; j < labels_.size(); ++j) {
      if (labels_[i] == labels_[j]) throw EvalError("duplicate world label '" + labels_[i] + "'");
    }
  }
}

RelationalFrame::RelationalFrame(std::size_t world_count, TheoryKind theory)
    : RelationalFrame(default_labels(world_count), theory) {}

std::optional<World> RelationalFrame::world_index(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<World>(i);
  }
  return std::nullopt;
}

std::optional<RelationId> RelationalFrame::find_relation(std::string_view name) const {
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    if (relations_[i].name == name) return static_cast<RelationId>(i);
  }
  return std::nullopt;
}

RelationId RelationalFrame::add_relation(std::string name, std::vector<WorldSet> images) {
  if (find_relation(name)) throw EvalError("duplicate relation '" + name + "'");
  if (images.size() != world_count()) {
    throw EvalError("relation '" + name + "' has " + std::to_string(images.size()) +
                    " images for " + std::to_string(world_count()) + " worlds");
  }
  for (WorldSet img : images) {
    if (!img.subset_of(all_worlds())) {
      throw EvalError("relation '" + name + "' reaches a world outside the frame");
    }
  }
  relations_.push_back({std::move(name), std::move(images), false});
  return static_cast<RelationId>(relations_.size() - 1);
}

RelationId RelationalFrame::materialize(std::vector<WorldSet> images, std::string_view hint) {
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    if (relations_[i].images == images) return static_cast<RelationId>(i);
  }
  std::string name = "_" + std::string(hint);
  for (std::size_t k = relations_.size();; ++k) {
    std::string candidate = name + std::to_string(k);
    if (!find_relation(candidate)) {
      name = std::move(candidate);
      break;
    }
  }
  relations_.push_back({std::move(name), std::move(images), true});
  return static_cast<RelationId>(relations_.size() - 1);
}

std::vector<WorldSet> RelationalFrame::local_images(World w, WorldSet image) const {
  std::vector<WorldSet> out(world_count());
  for (World v = 0; v < world_count(); ++v) {
    if (v == w) {
      out[v] = image;
    } else if (theory_ == TheoryKind::CSL) {
      out[v] = WorldSet::single(v);
    }
  }
  return out;
}

void RelationalFrame::check_constraints() const {
  if (theory_ != TheoryKind::CSL) return;
  for (const Relation& r : relations_) {
    for (World w = 0; w < world_count(); ++w) {
      if (!r.images[w].contains(w)) {
        throw EvalError("relation '" + r.name + "' is not reflexive at '" + labels_[w] +
                        "', but csl frames require reflexive relations");
      }
    }
  }
}

std::vector<WorldSet> image_family(const RelationalFrame& fr, const Intension& f, World w) {
  std::vector<WorldSet> out;
  out.reserve(f.extent[w].size());
  for (RelationId r : f.extent[w]) out.push_back(fr.image(r, w));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void check_intension(const RelationalFrame& fr, const Intension& f) {
  if (f.extent.size() != fr.world_count()) {
    throw EvalError("intension covers " + std::to_string(f.extent.size()) + " worlds, frame has " +
                    std::to_string(fr.world_count()));
  }
  for (const RelationSet& rs : f.extent) {
    for (RelationId r : rs) {
      if (r >= fr.relation_count()) throw EvalError("intension refers to an unknown relation");
    }
    if (!std::is_sorted(rs.begin(), rs.end()) ||
        std::adjacent_find(rs.begin(), rs.end()) != rs.end()) {
      throw EvalError("intension relation sets must be sorted and duplicate-free");
    }
  }
}

}  // namespace intensio
