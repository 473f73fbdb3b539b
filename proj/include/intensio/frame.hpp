#ifndef INTENSIO_FRAME_HPP
#define INTENSIO_FRAME_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "intensio/syntax.hpp"
#include "intensio/world_set.hpp"

namespace intensio {

enum class TheoryKind : std::uint8_t { Empty, SL, RUM, CSL, BA };

std::string_view theory_name(TheoryKind kind);
/// "empty", "sl", "rum", "csl" or "ba"; throws Error otherwise.
TheoryKind theory_from_name(std::string_view name);
const Signature& signature_of(TheoryKind kind);

using RelationId = std::uint32_t;
/// Sorted, duplicate-free relation ids.
using RelationSet = std::vector<RelationId>;

/// Worlds plus agent relations, each given by its image function.
class RelationalFrame {
 public:
  RelationalFrame(std::vector<std::string> world_labels, TheoryKind theory);
  /// Worlds labelled "w0", "w1", ...
  RelationalFrame(std::size_t world_count, TheoryKind theory);

  std::size_t world_count() const { return labels_.size(); }
  WorldSet all_worlds() const { return WorldSet::full(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<World> world_index(std::string_view label) const;
  TheoryKind theory() const { return theory_; }

  std::size_t relation_count() const { return relations_.size(); }
  const std::string& relation_name(RelationId r) const { return relations_[r].name; }
  std::optional<RelationId> find_relation(std::string_view name) const;
  WorldSet image(RelationId r, World w) const { return relations_[r].images[w]; }
  const std::vector<WorldSet>& images(RelationId r) const { return relations_[r].images; }
  /// Relations that were added by an operation rather than by the user.
  bool is_materialized(RelationId r) const { return relations_[r].materialized; }

  /// Appends a user relation. Throws EvalError on a duplicate name, a wrong
  /// image count, or an image outside the world set.
  RelationId add_relation(std::string name, std::vector<WorldSet> images);

  /// Returns a relation with exactly these images, appending one if needed.
  RelationId materialize(std::vector<WorldSet> images, std::string_view hint = "m");

  /// Images for a relation that only matters at `w`: `image` there, and
  /// outside `w` the empty set (the singleton {v} for CSL, keeping it reflexive).
  std::vector<WorldSet> local_images(World w, WorldSet image) const;

  /// Throws EvalError unless the frame meets its theory's constraints.
  void check_constraints() const;

 private:
  struct Relation {
    std::string name;
    std::vector<WorldSet> images;
    bool materialized = false;
  };

  std::vector<std::string> labels_;
  TheoryKind theory_;
  std::vector<Relation> relations_;
};

/// A group intension: world -> set of relation ids.
struct Intension {
  std::vector<RelationSet> extent;

  static Intension empty(std::size_t world_count) {
    return Intension{std::vector<RelationSet>(world_count)};
  }

  friend bool operator==(const Intension&, const Intension&) = default;
  friend auto operator<=>(const Intension&, const Intension&) = default;
};

/// Distinct images {r(w) : r in f(w)}, sorted.
std::vector<WorldSet> image_family(const RelationalFrame& fr, const Intension& f, World w);

/// Throws EvalError if `f` has the wrong world count or an unknown relation id.
void check_intension(const RelationalFrame& fr, const Intension& f);

}  // namespace intensio

#endif  // INTENSIO_FRAME_HPP
