#ifndef INTENSIO_NEIGHBORHOOD_HPP
#define INTENSIO_NEIGHBORHOOD_HPP

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "intensio/caps.hpp"
#include "intensio/frame.hpp"
#include "intensio/relational.hpp"
#include "intensio/syntax.hpp"

namespace intensio {

/// Sorted, duplicate-free family of world sets (a core neighborhood set).
using Neighborhoods = std::vector<WorldSet>;

/// world -> core neighborhoods. No upward closure is applied; monotonicity
/// lives in the satisfaction clauses.
struct NeighborhoodFunction {
  std::vector<Neighborhoods> at;

  static NeighborhoodFunction empty(std::size_t world_count) {
    return NeighborhoodFunction{std::vector<Neighborhoods>(world_count)};
  }
  friend bool operator==(const NeighborhoodFunction&, const NeighborhoodFunction&) = default;
  friend auto operator<=>(const NeighborhoodFunction&, const NeighborhoodFunction&) = default;
};

/// Sorts and deduplicates every family in place.
void normalize(NeighborhoodFunction& nu);
Neighborhoods normalized(std::vector<WorldSet> family);

struct NeighborhoodModel {
  std::vector<std::string> labels;
  TheoryKind theory = TheoryKind::Empty;
  std::map<std::string, NeighborhoodFunction> groups;
  std::map<std::string, WorldSet> props;

  std::size_t world_count() const { return labels.size(); }
  WorldSet all_worlds() const { return WorldSet::full(labels.size()); }
};

/// Throws EvalError on a bad world count, a family of the wrong length, an
/// unnormalized family, a neighborhood outside W, or (csl) a neighborhood
/// X in nu(w) with w not in X.
void check_model(const NeighborhoodModel& m);

/// {r(w) : r in f(w)} per world.
NeighborhoodFunction neighborhoods_of(const RelationalFrame& fr, const Intension& f);

WorldSet box_set(const NeighborhoodFunction& nu, WorldSet p);
WorldSet dia_set(const NeighborhoodFunction& nu, WorldSet p);

/// Join and zero are pointwise on neighborhoods. Every other operation goes
/// through nbhd_to_rel of the whole model, the relational operation, and back.
class NeighborhoodEvaluator {
 public:
  explicit NeighborhoodEvaluator(NeighborhoodModel m, ResourceCaps caps = default_caps());

  NeighborhoodFunction term(const GroupTerm& t);
  WorldSet formula(const Formula& f);
  /// Replaces the proposition valuation; cached term values stay valid.
  void set_props(std::map<std::string, WorldSet> props) { model_.props = std::move(props); }
  const NeighborhoodModel& model() const { return model_; }

 private:
  NeighborhoodModel model_;
  ResourceCaps caps_;
  std::optional<RelationalEvaluator> relational_;
  std::map<GroupTerm, NeighborhoodFunction> cache_;
};

NeighborhoodFunction n_eval_term(const NeighborhoodModel& m, const GroupTerm& t,
                                 const ResourceCaps& caps = default_caps());
WorldSet n_eval(const NeighborhoodModel& m, const Formula& f,
                const ResourceCaps& caps = default_caps());

NeighborhoodModel rel_to_nbhd(const RelationalModel& m);

/// One relation per (world, neighborhood), that set at the world and empty
/// elsewhere ({v} at v for csl), deduplicated. a(w) collects every relation
/// whose image at w lies in nu_a(w).
RelationalModel nbhd_to_rel(const NeighborhoodModel& m);

struct Violation {
  std::string clause;  // "domain", "well-defined", "homomorphism", "valuation", "atom", "there", "back", "congruence"
  std::string detail;
};

/// f: W -> W' as a vector, g as pairs of terms (source term, target term)
/// whose values give g on the covered group values.
struct MorphismCandidate {
  std::vector<World> world_map;
  std::vector<std::pair<GroupTerm, GroupTerm>> group_pairs;

  /// Identity world map with (a, a) for every group variable of `m`.
  static MorphismCandidate identity(const NeighborhoodModel& m);
};

struct MorphismOptions {
  /// Also require g to send each shared group variable's value to its value
  /// in dst, and f to preserve and reflect shared propositions.
  bool preserve_valuation = true;
};

/// First violation in the order: domain, well-defined, homomorphism,
/// valuation, atom, then (there) and (back) per pair and world. Nullopt
/// means `cand` is a morphism.
std::optional<Violation> check_morphism(const NeighborhoodModel& src, const NeighborhoodModel& dst,
                                        const MorphismCandidate& cand,
                                        const MorphismOptions& options = {},
                                        const ResourceCaps& caps = default_caps());

using WorldPair = std::pair<World, World>;

struct BisimulationCandidate {
  std::vector<std::pair<GroupTerm, GroupTerm>> group_relation;
  std::vector<WorldPair> world_relation;

  static BisimulationCandidate graph_of(const MorphismCandidate& morphism);
};

/// X B-lifted Y: every x in X has a B-partner in Y and vice versa.
bool lifted(const std::vector<std::vector<bool>>& b, WorldSet x, WorldSet y);

/// Congruence is checked on covered values: when o applied to related
/// pairs gives values that both occur in the relation, they must be related.
std::optional<Violation> check_bisimulation(const NeighborhoodModel& m1,
                                            const NeighborhoodModel& m2,
                                            const BisimulationCandidate& cand,
                                            const ResourceCaps& caps = default_caps());

/// Largest B making (group_relation, B) a bisimulation, refined from the
/// pairs that agree on shared propositions. Sorted.
std::vector<WorldPair> greatest_bisimulation(
    const NeighborhoodModel& m1, const NeighborhoodModel& m2,
    const std::vector<std::pair<GroupTerm, GroupTerm>>& group_relation,
    const ResourceCaps& caps = default_caps());

/// Smallest modal depth at which some formula over `props` and terms built
/// from `groups` tells (m1, w1) and (m2, w2) apart, if any up to max_depth.
/// Formulas are taken up to truth table on the disjoint union, so each
/// depth only needs the Boolean combinations of the previous depth's
/// classes. Both models must have the same theory. Throws CapExceeded when
/// the joint term values exceed caps.term_values.
std::optional<std::size_t> separation_depth(const NeighborhoodModel& m1, World w1,
                                            const NeighborhoodModel& m2, World w2,
                                            std::size_t max_depth,
                                            const std::vector<std::string>& props,
                                            const std::vector<std::string>& groups,
                                            const ResourceCaps& caps = default_caps());

bool modal_equiv_up_to_depth(const NeighborhoodModel& m1, World w1, const NeighborhoodModel& m2,
                             World w2, std::size_t depth, const std::vector<std::string>& props,
                             const std::vector<std::string>& groups,
                             const ResourceCaps& caps = default_caps());

/// up(N) = {Y subset of W : some X in N with X subset of Y}, sorted.
Neighborhoods upward_closure(const Neighborhoods& family, std::size_t world_count);

/// A semilattice neighborhood frame whose group algebra is the free join
/// semilattice on `generators` names: element e is a bitmask of generators,
/// join is bitwise or, 0 is the empty mask. nu[e] is arbitrary except that
/// nu[0] must be empty everywhere.
struct FreeJoinFrame {
  std::size_t world_count;
  std::vector<std::string> generators;
  std::vector<NeighborhoodFunction> nu;  // indexed by element mask
};

/// Validity of f under every assignment of its group variables to elements
/// and every valuation of its propositions. Only join and zero may occur.
bool frame_valid(const FreeJoinFrame& frame, const Formula& f);

/// For every pair of elements and every world:
/// up(nu_{x+y}(w)) = up(nu_x(w)) | up(nu_y(w)).
bool upward_join_condition(const FreeJoinFrame& frame);

}  // namespace intensio

#endif  // INTENSIO_NEIGHBORHOOD_HPP
