#ifndef INTENSIO_SEARCH_HPP
#define INTENSIO_SEARCH_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "intensio/caps.hpp"
#include "intensio/relational.hpp"
#include "intensio/theories.hpp"

namespace intensio {

/// Frames have min_worlds..max_worlds worlds and 0..max_relations relations.
/// Everything inside the bounds is enumerated or an error is raised.
struct SearchBounds {
  std::size_t min_worlds = 1;
  std::size_t max_worlds = 3;
  std::size_t max_relations = 2;
  /// Group variables range over the first k intensions of each frame in
  /// enumeration order; 0 means all of them. Reference engine only.
  std::size_t max_group_values = 0;
  /// Total models (kernel: family assignments times prop valuations).
  std::uint64_t valuation_cap = std::uint64_t{1} << 36;
  double time_cap_seconds = 600;
  /// Reference engine: skip models that a world permutation maps to a
  /// smaller enumeration index.
  bool symmetry_reduction = false;

  /// Throws Error on infeasible bounds.
  void validate() const;
};

/// Stream of relational models in a fixed order: worlds, then relations
/// (both ascending), then relation images, group intensions and proposition
/// valuations as mixed-radix counters with the first item most significant.
class ModelEnumerator {
 public:
  struct Component {
    std::size_t worlds;
    std::size_t relations;
    std::uint64_t frames;
    std::uint64_t group_values;  // per group variable
    std::uint64_t count;         // models in this component
    std::uint64_t first;         // index of its first model
  };

  ModelEnumerator(TheoryKind theory, SearchBounds bounds, std::vector<std::string> props,
                  std::vector<std::string> groups);

  std::uint64_t size() const { return size_; }
  const std::vector<Component>& components() const { return components_; }
  RelationalModel at(std::uint64_t index) const;
  /// Calls fn(index, model) in order until it returns false.
  void for_each(const std::function<bool(std::uint64_t, const RelationalModel&)>& fn) const;
  /// True if no world permutation gives the model a smaller index.
  bool is_canonical(std::uint64_t index) const;

 private:
  struct Decoded {
    std::size_t component;
    std::uint64_t frame, groups, props;
  };
  Decoded decode(std::uint64_t index) const;
  std::uint64_t encode(const Decoded& d) const;
  RelationalFrame frame_at(const Component& c, std::uint64_t frame) const;

  TheoryKind theory_;
  SearchBounds bounds_;
  std::vector<std::string> props_;
  std::vector<std::string> groups_;
  std::vector<Component> components_;
  std::uint64_t size_ = 0;
};

enum class Engine { Auto, Kernel, Reference };

struct SearchOptions {
  Engine engine = Engine::Auto;
  int workers = 0;  // 0: the OpenMP default
  ResourceCaps caps = default_caps();
};

struct CountermodelReport {
  RelationalModel model;
  World world;
  Formula formula;
  std::vector<TraceEntry> trace;
};

struct SearchOutcome {
  /// Absent means none within the bounds, which is not a validity proof.
  std::optional<CountermodelReport> counter;
  Engine engine;  // the engine that ran
};

/// Smallest-first: the first countermodel by world count, then relation
/// count, then the engine's enumeration order. A reported model is
/// re-evaluated relationally before it is returned.
SearchOutcome find_countermodel(const Formula& f, TheoryKind theory, const SearchBounds& bounds,
                                const SearchOptions& options = {});

/// One outcome per formula, sharing one enumeration per variable set.
std::vector<SearchOutcome> find_countermodels(std::span<const Formula> formulas, TheoryKind theory,
                                              const SearchBounds& bounds,
                                              const SearchOptions& options = {});

/// Whether the image-level kernel can run these formulas under these bounds.
bool kernel_supports(TheoryKind theory, const SearchBounds& bounds);

struct HarnessFinding {
  std::string schema;
  std::string instance;  // rendered, premises first for rules
  bool rule;
  CountermodelReport report;
};

struct HarnessReport {
  TheoryKind theory;
  SearchBounds bounds;
  std::size_t axiom_instances = 0;
  std::size_t rule_instances = 0;
  std::size_t rule_instances_with_valid_premises = 0;
  std::vector<HarnessFinding> findings;
  std::vector<std::string> failed_schemata;  // distinct, in suite order
  double seconds = 0;

  bool ok() const { return findings.empty(); }
};

/// Every axiom instance must have no countermodel; for every rule instance
/// whose premises have no countermodel, neither may the conclusion.
HarnessReport soundness_harness(TheoryKind theory, const SearchBounds& bounds,
                                const InstantiationSet& set, const SearchOptions& options = {});

}  // namespace intensio

#endif  // INTENSIO_SEARCH_HPP
