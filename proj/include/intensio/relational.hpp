#ifndef INTENSIO_RELATIONAL_HPP
#define INTENSIO_RELATIONAL_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "intensio/caps.hpp"
#include "intensio/frame.hpp"
#include "intensio/syntax.hpp"

namespace intensio {

struct RelationalModel {
  RelationalFrame frame;
  std::map<std::string, WorldSet> props;
  std::map<std::string, Intension> groups;
};

/// Throws EvalError if a valuation is out of range or the frame breaks its
/// theory's constraints.
void check_model(const RelationalModel& m);

/// Evaluates terms and formulas on a private copy of the model's frame, so
/// the relations materialized by group operations never leak into `m`.
class RelationalEvaluator {
 public:
  explicit RelationalEvaluator(const RelationalModel& m, ResourceCaps caps = default_caps());

  Intension term(const GroupTerm& t);
  WorldSet formula(const Formula& f);

  /// Replaces the proposition valuation; cached term values stay valid.
  void set_props(std::map<std::string, WorldSet> props);
  void set_group(const std::string& name, Intension value);

  /// The frame including materialized relations.
  const RelationalFrame& frame() const { return frame_; }

 private:
  RelationalFrame frame_;
  std::map<std::string, WorldSet> props_;
  std::map<std::string, Intension> groups_;
  ResourceCaps caps_;
  std::map<GroupTerm, Intension> term_cache_;
};

/// Materializes into m.frame.
Intension eval_term(RelationalModel& m, const GroupTerm& t);
WorldSet eval_formula(const RelationalModel& m, const Formula& f);
bool satisfies(const RelationalModel& m, World w, const Formula& f);
bool model_valid(const RelationalModel& m, const Formula& f);

struct TraceEntry {
  Formula formula;
  WorldSet truth;
};

/// Truth sets of all distinct subformulas, children first.
std::vector<TraceEntry> eval_trace(const RelationalModel& m, const Formula& f);

struct CounterValuation {
  std::map<std::string, WorldSet> props;
  std::map<std::string, Intension> groups;
  World world;
};

struct FrameValidity {
  bool valid;
  std::optional<CounterValuation> counter;  // the first failure in enumeration order
};

/// Enumerates every valuation of f's proposition variables over 2^W and of
/// its group variables over (2^R)^W, or over `group_domain` when given.
/// Throws CapExceeded when |W|*|R| exceeds caps.choice_bits or the total
/// exceeds caps.valuations.
FrameValidity frame_valid(const RelationalFrame& fr, const Formula& f,
                          const std::vector<Intension>* group_domain = nullptr,
                          const ResourceCaps& caps = default_caps());

/// Every intension of `fr` in enumeration order; bit (w * |R| + r) of the
/// index puts relation r into the extent at w.
std::vector<Intension> all_intensions(const RelationalFrame& fr,
                                      const ResourceCaps& caps = default_caps());

}  // namespace intensio

#endif  // INTENSIO_RELATIONAL_HPP
