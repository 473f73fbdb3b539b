#ifndef INTENSIO_DUALITY_HPP
#define INTENSIO_DUALITY_HPP

#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "intensio/caps.hpp"
#include "intensio/frame.hpp"
#include "intensio/syntax.hpp"

namespace intensio {

/// The powerset algebra of `atoms` atoms; an element is its set of atoms.
struct FiniteBooleanAlgebra {
  std::size_t atoms = 0;

  std::size_t size() const { return std::size_t{1} << atoms; }
  WorldSet top() const { return WorldSet::full(atoms); }
  WorldSet bottom() const { return {}; }
  WorldSet meet(WorldSet x, WorldSet y) const { return x & y; }
  WorldSet join(WorldSet x, WorldSet y) const { return x | y; }
  WorldSet complement(WorldSet x) const { return top() - x; }
  bool leq(WorldSet x, WorldSet y) const { return x.subset_of(y); }
  WorldSet element(std::size_t index) const { return WorldSet(index); }
};

/// Operation table of one signature operator. Arguments index the table in
/// mixed radix, first argument most significant.
struct OpTable {
  Op op;
  std::vector<std::size_t> values;
};

/// A finite two-sorted frame: a powerset Boolean algebra, a finite group
/// algebra given by tables, and box/dia tables indexed by
/// (group element * |F| + prop element).
struct SigmaFrame {
  TheoryKind theory = TheoryKind::Empty;
  FiniteBooleanAlgebra props;
  std::vector<std::string> group_elements;
  std::vector<OpTable> ops;
  std::vector<WorldSet> box;
  std::vector<WorldSet> dia;

  std::size_t group_count() const { return group_elements.size(); }
  WorldSet box_of(std::size_t a, WorldSet x) const { return box[a * props.size() + x.bits()]; }
  WorldSet dia_of(std::size_t a, WorldSet x) const { return dia[a * props.size() + x.bits()]; }
  const OpTable& table(Op op) const;
  std::size_t apply(Op op, std::span<const std::size_t> args) const;
};

/// Throws DocumentError on wrong table sizes, out-of-range entries, or a
/// table set that does not match the theory's signature.
void check_shape(const SigmaFrame& sf);

struct EquationViolation {
  std::string equation;  // e.g. "box-meet", "sl-join-dia", "cap-idempotent"
  std::string witness;
};

/// Box and dia laws every frame satisfies: box-top, box-meet,
/// box-bottom-dia-top, dia-box-meet, dia-monotone; then the theory's
/// equations and the laws of its group algebra. Returns the first failure.
std::optional<EquationViolation> check_sigma_frame(const SigmaFrame& sf);

struct Evaluation {
  std::map<std::string, WorldSet> props;
  std::map<std::string, std::size_t> groups;
};

std::size_t evaluate(const SigmaFrame& sf, const Evaluation& e, const GroupTerm& t);
WorldSet evaluate(const SigmaFrame& sf, const Evaluation& e, const Formula& f);

struct EquationResult {
  bool valid;
  std::optional<Evaluation> counter;  // first failing evaluation
};

/// Enumerates every evaluation of the occurring variables. Throws
/// CapExceeded when their number exceeds caps.valuations.
EquationResult equation_valid(const SigmaFrame& sf, const Formula& lhs, const Formula& rhs,
                              const ResourceCaps& caps = default_caps());

struct ComplexAlgebra {
  SigmaFrame algebra;
  RelationalFrame frame;            // with any relations the operations materialized
  std::vector<Intension> carrier;   // one representative per group element
};

/// The complex algebra over the closure of `seeds` under the theory's
/// operations. Elements are identified by their image families (by the
/// intension itself for ba, whose complement is not image-level). Throws
/// CapExceeded past caps.carrier_elements elements or 10 worlds.
ComplexAlgebra complex_algebra(const RelationalFrame& fr, const std::vector<Intension>& seeds,
                               const std::vector<std::string>& seed_names = {},
                               const ResourceCaps& caps = default_caps());

/// Ultrafilters of a finite algebra are principal, one per atom, so worlds
/// are atoms. r_{a,x}(u) = meet of {y : box(a,y) in u} with x, deduplicated
/// by extension; G(a)(u) = {r_{a,x} : dia(a,x) in u}.
struct UltrafilterFrame {
  RelationalFrame frame;                 // theory Empty; the lifted operations are in CanonicalAlgebra
  std::vector<Intension> g;              // G(a) per group element of the source
  std::vector<std::pair<std::size_t, WorldSet>> relation_keys;  // first (a, x) giving each relation
};

UltrafilterFrame ultrafilter_frame(const SigmaFrame& sf);

/// (A_+)^+: the complex algebra of the ultrafilter frame over the distinct
/// G(a), with the lifted operations o_+(G(a),...) = G(o(a,...)).
/// `element_of[a]` is the index of G(a). A lifted table entry is taken from
/// the first tuple reaching it; an ill-defined lifting shows up in (m2).
struct CanonicalAlgebra {
  UltrafilterFrame uf;
  SigmaFrame algebra;
  std::vector<std::size_t> element_of;
};

CanonicalAlgebra canonical_embedding_algebra(const SigmaFrame& sf);

struct MorphismReport {
  bool ok = true;
  std::string clause;  // "m1", "m2", "m3", "m4" or "injective"
  std::string witness;
};

/// Checks that x -> x-hat, a -> G(a) is a quasi-embedding of sf into (A_+)^+.
/// Order: m1, injectivity, m3, m4, m2. The lifted operations are only
/// well-defined when G(a) = G(b) forces equal results; ba has no equations
/// ensuring this, and a conflict is reported as m2.
MorphismReport canonical_morphism_check(const SigmaFrame& sf);

/// (F^+)_+ for the closure of `seeds`.
UltrafilterFrame ultrafilter_extension(const RelationalFrame& fr, const std::vector<Intension>& seeds,
                                       const ResourceCaps& caps = default_caps());

/// A world and pair of elements where G(a + b)(u) differs from
/// G(a)(u) | G(b)(u) in the ultrafilter frame, if any.
std::optional<std::string> join_union_witness(const SigmaFrame& sf, const UltrafilterFrame& uf);

/// A random frame of the theory's signature. Box and dia at each atom come
/// from a set B and a family of subsets of B, so box is normal and dia is
/// monotone; the group algebra is built so the theory's laws hold where they
/// can. Not checked.
SigmaFrame random_sigma_frame_candidate(std::mt19937_64& rng, TheoryKind theory,
                                        std::size_t max_atoms = 3, std::size_t max_groups = 4);

/// A candidate that passes check_sigma_frame, retrying up to `attempts`
/// times. Throws EvalError with the last violation when none passes; for
/// csl that is always the case, since [0]x = top and [a]x <= x force
/// top <= x for every x.
SigmaFrame random_sigma_frame(std::mt19937_64& rng, TheoryKind theory, std::size_t max_atoms = 3,
                              std::size_t max_groups = 4, std::size_t attempts = 200);

}  // namespace intensio

#endif  // INTENSIO_DUALITY_HPP
