#ifndef INTENSIO_KERNEL_HPP
#define INTENSIO_KERNEL_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "intensio/caps.hpp"
#include "intensio/relational.hpp"

namespace intensio {

struct SearchBounds;

namespace kernel {

// Truth of a formula depends only on the family of images each group value
// has at each world. The kernel enumerates, per world, the distinct tuples
// of families the group variables can take with m relations, and evaluates
// all proposition valuations at once as bit lanes. Families are bit masks
// over the subsets of W, so at most 6 worlds are supported. Not for ba,
// whose complement is taken on relation ids rather than images.

constexpr std::size_t kMaxWorlds = 6;

struct Hit {
  std::size_t component;
  std::uint64_t assignment;
  std::uint64_t lane;
  std::uint64_t index;  // position in the kernel's order
};

class Search {
 public:
  /// Throws EvalError if the theory or bounds are unsupported.
  Search(TheoryKind theory, const SearchBounds& bounds, std::vector<std::string> props,
         std::vector<std::string> groups, ResourceCaps caps = default_caps());
  ~Search();
  Search(Search&&) noexcept;

  /// Smallest refuting index per formula. Deterministic for any worker
  /// count. `reduce` skips assignments that are not the least of their
  /// orbit under world permutations; the answer is the same either way.
  std::vector<std::optional<Hit>> run(std::span<const Formula> formulas, int workers = 0, bool reduce = true) const;
  RelationalModel model(const Hit& hit) const;
  /// Family assignments times lanes over all components.
  std::uint64_t size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace kernel
}  // namespace intensio

#endif  // INTENSIO_KERNEL_HPP
