#ifndef INTENSIO_WORLD_SET_HPP
#define INTENSIO_WORLD_SET_HPP

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iterator>

namespace intensio {

using World = std::uint32_t;

// Worlds are indices 0..n-1 with n <= kMaxWorlds.
inline constexpr std::size_t kMaxWorlds = 64;

/// A set of worlds stored as a fixed-width bit vector.
class WorldSet {
 public:
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = World;
    using difference_type = std::ptrdiff_t;
    using pointer = const World*;
    using reference = World;

    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}

    constexpr World operator*() const {
      return static_cast<World>(std::countr_zero(rest_));
    }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator old = *this;
      ++*this;
      return old;
    }
    constexpr bool operator==(const iterator&) const = default;

   private:
    std::uint64_t rest_ = 0;
  };

  constexpr WorldSet() = default;
  constexpr explicit WorldSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr WorldSet full(std::size_t n) {
    return WorldSet(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }
  static constexpr WorldSet single(World w) {
    return WorldSet(std::uint64_t{1} << w);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const {
    return static_cast<std::size_t>(std::popcount(bits_));
  }
  constexpr bool contains(World w) const { return (bits_ >> w) & 1U; }
  constexpr void insert(World w) { bits_ |= std::uint64_t{1} << w; }
  constexpr void erase(World w) { bits_ &= ~(std::uint64_t{1} << w); }
  constexpr bool subset_of(WorldSet other) const {
    return (bits_ & ~other.bits_) == 0;
  }

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  constexpr WorldSet operator|(WorldSet o) const { return WorldSet(bits_ | o.bits_); }
  constexpr WorldSet operator&(WorldSet o) const { return WorldSet(bits_ & o.bits_); }
  constexpr WorldSet operator-(WorldSet o) const { return WorldSet(bits_ & ~o.bits_); }
  constexpr WorldSet& operator|=(WorldSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  constexpr WorldSet& operator&=(WorldSet o) {
    bits_ &= o.bits_;
    return *this;
  }

  constexpr bool operator==(const WorldSet&) const = default;
  constexpr std::strong_ordering operator<=>(const WorldSet&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace intensio

#endif  // INTENSIO_WORLD_SET_HPP
