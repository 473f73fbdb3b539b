#ifndef INTENSIO_CAPS_HPP
#define INTENSIO_CAPS_HPP

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace intensio {

/// Resource caps for exhaustive procedures. Exceeding any of them raises
/// CapExceeded.
struct ResourceCaps {
  // frame_valid: |W| * |R| bits of choice per group variable.
  std::size_t choice_bits = 12;
  // rum_compose: per-world choice combinations of the variant construction.
  std::size_t compose_combinations = 4096;
  // complex_algebra: elements of a closed group carrier.
  std::size_t carrier_elements = 64;
  // frame_valid / equation_valid: total valuations enumerated.
  std::uint64_t valuations = std::uint64_t{1} << 28;
  // modal_equiv_up_to_depth: distinct joint values of group terms.
  std::size_t term_values = 256;
};

/// Parses "key=value,key=value" with keys choice_bits, compose, carrier,
/// valuations, term_values. Unknown keys raise Error.
ResourceCaps parse_caps(std::string_view spec, ResourceCaps base = {});

/// Defaults overridden by the INTENSIO_CAPS environment variable, read once.
const ResourceCaps& default_caps();

}  // namespace intensio

#endif  // INTENSIO_CAPS_HPP
