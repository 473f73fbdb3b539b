#include "intensio/caps.hpp"

#include <charconv>
#include <cstdlib>
#include <string>

#include "intensio/error.hpp"

namespace intensio {

namespace {

std::uint64_t parse_number(std::string_view key, std::string_view text) {
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || value == 0) {
    throw Error("INTENSIO_CAPS: bad value for '" + std::string(key) + "'");
  }
  return value;
}

}  // namespace

ResourceCaps parse_caps(std::string_view spec, ResourceCaps base) {
  while (!spec.empty()) {
    auto comma = spec.find(',');
    std::string_view item = spec.substr(0, comma);
    spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error("INTENSIO_CAPS: expected key=value, got '" + std::string(item) + "'");
    }
    std::string_view key = item.substr(0, eq);
    std::uint64_t value = parse_number(key, item.substr(eq + 1));
    if (key == "choice_bits") {
      base.choice_bits = value;
    } else if (key == "compose") {
      base.compose_combinations = value;
    } else if (key == "carrier") {
      base.carrier_elements = value;
    } else if (key == "valuations") {
      base.valuations = value;
    } else if (key == "term_values") {
      base.term_values = value;
    } else {
      throw Error("INTENSIO_CAPS: unknown key '" + std::string(key) + "'");
    }
  }
  return base;
}

const ResourceCaps& default_caps() {
  static const ResourceCaps caps = [] {
    const char* env = std::getenv("INTENSIO_CAPS");
    return env == nullptr ? ResourceCaps{} : parse_caps(env);
  }();
  return caps;
}

}  // namespace intensio
