#ifndef INTENSIO_TESTS_MODEL_BUILDERS_HPP
#define INTENSIO_TESTS_MODEL_BUILDERS_HPP

#include <random>
#include <string>
#include <vector>

#include "intensio/frame.hpp"
#include "intensio/neighborhood.hpp"
#include "intensio/relational.hpp"

namespace testgen {

using intensio::Intension;
using intensio::RelationalFrame;
using intensio::RelationalModel;
using intensio::RelationId;
using intensio::TheoryKind;
using intensio::World;
using intensio::WorldSet;

inline WorldSet ws(std::initializer_list<World> worlds) {
  WorldSet out;
  for (World w : worlds) out.insert(w);
  return out;
}

/// W = {w, u, v}; r: w -> {u, v}; q: u -> {u}; a(w) = {r}; b(u) = {q}; p = {u}.
inline RelationalModel composition_model() {
  RelationalFrame fr({"w", "u", "v"}, TheoryKind::RUM);
  RelationId r = fr.add_relation("r", {ws({1, 2}), {}, {}});
  RelationId q = fr.add_relation("q", {{}, ws({1}), {}});
  Intension a{{{r}, {}, {}}};
  Intension b{{{}, {q}, {}}};
  return RelationalModel{fr, {{"p", ws({1})}}, {{"a", a}, {"b", b}}};
}

template <typename Rng>
WorldSet random_set(Rng& rng, std::size_t n) {
  return WorldSet(std::uniform_int_distribution<std::uint64_t>(0, (1ULL << n) - 1)(rng));
}

/// Uniformly random relations (reflexive for csl) and group extents.
template <typename Rng>
RelationalModel random_model(Rng& rng, TheoryKind theory, std::size_t n, std::size_t m,
                             const std::vector<std::string>& props,
                             const std::vector<std::string>& groups) {
  RelationalFrame fr(n, theory);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<WorldSet> images;
    for (World w = 0; w < n; ++w) {
      WorldSet img = random_set(rng, n);
      if (theory == TheoryKind::CSL) img.insert(w);
      images.push_back(img);
    }
    fr.add_relation("r" + std::to_string(i), images);
  }
  RelationalModel model{fr, {}, {}};
  for (const auto& p : props) model.props[p] = random_set(rng, n);
  for (const auto& g : groups) {
    Intension f = Intension::empty(n);
    for (World w = 0; w < n; ++w) {
      for (RelationId r = 0; r < m; ++r) {
        if (rng() & 1U) f.extent[w].push_back(r);
      }
    }
    model.groups[g] = f;
  }
  return model;
}

/// Random core neighborhoods, at most `max_per_world` per world; for csl
/// every neighborhood contains its world.
template <typename Rng>
intensio::NeighborhoodFunction random_nbhd(Rng& rng, TheoryKind theory, std::size_t n,
                                           std::size_t max_per_world) {
  auto nu = intensio::NeighborhoodFunction::empty(n);
  for (World w = 0; w < n; ++w) {
    std::size_t k = std::uniform_int_distribution<std::size_t>(0, max_per_world)(rng);
    for (std::size_t i = 0; i < k; ++i) {
      WorldSet x = random_set(rng, n);
      if (theory == TheoryKind::CSL) x.insert(w);
      nu.at[w].push_back(x);
    }
  }
  intensio::normalize(nu);
  return nu;
}

template <typename Rng>
intensio::NeighborhoodModel random_nbhd_model(Rng& rng, TheoryKind theory, std::size_t n,
                                              const std::vector<std::string>& props,
                                              const std::vector<std::string>& groups,
                                              std::size_t max_per_world = 3) {
  intensio::NeighborhoodModel m;
  for (std::size_t i = 0; i < n; ++i) m.labels.push_back("w" + std::to_string(i));
  m.theory = theory;
  for (const auto& p : props) m.props[p] = random_set(rng, n);
  for (const auto& g : groups) m.groups[g] = random_nbhd(rng, theory, n, max_per_world);
  return m;
}

}  // namespace testgen

#endif  // INTENSIO_TESTS_MODEL_BUILDERS_HPP
