#pragma once

#include <gdf/config.hpp>

#include "helpers.hpp"

#include <random>
#include <set>
#include <vector>

namespace gdft {

inline gdf::Configuration random_config(std::mt19937& rng, const gdf::GraphDivisor& d) {
  gdf::Configuration s;
  s.sets.resize(d.trees.size());
  for (size_t i = 0; i < d.trees.size(); ++i) {
    const auto& t = d.trees[i];
    for (int v : gdf::configuration_domain(t)) {
      const size_t k = t.children(v).size();
      std::set<gdf::Rat> vals;
      while (vals.size() < k) {
        const long num = static_cast<long>(rng() % 37) - 18;
        const long den = 1 + static_cast<long>(rng() % 3);
        vals.insert(gdf::rat(num, den));
      }
      s.sets[i][v] = std::vector<gdf::Rat>(vals.begin(), vals.end());
    }
  }
  return s;
}

inline gdf::TreeIso random_auto(std::mt19937& rng, const gdf::RootedTree& t) {
  std::vector<std::vector<int>> all;
  oracle_enumerate_autos(t, all);
  gdf::TreeIso iso;
  iso.map = all[rng() % all.size()];
  return iso;
}

inline gdf::GroupElement random_element(std::mt19937& rng, const gdf::GraphDivisor& d) {
  gdf::GroupElement g = gdf::identity_element(d);
  const gdf::Rat alphas[] = {1,
                             -1,
                             2,
                             -2,
                             gdf::rat(1, 2),
                             gdf::rat(-1, 2),
                             3,
                             gdf::rat(5, 3)};
  g.alpha = alphas[rng() % 8];
  for (auto& bs : g.beta)
    for (auto& b : bs)
      b = gdf::rat(static_cast<long>(rng() % 17) - 8, 1 + static_cast<long>(rng() % 2));
  for (size_t i = 0; i < d.trees.size(); ++i) g.autos[i] = random_auto(rng, d.trees[i]);
  return g;
}

}  // namespace gdft
