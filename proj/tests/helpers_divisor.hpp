#pragma once

// Random divisor instances and a brute-force cylinder-decision oracle. The
// oracle enumerates candidate shifts and all quotient-point bijections
// directly from the definitions; lattice membership is decided per lattice
// family without touching the library's normal form.

#include <gdf/cylinder.hpp>
#include <gdf/divisor.hpp>

#include "helpers.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace gdft {

using gdf::BaseCurve;
using gdf::GraphDivisor;

enum class LatticeFamily { full, zero, rank1 };

struct TestBase {
  BaseCurve base;
  LatticeFamily family;
  std::vector<long long> gen;  // rank1 generator, else empty
};

// n points with one of the three lattice shapes: all of Z^n, the zero
// lattice, or one random nonzero generator.
inline TestBase random_base(std::mt19937& rng, size_t n) {
  switch (rng() % 3) {
    case 0:
      return {BaseCurve::affine_line(n), LatticeFamily::full, {}};
    case 1:
      return {BaseCurve::rigid(n), LatticeFamily::zero, {}};
    default: {
      std::vector<long long> g(n, 0);
      std::uniform_int_distribution<long long> d(-3, 3);
      while (std::all_of(g.begin(), g.end(), [](long long x) { return x == 0; }))
        for (auto& x : g) x = d(rng);
      return {BaseCurve(BaseCurve::default_labels(n), {g}), LatticeFamily::rank1, g};
    }
  }
}

inline bool oracle_is_principal(const TestBase& tb, const std::vector<long long>& c) {
  switch (tb.family) {
    case LatticeFamily::full:
      return true;
    case LatticeFamily::zero:
      return std::all_of(c.begin(), c.end(), [](long long x) { return x == 0; });
    case LatticeFamily::rank1:
      for (long long k = -60; k <= 60; ++k) {
        bool hit = true;
        for (size_t i = 0; i < c.size(); ++i)
          if (c[i] != k * tb.gen[i]) { hit = false; break; }
        if (hit) return true;
      }
      return false;
  }
  return false;
}

// Levels of the quotient points over one base point, in vertex order.
inline std::vector<int> oracle_levels(const gdf::RootedTree& t) {
  std::vector<int> ls;
  if (t.size() == 1) return {0};
  for (int v = 0; v < t.size(); ++v)
    if (t.is_leaf(v)) ls.push_back(t.level(v));
  return ls;
}

// Exhaustive: does some bijection match the levels with the given shift?
inline bool oracle_matchable(std::vector<int> xs, std::vector<int> ys, long long c) {
  if (xs.size() != ys.size()) return false;
  std::sort(ys.begin(), ys.end());
  do {
    bool ok = true;
    for (size_t j = 0; j < xs.size() && ok; ++j)
      ok = (static_cast<long long>(ys[j]) == xs[j] - c);
    if (ok) return true;
  } while (std::next_permutation(ys.begin(), ys.end()));
  return false;
}

// Brute-force equivalent of the over-base decision. Candidate shifts are
// scanned in [-12, 12] per point (levels in the tests stay at most 9, so
// every feasible shift lies inside the box).
inline bool oracle_cyl_decision(const TestBase& tb, const GraphDivisor& x,
                                const GraphDivisor& y) {
  const size_t n = tb.base.n();
  std::vector<std::vector<int>> xs(n), ys(n);
  for (size_t i = 0; i < n; ++i) {
    xs[i] = oracle_levels(x.trees[i]);
    ys[i] = oracle_levels(y.trees[i]);
    if (xs[i].size() != ys[i].size()) return false;
  }
  switch (tb.family) {
    case LatticeFamily::full: {
      // shifts are independent per point
      for (size_t i = 0; i < n; ++i) {
        bool found = false;
        for (long long c = -12; c <= 12 && !found; ++c)
          found = oracle_matchable(xs[i], ys[i], c);
        if (!found) return false;
      }
      return true;
    }
    case LatticeFamily::zero: {
      for (size_t i = 0; i < n; ++i)
        if (!oracle_matchable(xs[i], ys[i], 0)) return false;
      return true;
    }
    case LatticeFamily::rank1: {
      for (long long k = -12; k <= 12; ++k) {
        bool all = true;
        for (size_t i = 0; i < n && all; ++i)
          all = oracle_matchable(xs[i], ys[i], k * tb.gen[i]);
        if (all) return true;
      }
      return false;
    }
  }
  return false;
}

// Random divisor: trees with at most `max_leaves` leaves and height at most
// `max_level` over the given base.
inline GraphDivisor random_divisor(std::mt19937& rng, const BaseCurve& base,
                                   int max_leaves = 6, int max_level = 5) {
  std::vector<gdf::RootedTree> trees;
  for (size_t i = 0; i < base.n(); ++i)
    trees.push_back(random_tree_bounded(rng, max_leaves, max_level));
  return GraphDivisor(base, std::move(trees));
}

// A divisor equivalent to d by construction: random principal stretch (when
// one fits), optional bushify, and a relabeling of every tree.
inline GraphDivisor random_equivalent(std::mt19937& rng, const TestBase& tb,
                                      const GraphDivisor& d) {
  GraphDivisor out = d;
  std::vector<long long> amounts(tb.base.n(), 0);
  switch (tb.family) {
    case LatticeFamily::full:
      for (auto& a : amounts) a = rng() % 4;
      break;
    case LatticeFamily::zero:
      break;  // only the zero stretch preserves the class
    case LatticeFamily::rank1: {
      // search a small multiple that is effective
      for (long long k = -3; k <= 3; ++k) {
        std::vector<long long> cand(tb.base.n());
        bool eff = true;
        for (size_t i = 0; i < cand.size(); ++i) {
          cand[i] = k * tb.gen[i];
          eff = eff && cand[i] >= 0;
        }
        if (eff && (rng() % 2 == 0 || k == 0)) { amounts = cand; break; }
        if (eff) amounts = cand;
      }
      break;
    }
  }
  out = gdf::stretch(out, gdf::StretchSpec{amounts, true});
  if (rng() % 2) out = gdf::bushify(out);
  std::vector<gdf::RootedTree> shuffled;
  for (const auto& t : out.trees) shuffled.push_back(shuffled_copy(rng, t));
  return GraphDivisor(out.base, std::move(shuffled));
}

}  // namespace gdft
