#pragma once

// Shared fixtures, random generators, and brute-force oracles for the test
// suite. Oracles deliberately use different algorithms than the library
// (exhaustive search, definition chasing) so agreement is meaningful.

#include <gdf/tree.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace gdft {

using gdf::RootedTree;

// Height-3 bush with branch lengths 3,3,2,1,1 (type (0,2,1,2), 11 vertices).
inline RootedTree sample_bush() {
  return RootedTree({-1, 0, 1, 2, 0, 4, 5, 0, 7, 0, 0});
}

// Height-4 spring bush of type (0,0,3,1,2): five branches, two of length 3,
// three of length 2, and two top leaves hanging off the first branch's tip.
inline RootedTree spring5() {
  return RootedTree({-1, 0, 1, 2, 3, 3, 0, 6, 7, 0, 9, 0, 11, 0, 13});
}

// Truncation of spring5 at level 3: bush with branch lengths 3,3,2,2,2.
inline RootedTree bush33222() {
  return RootedTree({-1, 0, 1, 2, 0, 4, 5, 0, 7, 0, 9, 0, 11});
}

// Root with children b, c; b itself has two leaf children. Type (0,1,2) but
// not a bush.
inline RootedTree fork_left() { return RootedTree({-1, 0, 0, 1, 1}); }

// ---- oracles -------------------------------------------------------------

inline int oracle_height(const RootedTree& t, int v = -1) {
  if (v == -1) v = t.root();
  int h = 0;
  for (int w : t.children(v)) h = std::max(h, 1 + oracle_height(t, w));
  return h;
}

inline std::vector<int> oracle_leaf_levels(const RootedTree& t) {
  std::vector<int> out;
  for (int v = 0; v < t.size(); ++v) {
    if (v == t.root()) continue;
    if (!t.children(v).empty()) continue;
    int depth = 0;
    for (int u = v; u != t.root(); u = t.parent(u)) ++depth;
    out.push_back(depth);
  }
  if (t.size() == 1) out.push_back(0);
  std::sort(out.begin(), out.end());
  return out;
}

// Exhaustive rooted-isomorphism search: tries every bijection between child
// lists recursively.
inline bool oracle_subtree_iso(const RootedTree& a, int va, const RootedTree& b, int vb) {
  const auto& ca = a.children(va);
  const auto& cb = b.children(vb);
  if (ca.size() != cb.size()) return false;
  std::vector<int> perm(cb.begin(), cb.end());
  std::sort(perm.begin(), perm.end());
  do {
    bool ok = true;
    for (size_t k = 0; k < ca.size() && ok; ++k)
      ok = oracle_subtree_iso(a, ca[k], b, perm[k]);
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return ca.empty();
}

inline bool oracle_iso_exists(const RootedTree& a, const RootedTree& b) {
  if (a.size() != b.size()) return false;
  return oracle_subtree_iso(a, a.root(), b, b.root());
}

// Enumerates every automorphism map by exhaustive recursion.
inline void oracle_enumerate_autos(const RootedTree& t,
                                   std::vector<std::vector<int>>& out) {
  std::vector<int> map(t.size(), -1);
  std::function<void(size_t, const std::vector<std::pair<int, int>>&)> go;
  // pairs of (source vertex, image) still to expand, breadth-first
  go = [&](size_t i, const std::vector<std::pair<int, int>>& queue) {
    if (i == queue.size()) {
      out.push_back(map);
      return;
    }
    auto [v, w] = queue[i];
    const auto& cv = t.children(v);
    std::vector<int> perm = t.children(w);
    if (cv.size() != perm.size()) return;
    std::sort(perm.begin(), perm.end());
    do {
      bool feasible = true;
      auto next = queue;
      for (size_t k = 0; k < cv.size() && feasible; ++k) {
        if (t.level(cv[k]) != t.level(perm[k])) feasible = false;
        next.emplace_back(cv[k], perm[k]);
      }
      if (feasible) {
        for (size_t k = 0; k < cv.size(); ++k) map[cv[k]] = perm[k];
        go(i + 1, next);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  };
  map[t.root()] = t.root();
  go(0, {{t.root(), t.root()}});
  // filter out non-automorphisms (recursion can revisit shapes): keep valid
  std::vector<std::vector<int>> valid;
  std::set<std::vector<int>> seen;
  for (const auto& m : out) {
    gdf::TreeIso iso{m};
    if (gdf::is_isomorphism(t, t, iso) && seen.insert(m).second) valid.push_back(m);
  }
  out = std::move(valid);
}

// ---- random generators -----------------------------------------------------

// Random tree: each new vertex attaches to a uniformly random earlier vertex
// of level < max_level.
inline RootedTree random_tree(std::mt19937& rng, int max_nodes, int max_level) {
  std::uniform_int_distribution<int> size_dist(1, max_nodes);
  const int n = size_dist(rng);
  std::vector<int> par{-1};
  std::vector<int> level{0};
  for (int v = 1; v < n; ++v) {
    std::vector<int> cands;
    for (int u = 0; u < v; ++u)
      if (level[u] < max_level) cands.push_back(u);
    if (cands.empty()) break;
    std::uniform_int_distribution<size_t> pick(0, cands.size() - 1);
    const int p = cands[pick(rng)];
    par.push_back(p);
    level.push_back(level[p] + 1);
  }
  return RootedTree(std::move(par));
}

// Random tree with at most max_leaves leaves, each of level <= max_level.
inline RootedTree random_tree_bounded(std::mt19937& rng, int max_leaves, int max_level) {
  while (true) {
    RootedTree t = random_tree(rng, 2 * max_leaves + 1, max_level);
    const size_t n_leaves = t.size() == 1 ? 1 : t.leaves().size();
    if (n_leaves <= static_cast<size_t>(max_leaves)) return t;
  }
}

inline RootedTree random_bush(std::mt19937& rng, int max_branches, int max_len) {
  std::uniform_int_distribution<int> nb(1, max_branches);
  std::uniform_int_distribution<int> nl(1, max_len);
  std::vector<int> par{-1};
  const int branches = nb(rng);
  for (int b = 0; b < branches; ++b) {
    int prev = 0;
    const int len = nl(rng);
    for (int k = 0; k < len; ++k) {
      par.push_back(prev);
      prev = static_cast<int>(par.size()) - 1;
    }
  }
  return RootedTree(std::move(par));
}

// Random relabeling: same tree with vertices renumbered by a random
// order-compatible permutation (parents must precede children, root first).
inline RootedTree shuffled_copy(std::mt19937& rng, const RootedTree& t) {
  std::vector<int> order;
  std::vector<int> frontier{t.root()};
  while (!frontier.empty()) {
    std::uniform_int_distribution<size_t> pick(0, frontier.size() - 1);
    const size_t i = pick(rng);
    const int v = frontier[i];
    frontier.erase(frontier.begin() + i);
    order.push_back(v);
    for (int w : t.children(v)) frontier.push_back(w);
  }
  std::vector<int> pos(t.size());
  for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
  std::vector<int> par(t.size());
  for (int v = 0; v < t.size(); ++v)
    par[pos[v]] = v == t.root() ? -1 : pos[t.parent(v)];
  return RootedTree(std::move(par));
}

}  // namespace gdft
