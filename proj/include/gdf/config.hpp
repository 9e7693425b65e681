#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gdf/divisor.hpp"
#include "gdf/poly.hpp"
#include "gdf/rational.hpp"
#include "gdf/tree.hpp"

namespace gdf {

// --- configurations -------------------------------------------------------

// One set of pairwise distinct rationals per non-leaf vertex of each tree:
// the prospective coordinates of the centers hanging under that vertex, one
// value per child. Values are kept sorted ascending. A childless root (a
// single-vertex tree) carries the empty set.
struct Configuration {
  // per marked point: vertex index -> sorted values
  std::vector<std::map<int, std::vector<Rat>>> sets;

  bool operator==(const Configuration&) const = default;
};

struct ConfigCheck {
  bool ok = true;
  std::string diagnostic;

  explicit operator bool() const { return ok; }
};

// Domain of a configuration over one tree: everything that survives pruning.
inline std::vector<int> configuration_domain(const RootedTree& t) {
  std::vector<int> dom;
  for (int v = 0; v < t.size(); ++v)
    if (!t.is_leaf(v)) dom.push_back(v);
  return dom;
}

inline ConfigCheck validate_configuration(const Configuration& s, const GraphDivisor& d) {
  if (s.sets.size() != d.trees.size())
    return {false, "configuration covers " + std::to_string(s.sets.size()) +
                       " points, divisor has " + std::to_string(d.trees.size())};
  for (size_t i = 0; i < d.trees.size(); ++i) {
    const auto& t = d.trees[i];
    const std::string at = "point " + std::to_string(i + 1) + ": ";
    for (const auto& [v, xs] : s.sets[i]) {
      if (v < 0 || v >= t.size())
        return {false, at + "vertex index " + std::to_string(v) + " out of range"};
      if (t.is_leaf(v))
        return {false, at + "vertex '" + t.id(v) + "' is a leaf and carries no set"};
      if (xs.size() != t.children(v).size())
        return {false, at + "vertex '" + t.id(v) + "' carries " + std::to_string(xs.size()) +
                           " values, needs " + std::to_string(t.children(v).size())};
      for (size_t j = 1; j < xs.size(); ++j)
        if (!(xs[j - 1] < xs[j]))
          return {false, at + "values at vertex '" + t.id(v) +
                             "' must be sorted and pairwise distinct"};
    }
    for (int v : configuration_domain(t))
      if (!s.sets[i].count(v))
        return {false, at + "no set at vertex '" + t.id(v) + "'"};
  }
  return {};
}

inline void require_valid_configuration(const Configuration& s, const GraphDivisor& d) {
  const auto c = validate_configuration(s, d);
  if (!c.ok) throw std::invalid_argument(c.diagnostic);
}

// One free rational per edge.
inline long long config_space_dim(const GraphDivisor& d) {
  long long dim = 0;
  for (const auto& t : d.trees) dim += t.num_edges();
  return dim;
}

// --- the relabeling group --------------------------------------------------

// A global scale, one shift per (point, level) with 0 <= level < height, and
// one tree automorphism per point. Automorphisms matter only through their
// effect on non-leaf vertices; any full-tree automorphism is accepted.
struct GroupElement {
  Rat alpha = 1;
  std::vector<std::vector<Rat>> beta;  // beta[i][l]
  std::vector<TreeIso> autos;          // full-tree vertex maps
};

inline GroupElement identity_element(const GraphDivisor& d) {
  GroupElement g;
  g.beta.reserve(d.trees.size());
  g.autos.reserve(d.trees.size());
  for (const auto& t : d.trees) {
    g.beta.emplace_back(static_cast<size_t>(t.height()), Rat(0));
    TreeIso id;
    id.map.resize(t.size());
    for (int v = 0; v < t.size(); ++v) id.map[v] = v;
    g.autos.push_back(std::move(id));
  }
  return g;
}

inline void validate_group_element(const GroupElement& g, const GraphDivisor& d) {
  if (g.alpha == 0) throw std::invalid_argument("group element: scale must be nonzero");
  if (g.beta.size() != d.trees.size() || g.autos.size() != d.trees.size())
    throw std::invalid_argument("group element: wrong number of point entries");
  for (size_t i = 0; i < d.trees.size(); ++i) {
    if (g.beta[i].size() != static_cast<size_t>(d.trees[i].height()))
      throw std::invalid_argument("group element: point " + std::to_string(i + 1) +
                                  " needs one shift per level below the top");
    if (!is_isomorphism(d.trees[i], d.trees[i], g.autos[i]))
      throw std::invalid_argument("group element: point " + std::to_string(i + 1) +
                                  " map is not a tree automorphism");
  }
}

// s'(v) = alpha * s(a(v)) + beta[i][level(v)], elementwise on the sets.
inline Configuration act(const GroupElement& g, const Configuration& s, const GraphDivisor& d) {
  validate_group_element(g, d);
  require_valid_configuration(s, d);
  Configuration out;
  out.sets.resize(s.sets.size());
  for (size_t i = 0; i < s.sets.size(); ++i) {
    const auto& t = d.trees[i];
    for (const auto& [v, unused] : s.sets[i]) {
      const auto& src = s.sets[i].at(g.autos[i].map[v]);
      std::vector<Rat> ys;
      ys.reserve(src.size());
      for (const auto& x : src) ys.push_back(g.alpha * x + g.beta[i][t.level(v)]);
      std::sort(ys.begin(), ys.end());
      out.sets[i][v] = std::move(ys);
    }
  }
  return out;
}

// Semidirect product law, arranged so that act(compose(g, h), s) equals
// act(g, act(h, s)).
inline GroupElement compose(const GroupElement& g, const GroupElement& h, const GraphDivisor& d) {
  validate_group_element(g, d);
  validate_group_element(h, d);
  GroupElement out;
  out.alpha = g.alpha * h.alpha;
  out.beta.resize(g.beta.size());
  out.autos.reserve(g.autos.size());
  for (size_t i = 0; i < g.beta.size(); ++i) {
    out.beta[i].resize(g.beta[i].size());
    for (size_t l = 0; l < g.beta[i].size(); ++l)
      out.beta[i][l] = g.alpha * h.beta[i][l] + g.beta[i][l];
    out.autos.push_back(compose(g.autos[i], h.autos[i]));
  }
  return out;
}

inline GroupElement inverse_element(const GroupElement& g, const GraphDivisor& d) {
  validate_group_element(g, d);
  GroupElement out;
  out.alpha = 1 / g.alpha;
  out.beta.resize(g.beta.size());
  out.autos.reserve(g.autos.size());
  for (size_t i = 0; i < g.beta.size(); ++i) {
    out.beta[i].resize(g.beta[i].size());
    for (size_t l = 0; l < g.beta[i].size(); ++l) out.beta[i][l] = -g.beta[i][l] / g.alpha;
    out.autos.push_back(invert(g.autos[i]));
  }
  return out;
}

// --- the barycentric slice --------------------------------------------------

struct SliceResult {
  Configuration sliced;
  // additive normalizers: sliced(v) = s(v) + shifts[i][level(v)]
  std::vector<std::vector<Rat>> shifts;
};

// Shifts all sets of a (point, level) by a common constant so the mean of
// their barycentres becomes 0. Kills exactly the shift part of the group:
// slicing act(g, s) for a pure-shift g returns the same sliced configuration.
inline SliceResult barycentric_slice(const Configuration& s, const GraphDivisor& d) {
  require_valid_configuration(s, d);
  SliceResult r;
  r.sliced.sets.resize(s.sets.size());
  r.shifts.resize(s.sets.size());
  for (size_t i = 0; i < s.sets.size(); ++i) {
    const auto& t = d.trees[i];
    const auto h = static_cast<size_t>(t.height());
    std::vector<Rat> sum(h, Rat(0));
    std::vector<long> cnt(h, 0);
    for (const auto& [v, xs] : s.sets[i]) {
      if (xs.empty()) continue;
      Rat b = 0;
      for (const auto& x : xs) b += x;
      sum[t.level(v)] += b / Rat(static_cast<long>(xs.size()));
      ++cnt[t.level(v)];
    }
    r.shifts[i].assign(h, Rat(0));
    for (size_t l = 0; l < h; ++l)
      if (cnt[l]) r.shifts[i][l] = -sum[l] / Rat(cnt[l]);
    for (const auto& [v, xs] : s.sets[i]) {
      std::vector<Rat> ys;
      ys.reserve(xs.size());
      for (const auto& x : xs) ys.push_back(x + r.shifts[i][t.level(v)]);
      r.sliced.sets[i][v] = std::move(ys);
    }
  }
  return r;
}

// --- walking the reduced automorphisms ---------------------------------------

namespace detail {

// Extends an automorphism of the pruned tree to the full tree: non-leaf
// vertices follow the pruned map, leaf children of matched parents are paired
// off in ascending order.
inline TreeIso extend_pruned_auto(const RootedTree& t, const PrunedTree& pr,
                                  const TreeIso& reduced) {
  TreeIso full;
  full.map.assign(t.size(), -1);
  for (int v = 0; v < t.size(); ++v)
    if (!t.is_leaf(v)) full.map[v] = pr.to_orig[reduced.map[pr.from_orig[v]]];
  for (int v = 0; v < t.size(); ++v) {
    if (t.is_leaf(v)) continue;
    const int w = full.map[v];
    std::vector<int> lv, lw;
    for (int c : t.children(v))
      if (t.is_leaf(c)) lv.push_back(c);
    for (int c : t.children(w))
      if (t.is_leaf(c)) lw.push_back(c);
    // equal counts: the enumeration below is decorated by leaf-child count
    for (size_t j = 0; j < lv.size(); ++j) full.map[lv[j]] = lw[j];
  }
  return full;
}

inline bool scaled_set_equal(const Rat& alpha, const std::vector<Rat>& xs,
                             const std::vector<Rat>& ys) {
  if (xs.size() != ys.size()) return false;
  const size_t n = xs.size();
  for (size_t j = 0; j < n; ++j) {
    const Rat lhs = alpha * xs[j];
    if (lhs != (alpha > 0 ? ys[j] : ys[n - 1 - j])) return false;
  }
  return true;
}

}  // namespace detail

// Streams every tuple of reduced tree automorphisms (one per point, lifted to
// full-tree maps) in a fixed order starting from the identity tuple. Stops
// and returns true as soon as visit does; returns false once the product is
// exhausted. Visiting more than aut_walk_cap() tuples throws AutCapExceeded.
template <typename Visit>
bool for_each_aut_tuple(const GraphDivisor& d, Visit visit) {
  const size_t n = d.trees.size();
  std::vector<PrunedTree> pruned;
  pruned.reserve(n);
  std::vector<std::vector<int>> dec(n);
  for (size_t i = 0; i < n; ++i) {
    pruned.push_back(pruned_tree(d.trees[i]));
    dec[i] = leaf_count_decoration(d.trees[i], pruned[i]);
  }
  std::vector<AutEnumerator> en;
  en.reserve(n);
  for (size_t i = 0; i < n; ++i) en.emplace_back(pruned[i].tree, dec[i]);

  const long long cap = aut_walk_cap();
  long long seen = 0;
  std::vector<TreeIso> tuple(n);
  for (size_t i = 0; i < n; ++i)
    tuple[i] = detail::extend_pruned_auto(d.trees[i], pruned[i], en[i].current());
  for (;;) {
    if (++seen > cap)
      throw AutCapExceeded("automorphism walk exceeded the cap of " + std::to_string(cap));
    if (visit(tuple)) return true;
    size_t i = 0;
    for (; i < n; ++i) {
      const bool moved = en[i].advance();
      if (!moved) en[i].reset();
      tuple[i] = detail::extend_pruned_auto(d.trees[i], pruned[i], en[i].current());
      if (moved) break;
    }
    if (i == n) return false;
  }
}

// --- orbit decision ----------------------------------------------------------

// Searches the relabeling group for an element carrying s1 to s2. Shifts are
// eliminated by slicing, so only the scale and the automorphisms are searched:
// candidate scales are ratios of matched nonzero slice coordinates at a fixed
// reference vertex (complete: a valid scale must map some nonzero coordinate
// onto its image). All-zero slices only arise over chain-shaped divisors,
// where any two configurations are translates of each other. The first
// witness in enumeration order is returned.
inline std::optional<GroupElement> orbit_equivalent(const Configuration& s1,
                                                    const Configuration& s2,
                                                    const GraphDivisor& d) {
  require_valid_configuration(s1, d);
  require_valid_configuration(s2, d);
  const auto a1 = barycentric_slice(s1, d);
  const auto a2 = barycentric_slice(s2, d);

  const auto find_nonzero = [](const Configuration& c, size_t& pt) {
    for (size_t i = 0; i < c.sets.size(); ++i)
      for (const auto& [v, xs] : c.sets[i])
        for (const auto& x : xs)
          if (x != 0) {
            pt = i;
            return v;
          }
    return -1;
  };

  auto finish = [&](const Rat& alpha, std::vector<TreeIso> autos) {
    GroupElement g = identity_element(d);
    g.alpha = alpha;
    g.autos = std::move(autos);
    for (size_t i = 0; i < d.trees.size(); ++i)
      for (size_t l = 0; l < g.beta[i].size(); ++l)
        g.beta[i][l] = alpha * a1.shifts[i][l] - a2.shifts[i][l];
    return g;
  };

  size_t ref_pt = 0;
  const int ref_v = find_nonzero(a2.sliced, ref_pt);
  if (ref_v < 0) {
    size_t unused = 0;
    if (find_nonzero(a1.sliced, unused) >= 0) return std::nullopt;
    return finish(1, identity_element(d).autos);
  }

  std::optional<GroupElement> found;
  for_each_aut_tuple(d, [&](const std::vector<TreeIso>& tuple) {
    const auto& src = a1.sliced.sets[ref_pt].at(tuple[ref_pt].map[ref_v]);
    Rat x0 = 0;
    for (const auto& x : src)
      if (x != 0) {
        x0 = x;
        break;
      }
    if (x0 == 0) return false;
    for (const auto& y : a2.sliced.sets[ref_pt].at(ref_v)) {
      if (y == 0) continue;
      const Rat alpha = y / x0;
      bool ok = true;
      for (size_t i = 0; i < d.trees.size() && ok; ++i)
        for (const auto& [v, ys] : a2.sliced.sets[i]) {
          if (!detail::scaled_set_equal(alpha, a1.sliced.sets[i].at(tuple[i].map[v]), ys)) {
            ok = false;
            break;
          }
        }
      if (ok) {
        found = finish(alpha, tuple);
        return true;
      }
    }
    return false;
  });
  return found;
}

// --- scale stabilizer ---------------------------------------------------------

struct MuReport {
  bool infinite = false;  // chain-shaped divisor: the full scale torus acts
  long long d = 1;        // order of the rational scale stabilizer of the slice
  long long geometric_d = 1;  // order over a closed field, from coefficient supports
  std::string note;
};

// Order of the group of scales preserving the sliced configuration up to
// automorphisms. Over the rationals only orders 1 and 2 occur; geometric_d
// reports the largest order a scale of finite multiplicative order could
// have over a closed field, read off the supports and ratio signs of the
// sets' vanishing polynomials.
inline MuReport mu_d_stabilizer(const Configuration& s, const GraphDivisor& d) {
  require_valid_configuration(s, d);
  MuReport rep;
  if (is_chain_divisor(d)) {
    rep.infinite = true;
    rep.d = 0;
    rep.geometric_d = 0;
    rep.note = "chain divisor: every nonzero scale preserves the slice";
    return rep;
  }
  const auto u = barycentric_slice(s, d).sliced;

  std::vector<std::map<int, RatPoly>> van(d.trees.size());
  for (size_t i = 0; i < u.sets.size(); ++i)
    for (const auto& [v, xs] : u.sets[i]) van[i].emplace(v, RatPoly::from_roots(xs));

  bool minus_one_acts = false;
  long long geometric = 1;
  for_each_aut_tuple(d, [&](const std::vector<TreeIso>& tuple) {
    bool minus_one = true;
    bool consistent = true;
    long long jmax = 0;
    std::vector<std::pair<long long, int>> constraints;  // exponent, ratio sign
    for (size_t i = 0; i < u.sets.size() && (minus_one || consistent); ++i)
      for (const auto& [v, ys] : u.sets[i]) {
        const auto& xs = u.sets[i].at(tuple[i].map[v]);
        if (minus_one && !detail::scaled_set_equal(-1, xs, ys)) minus_one = false;
        if (!consistent) continue;
        const auto& p = van[i].at(tuple[i].map[v]);
        const auto& q = van[i].at(v);
        for (int k = 0; k <= static_cast<int>(ys.size()); ++k) {
          const Rat cp = p.coeff(k);
          const Rat cq = q.coeff(k);
          if ((cp == 0) != (cq == 0)) {
            consistent = false;
            break;
          }
          if (cp == 0) continue;
          const long long j = static_cast<long long>(ys.size()) - k;
          if (j == 0) continue;  // leading coefficients are both 1
          const Rat ratio = cq / cp;
          if (ratio == 1)
            constraints.emplace_back(j, 1);
          else if (ratio == -1)
            constraints.emplace_back(j, -1);
          else {
            consistent = false;
            break;
          }
          jmax = std::max(jmax, j);
        }
      }
    if (minus_one) minus_one_acts = true;
    if (consistent) {
      for (long long dd = 2 * jmax; dd >= 1; --dd) {
        bool fits = true;
        for (const auto& [j, sign] : constraints) {
          if (sign > 0 ? (j % dd != 0) : (dd % 2 != 0 || j % dd != dd / 2)) {
            fits = false;
            break;
          }
        }
        if (fits) {
          geometric = std::max(geometric, dd);
          break;
        }
      }
    }
    return false;
  });
  rep.d = minus_one_acts ? 2 : 1;
  rep.geometric_d = geometric;
  rep.note =
      "over the rationals only scale orders 1 and 2 are realizable; "
      "geometric_d is the bound over a closed field";
  return rep;
}

// --- moduli bookkeeping --------------------------------------------------------

// Edges minus the group dimension h(D) + 1, clamped at 0; 0 for chain-shaped
// divisors. Refuses bases with nontrivial units over more than one marked
// point: the scale normalization used here is not available there and the
// naive count would overstate the quotient.
inline long long moduli_dim(const GraphDivisor& d) {
  if (!d.base.units_trivial() && d.base.n() > 1)
    throw std::invalid_argument(
        "moduli_dim: base has nontrivial units and more than one marked point");
  long long h = 0;
  for (const auto& t : d.trees) h += t.height();
  const long long dim = config_space_dim(d) - h - 1;
  return dim > 0 ? dim : 0;
}

// Coefficient table of the level shift groups: row l gives the truncation
// heights min(l, h_i), the top row gives the full heights h_i. Descriptive
// only; the groups themselves are infinite dimensional over the constants.
struct AutVectorGroupReport {
  std::vector<std::vector<long long>> level_coeffs;  // [l-1][i] = min(l, h_i)
  std::vector<long long> top;                        // [i] = h_i
};

inline AutVectorGroupReport aut_vector_group_report(const GraphDivisor& d) {
  AutVectorGroupReport r;
  long long hmax = 0;
  r.top.reserve(d.trees.size());
  for (const auto& t : d.trees) {
    r.top.push_back(t.height());
    hmax = std::max(hmax, static_cast<long long>(t.height()));
  }
  for (long long l = 1; l <= hmax; ++l) {
    std::vector<long long> row;
    row.reserve(d.trees.size());
    for (const auto& t : d.trees)
      row.push_back(std::min(l, static_cast<long long>(t.height())));
    r.level_coeffs.push_back(std::move(row));
  }
  return r;
}

// --- modification centers -------------------------------------------------------

struct CenterPoint {
  size_t point = 0;  // marked point index
  int vertex = -1;   // the vertex whose fiber coordinate is split
  int child = -1;    // the child receiving the value
  Rat coord = 0;

  bool operator==(const CenterPoint&) const = default;
};

struct ModificationCenters {
  std::vector<std::vector<CenterPoint>> levels;

  bool operator==(const ModificationCenters&) const = default;
};

// The blowup centers encoded by a configuration: per level, per non-leaf
// vertex at that level, one coordinate for each child. Children are taken in
// canonical child order and matched to the vertex's sorted values, making the
// assignment reproducible and inverse to configuration_from_centers.
inline ModificationCenters modification_centers(const GraphDivisor& d, const Configuration& s) {
  require_valid_configuration(s, d);
  int hmax = 0;
  for (const auto& t : d.trees) hmax = std::max(hmax, t.height());
  ModificationCenters mc;
  mc.levels.resize(static_cast<size_t>(hmax));
  for (size_t i = 0; i < d.trees.size(); ++i) {
    const auto& t = d.trees[i];
    const auto codes = canonical_codes(t);
    for (const auto& [v, xs] : s.sets[i]) {
      if (xs.empty()) continue;
      const auto order = canonical_child_order(t, v, codes);
      for (size_t k = 0; k < order.size(); ++k)
        mc.levels[t.level(v)].push_back(CenterPoint{i, v, order[k], xs[k]});
    }
  }
  return mc;
}

// Reassembles the configuration a center listing came from, checking the data
// is complete and consistent for the divisor.
inline Configuration configuration_from_centers(const GraphDivisor& d,
                                                const ModificationCenters& mc) {
  Configuration s;
  s.sets.resize(d.trees.size());
  for (size_t i = 0; i < d.trees.size(); ++i)
    for (int v : configuration_domain(d.trees[i])) s.sets[i][v];
  for (size_t l = 0; l < mc.levels.size(); ++l)
    for (const auto& c : mc.levels[l]) {
      if (c.point >= d.trees.size())
        throw std::invalid_argument("centers: marked point index out of range");
      const auto& t = d.trees[c.point];
      if (c.vertex < 0 || c.vertex >= t.size() || t.is_leaf(c.vertex))
        throw std::invalid_argument("centers: vertex does not carry a set");
      if (t.level(c.vertex) != static_cast<int>(l))
        throw std::invalid_argument("centers: vertex listed at the wrong level");
      if (c.child < 0 || c.child >= t.size() || t.parent(c.child) != c.vertex)
        throw std::invalid_argument("centers: child does not hang off the vertex");
      s.sets[c.point][c.vertex].push_back(c.coord);
    }
  for (auto& point_sets : s.sets)
    for (auto& [v, xs] : point_sets) std::sort(xs.begin(), xs.end());
  require_valid_configuration(s, d);
  return s;
}

}  // namespace gdf
