#pragma once

// Decides whether the cylinders over two fibered surfaces with the same
// marked base are isomorphic over the base, produces checkable certificates
// (matching of quotient points, constant shift per point, lattice witness),
// and implements the divisor surgeries that generate equivalent pairs:
// chain stretching below the root and replacing every tree by the bush of
// its type. A complete canonical invariant for the equivalence closes the
// layer.

#include <gdf/divisor.hpp>

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gdf {

enum class CylFailReason {
  point_count_mismatch,  // some base point carries different quotient sizes
  shift_not_constant,    // sorted level difference is not constant at a point
  shift_not_principal,   // forced shift is not a principal divisor
};

inline std::string to_string(CylFailReason r) {
  switch (r) {
    case CylFailReason::point_count_mismatch: return "point-count-mismatch";
    case CylFailReason::shift_not_constant: return "shift-not-constant";
    case CylFailReason::shift_not_principal: return "shift-not-principal";
  }
  return "unknown";
}

// Certificate for a positive decision. sigma[i] maps positions in the first
// divisor's quotient point list over point i to positions in the second's;
// shift c satisfies level_second(sigma(j)) == level_first(j) - c_i;
// lattice_witness expresses c over the base's principal generators.
struct CylIsoCertificate {
  std::vector<std::vector<int>> sigma;
  std::vector<long long> shift;
  std::vector<long long> lattice_witness;
};

struct CylDecision {
  std::optional<CylIsoCertificate> certificate;
  std::optional<CylFailReason> reason;

  bool ok() const { return certificate.has_value(); }
};

namespace detail {
// Quotient positions sorted by (level, position); ties keep input order so
// the pairing is deterministic.
inline std::vector<int> by_level(const std::vector<QuotientPoint>& pts) {
  std::vector<int> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return pts[a].level < pts[b].level; });
  return idx;
}
}  // namespace detail

inline CylDecision cylinders_isomorphic_over_B(const GraphDivisor& x, const GraphDivisor& y) {
  if (!(x.base == y.base))
    throw std::invalid_argument("cylinder decision needs a common marked base");
  const auto qx = df_quotient(x);
  const auto qy = df_quotient(y);
  const size_t n = x.base.n();

  for (size_t i = 0; i < n; ++i)
    if (qx.points[i].size() != qy.points[i].size())
      return {std::nullopt, CylFailReason::point_count_mismatch};

  std::vector<long long> shift(n, 0);
  std::vector<std::vector<int>> sigma(n);
  for (size_t i = 0; i < n; ++i) {
    const auto& px = qx.points[i];
    const auto& py = qy.points[i];
    const auto ox = detail::by_level(px);
    const auto oy = detail::by_level(py);
    const long long c = px[ox[0]].level - py[oy[0]].level;
    for (size_t j = 0; j < ox.size(); ++j)
      if (px[ox[j]].level - py[oy[j]].level != c)
        return {std::nullopt, CylFailReason::shift_not_constant};
    shift[i] = c;
    sigma[i].assign(px.size(), -1);
    for (size_t j = 0; j < ox.size(); ++j) sigma[i][ox[j]] = oy[j];
  }

  auto witness = principal_witness(shift, x.base);
  if (!witness) return {std::nullopt, CylFailReason::shift_not_principal};
  return {CylIsoCertificate{std::move(sigma), std::move(shift), std::move(*witness)},
          std::nullopt};
}

// Independent re-check of a certificate against the two divisors.
inline bool verify_cyl_certificate(const GraphDivisor& x, const GraphDivisor& y,
                                   const CylIsoCertificate& cert) {
  if (!(x.base == y.base)) return false;
  const auto qx = df_quotient(x);
  const auto qy = df_quotient(y);
  const size_t n = x.base.n();
  if (cert.sigma.size() != n || cert.shift.size() != n) return false;
  for (size_t i = 0; i < n; ++i) {
    const auto& px = qx.points[i];
    const auto& py = qy.points[i];
    if (px.size() != py.size() || cert.sigma[i].size() != px.size()) return false;
    std::vector<char> hit(py.size(), 0);
    for (size_t j = 0; j < px.size(); ++j) {
      const int img = cert.sigma[i][j];
      if (img < 0 || img >= static_cast<int>(py.size()) || hit[img]) return false;
      hit[img] = 1;
      if (py[img].level != px[j].level - cert.shift[i]) return false;
    }
  }
  // witness recombination
  const auto& gens = x.base.lattice().generators();
  if (cert.lattice_witness.size() != gens.size()) return false;
  std::vector<long long> acc(n, 0);
  for (size_t j = 0; j < gens.size(); ++j)
    for (size_t i = 0; i < n; ++i) acc[i] += cert.lattice_witness[j] * gens[j][i];
  return acc == cert.shift;
}

// Decision up to a symmetry of the marked base: tries each listed point
// permutation (identity first) composed with the over-base test.
struct FiberwiseDecision {
  std::optional<std::vector<int>> permutation;
  std::optional<CylIsoCertificate> certificate;
  std::optional<CylFailReason> reason;  // from the identity attempt

  bool ok() const { return certificate.has_value(); }
};

inline FiberwiseDecision cylinders_isomorphic_fiberwise(const GraphDivisor& x,
                                                        const GraphDivisor& y) {
  if (!(x.base == y.base))
    throw std::invalid_argument("cylinder decision needs a common marked base");
  FiberwiseDecision out;
  for (const auto& perm : x.base.base_autos()) {
    // compare x over point i with y over the permuted point
    std::vector<RootedTree> permuted;
    permuted.reserve(y.trees.size());
    for (size_t i = 0; i < y.trees.size(); ++i) permuted.push_back(y.trees[perm[i]]);
    GraphDivisor yp(y.base, std::move(permuted));
    CylDecision d = cylinders_isomorphic_over_B(x, yp);
    if (!out.reason && d.reason) out.reason = d.reason;  // identity comes first
    if (d.ok()) {
      out.permutation = perm;
      out.certificate = std::move(d.certificate);
      out.reason.reset();
      return out;
    }
  }
  return out;
}

// --- divisor surgeries ----------------------------------------------------

// Effective integral divisor of chain lengths to insert below each root.
struct StretchSpec {
  std::vector<long long> amounts;
  bool principal = false;  // if set, the amounts are required to be principal

  void validate(const BaseCurve& base) const {
    if (amounts.size() != base.n())
      throw std::invalid_argument("stretch amounts do not match the marked points");
    for (long long a : amounts)
      if (a < 0) throw std::invalid_argument("stretch amounts must be non-negative");
    if (principal && !is_principal(amounts, base))
      throw std::invalid_argument("stretch flagged principal but amounts are not");
  }
};

// New root with a chain of `a` fresh vertices ending at the old root; every
// old vertex moves up by a levels. Old ids survive with a prime appended
// when they collide with the fresh chain's ids.
inline RootedTree stretch_tree(const RootedTree& t, long long a) {
  if (a < 0) throw std::invalid_argument("negative stretch amount");
  if (a == 0) return t;
  const int offset = static_cast<int>(a);
  std::vector<int> par(offset + t.size());
  std::vector<std::string> ids(offset + t.size());
  for (int k = 0; k < offset; ++k) {
    par[k] = k - 1;
    ids[k] = "s" + std::to_string(k);
  }
  std::set<std::string> used(ids.begin(), ids.begin() + offset);
  for (int v = 0; v < t.size(); ++v) {
    par[offset + v] = t.parent(v) == -1 ? offset - 1 : offset + t.parent(v);
    std::string id = t.id(v);
    while (used.count(id)) id += "'";
    used.insert(id);
    ids[offset + v] = std::move(id);
  }
  return RootedTree(std::move(par), std::move(ids));
}

inline GraphDivisor stretch(const GraphDivisor& d, const StretchSpec& s) {
  s.validate(d.base);
  std::vector<RootedTree> trees;
  trees.reserve(d.trees.size());
  for (size_t i = 0; i < d.trees.size(); ++i)
    trees.push_back(stretch_tree(d.trees[i], s.amounts[i]));
  return GraphDivisor(d.base, std::move(trees));
}

// Verifies that stretching shifts the type divisor by the amounts,
// elementwise on the sorted level multisets.
inline bool stretch_type_law_check(const GraphDivisor& d, const StretchSpec& s) {
  s.validate(d.base);
  const TypeDivisor before = type_divisor(d);
  const TypeDivisor after = type_divisor(stretch(d, s));
  if (after.levels.size() != before.levels.size()) return false;
  for (size_t i = 0; i < before.levels.size(); ++i) {
    if (after.levels[i].size() != before.levels[i].size()) return false;
    for (size_t j = 0; j < before.levels[i].size(); ++j)
      if (after.levels[i][j] != before.levels[i][j] + s.amounts[i]) return false;
  }
  return true;
}

// Replaces every tree by the bush of its type (same type divisor).
inline GraphDivisor bushify(const GraphDivisor& d) {
  std::vector<RootedTree> trees;
  trees.reserve(d.trees.size());
  for (const auto& t : d.trees) trees.push_back(bush_of_type(tree_type(t)));
  return GraphDivisor(d.base, std::move(trees));
}

// --- canonical invariant ----------------------------------------------------

// Complete invariant for the over-base cylinder equivalence: the vector of
// per-point minimum levels is replaced by its canonical residue modulo the
// principal lattice, and the compensating shift is applied to every level
// multiset. Records compare equal iff the decision succeeds.
struct CanonicalCylinderRecord {
  std::vector<long long> residue;             // canonical minimum-level vector
  std::vector<std::vector<long long>> levels;  // shifted multisets, ascending

  bool operator==(const CanonicalCylinderRecord&) const = default;
};

inline CanonicalCylinderRecord cylinder_canonical_invariant(const GraphDivisor& d) {
  const TypeDivisor td = type_divisor(d);
  const size_t n = d.base.n();
  std::vector<long long> mins(n, 0);
  for (size_t i = 0; i < n; ++i)
    mins[i] = td.levels[i].empty() ? 0 : td.levels[i].front();
  CanonicalCylinderRecord rec;
  rec.residue = d.base.lattice().reduce(mins);
  rec.levels.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const long long delta = mins[i] - rec.residue[i];
    for (int l : td.levels[i]) rec.levels[i].push_back(l - delta);
  }
  return rec;
}

}  // namespace gdf
