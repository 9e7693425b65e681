#pragma once

// Marked base curves and graph divisors: a smooth affine curve with n marked
// points, the lattice of principal integral divisors supported on them, and
// one fiber tree per point. Quotient bookkeeping (marked fiber components
// with levels), type divisors, and linear equivalence by forced constant
// shifts live here.

#include <gdf/lattice.hpp>
#include <gdf/tree.hpp>

#include <algorithm>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gdf {

// Pushforward of a divisor supported on the marked points along a point
// permutation given by images: point i goes to point perm[i].
template <typename T>
std::vector<T> push_divisor(const std::vector<int>& perm, const std::vector<T>& d) {
  std::vector<T> out(d.size());
  for (size_t i = 0; i < d.size(); ++i) out.at(perm.at(i)) = d[i];
  return out;
}

class BaseCurve {
 public:
  BaseCurve(std::vector<std::string> points,
            std::vector<std::vector<long long>> principal_lattice,
            std::vector<std::vector<int>> base_autos = {}, bool units_trivial = true)
      : points_(std::move(points)),
        lattice_(std::make_shared<IntLattice>(points_.size(), std::move(principal_lattice))),
        base_autos_(std::move(base_autos)),
        units_trivial_(units_trivial) {
    if (points_.empty()) throw std::invalid_argument("base curve needs at least one marked point");
    for (size_t i = 0; i < points_.size(); ++i) {
      if (points_[i].empty()) throw std::invalid_argument("empty point label");
      for (size_t j = i + 1; j < points_.size(); ++j)
        if (points_[i] == points_[j])
          throw std::invalid_argument("duplicate point label: " + points_[i]);
    }
    std::vector<int> identity(points_.size());
    for (size_t i = 0; i < identity.size(); ++i) identity[i] = static_cast<int>(i);
    if (std::find(base_autos_.begin(), base_autos_.end(), identity) == base_autos_.end())
      base_autos_.insert(base_autos_.begin(), identity);
    for (const auto& perm : base_autos_) {
      if (perm.size() != points_.size())
        throw std::invalid_argument("base automorphism has wrong length");
      std::vector<char> hit(points_.size(), 0);
      for (int img : perm) {
        if (img < 0 || img >= static_cast<int>(points_.size()) || hit[img])
          throw std::invalid_argument("base automorphism is not a permutation");
        hit[img] = 1;
      }
      // permuting marked points must preserve principality
      for (const auto& g : lattice_->generators())
        if (!lattice_->contains(push_divisor(perm, g)))
          throw std::invalid_argument("base automorphism does not preserve the principal lattice");
    }
  }

  // Marked affine line: every integral divisor on the points is principal.
  static BaseCurve affine_line(std::vector<std::string> points) {
    const size_t n = points.size();
    std::vector<std::vector<long long>> gens(n, std::vector<long long>(n, 0));
    for (size_t i = 0; i < n; ++i) gens[i][i] = 1;
    return BaseCurve(std::move(points), std::move(gens));
  }

  static BaseCurve affine_line(size_t n) { return affine_line(default_labels(n)); }

  // No nonzero principal divisor is supported on the marked points.
  static BaseCurve rigid(std::vector<std::string> points) {
    return BaseCurve(std::move(points), {});
  }

  static BaseCurve rigid(size_t n) { return rigid(default_labels(n)); }

  static std::vector<std::string> default_labels(size_t n) {
    std::vector<std::string> points;
    for (size_t i = 0; i < n; ++i) points.push_back("b" + std::to_string(i + 1));
    return points;
  }

  size_t n() const { return points_.size(); }
  const std::vector<std::string>& points() const { return points_; }
  const IntLattice& lattice() const { return *lattice_; }
  const std::vector<std::vector<int>>& base_autos() const { return base_autos_; }
  bool units_trivial() const { return units_trivial_; }

  bool operator==(const BaseCurve& o) const {
    return points_ == o.points_ && lattice_->generators() == o.lattice_->generators() &&
           base_autos_ == o.base_autos_ && units_trivial_ == o.units_trivial_;
  }

 private:
  std::vector<std::string> points_;
  std::shared_ptr<IntLattice> lattice_;  // shared: copies of the curve reuse the normal form
  std::vector<std::vector<int>> base_autos_;
  bool units_trivial_;
};

struct GraphDivisor {
  BaseCurve base;
  std::vector<RootedTree> trees;  // one per marked point

  GraphDivisor(BaseCurve b, std::vector<RootedTree> ts)
      : base(std::move(b)), trees(std::move(ts)) {
    if (trees.size() != base.n())
      throw std::invalid_argument("graph divisor needs one tree per marked point");
  }
};

// Marked points of the quotient over one base point: one per fiber
// component, i.e. one per leaf (the root for a trivial fiber), in vertex
// order, each carrying its level.
struct QuotientPoint {
  int vertex;
  int level;

  bool operator==(const QuotientPoint&) const = default;
};

struct DFQuotient {
  std::vector<std::vector<QuotientPoint>> points;  // per base point
};

inline std::vector<QuotientPoint> quotient_points(const RootedTree& t) {
  if (t.size() == 1) return {QuotientPoint{t.root(), 0}};
  std::vector<QuotientPoint> out;
  out.reserve(t.leaves().size());
  for (int v : t.leaves()) out.push_back(QuotientPoint{v, t.level(v)});
  return out;
}

inline DFQuotient df_quotient(const GraphDivisor& d) {
  DFQuotient q;
  q.points.reserve(d.trees.size());
  for (const auto& t : d.trees) q.points.push_back(quotient_points(t));
  return q;
}

// Level multisets of the quotient points, sorted ascending per base point.
// The associated divisor is anti-effective (coefficient -level at each
// quotient point); levels are stored positive.
struct TypeDivisor {
  std::vector<std::vector<int>> levels;

  bool operator==(const TypeDivisor&) const = default;
};

inline TypeDivisor type_divisor(const GraphDivisor& d) {
  TypeDivisor td;
  td.levels.reserve(d.trees.size());
  for (const auto& t : d.trees) td.levels.push_back(leaf_levels(t));
  return td;
}

// rank Pic(quotient) - rank Pic(base): one free summand per extra marked
// point over each base point.
inline int pic_rank_excess(const GraphDivisor& d) {
  int rho = 0;
  for (const auto& t : d.trees)
    rho += static_cast<int>(quotient_points(t).size()) - 1;
  return rho;
}

inline bool is_chain_divisor(const GraphDivisor& d) {
  for (const auto& t : d.trees)
    if (!is_chain(t)) return false;
  return true;
}

inline bool is_principal(const std::vector<long long>& div, const BaseCurve& base) {
  return base.lattice().contains(div);
}

inline std::optional<std::vector<long long>> principal_witness(
    const std::vector<long long>& div, const BaseCurve& base) {
  return base.lattice().decompose(div);
}

// The unique shift candidate c with second = first - c per point (sorted
// multisets), if the difference is constant and c is principal. Throws if
// the two type divisors live over different point counts.
inline std::optional<std::vector<long long>> linear_equivalent(const TypeDivisor& a,
                                                               const TypeDivisor& b,
                                                               const BaseCurve& base) {
  if (a.levels.size() != b.levels.size() || a.levels.size() != base.n())
    throw std::invalid_argument("type divisors over different point sets");
  std::vector<long long> c(base.n(), 0);
  for (size_t i = 0; i < base.n(); ++i) {
    if (a.levels[i].size() != b.levels[i].size()) return std::nullopt;
    if (a.levels[i].empty()) continue;
    const long long diff = static_cast<long long>(a.levels[i][0]) - b.levels[i][0];
    for (size_t j = 0; j < a.levels[i].size(); ++j)
      if (static_cast<long long>(a.levels[i][j]) - b.levels[i][j] != diff)
        return std::nullopt;
    c[i] = diff;
  }
  if (!is_principal(c, base)) return std::nullopt;
  return c;
}

}  // namespace gdf
