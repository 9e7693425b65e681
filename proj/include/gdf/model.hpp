#pragma once

// Accompanying sequences of bushes, their explicit surface equations, and
// the one-level spring extension. Every root is a rational, so the whole
// layer is exact; the fiber structure of a sequence is verified through
// the vanishing pattern of the r's, squarefreeness, and degree bookkeeping.

#include <gdf/poly.hpp>
#include <gdf/tree.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gdf {

// p[i-1] holds p_{i} = prod over branches of length >= i of (u - alpha),
// r[i-1] holds r_i = p_1 / p_i, and roots lists (alpha, branch length) in
// the order the roots were assigned: branches sorted by decreasing length,
// ties by input order.
struct AccompanyingSequence {
  int m = 0;
  std::vector<RatPoly> p;
  std::vector<RatPoly> r;
  std::vector<std::pair<Rat, int>> roots;
};

struct FiberReport {
  struct Entry {
    std::string check;
    bool pass;
    std::string detail;
  };
  std::vector<Entry> entries;

  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
  const Entry* first_failure() const {
    for (const auto& e : entries)
      if (!e.pass) return &e;
    return nullptr;
  }
};

// Soft verification: every defect is a report entry, nothing throws. Used
// both as the fiber-structure certificate for good sequences and as the
// validator for hand-built ones.
inline FiberReport verify_fiber_structure(const AccompanyingSequence& seq) {
  FiberReport rep;
  auto entry = [&](std::string check, bool pass, std::string detail = "") {
    rep.entries.push_back({std::move(check), pass, std::move(detail)});
  };

  bool shape = seq.m >= 1 && seq.p.size() == static_cast<size_t>(seq.m) &&
               seq.r.size() == static_cast<size_t>(seq.m) && !seq.roots.empty();
  if (shape) {
    for (const auto& q : seq.p) shape = shape && q.var() == seq.p[0].var();
    for (const auto& q : seq.r) shape = shape && q.var() == seq.p[0].var();
  }
  entry("shape", shape, shape ? "" : "sizes or variable tags are inconsistent");
  if (!shape) return rep;

  std::set<Rat> seen;
  bool roots_ok = true;
  for (const auto& [a, l] : seq.roots) {
    roots_ok = roots_ok && seen.insert(a).second && l >= 1 && l <= seq.m;
  }
  entry("roots-distinct", roots_ok);

  entry("r1-is-one", seq.r[0].is_one());
  for (int i = 1; i <= seq.m; ++i) {
    const auto& pi = seq.p[i - 1];
    entry("p" + std::to_string(i) + "-monic", pi.is_monic());
    entry("p" + std::to_string(i) + "-squarefree", !pi.is_zero() && pi.is_squarefree());
    entry("r" + std::to_string(i) + "*p" + std::to_string(i) + "=p1",
          seq.r[i - 1] * pi == seq.p[0]);
    if (i < seq.m)
      entry("r" + std::to_string(i) + "|r" + std::to_string(i + 1),
            divides(seq.r[i - 1], seq.r[i]));
  }

  // degree bookkeeping against the recorded branch lengths
  bool degrees_ok = true;
  for (int i = 1; i <= seq.m; ++i) {
    int branches = 0;
    for (const auto& [a, l] : seq.roots)
      if (l >= i) ++branches;
    degrees_ok = degrees_ok && seq.p[i - 1].degree() == branches;
  }
  entry("degree-bookkeeping", degrees_ok);
  entry("height-realized", seq.p[seq.m - 1].degree() >= 1);
  entry("p1-matches-roots", [&] {
    std::vector<Rat> as;
    for (const auto& [a, l] : seq.roots) as.push_back(a);
    return RatPoly::from_roots(as, seq.p[0].var()) == seq.p[0];
  }());

  // vanishing pattern at every root: p_i(a) = 0 exactly for i <= l, and
  // r_i(a) = 0 exactly for i > l
  for (const auto& [a, l] : seq.roots) {
    bool ok = true;
    for (int i = 1; i <= seq.m; ++i) {
      const bool pz = seq.p[i - 1].evaluate(a) == 0;
      const bool rz = seq.r[i - 1].evaluate(a) == 0;
      ok = ok && pz == (i <= l) && rz == (i > l);
    }
    entry("vanishing-at-" + rat_str(a), ok);
  }
  return rep;
}

inline void validate_sequence(const AccompanyingSequence& seq) {
  const FiberReport rep = verify_fiber_structure(seq);
  if (const auto* f = rep.first_failure())
    throw std::invalid_argument("invalid accompanying sequence: " + f->check +
                                (f->detail.empty() ? "" : " (" + f->detail + ")"));
}

// Branches of a bush in canonical order: (start vertex, length), sorted by
// decreasing length, ties by root-child order.
namespace detail {
inline std::vector<std::pair<int, int>> bush_branches(const RootedTree& t) {
  std::vector<std::pair<int, int>> out;
  for (int c : t.children(t.root())) {
    int v = c, l = 1;
    while (!t.children(v).empty()) {
      v = t.children(v).front();
      ++l;
    }
    out.push_back({c, l});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}
}  // namespace detail

// Roots are assigned to branches in canonical order; by default the branch
// with canonical index k gets root k.
inline AccompanyingSequence accompanying_sequence(const RootedTree& t,
                                                  const std::vector<Rat>& roots = {}) {
  if (!is_bush(t)) throw std::invalid_argument("accompanying sequence needs a bush");
  if (t.height() < 1) throw std::invalid_argument("accompanying sequence needs height >= 1");
  const auto branches = detail::bush_branches(t);
  std::vector<Rat> assigned;
  if (roots.empty()) {
    for (size_t k = 0; k < branches.size(); ++k) assigned.push_back(Rat(static_cast<long>(k)));
  } else {
    if (roots.size() != branches.size())
      throw std::invalid_argument("expected one root per branch");
    assigned = roots;
  }
  std::set<Rat> seen(assigned.begin(), assigned.end());
  if (seen.size() != assigned.size()) throw std::invalid_argument("duplicate branch roots");

  AccompanyingSequence seq;
  seq.m = t.height();
  for (size_t k = 0; k < branches.size(); ++k)
    seq.roots.push_back({assigned[k], branches[k].second});
  for (int i = 1; i <= seq.m; ++i) {
    std::vector<Rat> as;
    for (const auto& [a, l] : seq.roots)
      if (l >= i) as.push_back(a);
    seq.p.push_back(RatPoly::from_roots(as));
  }
  for (int i = 1; i <= seq.m; ++i) seq.r.push_back(exact_divide(seq.p[0], seq.p[i - 1]));
  return seq;
}

// Largest l with p_1(alpha) = ... = p_l(alpha) = 0, cross-checked against
// the vanishing pattern of the r's.
inline int branch_length(const AccompanyingSequence& seq, const Rat& alpha) {
  if (seq.m < 1 || seq.p.empty() || seq.p[0].evaluate(alpha) != 0)
    throw std::invalid_argument("not a root of p1: " + rat_str(alpha));
  int l = 0;
  while (l < seq.m && seq.p[l].evaluate(alpha) == 0) ++l;
  for (int i = 1; i <= seq.m; ++i) {
    const bool rz = seq.r[i - 1].evaluate(alpha) == 0;
    if (rz != (i > l))
      throw std::invalid_argument("sequence violates its own vanishing pattern at " +
                                  rat_str(alpha));
  }
  return l;
}

// Bush with one branch per root of p_1; the count of length-i branches is
// deg p_i - deg p_{i+1}.
inline RootedTree tree_from_sequence(const AccompanyingSequence& seq) {
  validate_sequence(seq);
  std::vector<int> counts(seq.m + 1, 0);
  for (int i = 1; i < seq.m; ++i) counts[i] = seq.p[i - 1].degree() - seq.p[i].degree();
  counts[seq.m] = seq.p[seq.m - 1].degree();
  return bush_of_type(TreeType{counts});
}

struct SurfaceModel {
  std::vector<std::string> vars;
  std::vector<MultiPoly> equations;
  std::vector<std::string> display;
};

namespace detail {
inline std::string wrap(const std::string& s) {
  return s.find(' ') == std::string::npos ? s : "(" + s + ")";
}
}  // namespace detail

// Defining equations z*t1 - p_1(u) and z*t_i - r_i(u)*t_{i-1} for
// i = 2..levels, in variables (z, u, t1..t_levels).
inline SurfaceModel surface_equations(const AccompanyingSequence& seq, int levels = -1) {
  validate_sequence(seq);
  const int j = levels < 0 ? seq.m : levels;
  if (j < 1 || j > seq.m) throw std::invalid_argument("level out of range");

  SurfaceModel model;
  model.vars = {"z", "u"};
  for (int i = 1; i <= j; ++i) model.vars.push_back("t" + std::to_string(i));
  const size_t ar = model.vars.size();
  const MultiPoly z = MultiPoly::variable(ar, 0);
  auto t = [&](int i) { return MultiPoly::variable(ar, 1 + i); };

  model.equations.push_back(z * t(1) - MultiPoly::from_univariate(seq.p[0], ar, 1));
  model.display.push_back("z*t1 - " + detail::wrap(seq.p[0].str()));
  for (int i = 2; i <= j; ++i) {
    const RatPoly& ri = seq.r[i - 1];
    model.equations.push_back(z * t(i) - MultiPoly::from_univariate(ri, ar, 1) * t(i - 1));
    std::string rhs = ri.is_one() ? "" : detail::wrap(ri.str()) + "*";
    model.display.push_back("z*t" + std::to_string(i) + " - " + rhs + "t" +
                            std::to_string(i - 1));
  }
  return model;
}

// One-equation model z^m*t - p(u) together with the uniform bush it
// resolves to: deg p branches, each of length m.
struct DanielewskiModel {
  SurfaceModel model;
  RootedTree tree;
};

inline DanielewskiModel danielewski_model(const std::vector<Rat>& roots, int m) {
  if (m < 1) throw std::invalid_argument("exponent must be positive");
  if (roots.empty()) throw std::invalid_argument("need at least one root");
  std::set<Rat> seen(roots.begin(), roots.end());
  if (seen.size() != roots.size()) throw std::invalid_argument("duplicate roots");
  const RatPoly p = RatPoly::from_roots(roots);

  SurfaceModel model;
  model.vars = {"z", "u", "t"};
  MultiPoly lead = MultiPoly::monomial(3, Rat(1), {m, 0, 1});
  model.equations.push_back(lead - MultiPoly::from_univariate(p, 3, 1));
  model.display.push_back((m == 1 ? std::string("z*t") : "z^" + std::to_string(m) + "*t") +
                          " - " + detail::wrap(p.str()));

  std::vector<int> counts(m + 1, 0);
  counts[m] = static_cast<int>(roots.size());
  return {std::move(model), bush_of_type(TreeType{counts})};
}

// --- spring extension -------------------------------------------------------

// Data of the one-level extension of a bush: per-branch top-leaf counts
// n(alpha) (a branch with no top leaves counts once, with q_alpha = v),
// the top product p_top with r_top = p_1/p_top, and the bivariate
// q(u, v) = sum over roots of q_alpha(v) * p_1(u)/(u - alpha).
struct SpringData {
  AccompanyingSequence seq;
  RatPoly p_top;
  RatPoly r_top;
  std::vector<long long> top_leaves;  // raw counts, parallel to seq.roots
  std::vector<long long> counts;      // effective n(alpha) >= 1
  std::vector<RatPoly> q_alpha;       // in v, parallel to seq.roots
  MultiPoly q = MultiPoly(2);         // in (u, v)
  long long big_n = 0;                // sum of effective counts
};

namespace detail {
// (truncation branch length, top-leaf count) per root child of a spring
// bush, in root-child order.
inline std::vector<std::pair<int, long long>> spring_branches(const RootedTree& t) {
  const int h = t.height();
  std::vector<std::pair<int, long long>> out;
  for (int c : t.children(t.root())) {
    int v = c;
    while (true) {
      int next = -1;
      for (int w : t.children(v))
        if (t.level(w) <= h - 1) {
          next = w;
          break;
        }
      if (next == -1) break;
      v = next;
    }
    out.push_back({t.level(v), static_cast<long long>(t.children(v).size())});
  }
  return out;
}
}  // namespace detail

// Default count assignment: within each branch-length group the roots, in
// sequence order, receive the realized top-leaf counts sorted descending.
inline std::map<Rat, long long> default_spring_counts(const RootedTree& spring,
                                                      const AccompanyingSequence& seq) {
  if (!is_spring_bush(spring)) throw std::invalid_argument("not a spring bush");
  std::map<int, std::vector<long long>> by_length;
  for (const auto& [l, tops] : detail::spring_branches(spring)) by_length[l].push_back(tops);
  for (auto& [l, tops] : by_length) std::sort(tops.begin(), tops.end(), std::greater<>());

  std::map<int, size_t> used;
  std::map<Rat, long long> out;
  for (const auto& [a, l] : seq.roots) {
    auto it = by_length.find(l);
    if (it == by_length.end() || used[l] >= it->second.size())
      throw std::invalid_argument("sequence does not match the spring bush truncation");
    out[a] = it->second[used[l]++];
  }
  for (const auto& [l, tops] : by_length)
    if (used[l] != tops.size())
      throw std::invalid_argument("sequence does not match the spring bush truncation");
  return out;
}

inline SpringData spring_q(const RootedTree& spring, const AccompanyingSequence& seq,
                           const std::map<Rat, long long>& leaf_counts,
                           const std::map<Rat, RatPoly>& q_override = {}) {
  if (!is_spring_bush(spring)) throw std::invalid_argument("not a spring bush");
  validate_sequence(seq);
  if (spring.height() != seq.m + 1)
    throw std::invalid_argument("sequence height must be one below the spring bush");
  if (!trees_isomorphic(tree_from_sequence(seq), truncate(spring, seq.m)))
    throw std::invalid_argument("sequence does not describe the spring bush truncation");

  // declared counts must realize the spring: per length group, the declared
  // multiset equals the realized one
  std::map<int, std::multiset<long long>> actual, declared;
  for (const auto& [l, tops] : detail::spring_branches(spring)) actual[l].insert(tops);
  if (leaf_counts.size() != seq.roots.size())
    throw std::invalid_argument("expected one leaf count per root");
  for (const auto& [a, l] : seq.roots) {
    auto it = leaf_counts.find(a);
    if (it == leaf_counts.end())
      throw std::invalid_argument("missing leaf count for root " + rat_str(a));
    if (it->second < 0) throw std::invalid_argument("negative leaf count");
    declared[l].insert(it->second);
  }
  if (declared != actual)
    throw std::invalid_argument("leaf counts do not match the spring bush");

  SpringData sd;
  sd.seq = seq;
  std::vector<Rat> top_roots;
  for (const auto& [a, l] : seq.roots) {
    const long long raw = leaf_counts.at(a);
    const long long n = raw == 0 ? 1 : raw;
    sd.top_leaves.push_back(raw);
    sd.counts.push_back(n);
    sd.big_n += n;
    if (raw > 0) top_roots.push_back(a);

    RatPoly qa = RatPoly::zero("v");
    if (auto it = q_override.find(a); it != q_override.end()) {
      qa = it->second;
      if (qa.var() != "v") throw std::invalid_argument("q_alpha must be a polynomial in v");
      if (!qa.is_monic() || qa.degree() != n || !qa.is_squarefree())
        throw std::invalid_argument("q_alpha must be monic of degree n(alpha) with simple roots");
      if (n == 1 && !(qa == RatPoly::variable("v")))
        throw std::invalid_argument("q_alpha is fixed to v when n(alpha) = 1");
    } else {
      std::vector<Rat> ks;
      for (long long k = 0; k < n; ++k) ks.push_back(Rat(static_cast<long>(k)));
      qa = RatPoly::from_roots(ks, "v");
    }
    sd.q_alpha.push_back(std::move(qa));
  }

  sd.p_top = RatPoly::from_roots(top_roots);
  sd.r_top = exact_divide(seq.p[0], sd.p_top);
  for (size_t k = 0; k < seq.roots.size(); ++k) {
    const RatPoly cof = exact_divide(seq.p[0], RatPoly::linear(seq.roots[k].first));
    sd.q = sd.q + MultiPoly::from_univariate(sd.q_alpha[k], 2, 1) *
                      MultiPoly::from_univariate(cof, 2, 0);
  }
  return sd;
}

inline SpringData spring_q(const RootedTree& spring, const AccompanyingSequence& seq) {
  return spring_q(spring, seq, default_spring_counts(spring, seq));
}

// Center counts per level: N_i = sum over branches whose top point sits at
// level >= i+1 of n(alpha), for i = 0..m. The top point of a branch is the
// top level m+1 when the branch carries top leaves and its truncation
// length otherwise.
inline std::vector<long long> spring_level_counts(const SpringData& sd) {
  std::vector<long long> out(sd.seq.m + 1, 0);
  for (size_t k = 0; k < sd.seq.roots.size(); ++k) {
    const int top = sd.top_leaves[k] > 0 ? sd.seq.m + 1 : sd.seq.roots[k].second;
    for (int i = 0; i <= sd.seq.m && i + 1 <= top; ++i) out[i] += sd.counts[k];
  }
  return out;
}

// Equations of the truncation model plus z*w - q(u, v), over the variables
// extended by (v, w).
inline SurfaceModel spring_model(const SpringData& sd) {
  SurfaceModel base = surface_equations(sd.seq);
  SurfaceModel model;
  model.vars = base.vars;
  model.vars.push_back("v");
  model.vars.push_back("w");
  const size_t ar = model.vars.size();
  for (const auto& eq : base.equations) model.equations.push_back(eq.padded(ar));
  model.display = base.display;

  // q lifted to the full variable set: u is slot 1, v is slot ar-2
  MultiPoly q_full(ar);
  for (const auto& [e, c] : sd.q.terms()) {
    std::vector<int> exps(ar, 0);
    exps[1] = e[0];
    exps[ar - 2] = e[1];
    q_full = q_full + MultiPoly::monomial(ar, c, std::move(exps));
  }
  model.equations.push_back(MultiPoly::variable(ar, 0) * MultiPoly::variable(ar, ar - 1) -
                            q_full);
  model.display.push_back("z*w - " + detail::wrap(sd.q.str({"u", "v"})));
  return model;
}

}  // namespace gdf
