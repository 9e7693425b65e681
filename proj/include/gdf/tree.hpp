#pragma once

// Rooted trees attached to the fibers of an A^1-fibration, with the
// combinatorics the rest of the library runs on: levels, types, truncation,
// bush/chain predicates, canonical codes, isomorphism and automorphism
// machinery (exact orders, generators, lazy enumeration).

#include <gmpxx.h>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gdf {

// Vertices are dense indices 0..n-1 with a parent pointer each (-1 at the
// root) plus a unique string id for serialization. Immutable once built; all
// derived structure (children, levels, leaves) is computed on construction.
class RootedTree {
 public:
  explicit RootedTree(std::vector<int> parent, std::vector<std::string> ids = {})
      : parent_(std::move(parent)), id_(std::move(ids)) {
    const int n = static_cast<int>(parent_.size());
    if (n == 0) throw std::invalid_argument("tree must have at least one vertex");
    if (id_.empty()) {
      id_.reserve(n);
      for (int v = 0; v < n; ++v) id_.push_back(std::to_string(v));
    }
    if (static_cast<int>(id_.size()) != n)
      throw std::invalid_argument("vertex id list does not match vertex count");
    {
      std::map<std::string, int> seen;
      for (int v = 0; v < n; ++v) {
        if (id_[v].empty()) throw std::invalid_argument("empty vertex id");
        if (!seen.emplace(id_[v], v).second)
          throw std::invalid_argument("duplicate vertex id: " + id_[v]);
      }
    }
    children_.assign(n, {});
    for (int v = 0; v < n; ++v) {
      if (parent_[v] == -1) {
        if (root_ != -1) throw std::invalid_argument("more than one root");
        root_ = v;
      } else if (parent_[v] < 0 || parent_[v] >= n) {
        throw std::invalid_argument("parent index out of range");
      } else {
        children_[parent_[v]].push_back(v);
      }
    }
    if (root_ == -1) throw std::invalid_argument("no root vertex");
    level_.assign(n, -1);
    level_[root_] = 0;
    std::vector<int> stack{root_};
    int visited = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      height_ = std::max(height_, level_[v]);
      for (int w : children_[v]) {
        level_[w] = level_[v] + 1;
        ++visited;
        stack.push_back(w);
      }
    }
    if (visited != n)
      throw std::invalid_argument("parent pointers contain a cycle or disconnected vertex");
    for (int v = 0; v < n; ++v)
      if (v != root_ && children_[v].empty()) leaves_.push_back(v);
  }

  static RootedTree single() { return RootedTree(std::vector<int>{-1}); }

  // Root plus `length` vertices forming a path; height == length.
  static RootedTree chain(int length) {
    if (length < 0) throw std::invalid_argument("negative chain length");
    std::vector<int> par(length + 1);
    for (int v = 0; v <= length; ++v) par[v] = v - 1;
    return RootedTree(std::move(par));
  }

  int size() const { return static_cast<int>(parent_.size()); }
  int root() const { return root_; }
  int parent(int v) const { return parent_.at(v); }
  const std::vector<int>& children(int v) const { return children_.at(v); }
  int level(int v) const { return level_.at(v); }
  int height() const { return height_; }
  int num_edges() const { return size() - 1; }
  bool is_leaf(int v) const { return v != root_ && children_.at(v).empty(); }
  // Extremal vertices other than the root, ascending vertex index.
  const std::vector<int>& leaves() const { return leaves_; }
  const std::string& id(int v) const { return id_.at(v); }
  const std::vector<std::string>& ids() const { return id_; }
  int index_of(const std::string& id) const {
    for (int v = 0; v < size(); ++v)
      if (id_[v] == id) return v;
    return -1;
  }
  const std::vector<int>& parents() const { return parent_; }

  bool same_shape(const RootedTree& o) const {
    return parent_ == o.parent_;  // identical indexing, ids ignored
  }

 private:
  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
  std::vector<int> level_;
  std::vector<std::string> id_;
  std::vector<int> leaves_;
  int root_ = -1;
  int height_ = 0;
};

// Leaf counts by level: counts[i] = number of leaves at level i. The
// one-vertex tree is (1) by convention (its only vertex stands in for the
// sole fiber component); every tree of height >= 1 has counts[0] == 0 and
// counts.back() >= 1.
struct TreeType {
  std::vector<int> counts;

  bool operator==(const TreeType&) const = default;
  int height() const { return static_cast<int>(counts.size()) - 1; }
  int leaf_total() const {
    int s = 0;
    for (int c : counts) s += c;
    return s;
  }
  bool is_chain_type() const {
    if (counts.size() == 1) return counts[0] == 1;
    for (size_t i = 0; i + 1 < counts.size(); ++i)
      if (counts[i] != 0) return false;
    return counts.back() == 1;
  }

  void validate() const {
    if (counts.empty()) throw std::invalid_argument("empty tree type");
    for (int c : counts)
      if (c < 0) throw std::invalid_argument("negative count in tree type");
    if (counts.size() == 1) {
      if (counts[0] != 1)
        throw std::invalid_argument("height-0 type must be (1): " + str());
    } else {
      if (counts[0] != 0)
        throw std::invalid_argument("type of positive height must start with 0: " + str());
      if (counts.back() < 1)
        throw std::invalid_argument("top level of a tree type needs at least one leaf: " + str());
    }
  }

  std::string str() const {
    std::string out = "(";
    for (size_t i = 0; i < counts.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(counts[i]);
    }
    return out + ")";
  }

  // Accepts "0,2,1,2" or "(0,2,1,2)".
  static TreeType parse(const std::string& text) {
    std::string s = text;
    if (!s.empty() && s.front() == '(') s = s.substr(1);
    if (!s.empty() && s.back() == ')') s.pop_back();
    TreeType tt;
    std::string cur;
    auto flush = [&] {
      if (cur.empty()) throw std::invalid_argument("malformed tree type: " + text);
      tt.counts.push_back(std::stoi(cur));
      cur.clear();
    };
    for (char ch : s) {
      if (ch == ',') {
        flush();
      } else if (ch == ' ') {
        continue;
      } else if (ch >= '0' && ch <= '9') {
        cur += ch;
      } else {
        throw std::invalid_argument("malformed tree type: " + text);
      }
    }
    flush();
    tt.validate();
    return tt;
  }
};

inline TreeType tree_type(const RootedTree& t) {
  TreeType tt;
  if (t.size() == 1) {
    tt.counts = {1};
    return tt;
  }
  tt.counts.assign(t.height() + 1, 0);
  for (int v : t.leaves()) ++tt.counts[t.level(v)];
  return tt;
}

// Levels of the leaves, ascending. {0} for the one-vertex tree, matching the
// convention that its root stands in for the unique fiber component.
inline std::vector<int> leaf_levels(const RootedTree& t) {
  if (t.size() == 1) return {0};
  std::vector<int> ls;
  ls.reserve(t.leaves().size());
  for (int v : t.leaves()) ls.push_back(t.level(v));
  std::sort(ls.begin(), ls.end());
  return ls;
}

inline bool is_chain(const RootedTree& t) {
  for (int v = 0; v < t.size(); ++v)
    if (t.children(v).size() > 1) return false;
  return true;
}

// Bush: every branch at the root is a chain, i.e. no vertex other than the
// root has more than one child.
inline bool is_bush(const RootedTree& t) {
  for (int v = 0; v < t.size(); ++v)
    if (v != t.root() && t.children(v).size() > 1) return false;
  return true;
}

// Keeps the vertices of level <= l (ids preserved). truncate(t, h) == t.
inline RootedTree truncate(const RootedTree& t, int l) {
  if (l < 0) throw std::invalid_argument("negative truncation level");
  std::vector<int> keep(t.size(), -1);
  std::vector<int> par;
  std::vector<std::string> ids;
  int next = 0;
  for (int v = 0; v < t.size(); ++v) {
    if (t.level(v) > l) continue;
    keep[v] = next++;
    par.push_back(t.parent(v) == -1 ? -1 : keep[t.parent(v)]);
    ids.push_back(t.id(v));
  }
  return RootedTree(std::move(par), std::move(ids));
}

// Spring bush: of height h >= 1, the truncation at h-1 is a bush (with the
// same root), and every top-level leaf hangs off an extremal vertex of that
// truncation. Throws on a height-0 tree.
inline bool is_spring_bush(const RootedTree& t) {
  if (t.height() == 0)
    throw std::invalid_argument("spring bush test needs height >= 1");
  const int h = t.height();
  if (!is_bush(truncate(t, h - 1))) return false;
  for (int v : t.leaves()) {
    if (t.level(v) != h) continue;
    const int p = t.parent(v);
    // parent sits at level h-1 and must be extremal in the truncation, i.e.
    // have no children of level <= h-1
    for (int w : t.children(p))
      if (t.level(w) <= h - 1) return false;
  }
  return true;
}

// The bush with counts[i] branches that are chains of length i; unique up to
// isomorphism for its type.
inline RootedTree bush_of_type(const TreeType& tt) {
  tt.validate();
  if (tt.counts.size() == 1) return RootedTree::single();
  std::vector<int> par{-1};
  // longer branches first so default orderings downstream see them first
  for (int len = tt.height(); len >= 1; --len) {
    for (int b = 0; b < tt.counts[len]; ++b) {
      int prev = 0;
      for (int k = 0; k < len; ++k) {
        par.push_back(prev);
        prev = static_cast<int>(par.size()) - 1;
      }
    }
  }
  return RootedTree(std::move(par));
}

// Trunk v_0..v_{h-1} plus counts[i+1] leaves attached to v_i. Realizes the
// given type with every non-top leaf hanging directly off the trunk.
inline RootedTree gizatullin_tree(const TreeType& tt) {
  tt.validate();
  if (tt.counts.size() == 1)
    throw std::invalid_argument("gizatullin tree needs height >= 1");
  const int h = tt.height();
  std::vector<int> par{-1};
  std::vector<int> trunk{0};
  for (int i = 1; i < h; ++i) {
    par.push_back(trunk.back());
    trunk.push_back(static_cast<int>(par.size()) - 1);
  }
  for (int i = 0; i < h; ++i)
    for (int b = 0; b < tt.counts[i + 1]; ++b) par.push_back(trunk[i]);
  return RootedTree(std::move(par));
}

// --- canonical encoding ------------------------------------------------

// Code of the subtree at each vertex: children's codes sorted ascending and
// concatenated inside parentheses; an optional per-vertex decoration is
// folded in. Equal codes <=> isomorphic decorated subtrees.
inline std::vector<std::string> canonical_codes(const RootedTree& t,
                                                const std::vector<int>* decoration = nullptr) {
  std::vector<std::string> code(t.size());
  // process by decreasing level so children are done before parents
  std::vector<int> order(t.size());
  for (int v = 0; v < t.size(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return t.level(a) > t.level(b); });
  for (int v : order) {
    std::vector<std::string> cs;
    cs.reserve(t.children(v).size());
    for (int w : t.children(v)) cs.push_back(code[w]);
    std::sort(cs.begin(), cs.end());
    std::string s = "(";
    if (decoration) s += std::to_string((*decoration)[v]) + ":";
    for (const auto& c : cs) s += c;
    code[v] = s + ")";
  }
  return code;
}

inline std::string canonical_code(const RootedTree& t) {
  return canonical_codes(t)[t.root()];
}

// Children of v sorted by canonical code (stable: equal codes keep child
// order). This is the canonical child order used when matching children to
// configuration points.
inline std::vector<int> canonical_child_order(const RootedTree& t, int v,
                                              const std::vector<std::string>& codes) {
  std::vector<int> cs = t.children(v);
  std::stable_sort(cs.begin(), cs.end(),
                   [&](int a, int b) { return codes[a] < codes[b]; });
  return cs;
}

// --- isomorphisms -------------------------------------------------------

// Root-preserving, parent-compatible vertex bijection, stored as the image
// table of the source tree's vertices.
struct TreeIso {
  std::vector<int> map;

  bool operator==(const TreeIso&) const = default;
};

inline bool is_isomorphism(const RootedTree& a, const RootedTree& b, const TreeIso& iso) {
  if (a.size() != b.size()) return false;
  if (static_cast<int>(iso.map.size()) != a.size()) return false;
  std::vector<char> hit(b.size(), 0);
  for (int v = 0; v < a.size(); ++v) {
    const int w = iso.map[v];
    if (w < 0 || w >= b.size() || hit[w]) return false;
    hit[w] = 1;
  }
  if (iso.map[a.root()] != b.root()) return false;
  for (int v = 0; v < a.size(); ++v) {
    if (v == a.root()) continue;
    if (iso.map[a.parent(v)] != b.parent(iso.map[v])) return false;
  }
  return true;
}

// f then g.
inline TreeIso compose(const TreeIso& f, const TreeIso& g) {
  TreeIso h;
  h.map.resize(f.map.size());
  for (size_t v = 0; v < f.map.size(); ++v) h.map[v] = g.map.at(f.map[v]);
  return h;
}

inline TreeIso invert(const TreeIso& f) {
  TreeIso h;
  h.map.assign(f.map.size(), -1);
  for (size_t v = 0; v < f.map.size(); ++v) h.map.at(f.map[v]) = static_cast<int>(v);
  return h;
}

namespace detail {
inline void match_subtrees(const RootedTree& a, int va, const RootedTree& b, int vb,
                           const std::vector<std::string>& ca,
                           const std::vector<std::string>& cb, std::vector<int>& out) {
  out[va] = vb;
  const auto csa = canonical_child_order(a, va, ca);
  const auto csb = canonical_child_order(b, vb, cb);
  for (size_t k = 0; k < csa.size(); ++k)
    match_subtrees(a, csa[k], b, csb[k], ca, cb, out);
}
}  // namespace detail

// Rooted isomorphism, if one exists: equal canonical codes, with the witness
// built by pairing children in canonical order.
inline std::optional<TreeIso> tree_iso(const RootedTree& a, const RootedTree& b) {
  const auto ca = canonical_codes(a);
  const auto cb = canonical_codes(b);
  if (ca[a.root()] != cb[b.root()]) return std::nullopt;
  TreeIso iso;
  iso.map.assign(a.size(), -1);
  detail::match_subtrees(a, a.root(), b, b.root(), ca, cb, iso.map);
  return iso;
}

inline bool trees_isomorphic(const RootedTree& a, const RootedTree& b) {
  return canonical_code(a) == canonical_code(b);
}

// --- automorphism groups -------------------------------------------------

// Enumeration bound for operations that must walk automorphisms. Reads
// GDF_MAX_AUT (positive integer) or defaults to 10^6.
inline long long aut_walk_cap() {
  if (const char* env = std::getenv("GDF_MAX_AUT")) {
    const long long v = std::atoll(env);
    if (v > 0) return v;
  }
  return 1000000;
}

struct AutCapExceeded : std::runtime_error {
  explicit AutCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {
// Children of every vertex partitioned into classes of equal (decorated)
// canonical code; class members keep ascending vertex order. The
// automorphism group is the iterated product of the symmetric groups on
// these classes.
struct ChildClasses {
  // per vertex: list of classes, each a list of child vertices
  std::vector<std::vector<std::vector<int>>> classes;
  // class key per vertex, aligned with `classes` (codes of the members)
  std::vector<std::vector<std::string>> keys;

  ChildClasses(const RootedTree& t, const std::vector<std::string>& codes)
      : classes(t.size()), keys(t.size()) {
    for (int v = 0; v < t.size(); ++v) {
      std::map<std::string, std::vector<int>> by_code;
      for (int w : t.children(v)) by_code[codes[w]].push_back(w);
      for (auto& [key, members] : by_code) {
        keys[v].push_back(key);
        classes[v].push_back(members);
      }
    }
  }

  const std::vector<int>& class_at(int v, const std::string& key) const {
    for (size_t k = 0; k < keys[v].size(); ++k)
      if (keys[v][k] == key) return classes[v][k];
    throw std::logic_error("missing child class");
  }
};
}  // namespace detail

// Lazily streams the automorphisms of a (optionally decorated) rooted tree.
// Order of elements is fixed and starts at the identity. No materialization:
// the state is one permutation per nontrivial child class.
class AutEnumerator {
 public:
  explicit AutEnumerator(const RootedTree& t, std::vector<int> decoration = {})
      : tree_(&t),
        decoration_(std::move(decoration)),
        codes_(canonical_codes(t, decoration_.empty() ? nullptr : &decoration_)),
        classes_(t, codes_) {
    for (int v = 0; v < t.size(); ++v)
      for (size_t k = 0; k < classes_.classes[v].size(); ++k)
        if (classes_.classes[v][k].size() >= 2)
          slots_.push_back(Slot{v, static_cast<int>(k),
                                identity_perm(classes_.classes[v][k].size())});
    order_ = 1;
    for (const auto& s : slots_) {
      mpz_class f;
      mpz_fac_ui(f.get_mpz_t(), s.perm.size());
      order_ *= f;
    }
  }

  const mpz_class& order() const { return order_; }

  // Current element as a full vertex map of the tree.
  TreeIso current() const {
    TreeIso iso;
    iso.map.assign(tree_->size(), -1);
    assemble(tree_->root(), tree_->root(), iso.map);
    return iso;
  }

  // Advances to the next element; false once all elements have been seen.
  bool advance() {
    for (auto& s : slots_) {
      if (std::next_permutation(s.perm.begin(), s.perm.end())) return true;
      // wrapped to identity; carry to the next slot
    }
    return false;
  }

  void reset() {
    for (auto& s : slots_) std::sort(s.perm.begin(), s.perm.end());
  }

 private:
  struct Slot {
    int vertex;
    int class_index;
    std::vector<int> perm;
  };

  static std::vector<int> identity_perm(size_t n) {
    std::vector<int> p(n);
    for (size_t i = 0; i < n; ++i) p[i] = static_cast<int>(i);
    return p;
  }

  const std::vector<int>* slot_perm(int v, int k) const {
    for (const auto& s : slots_)
      if (s.vertex == v && s.class_index == k) return &s.perm;
    return nullptr;
  }

  // The image of v's subtree once v |-> w is decided: class members of v map
  // into the equally-coded class at w, permuted by the source vertex's slot.
  void assemble(int v, int w, std::vector<int>& out) const {
    out[v] = w;
    for (size_t k = 0; k < classes_.classes[v].size(); ++k) {
      const auto& src = classes_.classes[v][k];
      const auto& dst = classes_.class_at(w, classes_.keys[v][k]);
      const std::vector<int>* perm = slot_perm(v, static_cast<int>(k));
      for (size_t j = 0; j < src.size(); ++j) {
        const int img = perm ? dst[(*perm)[j]] : dst[j];
        assemble(src[j], img, out);
      }
    }
  }

  const RootedTree* tree_;
  std::vector<int> decoration_;
  std::vector<std::string> codes_;
  detail::ChildClasses classes_;
  std::vector<Slot> slots_;
  mpz_class order_;
};

// The reduced tree (all leaves and their edges removed) with index maps back
// and forth. The root always survives.
struct PrunedTree {
  RootedTree tree;
  std::vector<int> to_orig;    // pruned vertex -> original vertex
  std::vector<int> from_orig;  // original vertex -> pruned vertex or -1
};

inline PrunedTree pruned_tree(const RootedTree& t) {
  std::vector<int> keep(t.size(), -1);
  std::vector<int> par;
  std::vector<std::string> ids;
  std::vector<int> to_orig;
  int next = 0;
  for (int v = 0; v < t.size(); ++v) {
    if (t.is_leaf(v)) continue;
    keep[v] = next++;
    par.push_back(t.parent(v) == -1 ? -1 : keep[t.parent(v)]);
    ids.push_back(t.id(v));
    to_orig.push_back(v);
  }
  return PrunedTree{RootedTree(std::move(par), std::move(ids)), std::move(to_orig),
                    std::move(keep)};
}

// Decoration that makes automorphisms of the pruned tree correspond to the
// induced action of the full tree's automorphisms: the number of leaf
// children each surviving vertex had.
inline std::vector<int> leaf_count_decoration(const RootedTree& t, const PrunedTree& pr) {
  std::vector<int> dec(pr.tree.size(), 0);
  for (int v = 0; v < t.size(); ++v) {
    if (!t.is_leaf(v)) continue;
    const int p = pr.from_orig[t.parent(v)];
    ++dec[p];
  }
  return dec;
}

struct TreeAutGroup {
  std::vector<TreeIso> generators;  // on the full tree
  mpz_class order;                  // |Aut|
  mpz_class pointwise_stab_order;   // automorphisms fixing every non-leaf vertex
  mpz_class reduced_order;          // |Aut| / |stabilizer|: induced action on the pruned tree
  PrunedTree pruned;
};

inline TreeAutGroup aut_group(const RootedTree& t) {
  const auto codes = canonical_codes(t);
  detail::ChildClasses classes(t, codes);

  TreeAutGroup g{.generators = {},
                 .order = 1,
                 .pointwise_stab_order = 1,
                 .reduced_order = 1,
                 .pruned = pruned_tree(t)};

  for (int v = 0; v < t.size(); ++v) {
    for (const auto& members : classes.classes[v]) {
      mpz_class f;
      mpz_fac_ui(f.get_mpz_t(), members.size());
      g.order *= f;
      // adjacent transpositions of equal-coded siblings generate the class
      for (size_t j = 0; j + 1 < members.size(); ++j) {
        TreeIso gen;
        gen.map.resize(t.size());
        for (int u = 0; u < t.size(); ++u) gen.map[u] = u;
        const auto ca = canonical_codes(t);
        std::vector<int> sub;
        detail::match_subtrees(t, members[j], t, members[j + 1], ca, ca, gen.map);
        detail::match_subtrees(t, members[j + 1], t, members[j], ca, ca, gen.map);
        g.generators.push_back(std::move(gen));
      }
    }
    // leaf children of a common parent are freely interchangeable while
    // fixing the reduced tree pointwise
    size_t leaf_children = 0;
    for (int w : t.children(v))
      if (t.is_leaf(w)) ++leaf_children;
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), leaf_children);
    g.pointwise_stab_order *= f;
  }

  const auto dec = leaf_count_decoration(t, g.pruned);
  AutEnumerator reduced(g.pruned.tree, dec);
  g.reduced_order = reduced.order();
  return g;
}

}  // namespace gdf
