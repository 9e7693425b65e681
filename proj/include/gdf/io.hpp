#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gdf/config.hpp"
#include "gdf/cylinder.hpp"
#include "gdf/divisor.hpp"
#include "gdf/model.hpp"
#include "gdf/poly.hpp"
#include "gdf/rational.hpp"
#include "gdf/tree.hpp"

namespace gdf {

using Json = nlohmann::json;

// --- rationals --------------------------------------------------------------

// Emitted as "p/q" in lowest terms (bare "p" for integers); integers are also
// accepted on input.
inline Json rat_to_json(const Rat& q) { return rat_str(q); }

inline Rat rat_from_json(const Json& j) {
  if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
  if (j.is_string()) return parse_rat(j.get<std::string>());
  throw std::invalid_argument("expected a rational: \"p/q\" or an integer");
}

// --- trees -------------------------------------------------------------------

// Nested-list text form: a vertex is the bracketed list of its children, the
// outermost list is the root. Ids are not carried; parsing numbers vertices in
// the order the brackets open.
inline std::string tree_to_text(const RootedTree& t) {
  std::string out;
  const auto rec = [&](auto&& self, int v) -> void {
    out += '[';
    const auto& cs = t.children(v);
    for (size_t k = 0; k < cs.size(); ++k) {
      if (k) out += ',';
      self(self, cs[k]);
    }
    out += ']';
  };
  rec(rec, t.root());
  return out;
}

inline RootedTree tree_from_text(const std::string& text) {
  std::vector<int> par;
  std::vector<int> stack;
  for (const char ch : text) {
    if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == ',') continue;
    if (ch == '[') {
      if (stack.empty() && !par.empty())
        throw std::invalid_argument("tree text: more than one root list");
      par.push_back(stack.empty() ? -1 : stack.back());
      stack.push_back(static_cast<int>(par.size()) - 1);
    } else if (ch == ']') {
      if (stack.empty()) throw std::invalid_argument("tree text: unbalanced ']'");
      stack.pop_back();
    } else {
      throw std::invalid_argument(std::string("tree text: unexpected character '") + ch + "'");
    }
  }
  if (!stack.empty()) throw std::invalid_argument("tree text: unbalanced '['");
  if (par.empty()) throw std::invalid_argument("tree text: empty input");
  return RootedTree(std::move(par));
}

// Adjacency form: {"parent": {"<id>": "<parent id>" | null}}. Ids survive the
// round trip; siblings are ordered by id on input.
inline Json tree_to_json(const RootedTree& t) {
  Json parent = Json::object();
  for (int v = 0; v < t.size(); ++v)
    parent[t.id(v)] = v == t.root() ? Json() : Json(t.id(t.parent(v)));
  return Json{{"parent", parent}};
}

inline RootedTree tree_from_json(const Json& j) {
  if (j.is_string()) return tree_from_text(j.get<std::string>());
  if (!j.is_object() || !j.contains("parent") || !j["parent"].is_object())
    throw std::invalid_argument("tree: expected {\"parent\": {...}} or a nested-list string");
  const Json& adj = j["parent"];
  std::string root;
  bool have_root = false;
  std::map<std::string, std::vector<std::string>> children;
  for (const auto& [id, pj] : adj.items()) {
    if (pj.is_null()) {
      if (have_root) throw std::invalid_argument("tree: more than one root");
      root = id;
      have_root = true;
    } else if (pj.is_string()) {
      if (!adj.contains(pj.get<std::string>()))
        throw std::invalid_argument("tree: parent '" + pj.get<std::string>() + "' of '" + id +
                                    "' is not a vertex");
      children[pj.get<std::string>()].push_back(id);
    } else {
      throw std::invalid_argument("tree: parent of '" + id + "' must be an id or null");
    }
  }
  if (!have_root) throw std::invalid_argument("tree: no root (null parent) found");
  std::vector<int> par;
  std::vector<std::string> ids;
  std::map<std::string, int> index;
  const auto rec = [&](auto&& self, const std::string& id, int parent_index) -> void {
    index[id] = static_cast<int>(par.size());
    par.push_back(parent_index);
    ids.push_back(id);
    for (const auto& c : children[id]) self(self, c, index[id]);
  };
  rec(rec, root, -1);
  if (par.size() != adj.size())
    throw std::invalid_argument("tree: some vertices are not reachable from the root");
  return RootedTree(std::move(par), std::move(ids));
}

// --- base curves and divisors --------------------------------------------------

inline Json base_to_json(const BaseCurve& b) {
  return Json{{"points", b.points()},
              {"principal_lattice", b.lattice().generators()},
              {"base_autos", b.base_autos()},
              {"units_trivial", b.units_trivial()}};
}

inline BaseCurve base_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("base: expected an object");
  const bool units = j.value("units_trivial", true);
  if (j.contains("preset")) {
    const std::string preset = j["preset"].get<std::string>();
    std::vector<std::string> points;
    if (j.contains("points"))
      points = j["points"].get<std::vector<std::string>>();
    else if (j.contains("n"))
      points = BaseCurve::default_labels(j["n"].get<size_t>());
    else
      throw std::invalid_argument("base: preset needs \"points\" or \"n\"");
    if (preset == "affine_line") {
      BaseCurve b = BaseCurve::affine_line(points);
      return units ? b : BaseCurve(b.points(), b.lattice().generators(), b.base_autos(), false);
    }
    if (preset == "rigid") {
      BaseCurve b = BaseCurve::rigid(points);
      return units ? b : BaseCurve(b.points(), b.lattice().generators(), b.base_autos(), false);
    }
    throw std::invalid_argument("base: unknown preset '" + preset + "'");
  }
  if (!j.contains("points")) throw std::invalid_argument("base: missing \"points\"");
  return BaseCurve(j["points"].get<std::vector<std::string>>(),
                   j.value("principal_lattice", std::vector<std::vector<long long>>{}),
                   j.value("base_autos", std::vector<std::vector<int>>{}), units);
}

inline Json divisor_to_json(const GraphDivisor& d) {
  Json trees = Json::array();
  for (const auto& t : d.trees) trees.push_back(tree_to_json(t));
  return Json{{"base", base_to_json(d.base)}, {"trees", trees}};
}

inline GraphDivisor divisor_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("base") || !j.contains("trees"))
    throw std::invalid_argument("divisor: expected {\"base\": ..., \"trees\": [...]}");
  std::vector<RootedTree> trees;
  for (const auto& tj : j["trees"]) trees.push_back(tree_from_json(tj));
  return GraphDivisor(base_from_json(j["base"]), std::move(trees));
}

// --- divisor-level reports -------------------------------------------------------

inline Json type_divisor_to_json(const TypeDivisor& td) { return Json{{"levels", td.levels}}; }

inline Json certificate_to_json(const CylIsoCertificate& c) {
  return Json{{"sigma", c.sigma}, {"shift", c.shift}, {"lattice_witness", c.lattice_witness}};
}

inline CylIsoCertificate certificate_from_json(const Json& j) {
  CylIsoCertificate c;
  c.sigma = j.at("sigma").get<std::vector<std::vector<int>>>();
  c.shift = j.at("shift").get<std::vector<long long>>();
  c.lattice_witness = j.at("lattice_witness").get<std::vector<long long>>();
  return c;
}

inline Json canonical_record_to_json(const CanonicalCylinderRecord& r) {
  return Json{{"residue", r.residue}, {"levels", r.levels}};
}

// --- polynomials and models --------------------------------------------------------

// Coefficient array is low degree first: coefficients[k] multiplies var^k.
inline Json poly_to_json(const RatPoly& p) {
  Json coeffs = Json::array();
  for (const auto& c : p.coeffs()) coeffs.push_back(rat_to_json(c));
  return Json{{"var", p.var()}, {"coefficients", coeffs}};
}

inline RatPoly poly_from_json(const Json& j) {
  std::vector<Rat> coeffs;
  for (const auto& c : j.at("coefficients")) coeffs.push_back(rat_from_json(c));
  return RatPoly(std::move(coeffs), j.value("var", std::string("u")));
}

inline Json multipoly_to_json(const MultiPoly& m, const std::vector<std::string>& names) {
  Json terms = Json::array();
  for (const auto& [mono, coeff] : m.terms())
    terms.push_back(Json{{"monomial", mono}, {"coeff", rat_to_json(coeff)}});
  return Json{{"text", m.str(names)}, {"terms", terms}};
}

inline Json sequence_to_json(const AccompanyingSequence& s) {
  Json p = Json::array();
  for (const auto& q : s.p) p.push_back(poly_to_json(q));
  Json r = Json::array();
  for (const auto& q : s.r) r.push_back(poly_to_json(q));
  Json roots = Json::array();
  for (const auto& [value, len] : s.roots)
    roots.push_back(Json{{"value", rat_to_json(value)}, {"length", len}});
  return Json{{"m", s.m}, {"p", p}, {"r", r}, {"roots", roots}};
}

inline Json model_to_json(const SurfaceModel& m) {
  Json eqs = Json::array();
  for (size_t k = 0; k < m.equations.size(); ++k)
    eqs.push_back(Json{{"text", m.display[k]},
                       {"terms", multipoly_to_json(m.equations[k], m.vars)["terms"]}});
  return Json{{"variables", m.vars}, {"equations", eqs}};
}

inline Json fiber_report_to_json(const FiberReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries)
    entries.push_back(Json{{"check", e.check}, {"pass", e.pass}, {"detail", e.detail}});
  return Json{{"entries", entries}, {"all_pass", r.all_pass()}};
}

// --- configurations -------------------------------------------------------------

// One object per marked point, keyed by vertex id. A bare object is accepted
// for single-point divisors.
inline Json configuration_to_json(const Configuration& s, const GraphDivisor& d) {
  require_valid_configuration(s, d);
  Json out = Json::array();
  for (size_t i = 0; i < s.sets.size(); ++i) {
    Json point = Json::object();
    for (const auto& [v, xs] : s.sets[i]) {
      Json vals = Json::array();
      for (const auto& x : xs) vals.push_back(rat_to_json(x));
      point[d.trees[i].id(v)] = std::move(vals);
    }
    out.push_back(std::move(point));
  }
  return out;
}

inline Configuration configuration_from_json(const Json& j, const GraphDivisor& d) {
  Json arr = j;
  if (j.is_object()) arr = Json::array({j});
  if (!arr.is_array() || arr.size() != d.trees.size())
    throw std::invalid_argument("configuration: expected one vertex-to-values object per point");
  Configuration s;
  s.sets.resize(d.trees.size());
  for (size_t i = 0; i < d.trees.size(); ++i) {
    if (!arr[i].is_object())
      throw std::invalid_argument("configuration: point entries must be objects");
    for (const auto& [id, vals] : arr[i].items()) {
      const int v = d.trees[i].index_of(id);
      if (v < 0)
        throw std::invalid_argument("configuration: no vertex '" + id + "' at point " +
                                    std::to_string(i + 1));
      std::vector<Rat> xs;
      for (const auto& x : vals) xs.push_back(rat_from_json(x));
      std::sort(xs.begin(), xs.end());
      s.sets[i][v] = std::move(xs);
    }
  }
  require_valid_configuration(s, d);
  return s;
}

// --- group elements ---------------------------------------------------------------

inline Json element_to_json(const GroupElement& g, const GraphDivisor& d) {
  Json beta = Json::array();
  for (const auto& bs : g.beta) {
    Json row = Json::array();
    for (const auto& b : bs) row.push_back(rat_to_json(b));
    beta.push_back(std::move(row));
  }
  Json autos = Json::array();
  for (size_t i = 0; i < g.autos.size(); ++i) {
    Json perm = Json::object();
    for (int v = 0; v < d.trees[i].size(); ++v)
      perm[d.trees[i].id(v)] = d.trees[i].id(g.autos[i].map[v]);
    autos.push_back(std::move(perm));
  }
  return Json{{"alpha", rat_to_json(g.alpha)}, {"beta", beta}, {"auto", autos}};
}

inline GroupElement element_from_json(const Json& j, const GraphDivisor& d) {
  GroupElement g = identity_element(d);
  g.alpha = rat_from_json(j.at("alpha"));
  const Json& beta = j.at("beta");
  if (!beta.is_array() || beta.size() != g.beta.size())
    throw std::invalid_argument("group element: \"beta\" needs one row per point");
  for (size_t i = 0; i < g.beta.size(); ++i) {
    if (beta[i].size() != g.beta[i].size())
      throw std::invalid_argument("group element: point " + std::to_string(i + 1) +
                                  " needs one shift per level below the top");
    for (size_t l = 0; l < g.beta[i].size(); ++l) g.beta[i][l] = rat_from_json(beta[i][l]);
  }
  if (j.contains("auto")) {
    const Json& autos = j["auto"];
    if (!autos.is_array() || autos.size() != g.autos.size())
      throw std::invalid_argument("group element: \"auto\" needs one map per point");
    for (size_t i = 0; i < g.autos.size(); ++i) {
      const auto& t = d.trees[i];
      if (autos[i].is_array()) {
        g.autos[i].map = autos[i].get<std::vector<int>>();
      } else if (autos[i].is_object()) {
        for (const auto& [id, img] : autos[i].items()) {
          const int v = t.index_of(id);
          const int w = img.is_string() ? t.index_of(img.get<std::string>()) : -1;
          if (v < 0 || w < 0)
            throw std::invalid_argument("group element: unknown vertex in \"auto\"");
          g.autos[i].map[v] = w;
        }
      } else {
        throw std::invalid_argument("group element: \"auto\" entries must be maps or arrays");
      }
    }
  }
  validate_group_element(g, d);
  return g;
}

// --- configuration reports -----------------------------------------------------------

inline Json slice_to_json(const SliceResult& r, const GraphDivisor& d) {
  Json shifts = Json::array();
  for (const auto& bs : r.shifts) {
    Json row = Json::array();
    for (const auto& b : bs) row.push_back(rat_to_json(b));
    shifts.push_back(std::move(row));
  }
  return Json{{"sliced", configuration_to_json(r.sliced, d)}, {"shifts", shifts}};
}

inline Json mu_report_to_json(const MuReport& r) {
  return Json{
      {"infinite", r.infinite}, {"d", r.d}, {"geometric_d", r.geometric_d}, {"note", r.note}};
}

inline Json aut_vector_report_to_json(const AutVectorGroupReport& r) {
  return Json{{"top", r.top}, {"levels", r.level_coeffs}};
}

inline Json centers_to_json(const ModificationCenters& mc, const GraphDivisor& d) {
  Json levels = Json::array();
  for (const auto& lv : mc.levels) {
    Json row = Json::array();
    for (const auto& c : lv)
      row.push_back(Json{{"point", c.point},
                         {"vertex", d.trees[c.point].id(c.vertex)},
                         {"child", d.trees[c.point].id(c.child)},
                         {"coord", rat_to_json(c.coord)}});
    levels.push_back(std::move(row));
  }
  return Json{{"levels", levels}};
}

inline ModificationCenters centers_from_json(const Json& j, const GraphDivisor& d) {
  ModificationCenters mc;
  for (const auto& row : j.at("levels")) {
    mc.levels.emplace_back();
    for (const auto& cj : row) {
      CenterPoint c;
      c.point = cj.at("point").get<size_t>();
      if (c.point >= d.trees.size())
        throw std::invalid_argument("centers: marked point index out of range");
      c.vertex = d.trees[c.point].index_of(cj.at("vertex").get<std::string>());
      c.child = d.trees[c.point].index_of(cj.at("child").get<std::string>());
      c.coord = rat_from_json(cj.at("coord"));
      mc.levels.back().push_back(std::move(c));
    }
  }
  return mc;
}

}  // namespace gdf
