#pragma once

// Command-line front end. Loads trees, divisors and configurations from
// files, runs the library operations and emits deterministic reports as
// text or JSON. Exit status 0 = decided/constructed, 1 = negative decision
// (with a reason), 2 = unusable input.

#include <CLI11.hpp>

#include <gdf/config.hpp>
#include <gdf/cylinder.hpp>
#include <gdf/io.hpp>
#include <gdf/model.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace gdf {
namespace cli {

struct Emit {
  std::string format = "text";
  std::string out_path;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// the nested-list tree grammar: brackets and separators only
inline bool looks_like_tree_text(const std::string& s) {
  bool bracket = false;
  for (char ch : s) {
    if (ch == '[' || ch == ']')
      bracket = true;
    else if (ch != ',' && ch != ' ' && ch != '\t' && ch != '\n' && ch != '\r')
      return false;
  }
  return bracket;
}

inline Json parse_json(const std::string& text, const std::string& path) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

inline RootedTree load_tree(const std::string& path) {
  const std::string text = read_file(path);
  if (looks_like_tree_text(text)) return tree_from_text(text);
  return tree_from_json(parse_json(text, path));
}

inline GraphDivisor load_divisor(const std::string& path) {
  return divisor_from_json(parse_json(read_file(path), path));
}

inline Configuration load_configuration(const std::string& path, const GraphDivisor& d) {
  return configuration_from_json(parse_json(read_file(path), path), d);
}

// `model` accepts either a bare tree or a divisor with one marked point
inline RootedTree load_model_tree(const std::string& path) {
  const std::string text = read_file(path);
  if (looks_like_tree_text(text)) return tree_from_text(text);
  const Json j = parse_json(text, path);
  if (j.is_object() && j.contains("trees")) {
    GraphDivisor d = divisor_from_json(j);
    if (d.trees.size() != 1)
      throw std::invalid_argument(path + ": model needs a single marked point");
    return d.trees[0];
  }
  return tree_from_json(j);
}

inline std::vector<long long> parse_amounts(const std::string& text) {
  std::vector<long long> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) throw std::invalid_argument("malformed amount list: " + text);
    out.push_back(std::stoll(cur));
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',')
      flush();
    else if (ch != ' ')
      cur += ch;
  }
  flush();
  return out;
}

inline std::vector<Rat> parse_roots(const std::string& text) {
  std::vector<Rat> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) throw std::invalid_argument("malformed root list: " + text);
    out.push_back(parse_rat(cur));
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',')
      flush();
    else if (ch != ' ')
      cur += ch;
  }
  flush();
  return out;
}

template <typename T>
std::string join_nums(const std::vector<T>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(v[i]);
  }
  return s;
}

inline std::string join_rats(const std::vector<Rat>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += rat_str(v[i]);
  }
  return s;
}

inline int finish(const Emit& em, const Json& j, const std::string& text, int status,
                  std::ostream& out) {
  const std::string payload = em.format == "json" ? j.dump(2) + "\n" : text;
  if (!em.out_path.empty()) {
    std::ofstream f(em.out_path);
    if (!f) throw std::invalid_argument("cannot write file: " + em.out_path);
    f << payload;
  } else {
    out << payload;
  }
  return status;
}

inline std::string divisor_text(const GraphDivisor& d) {
  std::string s;
  for (size_t i = 0; i < d.trees.size(); ++i)
    s += d.base.points()[i] + ": " + tree_to_text(d.trees[i]) + "\n";
  return s;
}

inline std::string certificate_text(const CylIsoCertificate& c, const GraphDivisor& x) {
  std::string s = "shift: " + join_nums(c.shift) + "\n";
  s += "witness: " + join_nums(c.lattice_witness) + "\n";
  for (size_t i = 0; i < c.sigma.size(); ++i)
    s += "match " + x.base.points()[i] + ": " + join_nums(c.sigma[i]) + "\n";
  return s;
}

inline std::string element_text(const GroupElement& g, const GraphDivisor& d) {
  std::string s = "alpha: " + rat_str(g.alpha) + "\n";
  for (size_t i = 0; i < g.beta.size(); ++i)
    s += "beta " + d.base.points()[i] + ": " + join_rats(g.beta[i]) + "\n";
  for (size_t i = 0; i < g.autos.size(); ++i) {
    const auto& t = d.trees[i];
    std::string moved;
    for (int v = 0; v < t.size(); ++v)
      if (g.autos[i].map[v] != v)
        moved += " " + t.id(v) + "->" + t.id(g.autos[i].map[v]);
    s += "auto " + d.base.points()[i] + ":" + (moved.empty() ? " identity" : moved) + "\n";
  }
  return s;
}

inline std::string report_text(const FiberReport& rep) {
  if (rep.all_pass()) return "fiber checks: pass\n";
  const auto* f = rep.first_failure();
  return "fiber checks: FAIL (" + f->check + ": " + f->detail + ")\n";
}

inline int cli_main(int argc, char** argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"fiber trees of affine surfaces: types, cylinders, models and moduli"};
  app.require_subcommand(1);

  Emit em;
  auto common = [&](CLI::App* sc) {
    sc->add_option("--format", em.format, "report format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    sc->add_option("-o,--output", em.out_path, "write the report to this file");
    return sc;
  };

  std::string file1, file2, file3, type_arg, amounts_arg, roots_arg;
  bool fiberwise = false, check_law = false, principal = false, spring = false;

  auto* tp = common(app.add_subcommand("tp", "tree type of a fiber tree"));
  tp->add_option("tree", file1, "tree file")->required();

  auto* giz = common(app.add_subcommand("giz", "standard tree of a given type"));
  giz->add_option("type", type_arg, "tree type, e.g. \"(0,2,1,2)\"")->required();

  auto* bushify_cmd = common(app.add_subcommand("bushify", "replace every tree by its bush"));
  bushify_cmd->add_option("divisor", file1, "divisor file")->required();

  auto* typediv = common(app.add_subcommand("typediv", "leaf levels over each marked point"));
  typediv->add_option("divisor", file1, "divisor file")->required();

  auto* cyliso =
      common(app.add_subcommand("cyliso", "decide cylinder isomorphism over the base"));
  cyliso->add_option("first", file1, "divisor file")->required();
  cyliso->add_option("second", file2, "divisor file")->required();
  cyliso->add_flag("--fiberwise", fiberwise, "also try the base symmetries");

  auto* stretch_cmd =
      common(app.add_subcommand("stretch", "insert chains below the roots"));
  stretch_cmd->add_option("divisor", file1, "divisor file")->required();
  stretch_cmd->add_option("amounts", amounts_arg, "chain lengths, e.g. \"1,2,0\"")->required();
  stretch_cmd->add_flag("--check-law", check_law, "verify the type-shift and certificate laws");
  stretch_cmd->add_flag("--principal", principal, "require the amounts to be principal");

  auto* canon = common(app.add_subcommand("canon", "canonical cylinder invariant"));
  canon->add_option("divisor", file1, "divisor file")->required();

  auto* model_cmd = common(app.add_subcommand("model", "defining equations of the surface"));
  model_cmd->add_option("input", file1, "tree file or single-point divisor file")->required();
  model_cmd->add_option("--roots", roots_arg, "branch roots, e.g. \"0,1,2\"");
  model_cmd->add_flag("--spring", spring, "treat the tree as a spring bush");

  auto* configdim = common(app.add_subcommand("configdim", "configuration space dimension"));
  configdim->add_option("divisor", file1, "divisor file")->required();

  auto* orbiteq =
      common(app.add_subcommand("orbiteq", "decide configuration orbit equivalence"));
  orbiteq->add_option("divisor", file1, "divisor file")->required();
  orbiteq->add_option("first", file2, "configuration file")->required();
  orbiteq->add_option("second", file3, "configuration file")->required();

  auto* slice_cmd = common(app.add_subcommand("slice", "barycentric slice of a configuration"));
  slice_cmd->add_option("divisor", file1, "divisor file")->required();
  slice_cmd->add_option("config", file2, "configuration file")->required();

  auto* stab = common(app.add_subcommand("stab", "scale stabilizer of a configuration"));
  stab->add_option("divisor", file1, "divisor file")->required();
  stab->add_option("config", file2, "configuration file")->required();

  auto* modulidim = common(app.add_subcommand("modulidim", "moduli dimension"));
  modulidim->add_option("divisor", file1, "divisor file")->required();

  auto* centers = common(app.add_subcommand("centers", "modification centers per level"));
  centers->add_option("divisor", file1, "divisor file")->required();
  centers->add_option("config", file2, "configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (tp->parsed()) {
      const TreeType tt = tree_type(load_tree(file1));
      return finish(em, Json{{"type", tt.counts}, {"text", tt.str()}}, tt.str() + "\n", 0, out);
    }

    if (giz->parsed()) {
      const TreeType tt = TreeType::parse(type_arg);
      const RootedTree t = gizatullin_tree(tt);
      Json j = tree_to_json(t);
      j["type"] = tt.counts;
      return finish(em, j, tree_to_text(t) + "\n", 0, out);
    }

    if (bushify_cmd->parsed()) {
      const GraphDivisor b = bushify(load_divisor(file1));
      return finish(em, divisor_to_json(b), divisor_text(b), 0, out);
    }

    if (typediv->parsed()) {
      const GraphDivisor d = load_divisor(file1);
      const TypeDivisor td = type_divisor(d);
      std::string text;
      for (size_t i = 0; i < td.levels.size(); ++i)
        text += d.base.points()[i] + ": " + join_nums(td.levels[i]) + "\n";
      return finish(em, Json{{"points", d.base.points()}, {"levels", td.levels}}, text, 0, out);
    }

    if (cyliso->parsed()) {
      const GraphDivisor x = load_divisor(file1);
      const GraphDivisor y = load_divisor(file2);
      if (fiberwise) {
        const FiberwiseDecision fd = cylinders_isomorphic_fiberwise(x, y);
        if (fd.ok()) {
          Json j{{"isomorphic", true},
                 {"permutation", *fd.permutation},
                 {"certificate", certificate_to_json(*fd.certificate)}};
          const std::string text = "isomorphic up to base symmetry\npermutation: " +
                                   join_nums(*fd.permutation) + "\n" +
                                   certificate_text(*fd.certificate, x);
          return finish(em, j, text, 0, out);
        }
        const std::string why = to_string(*fd.reason);
        return finish(em, Json{{"isomorphic", false}, {"reason", why}},
                      "not isomorphic: " + why + "\n", 1, out);
      }
      const CylDecision dec = cylinders_isomorphic_over_B(x, y);
      if (dec.ok()) {
        Json j{{"isomorphic", true}, {"certificate", certificate_to_json(*dec.certificate)}};
        return finish(em, j,
                      "isomorphic over the base\n" + certificate_text(*dec.certificate, x), 0,
                      out);
      }
      const std::string why = to_string(*dec.reason);
      return finish(em, Json{{"isomorphic", false}, {"reason", why}},
                    "not isomorphic: " + why + "\n", 1, out);
    }

    if (stretch_cmd->parsed()) {
      const GraphDivisor d = load_divisor(file1);
      StretchSpec spec;
      spec.amounts = parse_amounts(amounts_arg);
      spec.principal = principal;
      const GraphDivisor stretched = stretch(d, spec);
      Json j = divisor_to_json(stretched);
      std::string text = divisor_text(stretched);
      int status = 0;
      if (check_law) {
        const bool law = stretch_type_law_check(d, spec);
        const bool is_pr = is_principal(spec.amounts, d.base);
        j["type_shift_law"] = law;
        j["amounts_principal"] = is_pr;
        text += std::string("type-shift law: ") + (law ? "ok" : "FAIL") + "\n";
        text += std::string("amounts principal: ") + (is_pr ? "yes" : "no") + "\n";
        bool cert_ok = true;
        if (is_pr) {
          const CylDecision dec = cylinders_isomorphic_over_B(d, stretched);
          std::vector<long long> neg;
          for (long long a : spec.amounts) neg.push_back(-a);
          cert_ok = dec.ok() && dec.certificate->shift == neg;
          j["shift_is_minus_amounts"] = cert_ok;
          text += std::string("certificate shift equals minus the amounts: ") +
                  (cert_ok ? "yes" : "NO") + "\n";
        }
        if (!law || !cert_ok) status = 1;
      }
      return finish(em, j, text, status, out);
    }

    if (canon->parsed()) {
      const GraphDivisor d = load_divisor(file1);
      const CanonicalCylinderRecord rec = cylinder_canonical_invariant(d);
      std::string text = "residue: " + join_nums(rec.residue) + "\n";
      for (size_t i = 0; i < rec.levels.size(); ++i)
        text += d.base.points()[i] + ": " + join_nums(rec.levels[i]) + "\n";
      return finish(em, canonical_record_to_json(rec), text, 0, out);
    }

    if (model_cmd->parsed()) {
      const RootedTree t = load_model_tree(file1);
      const std::vector<Rat> roots = roots_arg.empty() ? std::vector<Rat>{}
                                                       : parse_roots(roots_arg);
      SurfaceModel m;
      AccompanyingSequence seq;
      Json extra;
      std::string spring_text;
      if (spring) {
        if (t.height() < 1) throw std::invalid_argument("spring bush needs positive height");
        seq = accompanying_sequence(truncate(t, t.height() - 1), roots);
        const SpringData sd = spring_q(t, seq);
        m = spring_model(sd);
        extra = Json{{"p_top", poly_to_json(sd.p_top)},
                     {"r_top", poly_to_json(sd.r_top)},
                     {"counts", sd.counts},
                     {"big_n", sd.big_n},
                     {"q", multipoly_to_json(sd.q, {"u", "v"})}};
        spring_text = "top: p = " + sd.p_top.str() + ", r = " + sd.r_top.str() + "\n" +
                      "counts: " + join_nums(sd.counts) + "\nN: " + std::to_string(sd.big_n) +
                      "\nq: " + sd.q.str({"u", "v"}) + "\n";
      } else {
        seq = accompanying_sequence(t, roots);
        m = surface_equations(seq);
      }
      const FiberReport rep = verify_fiber_structure(seq);
      Json j = model_to_json(m);
      j["sequence"] = sequence_to_json(seq);
      j["report"] = fiber_report_to_json(rep);
      if (spring) j["spring"] = extra;
      std::string text = "variables:";
      for (const auto& v : m.vars) text += " " + v;
      text += "\n";
      for (const auto& line : m.display) text += line + "\n";
      text += spring_text + report_text(rep);
      return finish(em, j, text, 0, out);
    }

    if (configdim->parsed()) {
      const long long n = config_space_dim(load_divisor(file1));
      return finish(em, Json{{"config_space_dim", n}}, std::to_string(n) + "\n", 0, out);
    }

    if (orbiteq->parsed()) {
      const GraphDivisor d = load_divisor(file1);
      const Configuration s1 = load_configuration(file2, d);
      const Configuration s2 = load_configuration(file3, d);
      const std::optional<GroupElement> g = orbit_equivalent(s1, s2, d);
      if (g) {
        Json j{{"equivalent", true}, {"element", element_to_json(*g, d)}};
        return finish(em, j, "equivalent\n" + element_text(*g, d), 0, out);
      }
      return finish(em, Json{{"equivalent", false}}, "not equivalent\n", 1, out);
    }

    if (slice_cmd->parsed()) {
      const GraphDivisor d = load_divisor(file1);
      const Configuration s = load_configuration(file2, d);
      const SliceResult r = barycentric_slice(s, d);
      std::string text;
      for (size_t i = 0; i < r.shifts.size(); ++i)
        text += "shift " + d.base.points()[i] + ": " + join_rats(r.shifts[i]) + "\n";
      for (size_t i = 0; i < r.sliced.sets.size(); ++i)
        for (const auto& [v, xs] : r.sliced.sets[i])
          text += d.base.points()[i] + " " + d.trees[i].id(v) + ": " + join_rats(xs) + "\n";
      return finish(em, slice_to_json(r, d), text, 0, out);
    }

    if (stab->parsed()) {
      const GraphDivisor d = load_divisor(file1);
      const MuReport rep = mu_d_stabilizer(load_configuration(file2, d), d);
      std::string text = rep.infinite ? "d: infinite\n" : "d: " + std::to_string(rep.d) + "\n";
      if (!rep.infinite)
        text += "geometric d: " + std::to_string(rep.geometric_d) + "\n";
      text += "note: " + rep.note + "\n";
      return finish(em, mu_report_to_json(rep), text, 0, out);
    }

    if (modulidim->parsed()) {
      const long long n = moduli_dim(load_divisor(file1));
      return finish(em, Json{{"moduli_dim", n}}, std::to_string(n) + "\n", 0, out);
    }

    if (centers->parsed()) {
      const GraphDivisor d = load_divisor(file1);
      const Configuration s = load_configuration(file2, d);
      const ModificationCenters mc = modification_centers(d, s);
      std::string text;
      for (size_t l = 0; l < mc.levels.size(); ++l) {
        text += "level " + std::to_string(l) + ":";
        for (const auto& c : mc.levels[l])
          text += " " + d.base.points()[c.point] + "[" + d.trees[c.point].id(c.vertex) +
                  "]->" + d.trees[c.point].id(c.child) + "@" + rat_str(c.coord) + ";";
        text += "\n";
      }
      return finish(em, centers_to_json(mc, d), text, 0, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace cli
}  // namespace gdf
