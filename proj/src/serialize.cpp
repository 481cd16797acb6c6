#include "orbicover/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "orbicover/errors.hpp"

namespace orbicover {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DomainError(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T get_as(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DomainError(std::string("bad value for '") + what + "'");
  }
}

Json double_list(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(x);
  return out;
}

// JSON has no infinity; a missing bound is written as null.
Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

// Finds (i, j, k) such that the three words lie in Gamma_ij, Gamma_jk and
// Gamma_ik; used for product entries written without chart indices.
bool locate_product(const OrbifoldAtlas& a, ProductEntry& e) {
  auto holds = [&](std::size_t i, std::size_t j, const Word& w) {
    const GluingSet* g = a.gluing(i, j);
    if (!g) return false;
    const Word nf = a.normal_form(w);
    for (const auto& x : g->elements) {
      if (a.normal_form(x) == nf) return true;
    }
    return false;
  };
  const std::size_t n = a.charts.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (holds(i, j, e.left) && holds(j, k, e.right) && holds(i, k, e.result)) {
          e.i = i;
          e.j = j;
          e.k = k;
          return true;
        }
      }
  return false;
}

}  // namespace

Json to_json(const Matrix3& m) {
  Json out = Json::array();
  for (int r = 0; r < 3; ++r) out.push_back({m(r, 0), m(r, 1), m(r, 2)});
  return out;
}

Matrix3 matrix_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw DomainError("a matrix is three rows of three numbers");
  Matrix3 m;
  for (int r = 0; r < 3; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != 3) throw DomainError("a matrix is three rows of three numbers");
    for (int c = 0; c < 3; ++c) m(r, c) = get_as<double>(row[static_cast<std::size_t>(c)], "matrix entry");
  }
  return m;
}

Json group_to_json(const FiniteGroup& g) {
  Json gens = Json::array();
  for (const auto& p : g.generator_perms()) gens.push_back(p.images());
  return {{"degree", g.degree()}, {"generators", gens}};
}

GroupPtr group_from_json(const Json& j) {
  if (j.is_string()) return catalog_group(j.get<std::string>());
  const auto degree = get_as<std::size_t>(field(j, "degree"), "degree");
  std::vector<Perm> gens;
  for (const auto& g : field(j, "generators")) {
    auto images = get_as<std::vector<std::size_t>>(g, "generators");
    if (images.size() != degree) throw DomainError("generator of wrong degree");
    gens.emplace_back(std::move(images));
  }
  return make_group(std::move(gens), degree);
}

Json atlas_to_json(const OrbifoldAtlas& a) {
  Json charts = Json::array();
  for (const auto& c : a.charts) {
    Json ch = {{"id", c.id}, {"symbols", c.symbols}};
    bool named = false;
    if (!c.group_name.empty()) {
      try {
        GroupPtr cat = catalog_group(c.group_name);
        named = cat->generator_perms() == c.group->generator_perms();
      } catch (const LookupError&) {
      }
    }
    ch["group"] = named ? Json(c.group_name) : group_to_json(*c.group);
    if (c.geometry) {
      ch["geometry"] = to_string(*c.geometry);
      Json act = Json::array();
      for (const auto& m : c.action) act.push_back(to_json(m.matrix()));
      ch["action"] = act;
    }
    if (!c.signs.empty()) ch["signs"] = c.signs;
    charts.push_back(ch);
  }
  Json gluings = Json::array();
  for (const auto& g : a.gluings) {
    Json el = Json::array();
    for (const auto& w : g.elements) el.push_back(a.format(w));
    gluings.push_back({{"i", g.i}, {"j", g.j}, {"elements", el}});
  }
  Json products = Json::array();
  for (const auto& p : a.products) {
    products.push_back({{"i", p.i},
                        {"j", p.j},
                        {"k", p.k},
                        {"left", a.format(p.left)},
                        {"right", a.format(p.right)},
                        {"result", a.format(p.result)}});
  }
  Json out = {{"charts", charts}, {"gluings", gluings}, {"products", products}};
  if (!a.free_signs.empty()) out["free_signs"] = a.free_signs;
  return out;
}

OrbifoldAtlas atlas_from_json(const Json& j) {
  OrbifoldAtlas a;
  const Json& charts = field(j, "charts");
  if (!charts.is_array()) throw DomainError("'charts' must be an array");
  for (const auto& cj : charts) {
    Chart c;
    c.id = a.charts.size();
    if (cj.contains("id") && get_as<std::size_t>(cj.at("id"), "id") != c.id) {
      throw DomainError("chart ids must be 0, 1, 2, ... in order");
    }
    const Json& g = field(cj, "group");
    c.group = group_from_json(g);
    c.group_name = g.is_string() ? g.get<std::string>() : "custom";
    c.symbols = get_as<std::vector<std::string>>(field(cj, "symbols"), "symbols");
    if (c.symbols.size() != c.group->generators().size()) {
      throw DomainError("chart " + std::to_string(c.id) + " needs one symbol per group generator");
    }
    for (const auto& s : c.symbols) {
      if (!is_valid_symbol(s)) throw DomainError("bad symbol '" + s + "'");
      if (a.alphabet.find(s) >= 0) throw DomainError("symbol '" + s + "' already in use");
      a.alphabet.intern(s);
    }
    if (cj.contains("action")) {
      c.geometry = parse_geometry(get_as<std::string>(field(cj, "geometry"), "geometry"));
      for (const auto& m : cj.at("action")) c.action.emplace_back(*c.geometry, matrix_from_json(m));
      if (c.action.size() != c.symbols.size()) throw DomainError("action needs one matrix per generator");
    }
    if (cj.contains("signs")) {
      c.signs = get_as<std::vector<int>>(cj.at("signs"), "signs");
      if (c.signs.size() != c.symbols.size()) throw DomainError("signs need one entry per generator");
    }
    a.charts.push_back(std::move(c));
  }
  if (j.contains("gluings")) {
    for (const auto& gj : j.at("gluings")) {
      GluingSet g;
      g.i = get_as<std::size_t>(field(gj, "i"), "i");
      g.j = get_as<std::size_t>(field(gj, "j"), "j");
      if (g.i >= a.charts.size() || g.j >= a.charts.size()) throw DomainError("gluing refers to a missing chart");
      for (const auto& w : field(gj, "elements")) {
        g.elements.push_back(parse_word(get_as<std::string>(w, "elements"), a.alphabet, true));
      }
      a.gluings.push_back(std::move(g));
    }
  }
  if (j.contains("free_signs")) a.free_signs = get_as<std::map<std::string, int>>(j.at("free_signs"), "free_signs");
  if (j.contains("products")) {
    for (const auto& pj : j.at("products")) {
      ProductEntry e;
      e.left = parse_word(get_as<std::string>(field(pj, "left"), "left"), a.alphabet, true);
      e.right = parse_word(get_as<std::string>(field(pj, "right"), "right"), a.alphabet, true);
      e.result = parse_word(get_as<std::string>(field(pj, "result"), "result"), a.alphabet, true);
      if (pj.contains("i") && pj.contains("j") && pj.contains("k")) {
        e.i = get_as<std::size_t>(pj.at("i"), "i");
        e.j = get_as<std::size_t>(pj.at("j"), "j");
        e.k = get_as<std::size_t>(pj.at("k"), "k");
      } else if (!locate_product(a, e)) {
        throw DomainError("product " + a.format(e.left) + " * " + a.format(e.right) + " matches no triple of charts");
      }
      a.products.push_back(std::move(e));
    }
  }
  return a;
}

Json covering_to_json(const MonodromyCovering& c) {
  Json action = Json::object();
  const auto& gens = c.presentation().generators;
  for (std::size_t k = 0; k < gens.size(); ++k) action[gens[k]] = c.action()[k].images();
  return {{"presentation", c.presentation().to_string()},
          {"fiber_size", c.fiber_size()},
          {"action", action},
          {"basepoint", c.basepoint()}};
}

MonodromyCovering covering_from_json(const Json& j) {
  Presentation p = Presentation::parse(get_as<std::string>(field(j, "presentation"), "presentation"));
  const Json& action = field(j, "action");
  std::vector<Perm> perms;
  for (const auto& g : p.generators) {
    if (!action.contains(g)) throw DomainError("no action for generator " + g);
    perms.emplace_back(get_as<std::vector<std::size_t>>(action.at(g), "action"));
  }
  if (action.size() != p.generators.size()) throw DomainError("action names an undeclared generator");
  const std::size_t base = j.contains("basepoint") ? get_as<std::size_t>(j.at("basepoint"), "basepoint") : 0;
  return MonodromyCovering(std::move(p), std::move(perms), base);
}

Json representation_to_json(const Representation& r) {
  Json images = Json::array();
  for (const auto& m : r.images) images.push_back(to_json(m.matrix()));
  return {{"presentation", r.presentation.to_string()}, {"geometry", to_string(r.geometry)}, {"images", images}};
}

Json tangent_report_to_json(const TangentReport& t) {
  return {{"dim_z1", t.dim_z1},
          {"dim_b1", t.dim_b1},
          {"dim_h1", t.dim_h1},
          {"parameters", t.parameters},
          {"equations", t.equations},
          {"residual", t.residual},
          {"gap", finite_or_null(t.gap)},
          {"rank_ambiguous", t.rank_ambiguous},
          {"cocycle_defect", t.cocycle_defect},
          {"singular_values", double_list(t.singular_values)},
          {"coboundary_singular_values", double_list(t.coboundary_singular_values)}};
}

Json structure_to_json(const GeometricStructure& s) {
  return {{"family", s.family.name}, {"params", double_list(s.params)}};
}

Json roundtrip_report_to_json(const RoundtripReport& r) {
  Json trials = Json::array();
  for (const auto& t : r.trials) {
    trials.push_back({{"index", t.index},
                      {"converged", t.converged},
                      {"iterations", t.iterations},
                      {"projected_residual", t.projected_residual},
                      {"roundtrip_error", t.roundtrip_error},
                      {"parameter_distance", t.parameter_distance},
                      {"conjugacy_distance", t.conjugacy_distance}});
  }
  return {{"family", r.family},
          {"n_trials", r.n_trials},
          {"seed", r.seed},
          {"scale", r.scale},
          {"cocycle_dim", r.cocycle_dim},
          {"max_roundtrip_error", r.max_roundtrip_error},
          {"max_conjugacy_distance", r.max_conjugacy_distance},
          {"min_injectivity_ratio", finite_or_null(r.min_injectivity_ratio)},
          {"injectivity_pairs", r.injectivity_pairs},
          {"injectivity_violations", r.injectivity_violations},
          {"flagged_trials", r.flagged_trials},
          {"trials", trials}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(path + ": " + e.what());
  }
}

std::string element_word(const FiniteGroup& g, ElementId e) {
  std::vector<std::string> names;
  for (std::size_t k = 0; k < g.generators().size(); ++k) names.push_back("g" + std::to_string(k + 1));
  return format_word(g.shortlex_words().at(e), Alphabet(names));
}

}  // namespace orbicover
