#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "orbicover/atlas.hpp"
#include "orbicover/covering.hpp"
#include "orbicover/deformation.hpp"
#include "orbicover/errors.hpp"
#include "orbicover/rep_variety.hpp"
#include "orbicover/serialize.hpp"

namespace orbicover::cli {

namespace {

struct Config {
  std::uint64_t seed = 1;
  double tol_residual = 1e-9;
  double tol_rank = 1e-7;
  std::size_t max_cosets = 10000;
  std::string format = "json";
  std::string output;
};

// A report plus the array that its CSV form tabulates (empty: key/value
// pairs of the scalar fields).
struct Report {
  Json body;
  std::string table;
};

bool is_file(const std::string& arg) { return std::filesystem::is_regular_file(arg); }

GroupPtr load_group(const std::string& arg) {
  return is_file(arg) ? group_from_json(read_json_file(arg)) : catalog_group(arg);
}

OrbifoldAtlas load_atlas(const std::string& arg) {
  return is_file(arg) ? atlas_from_json(read_json_file(arg)) : builtin_atlas(arg);
}

std::vector<Json> element_words(const FiniteGroup& g, const std::vector<ElementId>& ids) {
  std::vector<Json> out;
  for (ElementId e : ids) out.emplace_back(element_word(g, e));
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// "e", "G", "#k" (k-th conjugacy class representative), comma-separated
// words in g1, g2, ..., or "p:" followed by generator images such as
// "p:1,0,2;0,2,1".
Subgroup parse_subgroup(const GroupPtr& g, const std::string& spec) {
  if (spec == "e") return trivial_subgroup(g);
  if (spec == "G") return whole_group(g);
  if (spec.size() > 1 && spec[0] == '#') {
    const auto classes = conjugacy_classes_of_subgroups(g);
    std::size_t k = 0;
    try {
      k = std::stoul(spec.substr(1));
    } catch (const std::exception&) {
      throw DomainError("bad subgroup index '" + spec + "'");
    }
    if (k >= classes.size()) throw DomainError("subgroup index " + spec + " out of range");
    return classes[k];
  }
  if (spec.rfind("p:", 0) == 0) {
    std::vector<Perm> gens;
    for (const auto& p : split(spec.substr(2), ';')) {
      std::vector<std::size_t> images;
      for (const auto& x : split(p, ',')) {
        try {
          images.push_back(std::stoul(x));
        } catch (const std::exception&) {
          throw DomainError("bad subgroup generator '" + p + "'");
        }
      }
      if (images.size() != g->degree()) throw DomainError("subgroup generator of wrong degree");
      gens.emplace_back(std::move(images));
    }
    return generate_subgroup(g, gens);
  }
  std::vector<std::string> names;
  for (std::size_t k = 0; k < g->generators().size(); ++k) names.push_back("g" + std::to_string(k + 1));
  const Alphabet alphabet(names);
  std::vector<ElementId> gens;
  for (const auto& w : split(spec, ',')) {
    ElementId acc = FiniteGroup::identity();
    for (Letter l : parse_word(w, alphabet)) {
      const ElementId x = g->generators()[static_cast<std::size_t>(std::abs(l) - 1)];
      acc = g->multiply(acc, l > 0 ? x : g->inverse(x));
    }
    gens.push_back(acc);
  }
  return generate_subgroup(g, gens);
}

std::vector<double> parse_params(const std::vector<std::string>& args) {
  std::vector<double> out;
  for (const auto& a : args) {
    for (const auto& item : split(a, ',')) {
      try {
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw DomainError("bad parameter '" + item + "'");
      }
    }
  }
  return out;
}

GeometricStructure structure_for(const std::string& family, const std::vector<std::string>& params) {
  GeometricStructure s = base_structure(make_family(family));
  if (!params.empty()) s.params = parse_params(params);
  return s;
}

Json violations_json(const ValidationReport& report) {
  Json out = Json::array();
  for (const auto& v : report) out.push_back({{"code", v.code}, {"charts", v.charts}, {"detail", v.detail}});
  return out;
}

// ----------------------------------------------------------- commands

Report covers(const std::string& group_arg) {
  GroupPtr g = load_group(group_arg);
  const auto list = enumerate_ball_coverings(g);
  Json coverings = Json::array();
  for (std::size_t k = 0; k < list.size(); ++k) {
    const auto aut = ball_automorphisms(list[k]);
    coverings.push_back({{"index", k},
                         {"subgroup_order", list[k].subgroup.order()},
                         {"degree", list[k].subgroup.index()},
                         {"normal", is_normal(list[k].subgroup)},
                         {"members", element_words(*g, list[k].subgroup.members())},
                         {"automorphism_order", aut.order()},
                         {"automorphisms", element_words(*g, aut.representatives)}});
  }
  Json matrix = Json::array();
  for (const auto& from : list) {
    Json row = Json::array();
    for (const auto& to : list) row.push_back(element_words(*g, ball_covering_morphisms(from, to)));
    matrix.push_back(row);
  }
  Json body = {{"group", group_arg},
               {"order", g->order()},
               {"count", list.size()},
               {"coverings", coverings},
               {"morphisms", matrix}};
  return {body, "coverings"};
}

Report fiber_product(const std::string& group_arg, const std::vector<std::string>& specs) {
  GroupPtr g = load_group(group_arg);
  std::vector<Subgroup> factors;
  for (const auto& s : specs) factors.push_back(parse_subgroup(g, s));
  const auto fp = ball_fiber_product(g, factors);
  Json orders = Json::array();
  for (const auto& f : factors) orders.push_back(f.order());
  Json comps = Json::array();
  for (const auto& c : fp.components) {
    comps.push_back({{"representatives", element_words(*g, c.representatives)},
                     {"subgroup_order", c.subgroup.order()},
                     {"index", c.index()},
                     {"size", c.tuples.size()}});
  }
  Json body = {{"group", group_arg},
               {"factor_orders", orders},
               {"count", fp.components.size()},
               {"components", comps}};
  return {body, "components"};
}

Report monodromy_product(const std::string& f1, const std::string& f2) {
  const auto c1 = covering_from_json(read_json_file(f1));
  const auto c2 = covering_from_json(read_json_file(f2));
  const auto fp = monodromy_fiber_product(c1, c2);
  Json comps = Json::array();
  for (const auto& orbit : fp.orbits) {
    const auto sub = fp.covering.component(orbit.front());
    const auto deck = deck_group(sub);
    Json pts = Json::array();
    for (std::size_t x : orbit) pts.push_back({fp.points[x].first, fp.points[x].second});
    comps.push_back({{"size", orbit.size()},
                     {"points", pts},
                     {"deck_order", deck.order()},
                     {"regular", deck.is_transitive()}});
  }
  Json body = {{"presentation", c1.presentation().to_string()},
               {"fiber_size", fp.covering.fiber_size()},
               {"count", fp.orbits.size()},
               {"connected", fp.orbits.size() == 1},
               {"components", comps},
               {"covering", covering_to_json(fp.covering)}};
  return {body, "components"};
}

Report universal(const std::string& atlas_arg, const Config& cfg) {
  const auto atlas = load_atlas(atlas_arg);
  const auto p = presentation_from_atlas(atlas);
  const auto u = universal_cover(p, cfg.max_cosets);
  Json body = {{"presentation", p.to_string()},
               {"order", u.order()},
               {"deck_order", u.deck.order()},
               {"simply_transitive", u.deck.is_transitive() && u.deck.order() == u.order()},
               {"covering", covering_to_json(u.covering)}};
  return {body, ""};
}

Report presentation(const std::string& atlas_arg) {
  const auto atlas = load_atlas(atlas_arg);
  const auto p = presentation_from_atlas(atlas);
  const auto alphabet = p.alphabet();
  Json rels = Json::array();
  for (const auto& r : p.relations) rels.push_back(format_word(r, alphabet));
  Json body = {{"presentation", p.to_string()},
               {"generators", p.generators},
               {"relations", rels},
               {"abelian_invariants", abelian_invariants(p)}};
  return {body, ""};
}

Report double_cover(const std::string& atlas_arg) {
  const auto atlas = load_atlas(atlas_arg);
  const auto dc = orientation_double_cover(atlas);
  Json prov = Json::object();
  for (std::size_t k = 0; k < dc.provenance.size(); ++k) {
    prov[dc.atlas.alphabet.symbols()[k]] = atlas.format(dc.provenance[k]);
  }
  const auto violations = validate_atlas(dc.atlas);
  Json body = {{"charts", dc.atlas.charts.size()},
               {"base_chart", dc.base_chart},
               {"provenance", prov},
               {"valid", violations.empty()},
               {"violations", violations_json(violations)},
               {"atlas", atlas_to_json(dc.atlas)}};
  if (violations.empty()) body["presentation"] = presentation_from_atlas(dc.atlas).to_string();
  return {body, ""};
}

Report validate(const std::string& atlas_arg) {
  const auto report = validate_atlas(load_atlas(atlas_arg));
  return {{{"valid", report.empty()}, {"violations", violations_json(report)}}, "violations"};
}

Report holonomy(const std::string& family, const std::vector<std::string>& params, const Config& cfg) {
  const auto s = structure_for(family, params);
  auto rep = preholonomy(s);
  rep.tolerance = cfg.tol_residual;
  const double residual = relation_residual(rep);
  Json body = {{"structure", structure_to_json(s)},
               {"constraint_residual", constraint_residual(s)},
               {"residual", residual},
               {"on_variety", residual <= cfg.tol_residual},
               {"representation", representation_to_json(rep)}};
  return {body, ""};
}

Report tangent(const std::string& family, const std::vector<std::string>& params, const Config& cfg) {
  const auto s = structure_for(family, params);
  TangentOptions opt;
  opt.rank_tolerance = cfg.tol_rank;
  opt.max_residual = cfg.tol_residual;
  Json body = tangent_report_to_json(tangent_report(preholonomy(s), opt));
  body["structure"] = structure_to_json(s);
  return {body, ""};
}

Report deform(const std::string& family, const std::vector<std::string>& params, double scale,
              std::size_t trials, const Config& cfg) {
  const auto s = structure_for(family, params);
  RoundtripOptions opt;
  opt.trials = trials;
  opt.scale = scale;
  opt.seed = cfg.seed;
  opt.tolerance = cfg.tol_residual;
  Json body = roundtrip_report_to_json(roundtrip_experiment(s, opt));
  body["structure"] = structure_to_json(s);
  return {body, "trials"};
}

// ---------------------------------------------------------------- output

std::string csv_cell(const Json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string to_csv(const Report& r) {
  std::ostringstream out;
  if (r.table.empty() || r.body.at(r.table).empty()) {
    out << "key,value\n";
    for (const auto& [k, v] : r.body.items()) {
      if (!v.is_structured()) out << csv_cell(k) << ',' << csv_cell(v) << '\n';
    }
    return out.str();
  }
  const Json& rows = r.body.at(r.table);
  std::vector<std::string> cols;
  for (const auto& [k, v] : rows.front().items()) cols.push_back(k);
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << csv_cell(cols[c]);
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << csv_cell(row.value(cols[c], Json()));
    out << '\n';
  }
  return out.str();
}

void emit(const Report& r, const Config& cfg, std::ostream& out) {
  const std::string text = cfg.format == "csv" ? to_csv(r) : r.body.dump(2) + "\n";
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output, std::ios::binary);
  if (!file) throw DomainError("cannot write " + cfg.output);
  file << text;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& detail) {
  err << Json{{"error", kind}, {"detail", detail}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Coverings, holonomy and deformations of 2-orbifolds", "orbicover"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--tol-residual", cfg.tol_residual, "Relation residual tolerance");
  app.add_option("--tol-rank", cfg.tol_rank, "Relative singular value threshold for ranks");
  app.add_option("--max-cosets", cfg.max_cosets, "Coset table bound");
  app.add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", cfg.output, "Write the report here instead of stdout");

  std::string input, input2, family;
  std::vector<std::string> rest;
  double scale = 1e-2;
  std::size_t trials = 100;

  auto* c_covers = app.add_subcommand("covers", "Ball coverings of a finite group");
  c_covers->add_option("group", input, "Catalog name or group JSON file")->required();

  auto* c_fiber = app.add_subcommand("fiber-product", "Fiber product of ball coverings");
  c_fiber->add_option("group", input, "Catalog name or group JSON file")->required();
  c_fiber->add_option("subgroups", rest, "e, G, #k, words in g1,g2,.. or p:<images>;<images>")->required();

  auto* c_mono = app.add_subcommand("monodromy-product", "Fiber product of two monodromy coverings");
  c_mono->add_option("first", input, "Covering JSON file")->required();
  c_mono->add_option("second", input2, "Covering JSON file")->required();

  auto* c_univ = app.add_subcommand("universal-cover", "Universal cover of an atlas");
  auto* c_pres = app.add_subcommand("presentation", "Presentation of the fundamental group");
  auto* c_double = app.add_subcommand("double-cover", "Orientation double cover");
  auto* c_valid = app.add_subcommand("validate", "Check the atlas invariants");
  for (auto* c : {c_univ, c_pres, c_double, c_valid}) {
    c->add_option("atlas", input, "Built-in atlas name or atlas JSON file")->required();
  }

  auto* c_hol = app.add_subcommand("holonomy", "Holonomy of a structure");
  auto* c_tan = app.add_subcommand("tangent", "Tangent space at the holonomy");
  auto* c_def = app.add_subcommand("deform", "Roundtrip deformation experiment");
  for (auto* c : {c_hol, c_tan, c_def}) {
    c->add_option("family", family, "Structure family")->required();
    c->add_option("params", rest, "Structure parameters (default: the base structure)");
  }
  c_def->add_option("--scale", scale, "Perturbation scale");
  c_def->add_option("--trials", trials, "Number of trials");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage_error", e.what());
    return 1;
  }

  try {
    Report r;
    if (*c_covers) r = covers(input);
    else if (*c_fiber) r = fiber_product(input, rest);
    else if (*c_mono) r = monodromy_product(input, input2);
    else if (*c_univ) r = universal(input, cfg);
    else if (*c_pres) r = presentation(input);
    else if (*c_double) r = double_cover(input);
    else if (*c_valid) r = validate(input);
    else if (*c_hol) r = holonomy(family, rest, cfg);
    else if (*c_tan) r = tangent(family, rest, cfg);
    else r = deform(family, rest, scale, trials, cfg);
    emit(r, cfg, out);
  } catch (const ResourceError& e) {
    report_error(err, e.kind(), e.what());
    return 2;
  } catch (const Error& e) {
    report_error(err, e.kind(), e.what());
    return 1;
  } catch (const nlohmann::json::exception& e) {
    report_error(err, "domain_error", e.what());
    return 1;
  }
  return 0;
}

}  // namespace orbicover::cli
