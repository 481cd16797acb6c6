#include "orbicover/atlas.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "orbicover/errors.hpp"

namespace orbicover {

namespace {

using Owner = std::optional<std::pair<std::size_t, std::size_t>>;

std::vector<Owner> owner_table(const OrbifoldAtlas& a) {
  std::vector<Owner> owners(a.alphabet.size());
  for (std::size_t c = 0; c < a.charts.size(); ++c) {
    const auto& syms = a.charts[c].symbols;
    for (std::size_t k = 0; k < syms.size(); ++k) {
      int s = a.alphabet.find(syms[k]);
      if (s >= 0) owners[static_cast<std::size_t>(s)] = std::make_pair(c, k);
    }
  }
  return owners;
}

std::size_t symbol_of(Letter l) { return static_cast<std::size_t>(std::abs(l) - 1); }

ElementId letter_element(const FiniteGroup& g, std::size_t gen, bool inverted) {
  ElementId e = g.generators().at(gen);
  return inverted ? g.inverse(e) : e;
}

bool in_alphabet(const OrbifoldAtlas& a, const Word& w) {
  return std::all_of(w.begin(), w.end(), [&](Letter l) {
    return l != 0 && symbol_of(l) < a.alphabet.size();
  });
}

}  // namespace

const GluingSet* OrbifoldAtlas::gluing(std::size_t i, std::size_t j) const {
  for (const auto& g : gluings) {
    if (g.i == i && g.j == j) return &g;
  }
  return nullptr;
}

std::optional<std::pair<std::size_t, std::size_t>> OrbifoldAtlas::owner(std::size_t symbol) const {
  if (symbol >= alphabet.size()) return std::nullopt;
  const std::string& name = alphabet.symbols()[symbol];
  for (std::size_t c = 0; c < charts.size(); ++c) {
    const auto& syms = charts[c].symbols;
    auto it = std::find(syms.begin(), syms.end(), name);
    if (it != syms.end()) return std::make_pair(c, static_cast<std::size_t>(it - syms.begin()));
  }
  return std::nullopt;
}

Word OrbifoldAtlas::normal_form(const Word& w) const {
  if (!in_alphabet(*this, w)) throw DomainError("word uses a letter outside the atlas alphabet");
  const auto owners = owner_table(*this);
  Word cur = w;
  for (int pass = 0; pass < 10000; ++pass) {
    Word out;
    std::size_t p = 0;
    while (p < cur.size()) {
      const Owner& o = owners[symbol_of(cur[p])];
      if (!o) {
        if (!out.empty() && out.back() == -cur[p]) {
          out.pop_back();
        } else {
          out.push_back(cur[p]);
        }
        ++p;
        continue;
      }
      const std::size_t c = o->first;
      const FiniteGroup& g = *charts[c].group;
      ElementId acc = FiniteGroup::identity();
      while (p < cur.size()) {
        const Owner& q = owners[symbol_of(cur[p])];
        if (!q || q->first != c) break;
        acc = g.multiply(acc, letter_element(g, q->second, cur[p] < 0));
        ++p;
      }
      Word local = local_word(c, acc);
      out.insert(out.end(), local.begin(), local.end());
    }
    if (out == cur) return out;
    cur = std::move(out);
  }
  throw NumericError("normal form did not stabilize");
}

std::optional<ElementId> OrbifoldAtlas::evaluate_local(std::size_t chart, const Word& w) const {
  const Chart& ch = charts.at(chart);
  const FiniteGroup& g = *ch.group;
  ElementId acc = FiniteGroup::identity();
  for (Letter l : w) {
    if (l == 0 || symbol_of(l) >= alphabet.size()) return std::nullopt;
    const std::string& name = alphabet.symbols()[symbol_of(l)];
    auto it = std::find(ch.symbols.begin(), ch.symbols.end(), name);
    if (it == ch.symbols.end()) return std::nullopt;
    acc = g.multiply(acc, letter_element(g, static_cast<std::size_t>(it - ch.symbols.begin()), l < 0));
  }
  return acc;
}

Word OrbifoldAtlas::local_word(std::size_t chart, ElementId g) const {
  const Chart& ch = charts.at(chart);
  Word out;
  for (int l : ch.group->shortlex_words().at(g)) {
    int s = alphabet.find(ch.symbols.at(symbol_of(l)));
    if (s < 0) throw DomainError("chart symbol missing from the alphabet");
    out.push_back((s + 1) * (l < 0 ? -1 : 1));
  }
  return out;
}

std::optional<int> OrbifoldAtlas::local_sign(std::size_t chart, ElementId g) const {
  const Chart& ch = charts.at(chart);
  if (g == FiniteGroup::identity()) return 1;
  const auto& word = ch.group->shortlex_words().at(g);
  if (!ch.action.empty() && ch.geometry) {
    return evaluate_word(*ch.geometry, word, ch.action).orientation();
  }
  if (ch.signs.size() == ch.symbols.size() && !ch.signs.empty()) {
    int s = 1;
    for (int l : word) s *= ch.signs[symbol_of(l)];
    return s;
  }
  return std::nullopt;
}

std::optional<int> OrbifoldAtlas::sign(const Word& w) const {
  int s = 1;
  for (Letter l : w) {
    const std::size_t sym = symbol_of(l);
    if (l == 0 || sym >= alphabet.size()) throw DomainError("letter outside the atlas alphabet");
    if (auto o = owner(sym)) {
      const Chart& ch = charts[o->first];
      auto ls = local_sign(o->first, ch.group->generators().at(o->second));
      if (!ls) return std::nullopt;
      s *= *ls;
    } else {
      auto it = free_signs.find(alphabet.symbols()[sym]);
      if (it != free_signs.end()) s *= it->second;
    }
  }
  return s;
}

// ------------------------------------------------------------ validation

ValidationReport validate_atlas(const OrbifoldAtlas& a) {
  ValidationReport report;
  auto add = [&](std::string code, std::vector<std::size_t> charts, std::string detail) {
    report.push_back({std::move(code), std::move(charts), std::move(detail)});
  };
  const std::size_t n = a.charts.size();
  if (n == 0) {
    add("empty_atlas", {}, "atlas has no charts");
    return report;
  }

  // Charts and symbol binding.
  std::map<std::string, std::size_t> bound;
  for (std::size_t c = 0; c < n; ++c) {
    const Chart& ch = a.charts[c];
    if (ch.id != c) add("chart_id", {c}, "chart id " + std::to_string(ch.id) + " at position " + std::to_string(c));
    if (!ch.group) {
      add("symbol_binding", {c}, "chart has no local group");
      continue;
    }
    if (ch.symbols.size() != ch.group->generators().size()) {
      add("symbol_binding", {c}, "expected " + std::to_string(ch.group->generators().size()) +
                                     " symbols, got " + std::to_string(ch.symbols.size()));
    }
    for (const auto& s : ch.symbols) {
      if (a.alphabet.find(s) < 0) add("symbol_binding", {c}, "symbol '" + s + "' not in alphabet");
      auto [it, fresh] = bound.emplace(s, c);
      if (!fresh) add("symbol_binding", {it->second, c}, "symbol '" + s + "' bound twice");
    }
  }
  if (!report.empty()) return report;

  // Local actions and orientation signs.
  for (std::size_t c = 0; c < n; ++c) {
    const Chart& ch = a.charts[c];
    const FiniteGroup& g = *ch.group;
    if (!ch.action.empty()) {
      if (!ch.geometry || ch.action.size() != ch.symbols.size()) {
        add("action_shape", {c}, "action needs a geometry and one isometry per generator");
        continue;
      }
      bool geometry_ok = std::all_of(ch.action.begin(), ch.action.end(), [&](const Isometry& m) {
        return m.geometry() == *ch.geometry;
      });
      if (!geometry_ok) {
        add("action_shape", {c}, "action isometries use a different geometry");
        continue;
      }
      std::vector<Isometry> images;
      for (ElementId e = 0; e < g.order(); ++e) {
        images.push_back(evaluate_word(*ch.geometry, g.shortlex_words()[e], ch.action));
      }
      bool hom = true, faithful = true;
      for (ElementId x = 0; x < g.order() && hom; ++x) {
        for (ElementId y = 0; y < g.order(); ++y) {
          if (distance(images[g.multiply(x, y)], compose(images[x], images[y])) > 1e-9) {
            hom = false;
            break;
          }
        }
      }
      for (ElementId x = 0; x < g.order() && faithful; ++x) {
        for (ElementId y = x + 1; y < g.order(); ++y) {
          if (distance(images[x], images[y]) <= 1e-9) {
            faithful = false;
            break;
          }
        }
      }
      if (!hom) add("action_not_homomorphism", {c}, "action does not respect the group law");
      if (!faithful) add("action_not_faithful", {c}, "distinct elements act identically");
    } else if (!ch.signs.empty()) {
      if (ch.signs.size() != ch.symbols.size() ||
          std::any_of(ch.signs.begin(), ch.signs.end(), [](int s) { return s != 1 && s != -1; })) {
        add("sign_data", {c}, "signs must be one +1/-1 per generator");
        continue;
      }
      bool hom = true;
      for (ElementId x = 0; x < g.order() && hom; ++x) {
        for (ElementId y = 0; y < g.order(); ++y) {
          if (*a.local_sign(c, g.multiply(x, y)) != *a.local_sign(c, x) * *a.local_sign(c, y)) {
            hom = false;
            break;
          }
        }
      }
      if (!hom) add("sign_not_homomorphism", {c}, "declared signs are not a homomorphism");
    }
  }
  for (const auto& [name, s] : a.free_signs) {
    if (s != 1 && s != -1) add("sign_data", {}, "free symbol '" + name + "' has sign " + std::to_string(s));
  }

  // Gluing sets.
  std::map<std::pair<std::size_t, std::size_t>, std::set<Word>> sets;
  for (const auto& gl : a.gluings) {
    if (gl.i >= n || gl.j >= n) {
      add("gluing_chart", {gl.i, gl.j}, "gluing refers to a missing chart");
      continue;
    }
    if (sets.count({gl.i, gl.j})) {
      add("duplicate_gluing", {gl.i, gl.j}, "gluing set listed twice");
      continue;
    }
    std::set<Word> nf;
    for (const auto& w : gl.elements) {
      if (!in_alphabet(a, w)) {
        add("unknown_symbol", {gl.i, gl.j}, "gluing element uses an unknown letter");
        continue;
      }
      if (!nf.insert(a.normal_form(w)).second) {
        add("duplicate_element", {gl.i, gl.j}, "element " + a.format(w) + " listed twice");
      }
    }
    sets[{gl.i, gl.j}] = std::move(nf);
  }

  for (std::size_t c = 0; c < n; ++c) {
    auto it = sets.find({c, c});
    if (it == sets.end()) {
      add("missing_local_gluing", {c, c}, "Gamma_ii is not listed");
      continue;
    }
    std::set<ElementId> hit;
    bool ok = true;
    for (const auto& w : it->second) {
      auto e = a.evaluate_local(c, w);
      if (!e) {
        ok = false;
        add("local_group_mismatch", {c, c}, "element " + a.format(w) + " is not in the local group");
      } else {
        hit.insert(*e);
      }
    }
    if (ok && hit.size() != a.charts[c].group->order()) {
      add("local_group_mismatch", {c, c}, "Gamma_ii has " + std::to_string(hit.size()) +
                                              " elements, local group has " +
                                              std::to_string(a.charts[c].group->order()));
    }
  }

  for (const auto& [key, elems] : sets) {
    const auto [i, j] = key;
    auto back = sets.find({j, i});
    for (const auto& w : elems) {
      if (back == sets.end() || !back->second.count(a.normal_form(inverse(w)))) {
        add("symmetry", {i, j}, "inverse of " + a.format(w) + " is missing from Gamma_" +
                                    std::to_string(j) + std::to_string(i));
        break;
      }
    }
    const std::size_t gj = a.charts[j].group->order();
    if (elems.size() % gj != 0) {
      add("coset_count", {i, j}, std::to_string(elems.size()) + " elements is not a multiple of |Gamma_j| = " +
                                     std::to_string(gj));
    }
    bool closed = true;
    for (const auto& w : elems) {
      for (std::size_t s = 0; s < a.charts[i].symbols.size() && closed; ++s) {
        Word left = concat(a.local_word(i, a.charts[i].group->generators()[s]), w);
        closed = elems.count(a.normal_form(left)) > 0;
      }
      for (std::size_t s = 0; s < a.charts[j].symbols.size() && closed; ++s) {
        Word right = concat(w, a.local_word(j, a.charts[j].group->generators()[s]));
        closed = elems.count(a.normal_form(right)) > 0;
      }
      if (!closed) {
        add("coset_closure", {i, j}, "Gamma_i * " + a.format(w) + " * Gamma_j leaves the set");
        break;
      }
    }
  }

  // Products.
  auto member = [&](std::size_t i, std::size_t j, const Word& w) {
    auto it = sets.find({i, j});
    return it != sets.end() && in_alphabet(a, w) && it->second.count(a.normal_form(w)) > 0;
  };
  for (const auto& p : a.products) {
    if (p.i >= n || p.j >= n || p.k >= n) {
      add("product_membership", {p.i, p.j, p.k}, "product refers to a missing chart");
      continue;
    }
    if (!member(p.i, p.j, p.left) || !member(p.j, p.k, p.right) || !member(p.i, p.k, p.result)) {
      add("product_membership", {p.i, p.j, p.k},
          in_alphabet(a, p.left) && in_alphabet(a, p.right) && in_alphabet(a, p.result)
              ? a.format(p.left) + " * " + a.format(p.right) + " = " + a.format(p.result) +
                    " does not respect the gluing sets"
              : "product uses an unknown letter");
    }
  }

  // Nerve connectivity.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [key, elems] : sets) {
    if (!elems.empty()) parent[find(key.first)] = find(key.second);
  }
  std::vector<std::size_t> stray;
  for (std::size_t c = 0; c < n; ++c) {
    if (find(c) != find(0)) stray.push_back(c);
  }
  if (!stray.empty()) add("disconnected_nerve", stray, "charts not connected to chart 0");
  return report;
}

std::string to_string(const Violation& v) {
  std::ostringstream out;
  out << v.code << " (";
  for (std::size_t k = 0; k < v.charts.size(); ++k) out << (k ? "," : "") << v.charts[k];
  out << "): " << v.detail;
  return out.str();
}

// ----------------------------------------------------------- presentation

Presentation presentation_from_atlas(const OrbifoldAtlas& a) {
  ValidationReport report = validate_atlas(a);
  if (!report.empty()) {
    throw PreconditionError("invalid atlas: " + to_string(report.front()) +
                            (report.size() > 1 ? " (+" + std::to_string(report.size() - 1) + " more)" : ""));
  }
  Presentation p;
  p.generators = a.alphabet.symbols();
  std::set<Word> seen;
  auto add = [&](const Word& w) {
    Word r = canonical_relator(w);
    if (!r.empty() && seen.insert(r).second) p.relations.push_back(std::move(r));
  };
  for (std::size_t c = 0; c < a.charts.size(); ++c) {
    const FiniteGroup& g = *a.charts[c].group;
    for (ElementId e = 0; e < g.order(); ++e) {
      for (std::size_t s = 0; s < g.generators().size(); ++s) {
        ElementId next = g.multiply(e, g.generators()[s]);
        Word w = a.local_word(c, e);
        w.push_back(a.alphabet.find(a.charts[c].symbols[s]) + 1);
        w = concat(w, inverse(a.local_word(c, next)));
        add(free_reduce(w));
      }
    }
  }
  for (const auto& pr : a.products) {
    add(concat(concat(pr.left, pr.right), inverse(pr.result)));
  }
  return p;
}

// --------------------------------------------------------------- builders

std::size_t add_chart(OrbifoldAtlas& a, std::string_view group_name,
                      const std::vector<std::string>& symbols) {
  Chart ch;
  ch.id = a.charts.size();
  ch.group_name = std::string(group_name);
  ch.group = catalog_group(group_name);
  if (symbols.size() != ch.group->generators().size()) {
    throw DomainError("group " + ch.group_name + " needs " +
                      std::to_string(ch.group->generators().size()) + " symbols");
  }
  for (const auto& s : symbols) {
    if (a.alphabet.find(s) >= 0) throw DomainError("symbol '" + s + "' already in use");
    a.alphabet.intern(s);
  }
  ch.symbols = symbols;
  a.charts.push_back(std::move(ch));
  return a.charts.size() - 1;
}

namespace {

void merge_into(OrbifoldAtlas& a, std::size_t i, std::size_t j, std::vector<Word> words) {
  GluingSet* target = nullptr;
  for (auto& g : a.gluings) {
    if (g.i == i && g.j == j) target = &g;
  }
  if (!target) {
    a.gluings.push_back({i, j, {}});
    target = &a.gluings.back();
  }
  std::set<Word> have;
  for (const auto& w : target->elements) have.insert(a.normal_form(w));
  for (auto& w : words) {
    Word nf = a.normal_form(w);
    if (have.insert(nf).second) target->elements.push_back(std::move(nf));
  }
  std::sort(target->elements.begin(), target->elements.end(), shortlex_less);
}

}  // namespace

void add_local_gluings(OrbifoldAtlas& a) {
  for (std::size_t c = 0; c < a.charts.size(); ++c) {
    if (a.gluing(c, c)) continue;
    std::vector<Word> words;
    for (ElementId e = 0; e < a.charts[c].group->order(); ++e) words.push_back(a.local_word(c, e));
    merge_into(a, c, c, std::move(words));
  }
}

void add_gluing(OrbifoldAtlas& a, std::size_t i, std::size_t j,
                const std::vector<Word>& representatives) {
  if (i >= a.charts.size() || j >= a.charts.size()) throw DomainError("gluing refers to a missing chart");
  std::vector<Word> forward, backward;
  const FiniteGroup& gi = *a.charts[i].group;
  const FiniteGroup& gj = *a.charts[j].group;
  for (const auto& rep : representatives) {
    for (ElementId x = 0; x < gi.order(); ++x) {
      for (ElementId y = 0; y < gj.order(); ++y) {
        Word w = concat(concat(a.local_word(i, x), rep), a.local_word(j, y));
        backward.push_back(inverse(w));
        forward.push_back(std::move(w));
      }
    }
  }
  merge_into(a, i, j, std::move(forward));
  if (i != j) merge_into(a, j, i, std::move(backward));
}

namespace {

Word w(OrbifoldAtlas& a, std::string_view text) { return parse_word(text, a.alphabet, true); }

OrbifoldAtlas interval_two_mirrors() {
  OrbifoldAtlas a;
  add_chart(a, "Z2", {"a"});
  add_chart(a, "Z2", {"b"});
  a.charts[0].signs = {-1};
  a.charts[1].signs = {-1};
  add_local_gluings(a);
  add_gluing(a, 0, 1, {w(a, "1")});
  return a;
}

OrbifoldAtlas triangle(int p, int q, int r) {
  OrbifoldAtlas a;
  const int orders[3] = {p, q, r};
  const char* names[3] = {"a", "b", "c"};
  for (int k = 0; k < 3; ++k) {
    std::size_t c = add_chart(a, "Z" + std::to_string(orders[k]), {names[k]});
    a.charts[c].geometry = Geometry::euclidean2;
    a.charts[c].action = {
        rotation_about(Point::origin(Geometry::euclidean2), 2 * std::numbers::pi / orders[k])};
  }
  add_local_gluings(a);
  add_gluing(a, 0, 1, {w(a, "1")});
  add_gluing(a, 1, 2, {w(a, "1")});
  add_gluing(a, 0, 2, {w(a, "1")});
  a.products.push_back({0, 1, 2, w(a, "1"), w(a, "b"), w(a, "AC")});
  return a;
}

OrbifoldAtlas pillowcase() {
  OrbifoldAtlas a;
  const double centers[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const char* names[4] = {"a", "b", "c", "d"};
  for (int k = 0; k < 4; ++k) {
    std::size_t c = add_chart(a, "Z2", {names[k]});
    a.charts[c].geometry = Geometry::euclidean2;
    a.charts[c].action = {rotation_about(Point::euclidean(centers[k][0], centers[k][1]), std::numbers::pi)};
  }
  add_local_gluings(a);
  add_gluing(a, 0, 1, {w(a, "1")});
  add_gluing(a, 1, 2, {w(a, "1")});
  add_gluing(a, 2, 3, {w(a, "1")});
  add_gluing(a, 0, 3, {w(a, "1")});
  add_gluing(a, 0, 2, {w(a, "1"), w(a, "b")});
  add_gluing(a, 1, 3, {w(a, "1"), w(a, "a")});
  a.products.push_back({0, 3, 2, w(a, "1"), w(a, "D"), w(a, "abc")});
  return a;
}

// Four trivial charts centred at the points of the half-lattice of the
// unit square torus; the free symbols a, b are the two lattice translations.
OrbifoldAtlas torus() {
  OrbifoldAtlas a;
  for (int k = 0; k < 4; ++k) add_chart(a, "Z1", {});
  w(a, "a");
  w(a, "b");
  add_local_gluings(a);
  add_gluing(a, 0, 1, {w(a, "1"), w(a, "A")});
  add_gluing(a, 0, 2, {w(a, "1"), w(a, "B")});
  add_gluing(a, 0, 3, {w(a, "1"), w(a, "A"), w(a, "B"), w(a, "AB")});
  add_gluing(a, 1, 2, {w(a, "1"), w(a, "a"), w(a, "B"), w(a, "aB")});
  add_gluing(a, 1, 3, {w(a, "1"), w(a, "B")});
  add_gluing(a, 2, 3, {w(a, "1"), w(a, "A")});
  a.products.push_back({0, 2, 3, w(a, "B"), w(a, "A"), w(a, "AB")});
  a.products.push_back({0, 1, 3, w(a, "1"), w(a, "1"), w(a, "1")});
  return a;
}

OrbifoldAtlas disk_mirror() {
  OrbifoldAtlas a;
  std::size_t c = add_chart(a, "D4", {"r", "s"});
  a.charts[c].geometry = Geometry::euclidean2;
  a.charts[c].action = {rotation_about(Point::origin(Geometry::euclidean2), std::numbers::pi / 2),
                        reflection_through_origin(Geometry::euclidean2, 0.0)};
  add_local_gluings(a);
  return a;
}

std::optional<std::array<int, 3>> parse_triangle(std::string_view name) {
  std::string s;
  for (char ch : name) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  std::array<int, 3> out{};
  char close = 0;
  int consumed = 0;
  if (std::sscanf(s.c_str(), "triangle(%d,%d,%d%c%n", &out[0], &out[1], &out[2], &close, &consumed) != 4 ||
      close != ')' || static_cast<std::size_t>(consumed) != s.size()) {
    return std::nullopt;
  }
  return out;
}

}  // namespace

OrbifoldAtlas builtin_atlas(std::string_view name) {
  OrbifoldAtlas a;
  if (name == "interval_two_mirrors") {
    a = interval_two_mirrors();
  } else if (name == "pillowcase") {
    a = pillowcase();
  } else if (name == "torus") {
    a = torus();
  } else if (name == "disk_mirror") {
    a = disk_mirror();
  } else if (auto pqr = parse_triangle(name)) {
    for (int k : *pqr) {
      if (k < 2 || k > 24) throw LookupError("triangle cone orders must lie in 2..24");
    }
    a = triangle((*pqr)[0], (*pqr)[1], (*pqr)[2]);
  } else {
    throw LookupError("unknown atlas '" + std::string(name) + "'");
  }
  return a;
}

const std::vector<std::string>& builtin_atlas_names() {
  static const std::vector<std::string> names = {
      "interval_two_mirrors", "triangle(2,3,7)", "triangle(2,4,4)", "triangle(3,3,3)",
      "triangle(2,3,6)",      "triangle(2,3,3)", "pillowcase",      "torus",
      "disk_mirror"};
  return names;
}

}  // namespace orbicover
