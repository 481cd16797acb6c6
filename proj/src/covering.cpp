#include "orbicover/covering.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "orbicover/errors.hpp"

namespace orbicover {

// ------------------------------------------------------------ ball covers

std::vector<BallCovering> enumerate_ball_coverings(const GroupPtr& g) {
  std::vector<BallCovering> out;
  for (auto& h : conjugacy_classes_of_subgroups(g)) out.push_back({g, std::move(h)});
  return out;
}

namespace {

void check_ball(const BallCovering& c) {
  if (c.subgroup.parent() != c.base_group) {
    throw DomainError("covering subgroup does not lie in its base group");
  }
}

// g * h * g^-1 inside k, for every h in h_members.
bool conjugates_into(const FiniteGroup& grp, ElementId g, const Subgroup& h, const Subgroup& k) {
  for (ElementId x : h.members()) {
    if (!k.contains(grp.conjugate(g, x))) return false;
  }
  return true;
}

}  // namespace

std::vector<ElementId> ball_covering_morphisms(const BallCovering& c1, const BallCovering& c2) {
  check_ball(c1);
  check_ball(c2);
  if (c1.base_group != c2.base_group) throw DomainError("coverings have different base groups");
  std::vector<ElementId> out;
  for (const auto& dc : double_cosets(c1.subgroup, c2.subgroup)) {
    // every element of G2 g G1 conjugates G1 into G2 iff g does
    if (conjugates_into(*c1.base_group, dc.front(), c1.subgroup, c2.subgroup)) out.push_back(dc.front());
  }
  return out;
}

std::size_t QuotientGroup::multiply(std::size_t a, std::size_t b) const {
  const FiniteGroup& g = *subgroup.parent();
  ElementId p = g.multiply(representatives.at(a), representatives.at(b));
  for (std::size_t k = 0; k < cosets.size(); ++k) {
    if (std::binary_search(cosets[k].begin(), cosets[k].end(), p)) return k;
  }
  throw DomainError("product left the normalizer");
}

QuotientGroup ball_automorphisms(const BallCovering& c) {
  check_ball(c);
  Subgroup n = normalizer(c.subgroup);
  QuotientGroup q{n, c.subgroup, {}, {}};
  const FiniteGroup& g = *c.base_group;
  std::set<ElementId> done;
  for (ElementId x : n.members()) {
    if (done.count(x)) continue;
    std::vector<ElementId> coset;
    for (ElementId h : c.subgroup.members()) coset.push_back(g.multiply(h, x));
    std::sort(coset.begin(), coset.end());
    done.insert(coset.begin(), coset.end());
    q.representatives.push_back(coset.front());
    q.cosets.push_back(std::move(coset));
  }
  return q;
}

BallFiberProduct ball_fiber_product(const GroupPtr& g, const std::vector<Subgroup>& factors) {
  if (factors.empty()) throw DomainError("fiber product needs at least one factor");
  for (const auto& f : factors) {
    if (f.parent() != g) throw DomainError("factor is not a subgroup of the base group");
  }
  BallFiberProduct fp{g, factors, {}, {}};
  const std::size_t m = factors.size();
  std::vector<std::size_t> radix;
  std::size_t total = 1;
  for (const auto& f : factors) {
    fp.coset_spaces.push_back(right_cosets(f));
    radix.push_back(fp.coset_spaces.back().cosets.size());
    total *= radix.back();
  }
  auto encode = [&](const std::vector<std::size_t>& t) {
    std::size_t code = 0;
    for (std::size_t i = 0; i < m; ++i) code = code * radix[i] + t[i];
    return code;
  };
  auto decode = [&](std::size_t code) {
    std::vector<std::size_t> t(m);
    for (std::size_t i = m; i-- > 0;) {
      t[i] = code % radix[i];
      code /= radix[i];
    }
    return t;
  };
  // g acts by (G_i x_i) -> (G_i x_i g^-1); generators suffice for orbits.
  std::vector<ElementId> moves;
  for (ElementId s : g->generators()) moves.push_back(g->inverse(s));

  std::vector<char> seen(total, 0);
  for (std::size_t start = 0; start < total; ++start) {
    if (seen[start]) continue;
    std::vector<std::size_t> orbit = {start};
    seen[start] = 1;
    for (std::size_t head = 0; head < orbit.size(); ++head) {
      auto t = decode(orbit[head]);
      for (ElementId mv : moves) {
        std::vector<std::size_t> u(m);
        for (std::size_t i = 0; i < m; ++i) {
          const auto& cs = fp.coset_spaces[i];
          u[i] = cs.coset_of[g->multiply(cs.representatives[t[i]], mv)];
        }
        std::size_t code = encode(u);
        if (!seen[code]) {
          seen[code] = 1;
          orbit.push_back(code);
        }
      }
    }
    std::sort(orbit.begin(), orbit.end());
    auto first = decode(orbit.front());
    std::vector<ElementId> proj, reps;
    for (std::size_t i = 0; i < m; ++i) {
      ElementId c = fp.coset_spaces[i].representatives[first[i]];
      proj.push_back(c);
      reps.push_back(g->inverse(c));
    }
    BallComponent comp{reps, conjugate_intersection(factors, reps), proj, {}};
    for (std::size_t code : orbit) comp.tuples.push_back(decode(code));
    fp.components.push_back(std::move(comp));
  }
  return fp;
}

std::size_t count_diagonals(const BallFiberProduct& fp, const BallCovering& cand,
                            const std::vector<ElementId>& morphisms, DiagonalTarget target) {
  check_ball(cand);
  if (cand.base_group != fp.base_group) throw DomainError("candidate has a different base group");
  if (morphisms.size() != fp.factors.size()) {
    throw DomainError("need one morphism per fiber product factor");
  }
  const FiniteGroup& g = *fp.base_group;
  for (std::size_t i = 0; i < morphisms.size(); ++i) {
    if (morphisms[i] >= g.order() || !conjugates_into(g, morphisms[i], cand.subgroup, fp.factors[i])) {
      throw DomainError("morphism " + std::to_string(i) + " does not map the candidate to its factor");
    }
  }
  std::size_t count = 0;
  const std::size_t limit = target == DiagonalTarget::base_component ? 1 : fp.components.size();
  for (std::size_t c = 0; c < limit; ++c) {
    const BallComponent& comp = fp.components[c];
    for (ElementId d : right_cosets(comp.subgroup).representatives) {
      if (!conjugates_into(g, d, cand.subgroup, comp.subgroup)) continue;
      bool commutes = true;
      for (std::size_t i = 0; i < morphisms.size() && commutes; ++i) {
        // q_i o d and m_i agree iff they lie in the same right coset of G_i
        ElementId x = g.multiply(g.multiply(comp.projections[i], d), g.inverse(morphisms[i]));
        commutes = fp.factors[i].contains(x);
      }
      if (commutes) ++count;
    }
  }
  return count;
}

bool check_universal_property(const BallFiberProduct& fp, const BallCovering& cand,
                              const std::vector<ElementId>& morphisms, DiagonalTarget target) {
  return count_diagonals(fp, cand, morphisms, target) == 1;
}

// ------------------------------------------------------ monodromy covers

MonodromyCovering::MonodromyCovering(Presentation presentation, std::vector<Perm> action,
                                     std::size_t basepoint)
    : presentation_(std::move(presentation)), action_(std::move(action)), basepoint_(basepoint) {
  presentation_.validate();
  if (action_.size() != presentation_.rank()) {
    throw DomainError("need one permutation per generator");
  }
  // Without generators the group is trivial and a connected fiber is a point.
  fiber_size_ = action_.empty() ? 1 : action_.front().degree();
  for (const auto& p : action_) {
    if (p.degree() != fiber_size_) throw DomainError("permutations act on fibers of different sizes");
  }
  if (fiber_size_ == 0 || basepoint_ >= fiber_size_) throw DomainError("basepoint outside the fiber");
  const Alphabet alphabet = presentation_.alphabet();
  for (const auto& r : presentation_.relations) {
    if (!act(r).is_identity()) {
      throw DomainError("relation " + format_word(r, alphabet) + " does not act trivially");
    }
  }
}

Perm MonodromyCovering::act(const Word& w) const {
  Perm acc = Perm::identity(fiber_size_);
  for (Letter l : w) {
    std::size_t k = static_cast<std::size_t>(std::abs(l) - 1);
    if (l == 0 || k >= action_.size()) throw DomainError("letter outside the presentation");
    acc = acc * (l > 0 ? action_[k] : action_[k].inverse());
  }
  return acc;
}

std::vector<std::vector<std::size_t>> MonodromyCovering::orbits() const {
  std::vector<std::size_t> parent(fiber_size_);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& p : action_) {
    for (std::size_t x = 0; x < fiber_size_; ++x) {
      std::size_t a = find(x), b = find(p(x));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t x = 0; x < fiber_size_; ++x) groups[find(x)].push_back(x);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

MonodromyCovering MonodromyCovering::component(std::size_t point) const {
  if (point >= fiber_size_) throw DomainError("point outside the fiber");
  for (const auto& orbit : orbits()) {
    if (!std::binary_search(orbit.begin(), orbit.end(), point)) continue;
    std::vector<std::size_t> local(fiber_size_, 0);
    for (std::size_t k = 0; k < orbit.size(); ++k) local[orbit[k]] = k;
    std::vector<Perm> action;
    for (const auto& p : action_) {
      std::vector<std::size_t> images(orbit.size());
      for (std::size_t k = 0; k < orbit.size(); ++k) images[k] = local[p(orbit[k])];
      action.emplace_back(std::move(images));
    }
    if (action.empty()) return MonodromyCovering(presentation_, {}, 0);
    return MonodromyCovering(presentation_, std::move(action), local[point]);
  }
  throw DomainError("point lies in no orbit");
}

FiberProduct monodromy_fiber_product(const MonodromyCovering& c1, const MonodromyCovering& c2) {
  if (!(c1.presentation() == c2.presentation())) {
    throw DomainError("fiber product needs coverings of the same presentation");
  }
  const std::size_t n1 = c1.fiber_size(), n2 = c2.fiber_size();
  std::vector<Perm> action;
  for (std::size_t k = 0; k < c1.action().size(); ++k) {
    std::vector<std::size_t> images(n1 * n2);
    for (std::size_t x1 = 0; x1 < n1; ++x1) {
      for (std::size_t x2 = 0; x2 < n2; ++x2) {
        images[x1 * n2 + x2] = c1.action()[k](x1) * n2 + c2.action()[k](x2);
      }
    }
    action.emplace_back(std::move(images));
  }
  std::size_t base = c1.basepoint() * n2 + c2.basepoint();
  FiberProduct fp{MonodromyCovering(c1.presentation(), std::move(action), base), {}, {}};
  fp.orbits = fp.covering.orbits();
  for (std::size_t x1 = 0; x1 < n1; ++x1) {
    for (std::size_t x2 = 0; x2 < n2; ++x2) fp.points.emplace_back(x1, x2);
  }
  return fp;
}

bool DeckGroup::is_transitive() const {
  if (automorphisms.empty()) return false;
  std::set<std::size_t> images;
  for (const auto& a : automorphisms) images.insert(a(0));
  return images.size() == automorphisms.front().degree();
}

DeckGroup deck_group(const MonodromyCovering& c) {
  if (!c.is_connected()) throw DomainError("deck group needs a connected covering");
  const std::size_t n = c.fiber_size();
  const std::size_t b = c.basepoint();
  // Breadth-first spanning tree from the basepoint.
  std::vector<std::pair<std::size_t, std::size_t>> tree;  // (point, generator) reaching each new point
  std::vector<std::size_t> order = {b};
  std::vector<char> reached(n, 0);
  reached[b] = 1;
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (std::size_t k = 0; k < c.action().size(); ++k) {
      std::size_t y = c.action()[k](order[head]);
      if (!reached[y]) {
        reached[y] = 1;
        order.push_back(y);
        tree.emplace_back(order[head], k);
      }
    }
  }
  DeckGroup deck;
  std::vector<std::size_t> sigma(n);
  for (std::size_t target = 0; target < n; ++target) {
    sigma[b] = target;
    for (std::size_t t = 0; t < tree.size(); ++t) {
      const auto [from, k] = tree[t];
      sigma[order[t + 1]] = c.action()[k](sigma[from]);
    }
    bool ok = true;
    for (std::size_t k = 0; k < c.action().size() && ok; ++k) {
      for (std::size_t x = 0; x < n; ++x) {
        if (sigma[c.action()[k](x)] != c.action()[k](sigma[x])) {
          ok = false;
          break;
        }
      }
    }
    if (ok) deck.automorphisms.emplace_back(sigma);
  }
  // The identity is found at target == basepoint; move it to the front.
  std::stable_partition(deck.automorphisms.begin(), deck.automorphisms.end(),
                        [](const Perm& p) { return p.is_identity(); });
  std::stable_sort(deck.automorphisms.begin() + 1, deck.automorphisms.end(),
                   [b](const Perm& x, const Perm& y) { return x(b) < y(b); });
  return deck;
}

bool is_regular(const MonodromyCovering& c) { return deck_group(c).order() == c.fiber_size(); }

bool acts_freely(const MonodromyCovering& c, const std::vector<Word>& local_elements) {
  for (const auto& w : local_elements) {
    Perm p = c.act(w);
    for (std::size_t x = 0; x < c.fiber_size(); ++x) {
      if (p(x) == x) return false;
    }
  }
  return true;
}

namespace {

std::vector<Perm> table_action(const CosetTable& t, std::size_t rank) {
  std::vector<Perm> out;
  for (std::size_t k = 0; k < rank; ++k) {
    std::vector<std::size_t> images(t.size());
    Letter inv = -static_cast<Letter>(k + 1);
    for (std::size_t x = 0; x < t.size(); ++x) images[x] = t.apply(x, inv);
    out.emplace_back(std::move(images));
  }
  return out;
}

}  // namespace

MonodromyCovering covering_from_subgroup(const Presentation& p, const std::vector<Word>& subgroup_generators,
                                         std::size_t max_cosets) {
  CosetTable t = enumerate_cosets(p, subgroup_generators, max_cosets);
  if (p.rank() == 0) return MonodromyCovering(p, {}, 0);
  return MonodromyCovering(p, table_action(t, p.rank()), 0);
}

UniversalCover universal_cover(const Presentation& p, std::size_t max_cosets) {
  MonodromyCovering c = covering_from_subgroup(p, {}, max_cosets);
  DeckGroup d = deck_group(c);
  return UniversalCover{std::move(c), std::move(d)};
}

Presentation group_presentation(const FiniteGroup& g) {
  Presentation p;
  for (std::size_t k = 0; k < g.generators().size(); ++k) p.generators.push_back("g" + std::to_string(k + 1));
  std::set<Word> seen;
  const auto& words = g.shortlex_words();
  for (ElementId e = 0; e < g.order(); ++e) {
    for (std::size_t s = 0; s < g.generators().size(); ++s) {
      Word w = words[e];
      w.push_back(static_cast<Letter>(s + 1));
      w = concat(w, inverse(words[g.multiply(e, g.generators()[s])]));
      Word r = canonical_relator(w);
      if (!r.empty() && seen.insert(r).second) p.relations.push_back(std::move(r));
    }
  }
  return p;
}

MonodromyCovering coset_action_covering(const Subgroup& h) {
  const FiniteGroup& g = *h.parent();
  CosetSpace cs = right_cosets(h);
  std::vector<Perm> action;
  for (ElementId s : g.generators()) {
    ElementId inv = g.inverse(s);
    std::vector<std::size_t> images(cs.cosets.size());
    for (std::size_t k = 0; k < cs.cosets.size(); ++k) {
      images[k] = cs.coset_of[g.multiply(cs.representatives[k], inv)];
    }
    action.emplace_back(std::move(images));
  }
  return MonodromyCovering(group_presentation(g), std::move(action), 0);
}

// --------------------------------------------------- orientation covers

namespace {

std::vector<int> symbol_signs(const OrbifoldAtlas& a) {
  std::vector<int> out;
  for (std::size_t s = 0; s < a.alphabet.size(); ++s) {
    auto sg = a.sign({static_cast<Letter>(s + 1)});
    if (!sg) {
      throw DomainError("symbol '" + a.alphabet.symbols()[s] + "' has no orientation sign");
    }
    out.push_back(*sg);
  }
  return out;
}

void require_valid(const OrbifoldAtlas& a) {
  auto report = validate_atlas(a);
  if (!report.empty()) throw DomainError("invalid atlas: " + to_string(report.front()));
}

}  // namespace

MonodromyCovering orientation_covering(const OrbifoldAtlas& a) {
  require_valid(a);
  Presentation p = presentation_from_atlas(a);
  std::vector<int> signs = symbol_signs(a);
  std::vector<Perm> action;
  for (int s : signs) action.push_back(s < 0 ? Perm({1, 0}) : Perm::identity(2));
  if (action.empty()) throw DomainError("atlas has no symbols; its double cover is two points");
  return MonodromyCovering(std::move(p), std::move(action), 0);
}

namespace {

// Builds the double cover by Reidemeister-Schreier rewriting with the
// transversal {1, rho}, rho a fixed orientation reversing letter. A chart
// with reversing elements lifts to one chart (local group: kernel of the
// sign); other charts lift to two sheets, the second conjugated by rho.
class DoubleCoverBuilder {
 public:
  explicit DoubleCoverBuilder(const OrbifoldAtlas& base) : base_(base), signs_(symbol_signs(base)) {}

  DoubleCover build() {
    for (std::size_t s = 0; s < signs_.size() && !rho_; ++s) {
      if (signs_[s] < 0) rho_ = static_cast<Letter>(s + 1);
    }
    if (!rho_) return disjoint_copies();
    make_charts();
    make_free_symbols();
    lift_gluings();
    lift_products();
    return std::move(out_);
  }

 private:
  struct Lift {
    std::size_t chart;
    Word lambda;  // old word with sign equal to the sheet
  };

  std::size_t new_symbol(const std::string& prefix, Word provenance) {
    std::string name = prefix + std::to_string(prefix == "k" ? ++k_count_ : ++x_count_);
    out_.atlas.alphabet.intern(name);
    out_.provenance.push_back(std::move(provenance));
    return out_.atlas.alphabet.size() - 1;
  }

  Word rho_word() const { return {rho_}; }

  bool merged(std::size_t i) const { return reversing_[i].has_value(); }

  void make_charts() {
    const std::size_t n = base_.charts.size();
    reversing_.assign(n, std::nullopt);
    lifts_.assign(n, {});
    to_new_.assign(n, {});
    std::optional<std::size_t> rho_chart;
    if (auto o = base_.owner(static_cast<std::size_t>(rho_ - 1))) rho_chart = o->first;
    for (std::size_t i = 0; i < n; ++i) {
      const FiniteGroup& g = *base_.charts[i].group;
      if (rho_chart == i) {
        auto o = base_.owner(static_cast<std::size_t>(rho_ - 1));
        reversing_[i] = g.generators()[o->second];
      } else {
        for (ElementId e = 0; e < g.order(); ++e) {
          if (*base_.local_sign(i, e) < 0) {
            reversing_[i] = e;
            break;
          }
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Chart& ch = base_.charts[i];
      const FiniteGroup& g = *ch.group;
      if (merged(i)) {
        std::vector<ElementId> kernel;
        for (ElementId e = 0; e < g.order(); ++e) {
          if (*base_.local_sign(i, e) > 0) kernel.push_back(e);
        }
        // Greedy generating set of the kernel, in element id order.
        std::vector<ElementId> gens;
        std::vector<ElementId> span = {FiniteGroup::identity()};
        for (ElementId e : kernel) {
          if (std::find(span.begin(), span.end(), e) != span.end()) continue;
          gens.push_back(e);
          span = generate_subgroup(ch.group, gens).members();
        }
        std::vector<Perm> perms;
        for (ElementId e : gens) perms.push_back(g.element(e));
        GroupPtr k = make_group(perms, g.degree());
        std::size_t c = add_new_chart(i, "ker " + (ch.group_name.empty() ? std::string("G") : ch.group_name), k,
                                      [&](ElementId e) { return base_.local_word(i, e); }, gens, ch);
        Word r = base_.local_word(i, *reversing_[i]);
        lifts_[i] = {Lift{c, {}}, Lift{c, r}};
        std::map<ElementId, ElementId> m;
        for (ElementId e = 0; e < k->order(); ++e) m[g.index_of(k->element(e))] = e;
        to_new_[i] = std::move(m);
      } else {
        const Word rho = rho_word();
        std::size_t plus = add_new_chart(i, ch.group_name, ch.group,
                                         [&](ElementId e) { return base_.local_word(i, e); },
                                         ch.group->generators(), ch);
        std::size_t minus = add_new_chart(
            i, ch.group_name, ch.group,
            [&](ElementId e) { return concat(concat(rho, base_.local_word(i, e)), inverse(rho)); },
            ch.group->generators(), ch);
        lifts_[i] = {Lift{plus, {}}, Lift{minus, rho}};
        std::map<ElementId, ElementId> m;
        for (ElementId e = 0; e < g.order(); ++e) m[e] = e;
        to_new_[i] = std::move(m);
      }
    }
  }

  template <class Prov>
  std::size_t add_new_chart(std::size_t base_index, const std::string& name, GroupPtr group, Prov provenance,
                            const std::vector<ElementId>& old_gens, const Chart& old) {
    Chart ch;
    ch.id = out_.atlas.charts.size();
    ch.group_name = name;
    ch.group = group;
    for (ElementId e : old_gens) {
      std::size_t s = new_symbol("k", provenance(e));
      ch.symbols.push_back(out_.atlas.alphabet.symbols()[s]);
    }
    if (!old.action.empty() && old.geometry) {
      ch.geometry = old.geometry;
      for (ElementId e : old_gens) {
        ch.action.push_back(evaluate_word(*old.geometry, old.group->shortlex_words()[e], old.action));
      }
    } else {
      for (ElementId e : old_gens) ch.signs.push_back(*base_.local_sign(base_index, e));
    }
    out_.atlas.charts.push_back(std::move(ch));
    out_.base_chart.push_back(base_index);
    return out_.atlas.charts.size() - 1;
  }

  void make_free_symbols() {
    const std::size_t n = base_.charts.size();
    chart_link_.assign(n, std::nullopt);
    const Word rho = rho_word();
    for (std::size_t i = 0; i < n; ++i) {
      if (!merged(i)) continue;
      Word r = base_.local_word(i, *reversing_[i]);
      Word link = base_.normal_form(concat(r, inverse(rho)));
      if (!link.empty()) chart_link_[i] = new_symbol("x", link);
    }
    free_.assign(base_.alphabet.size(), {std::nullopt, std::nullopt});
    for (std::size_t s = 0; s < base_.alphabet.size(); ++s) {
      if (base_.owner(s)) continue;
      const Letter x = static_cast<Letter>(s + 1);
      for (int t = 0; t < 2; ++t) {
        Word head = t == 0 ? Word{} : rho;
        Word tail = ((t == 0) == (signs_[s] > 0)) ? Word{} : rho;
        Word gen = base_.normal_form(concat(concat(head, Word{x}), inverse(tail)));
        if (!gen.empty()) free_[s][t] = new_symbol("x", gen);
      }
    }
  }

  Word letter_word(std::size_t symbol, bool inverted) const {
    Letter l = static_cast<Letter>(symbol + 1);
    return {inverted ? -l : l};
  }

  // Word over the new local symbols of chart lifts_[i][0].chart for the
  // kernel element e (old id).
  Word kernel_word(std::size_t i, ElementId e) const {
    std::size_t c = lifts_[i][0].chart;
    return out_.atlas.local_word(c, to_new_[i].at(e));
  }

  // Rewrites an old word of sign +1 into the new alphabet.
  Word rewrite(const Word& w) const {
    const Word nf = base_.normal_form(w);
    Word out;
    bool at_rho = false;
    std::size_t p = 0;
    while (p < nf.size()) {
      const std::size_t s = static_cast<std::size_t>(std::abs(nf[p]) - 1);
      auto o = base_.owner(s);
      if (!o) {
        const int t_sign = signs_[s];
        if (nf[p] > 0) {
          if (auto sym = free_[s][at_rho ? 1 : 0]) append(out, letter_word(*sym, false));
          if (t_sign < 0) at_rho = !at_rho;
        } else {
          if (t_sign < 0) at_rho = !at_rho;
          if (auto sym = free_[s][at_rho ? 1 : 0]) append(out, letter_word(*sym, true));
        }
        ++p;
        continue;
      }
      const std::size_t i = o->first;
      Word run;
      while (p < nf.size()) {
        auto q = base_.owner(static_cast<std::size_t>(std::abs(nf[p]) - 1));
        if (!q || q->first != i) break;
        run.push_back(nf[p++]);
      }
      const FiniteGroup& g = *base_.charts[i].group;
      const ElementId e = *base_.evaluate_local(i, run);
      const int sg = *base_.local_sign(i, e);
      if (!merged(i)) {
        append(out, out_.atlas.local_word(lifts_[i][at_rho ? 1 : 0].chart, to_new_[i].at(e)));
      } else {
        const ElementId r = *reversing_[i];
        Word link = chart_link_[i] ? letter_word(*chart_link_[i], false) : Word{};
        if (!at_rho && sg > 0) {
          append(out, kernel_word(i, e));
        } else if (!at_rho) {
          append(out, kernel_word(i, g.multiply(e, g.inverse(r))));
          append(out, link);
        } else if (sg > 0) {
          append(out, inverse(link));
          append(out, kernel_word(i, g.conjugate(r, e)));
          append(out, link);
        } else {
          append(out, inverse(link));
          append(out, kernel_word(i, g.multiply(r, e)));
        }
      }
      if (sg < 0) at_rho = !at_rho;
    }
    if (at_rho) throw DomainError("element reverses orientation and has no lift");
    return out_.atlas.normal_form(free_reduce(out));
  }

  static void append(Word& out, const Word& w) { out.insert(out.end(), w.begin(), w.end()); }

  int word_sign(const Word& w) const {
    int s = 1;
    for (Letter l : w) s *= signs_[static_cast<std::size_t>(std::abs(l) - 1)];
    return s;
  }

  const Lift& lift(std::size_t i, int sheet) const { return lifts_[i][sheet > 0 ? 0 : 1]; }

  void lift_gluings() {
    std::map<std::pair<std::size_t, std::size_t>, std::set<Word>> sets;
    for (const auto& gl : base_.gluings) {
      for (const auto& gamma : gl.elements) {
        for (int s : {1, -1}) {
          const Lift& from = lift(gl.i, s);
          const Lift& to = lift(gl.j, s * word_sign(gamma));
          Word e = concat(concat(from.lambda, gamma), inverse(to.lambda));
          sets[{from.chart, to.chart}].insert(rewrite(e));
        }
      }
    }
    for (auto& [key, elems] : sets) {
      std::vector<Word> sorted(elems.begin(), elems.end());
      std::sort(sorted.begin(), sorted.end(), shortlex_less);
      out_.atlas.gluings.push_back({key.first, key.second, std::move(sorted)});
    }
  }

  void lift_products() {
    std::set<std::tuple<std::size_t, std::size_t, std::size_t, Word, Word, Word>> seen;
    for (const auto& pr : base_.products) {
      if (word_sign(pr.result) != word_sign(pr.left) * word_sign(pr.right)) {
        throw DomainError("product entry does not respect orientation signs");
      }
      for (int s : {1, -1}) {
        const Lift& a = lift(pr.i, s);
        const int t = s * word_sign(pr.left);
        const Lift& b = lift(pr.j, t);
        const Lift& c = lift(pr.k, t * word_sign(pr.right));
        ProductEntry e{a.chart, b.chart, c.chart,
                       rewrite(concat(concat(a.lambda, pr.left), inverse(b.lambda))),
                       rewrite(concat(concat(b.lambda, pr.right), inverse(c.lambda))),
                       rewrite(concat(concat(a.lambda, pr.result), inverse(c.lambda)))};
        if (seen.emplace(e.i, e.j, e.k, e.left, e.right, e.result).second) {
          out_.atlas.products.push_back(std::move(e));
        }
      }
    }
  }

  // Orientation preserving everywhere: two relabelled copies.
  DoubleCover disjoint_copies() {
    const std::size_t n = base_.charts.size();
    for (int sheet = 0; sheet < 2; ++sheet) {
      std::vector<Letter> rename(base_.alphabet.size());
      for (std::size_t s = 0; s < base_.alphabet.size(); ++s) {
        bool local = base_.owner(s).has_value();
        rename[s] = static_cast<Letter>(new_symbol(local ? "k" : "x", {static_cast<Letter>(s + 1)}) + 1);
      }
      auto map_word = [&](const Word& w) {
        Word out;
        for (Letter l : w) out.push_back(l > 0 ? rename[static_cast<std::size_t>(l - 1)]
                                               : -rename[static_cast<std::size_t>(-l - 1)]);
        return out;
      };
      for (std::size_t i = 0; i < n; ++i) {
        Chart ch = base_.charts[i];
        ch.id = sheet * n + i;
        for (auto& sym : ch.symbols) {
          sym = out_.atlas.alphabet.symbols()[static_cast<std::size_t>(
                    rename[static_cast<std::size_t>(base_.alphabet.find(sym))]) - 1];
        }
        out_.atlas.charts.push_back(std::move(ch));
        out_.base_chart.push_back(i);
      }
      for (const auto& gl : base_.gluings) {
        GluingSet g{sheet * n + gl.i, sheet * n + gl.j, {}};
        for (const auto& w : gl.elements) g.elements.push_back(map_word(w));
        out_.atlas.gluings.push_back(std::move(g));
      }
      for (const auto& pr : base_.products) {
        out_.atlas.products.push_back({sheet * n + pr.i, sheet * n + pr.j, sheet * n + pr.k,
                                       map_word(pr.left), map_word(pr.right), map_word(pr.result)});
      }
    }
    return std::move(out_);
  }

  const OrbifoldAtlas& base_;
  std::vector<int> signs_;
  Letter rho_ = 0;
  std::vector<std::optional<ElementId>> reversing_;
  std::vector<std::array<Lift, 2>> lifts_;
  std::vector<std::map<ElementId, ElementId>> to_new_;
  std::vector<std::optional<std::size_t>> chart_link_;
  std::vector<std::array<std::optional<std::size_t>, 2>> free_;
  std::size_t k_count_ = 0, x_count_ = 0;
  DoubleCover out_;
};

}  // namespace

DoubleCover orientation_double_cover(const OrbifoldAtlas& a) {
  require_valid(a);
  return DoubleCoverBuilder(a).build();
}

}  // namespace orbicover
