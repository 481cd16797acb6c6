#include "orbicover/group_core.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <numeric>
#include <mutex>
#include <set>
#include <sstream>

#include "orbicover/errors.hpp"

namespace orbicover {

namespace {
// Groups up to this order keep a full multiplication table.
constexpr std::size_t kTableLimit = 1024;
}  // namespace

// ---------------------------------------------------------------- Perm

Perm::Perm(std::vector<std::size_t> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (std::size_t x : images_) {
    if (x >= images_.size() || seen[x]) {
      throw DomainError("permutation images are not a bijection");
    }
    seen[x] = true;
  }
}

Perm Perm::identity(std::size_t degree) {
  std::vector<std::size_t> images(degree);
  std::iota(images.begin(), images.end(), std::size_t{0});
  return Perm(std::move(images));
}

Perm Perm::from_cycles(std::size_t degree,
                       const std::vector<std::vector<std::size_t>>& cycles) {
  std::vector<std::size_t> images(degree);
  std::iota(images.begin(), images.end(), std::size_t{0});
  for (const auto& cycle : cycles) {
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      if (cycle[k] >= degree) throw DomainError("cycle point exceeds degree");
      images[cycle[k]] = cycle[(k + 1) % cycle.size()];
    }
  }
  return Perm(std::move(images));
}

Perm Perm::inverse() const {
  std::vector<std::size_t> inv(images_.size());
  for (std::size_t x = 0; x < images_.size(); ++x) inv[images_[x]] = x;
  Perm p;
  p.images_ = std::move(inv);
  return p;
}

bool Perm::is_identity() const {
  for (std::size_t x = 0; x < images_.size(); ++x) {
    if (images_[x] != x) return false;
  }
  return true;
}

std::size_t Perm::order() const {
  std::size_t result = 1;
  std::vector<bool> seen(images_.size(), false);
  for (std::size_t x = 0; x < images_.size(); ++x) {
    if (seen[x]) continue;
    std::size_t len = 0;
    for (std::size_t y = x; !seen[y]; y = images_[y]) {
      seen[y] = true;
      ++len;
    }
    result = std::lcm(result, len);
  }
  return result;
}

Perm operator*(const Perm& a, const Perm& b) {
  if (a.degree() != b.degree()) throw DomainError("permutation degree mismatch");
  std::vector<std::size_t> images(a.degree());
  for (std::size_t x = 0; x < images.size(); ++x) images[x] = a(b(x));
  Perm p;
  p.images_ = std::move(images);
  return p;
}

std::string Perm::to_string() const {
  std::ostringstream out;
  std::vector<bool> seen(images_.size(), false);
  bool any = false;
  for (std::size_t x = 0; x < images_.size(); ++x) {
    if (seen[x] || images_[x] == x) continue;
    out << '(';
    for (std::size_t y = x; !seen[y]; y = images_[y]) {
      if (y != x) out << ' ';
      out << y;
      seen[y] = true;
    }
    out << ')';
    any = true;
  }
  return any ? out.str() : "()";
}

// --------------------------------------------------------- FiniteGroup

FiniteGroup FiniteGroup::generate(std::vector<Perm> generators, std::size_t degree,
                                  std::size_t max_order) {
  FiniteGroup g;
  g.degree_ = degree;
  for (const auto& p : generators) {
    if (p.degree() != degree) throw DomainError("generator degree mismatch");
  }
  g.generator_perms_ = generators;

  // Breadth-first closure; words are built alongside in shortlex order.
  std::vector<std::pair<Perm, int>> letters;
  for (std::size_t k = 0; k < generators.size(); ++k) {
    int letter = static_cast<int>(k) + 1;
    letters.emplace_back(generators[k], letter);
    letters.emplace_back(generators[k].inverse(), -letter);
  }
  Perm id = Perm::identity(degree);
  g.elements_.push_back(id);
  g.lookup_.emplace(id.images(), 0);
  g.words_.push_back({});
  for (std::size_t head = 0; head < g.elements_.size(); ++head) {
    for (const auto& [perm, letter] : letters) {
      Perm next = g.elements_[head] * perm;
      if (g.lookup_.count(next.images())) continue;
      if (g.elements_.size() >= max_order) {
        throw ResourceError("group order exceeds bound " + std::to_string(max_order));
      }
      auto word = g.words_[head];
      word.push_back(letter);
      g.lookup_.emplace(next.images(), g.elements_.size());
      g.elements_.push_back(std::move(next));
      g.words_.push_back(std::move(word));
    }
  }

  const std::size_t n = g.elements_.size();
  if (n <= kTableLimit) g.table_.assign(n, std::vector<ElementId>(n));
  for (std::size_t a = 0; a < n && n <= kTableLimit; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      g.table_[a][b] = g.lookup_.at((g.elements_[a] * g.elements_[b]).images());
    }
  }
  g.inverses_.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    g.inverses_[a] = g.lookup_.at(g.elements_[a].inverse().images());
  }
  for (const auto& p : generators) g.generators_.push_back(g.lookup_.at(p.images()));
  return g;
}

ElementId FiniteGroup::multiply(ElementId a, ElementId b) const {
  if (!table_.empty()) return table_.at(a).at(b);
  return lookup_.at((elements_.at(a) * elements_.at(b)).images());
}

ElementId FiniteGroup::conjugate(ElementId g, ElementId x) const {
  return multiply(multiply(g, x), inverse(g));
}

std::size_t FiniteGroup::element_order(ElementId a) const {
  std::size_t k = 1;
  for (ElementId x = a; x != identity(); x = multiply(x, a)) ++k;
  return k;
}

std::optional<ElementId> FiniteGroup::find(const Perm& p) const {
  auto it = lookup_.find(p.images());
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

ElementId FiniteGroup::index_of(const Perm& p) const {
  auto id = find(p);
  if (!id) throw DomainError("permutation " + p.to_string() + " is not in the group");
  return *id;
}

GroupPtr make_group(std::vector<Perm> generators, std::size_t degree) {
  return std::make_shared<const FiniteGroup>(
      FiniteGroup::generate(std::move(generators), degree));
}

// ------------------------------------------------------------ Subgroup

Subgroup::Subgroup(GroupPtr parent, std::vector<ElementId> members)
    : parent_(std::move(parent)), members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool Subgroup::contains(ElementId g) const {
  return std::binary_search(members_.begin(), members_.end(), g);
}

bool Subgroup::is_subset_of(const Subgroup& other) const {
  return parent_ == other.parent_ &&
         std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                       members_.end());
}

bool operator==(const Subgroup& a, const Subgroup& b) {
  return a.parent_ == b.parent_ && a.members_ == b.members_;
}

namespace {

std::vector<ElementId> closure(const FiniteGroup& g, std::span<const ElementId> gens) {
  std::vector<bool> in(g.order(), false);
  std::vector<ElementId> members{FiniteGroup::identity()};
  in[FiniteGroup::identity()] = true;
  for (std::size_t head = 0; head < members.size(); ++head) {
    for (ElementId s : gens) {
      ElementId next = g.multiply(members[head], s);
      if (!in[next]) {
        in[next] = true;
        members.push_back(next);
      }
    }
  }
  return members;
}

void check_same_parent(const Subgroup& a, const Subgroup& b) {
  if (a.parent() != b.parent()) throw DomainError("subgroups have different parent groups");
}

bool subgroup_less(const Subgroup& a, const Subgroup& b) {
  if (a.order() != b.order()) return a.order() < b.order();
  return a.members() < b.members();
}

}  // namespace

Subgroup generate_subgroup(const GroupPtr& parent, std::span<const ElementId> gens) {
  for (ElementId s : gens) {
    if (s >= parent->order()) throw DomainError("generator is not an element of the parent");
  }
  return Subgroup(parent, closure(*parent, gens));
}

Subgroup generate_subgroup(const GroupPtr& parent, const std::vector<Perm>& gens) {
  std::vector<ElementId> ids;
  for (const auto& p : gens) {
    if (p.degree() != parent->degree()) {
      throw DomainError("generator degree does not match the parent group");
    }
    ids.push_back(parent->index_of(p));
  }
  return generate_subgroup(parent, ids);
}

Subgroup trivial_subgroup(const GroupPtr& parent) {
  return Subgroup(parent, {FiniteGroup::identity()});
}

Subgroup whole_group(const GroupPtr& parent) {
  std::vector<ElementId> all(parent->order());
  std::iota(all.begin(), all.end(), ElementId{0});
  return Subgroup(parent, std::move(all));
}

Subgroup intersection(const Subgroup& a, const Subgroup& b) {
  check_same_parent(a, b);
  std::vector<ElementId> out;
  std::set_intersection(a.members().begin(), a.members().end(), b.members().begin(),
                        b.members().end(), std::back_inserter(out));
  return Subgroup(a.parent(), std::move(out));
}

Subgroup conjugate(const Subgroup& h, ElementId g) {
  std::vector<ElementId> out;
  out.reserve(h.order());
  for (ElementId x : h.members()) out.push_back(h.parent()->conjugate(g, x));
  return Subgroup(h.parent(), std::move(out));
}

bool are_conjugate(const Subgroup& a, const Subgroup& b) {
  check_same_parent(a, b);
  if (a.order() != b.order()) return false;
  for (ElementId g = 0; g < a.parent()->order(); ++g) {
    if (conjugate(a, g) == b) return true;
  }
  return false;
}

bool is_normal(const Subgroup& h) {
  for (ElementId g : h.parent()->generators()) {
    if (!(conjugate(h, g) == h)) return false;
  }
  return true;
}

std::vector<Subgroup> all_subgroups(const GroupPtr& g) {
  // Every subgroup is the join of the cyclic subgroups it contains, so
  // repeatedly joining known subgroups with cyclic ones reaches them all.
  std::set<std::vector<ElementId>> seen;
  std::vector<std::vector<ElementId>> cyclic;
  for (ElementId x = 0; x < g->order(); ++x) {
    std::array<ElementId, 1> gen{x};
    Subgroup c = generate_subgroup(g, gen);
    if (seen.insert(c.members()).second) cyclic.push_back(c.members());
  }
  std::vector<std::vector<ElementId>> frontier(seen.begin(), seen.end());
  while (!frontier.empty()) {
    std::vector<std::vector<ElementId>> next;
    for (const auto& s : frontier) {
      for (const auto& c : cyclic) {
        if (std::includes(s.begin(), s.end(), c.begin(), c.end())) continue;
        std::vector<ElementId> gens = s;
        gens.insert(gens.end(), c.begin(), c.end());
        Subgroup joined = generate_subgroup(g, gens);
        if (seen.insert(joined.members()).second) next.push_back(joined.members());
      }
    }
    frontier = std::move(next);
  }
  std::vector<Subgroup> out;
  for (const auto& m : seen) out.emplace_back(g, m);
  std::sort(out.begin(), out.end(), subgroup_less);
  return out;
}

std::vector<Subgroup> conjugacy_classes_of_subgroups(const GroupPtr& g) {
  std::vector<Subgroup> reps;
  std::set<std::vector<ElementId>> covered;
  for (const auto& h : all_subgroups(g)) {
    if (covered.count(h.members())) continue;
    reps.push_back(h);
    for (ElementId x = 0; x < g->order(); ++x) covered.insert(conjugate(h, x).members());
  }
  return reps;
}

Subgroup normalizer(const Subgroup& h) {
  std::vector<ElementId> out;
  for (ElementId g = 0; g < h.parent()->order(); ++g) {
    if (conjugate(h, g) == h) out.push_back(g);
  }
  return Subgroup(h.parent(), std::move(out));
}

CosetSpace right_cosets(const Subgroup& h) {
  const auto& g = *h.parent();
  CosetSpace space{h, {}, {}, std::vector<std::size_t>(g.order(), SIZE_MAX)};
  for (ElementId x = 0; x < g.order(); ++x) {
    if (space.coset_of[x] != SIZE_MAX) continue;
    std::vector<ElementId> coset;
    for (ElementId m : h.members()) coset.push_back(g.multiply(m, x));
    std::sort(coset.begin(), coset.end());
    for (ElementId y : coset) space.coset_of[y] = space.cosets.size();
    space.representatives.push_back(x);
    space.cosets.push_back(std::move(coset));
  }
  return space;
}

std::vector<std::vector<ElementId>> double_cosets(const Subgroup& h1, const Subgroup& h2) {
  check_same_parent(h1, h2);
  const auto& g = *h1.parent();
  std::vector<bool> done(g.order(), false);
  std::vector<std::vector<ElementId>> out;
  for (ElementId x = 0; x < g.order(); ++x) {
    if (done[x]) continue;
    std::set<ElementId> cell;
    for (ElementId a : h2.members()) {
      for (ElementId b : h1.members()) cell.insert(g.multiply(g.multiply(a, x), b));
    }
    for (ElementId y : cell) done[y] = true;
    out.emplace_back(cell.begin(), cell.end());
  }
  return out;
}

Subgroup conjugate_intersection(std::span<const Subgroup> subs,
                                std::span<const ElementId> reps) {
  if (subs.empty()) throw DomainError("conjugate_intersection needs at least one subgroup");
  if (subs.size() != reps.size()) {
    throw DomainError("conjugate_intersection: subgroup and representative counts differ");
  }
  Subgroup acc = conjugate(subs[0], reps[0]);
  for (std::size_t i = 1; i < subs.size(); ++i) {
    acc = intersection(acc, conjugate(subs[i], reps[i]));
  }
  return acc;
}

// ------------------------------------------------------------- catalog

namespace {

GroupPtr cyclic(std::size_t n) {
  if (n == 1) return make_group({}, 1);
  std::vector<std::size_t> images(n);
  for (std::size_t k = 0; k < n; ++k) images[k] = (k + 1) % n;
  return make_group({Perm(std::move(images))}, n);
}

// Symmetries of a regular n-gon with vertices 0..n-1 counterclockwise:
// generator 0 is the rotation by 2pi/n, generator 1 the reflection fixing
// vertex 0.
GroupPtr dihedral(std::size_t n) {
  std::vector<std::size_t> rot(n), ref(n);
  for (std::size_t k = 0; k < n; ++k) {
    rot[k] = (k + 1) % n;
    ref[k] = (n - k) % n;
  }
  return make_group({Perm(std::move(rot)), Perm(std::move(ref))}, n);
}

GroupPtr quaternion() {
  // Units 0..7 = 1, i, j, k, -1, -i, -j, -k; left multiplication.
  static constexpr int basis[4][4] = {
      {0, 1, 2, 3}, {1, 4, 3, 6}, {2, 7, 4, 1}, {3, 2, 5, 4}};
  auto mul = [](std::size_t a, std::size_t b) {
    std::size_t sign = (a / 4 + b / 4) % 2;
    std::size_t r = static_cast<std::size_t>(basis[a % 4][b % 4]);
    return (r + 4 * sign) % 8;
  };
  std::vector<std::size_t> li(8), lj(8);
  for (std::size_t x = 0; x < 8; ++x) {
    li[x] = mul(1, x);
    lj[x] = mul(2, x);
  }
  return make_group({Perm(std::move(li)), Perm(std::move(lj))}, 8);
}

}  // namespace

GroupPtr catalog_group(std::string_view name) {
  static std::mutex mutex;
  static std::map<std::string, GroupPtr, std::less<>> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(name); it != cache.end()) return it->second;

  GroupPtr g;
  auto parse_index = [&](std::size_t lo, std::size_t hi) -> std::size_t {
    std::size_t n = 0;
    for (char ch : name.substr(1)) {
      if (ch < '0' || ch > '9') return 0;
      n = n * 10 + static_cast<std::size_t>(ch - '0');
    }
    return (name.size() > 1 && n >= lo && n <= hi) ? n : 0;
  };
  if (name == "S3") {
    g = make_group({Perm::from_cycles(3, {{0, 1}}), Perm::from_cycles(3, {{0, 1, 2}})}, 3);
  } else if (name == "S4") {
    g = make_group({Perm::from_cycles(4, {{0, 1}}), Perm::from_cycles(4, {{0, 1, 2, 3}})}, 4);
  } else if (name == "A4") {
    g = make_group(
        {Perm::from_cycles(4, {{0, 1, 2}}), Perm::from_cycles(4, {{0, 1}, {2, 3}})}, 4);
  } else if (name == "Q8") {
    g = quaternion();
  } else if (name == "V4") {
    g = make_group(
        {Perm::from_cycles(4, {{0, 1}, {2, 3}}), Perm::from_cycles(4, {{0, 2}, {1, 3}})}, 4);
  } else if (!name.empty() && name[0] == 'Z') {
    if (std::size_t n = parse_index(1, 24)) g = cyclic(n);
  } else if (!name.empty() && name[0] == 'D') {
    if (std::size_t n = parse_index(3, 12)) g = dihedral(n);
  }
  if (!g) throw LookupError("unknown group '" + std::string(name) + "'");
  cache.emplace(std::string(name), g);
  return g;
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {
      "Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z8", "V4", "S3", "D4", "Q8", "D5", "A4", "D6", "S4"};
  return names;
}

}  // namespace orbicover
