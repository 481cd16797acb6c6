#include "orbicover/coset_enum.hpp"

#include <cstdlib>
#include <deque>

#include "orbicover/errors.hpp"

namespace orbicover {

namespace {

constexpr long kUndefined = -1;

std::size_t column(Letter l) {
  return 2 * static_cast<std::size_t>(std::abs(l) - 1) + (l < 0 ? 1 : 0);
}

class Enumerator {
 public:
  Enumerator(std::size_t rank, std::size_t max_live)
      : cols_(2 * rank), max_live_(max_live) {
    new_coset();
  }

  bool alive(std::size_t c) const { return forward_[c] == static_cast<long>(c); }
  std::size_t defined() const { return table_.size(); }

  void define(std::size_t c, std::size_t x) {
    if (live_ >= max_live_) {
      throw ResourceError("coset enumeration exceeded " + std::to_string(max_live_) +
                          " cosets (group possibly infinite)");
    }
    std::size_t n = new_coset();
    table_[c][x] = static_cast<long>(n);
    table_[n][x ^ 1] = static_cast<long>(c);
  }

  // Traces w from c in both directions, defining cosets to close the gap.
  void scan_and_fill(std::size_t c, const std::vector<std::size_t>& w) {
    if (w.empty()) return;
    std::size_t f = c, b = c;
    std::ptrdiff_t i = 0, j = static_cast<std::ptrdiff_t>(w.size()) - 1;
    while (true) {
      while (i <= j && table_[f][w[static_cast<std::size_t>(i)]] != kUndefined) {
        f = static_cast<std::size_t>(table_[f][w[static_cast<std::size_t>(i)]]);
        ++i;
      }
      if (i > j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j >= i && table_[b][w[static_cast<std::size_t>(j)] ^ 1] != kUndefined) {
        b = static_cast<std::size_t>(table_[b][w[static_cast<std::size_t>(j)] ^ 1]);
        --j;
      }
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (i == j) {
        std::size_t x = w[static_cast<std::size_t>(i)];
        table_[f][x] = static_cast<long>(b);
        table_[b][x ^ 1] = static_cast<long>(f);
        return;
      }
      define(f, w[static_cast<std::size_t>(i)]);
    }
  }

  long entry(std::size_t c, std::size_t x) const { return table_[c][x]; }
  std::size_t rep(std::size_t c) {
    std::size_t r = c;
    while (forward_[r] != static_cast<long>(r)) r = static_cast<std::size_t>(forward_[r]);
    while (forward_[c] != static_cast<long>(r)) {
      std::size_t next = static_cast<std::size_t>(forward_[c]);
      forward_[c] = static_cast<long>(r);
      c = next;
    }
    return r;
  }

 private:
  std::size_t new_coset() {
    table_.emplace_back(cols_, kUndefined);
    forward_.push_back(static_cast<long>(table_.size() - 1));
    ++live_;
    return table_.size() - 1;
  }

  void merge(std::size_t k, std::size_t l, std::deque<std::size_t>& queue) {
    k = rep(k);
    l = rep(l);
    if (k == l) return;
    if (k > l) std::swap(k, l);
    forward_[l] = static_cast<long>(k);
    queue.push_back(l);
    --live_;
  }

  void coincidence(std::size_t a, std::size_t b) {
    std::deque<std::size_t> queue;
    merge(a, b, queue);
    while (!queue.empty()) {
      std::size_t e = queue.front();
      queue.pop_front();
      for (std::size_t x = 0; x < cols_; ++x) {
        long fl = table_[e][x];
        if (fl == kUndefined) continue;
        std::size_t f = static_cast<std::size_t>(fl);
        table_[f][x ^ 1] = kUndefined;
        std::size_t e1 = rep(e), f1 = rep(f);
        if (table_[e1][x] != kUndefined) {
          merge(f1, static_cast<std::size_t>(table_[e1][x]), queue);
        } else if (table_[f1][x ^ 1] != kUndefined) {
          merge(e1, static_cast<std::size_t>(table_[f1][x ^ 1]), queue);
        } else {
          table_[e1][x] = static_cast<long>(f1);
          table_[f1][x ^ 1] = static_cast<long>(e1);
        }
      }
    }
  }

  std::size_t cols_;
  std::size_t max_live_;
  std::size_t live_ = 0;
  std::vector<std::vector<long>> table_;
  std::vector<long> forward_;
};

std::vector<std::size_t> to_columns(const Word& w, std::size_t rank) {
  std::vector<std::size_t> out;
  for (Letter l : w) {
    if (l == 0 || static_cast<std::size_t>(std::abs(l)) > rank) {
      throw DomainError("word uses a generator outside the presentation");
    }
    out.push_back(column(l));
  }
  return out;
}

}  // namespace

CosetTable::CosetTable(std::size_t rank, std::vector<std::vector<std::size_t>> rows)
    : rank_(rank), rows_(std::move(rows)) {}

std::size_t CosetTable::apply(std::size_t coset, Letter l) const {
  return rows_.at(coset).at(column(l));
}

std::size_t CosetTable::apply(std::size_t coset, const Word& w) const {
  for (Letter l : w) coset = apply(coset, l);
  return coset;
}

CosetTable enumerate_cosets(const Presentation& p, const std::vector<Word>& subgroup_generators,
                            std::size_t max_cosets) {
  p.validate();
  const std::size_t rank = p.rank();
  std::vector<std::vector<std::size_t>> relators, subgroup;
  for (const auto& r : p.relations) {
    Word red = cyclic_reduce(r);
    if (!red.empty()) relators.push_back(to_columns(red, rank));
  }
  for (const auto& w : subgroup_generators) {
    Word red = free_reduce(w);
    if (!red.empty()) subgroup.push_back(to_columns(red, rank));
  }

  Enumerator e(rank, max_cosets);
  for (const auto& w : subgroup) e.scan_and_fill(0, w);
  for (std::size_t c = 0; c < e.defined(); ++c) {
    if (!e.alive(c)) continue;
    for (const auto& r : relators) {
      e.scan_and_fill(c, r);
      if (!e.alive(c)) break;
    }
    if (!e.alive(c)) continue;
    for (std::size_t x = 0; x < 2 * rank; ++x) {
      if (e.entry(c, x) == kUndefined) e.define(c, x);
    }
  }

  // Renumber live cosets breadth-first from the subgroup coset.
  const std::size_t start = e.rep(0);
  std::vector<long> number(e.defined(), -1);
  std::vector<std::size_t> order = {start};
  number[start] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (std::size_t x = 0; x < 2 * rank; ++x) {
      std::size_t t = e.rep(static_cast<std::size_t>(e.entry(order[head], x)));
      if (number[t] < 0) {
        number[t] = static_cast<long>(order.size());
        order.push_back(t);
      }
    }
  }
  std::vector<std::vector<std::size_t>> rows(order.size(), std::vector<std::size_t>(2 * rank));
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t x = 0; x < 2 * rank; ++x) {
      rows[k][x] = static_cast<std::size_t>(number[e.rep(static_cast<std::size_t>(e.entry(order[k], x)))]);
    }
  }
  return CosetTable(rank, std::move(rows));
}

}  // namespace orbicover
