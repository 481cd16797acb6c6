#include "orbicover/presentation.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "orbicover/errors.hpp"

namespace orbicover {

Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& l : out) l = -l;
  return out;
}

Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (Letter l : w) {
    if (!out.empty() && out.back() == -l) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

Word cyclic_reduce(const Word& w) {
  Word r = free_reduce(w);
  std::size_t lo = 0, hi = r.size();
  while (hi - lo >= 2 && r[lo] == -r[hi - 1]) {
    ++lo;
    --hi;
  }
  return Word(r.begin() + static_cast<std::ptrdiff_t>(lo),
              r.begin() + static_cast<std::ptrdiff_t>(hi));
}

namespace {

int letter_key(Letter l) { return 2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0); }

bool lex_less(const Word& a, const Word& b) {
  return std::lexicographical_compare(
      a.begin(), a.end(), b.begin(), b.end(),
      [](Letter x, Letter y) { return letter_key(x) < letter_key(y); });
}

}  // namespace

bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return lex_less(a, b);
}

Word canonical_relator(const Word& w) {
  Word r = cyclic_reduce(w);
  if (r.empty()) return r;
  Word best = r;
  for (const Word& base : {r, inverse(r)}) {
    Word rot = base;
    for (std::size_t k = 0; k < base.size(); ++k) {
      if (lex_less(rot, best)) best = rot;
      std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    }
  }
  return best;
}

// ------------------------------------------------------------ Alphabet

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  for (const auto& s : symbols_) {
    if (!is_valid_symbol(s)) throw DomainError("invalid generator symbol '" + s + "'");
  }
}

int Alphabet::find(std::string_view symbol) const {
  for (std::size_t k = 0; k < symbols_.size(); ++k) {
    if (symbols_[k] == symbol) return static_cast<int>(k);
  }
  return -1;
}

std::size_t Alphabet::intern(std::string_view symbol) {
  int k = find(symbol);
  if (k >= 0) return static_cast<std::size_t>(k);
  if (!is_valid_symbol(symbol)) {
    throw DomainError("invalid generator symbol '" + std::string(symbol) + "'");
  }
  symbols_.emplace_back(symbol);
  return symbols_.size() - 1;
}

bool is_valid_symbol(std::string_view symbol) {
  if (symbol.empty() || !std::islower(static_cast<unsigned char>(symbol[0]))) return false;
  return std::all_of(symbol.begin() + 1, symbol.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

Word parse_word(std::string_view text, Alphabet& alphabet, bool extend) {
  Word out;
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_space();
  if (text.substr(pos) == "1") return out;
  while (pos < text.size()) {
    char head = text[pos];
    if (!std::isalpha(static_cast<unsigned char>(head))) {
      throw DomainError("unexpected character '" + std::string(1, head) + "' in word '" +
                        std::string(text) + "'");
    }
    bool inverted = std::isupper(static_cast<unsigned char>(head)) != 0;
    std::string symbol(1, static_cast<char>(std::tolower(static_cast<unsigned char>(head))));
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      symbol.push_back(text[pos++]);
    }
    long exponent = 1;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      std::size_t start = pos;
      if (pos < text.size() && text[pos] == '-') ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos == start || (pos == start + 1 && text[start] == '-')) {
        throw DomainError("missing exponent in word '" + std::string(text) + "'");
      }
      exponent = std::strtol(std::string(text.substr(start, pos - start)).c_str(), nullptr, 10);
    }
    int index = alphabet.find(symbol);
    if (index < 0) {
      if (!extend) throw DomainError("unknown generator '" + symbol + "'");
      index = static_cast<int>(alphabet.intern(symbol));
    }
    Letter letter = (index + 1) * (inverted ? -1 : 1);
    if (exponent < 0) {
      letter = -letter;
      exponent = -exponent;
    }
    for (long k = 0; k < exponent; ++k) out.push_back(letter);
    skip_space();
  }
  return out;
}

Word parse_word(std::string_view text, const Alphabet& alphabet) {
  Alphabet copy = alphabet;
  return parse_word(text, copy, false);
}

std::string format_word(const Word& w, const Alphabet& alphabet) {
  if (w.empty()) return "1";
  std::string out;
  for (Letter l : w) {
    std::size_t index = static_cast<std::size_t>(std::abs(l) - 1);
    if (index >= alphabet.size()) throw DomainError("letter outside the alphabet");
    std::string symbol = alphabet.symbols()[index];
    if (l < 0) symbol[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(symbol[0])));
    out += symbol;
  }
  return out;
}

// -------------------------------------------------------- Presentation

void Presentation::validate() const {
  Alphabet a = alphabet();
  const int n = static_cast<int>(generators.size());
  for (const auto& r : relations) {
    for (Letter l : r) {
      if (l == 0 || std::abs(l) > n) {
        throw DomainError("relation uses an undeclared generator");
      }
    }
  }
  if (!names.empty() && names.size() != generators.size()) {
    throw DomainError("generator label count does not match generator count");
  }
}

std::string Presentation::to_string() const {
  Alphabet a = alphabet();
  std::ostringstream out;
  out << '<';
  for (std::size_t k = 0; k < generators.size(); ++k) {
    if (k) out << ',';
    out << generators[k];
  }
  out << " | ";
  for (std::size_t k = 0; k < relations.size(); ++k) {
    if (k) out << ", ";
    out << format_word(relations[k], a);
  }
  out << '>';
  return out.str();
}

Presentation Presentation::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.size() < 2 || text.front() != '<' || text.back() != '>') {
    throw DomainError("presentation must look like <a,b | rel, ...>");
  }
  text = text.substr(1, text.size() - 2);
  auto bar = text.find('|');
  std::string_view gens = bar == std::string_view::npos ? text : text.substr(0, bar);
  std::string_view rels = bar == std::string_view::npos ? std::string_view{} : text.substr(bar + 1);
  auto split = [&](std::string_view s) {
    std::vector<std::string_view> parts;
    while (true) {
      auto comma = s.find(',');
      auto part = trim(s.substr(0, comma));
      if (!part.empty()) parts.push_back(part);
      if (comma == std::string_view::npos) break;
      s = s.substr(comma + 1);
    }
    return parts;
  };
  Presentation p;
  Alphabet alphabet;
  for (auto g : split(gens)) alphabet.intern(g);
  p.generators = alphabet.symbols();
  for (auto r : split(rels)) p.relations.push_back(parse_word(r, alphabet, false));
  return p;
}

// --------------------------------------------------- abelianization

std::vector<long long> abelian_invariants(const Presentation& p) {
  const std::size_t cols = p.generators.size();
  std::vector<std::vector<long long>> m;
  for (const auto& r : p.relations) {
    std::vector<long long> row(cols, 0);
    for (Letter l : r) row[static_cast<std::size_t>(std::abs(l) - 1)] += (l > 0 ? 1 : -1);
    m.push_back(std::move(row));
  }
  const std::size_t rows = m.size();
  std::vector<long long> diag;
  // Smith normal form by repeated pivoting on the smallest nonzero entry.
  std::size_t t = 0;
  for (; t < std::min(rows, cols); ++t) {
    while (true) {
      std::size_t pr = rows, pc = cols;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          if (m[i][j] != 0 && (pr == rows || std::llabs(m[i][j]) < std::llabs(m[pr][pc]))) {
            pr = i;
            pc = j;
          }
        }
      }
      if (pr == rows) break;
      std::swap(m[t], m[pr]);
      for (auto& row : m) std::swap(row[t], row[pc]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        long long q = m[i][t] / m[t][t];
        for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
        if (m[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        long long q = m[t][j] / m[t][t];
        for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
        if (m[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility: fold any entry not divisible by the pivot into row t.
      bool divisible = true;
      for (std::size_t i = t + 1; i < rows && divisible; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (m[i][j] % m[t][t] != 0) {
            for (std::size_t c = t; c < cols; ++c) m[t][c] += m[i][c];
            divisible = false;
            break;
          }
        }
      }
      if (divisible) break;
    }
    if (t >= rows || m[t][t] == 0) break;
    diag.push_back(std::llabs(m[t][t]));
  }
  std::vector<long long> out;
  for (long long d : diag) {
    if (d != 1) out.push_back(d);
  }
  for (std::size_t k = diag.size(); k < cols; ++k) out.push_back(0);
  return out;
}

}  // namespace orbicover
