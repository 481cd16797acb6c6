#pragma once

// Words in a finite alphabet and finitely presented groups.
//
// A letter is a signed 1-based generator index: +k is generator k-1 and -k
// its inverse. Words compose right to left, like functions: the word "ab"
// acts as a(b(x)).
//
// Text form: a symbol is a lowercase letter followed by optional digits
// ("a", "x12"); the same symbol with its first letter in uppercase is the
// inverse ("A", "X12"). "s^3" and "s^-2" repeat a symbol. "1" or the empty
// string is the identity.

#include <string>
#include <string_view>
#include <vector>

namespace orbicover {

using Letter = int;
using Word = std::vector<Letter>;

Word inverse(const Word& w);
Word concat(const Word& a, const Word& b);
/// Cancels adjacent x x^-1 pairs.
Word free_reduce(const Word& w);
/// Free reduction followed by cancellation across the ends.
Word cyclic_reduce(const Word& w);
/// Canonical representative of the conjugacy class of `w` and `w^-1`:
/// the cyclic reduction, then the least rotation of it or its inverse under
/// the letter order a < A < b < B < ... . The empty word stays empty.
Word canonical_relator(const Word& w);
/// Lexicographic order on words using the letter order above, shorter
/// words first.
bool shortlex_less(const Word& a, const Word& b);

/// Ordered list of symbol names.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols);

  const std::vector<std::string>& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  /// 0-based index, or -1 when absent.
  int find(std::string_view symbol) const;
  /// Index of `symbol`, appending it if new.
  std::size_t intern(std::string_view symbol);

 private:
  std::vector<std::string> symbols_;
};

bool is_valid_symbol(std::string_view symbol);

/// Parses a word. Unknown symbols are appended to `alphabet` when
/// `extend` is true and raise DomainError otherwise.
Word parse_word(std::string_view text, Alphabet& alphabet, bool extend);
Word parse_word(std::string_view text, const Alphabet& alphabet);
std::string format_word(const Word& w, const Alphabet& alphabet);

/// A finitely presented group <generators | relations>.
struct Presentation {
  std::vector<std::string> generators;
  std::vector<Word> relations;
  /// Optional human-readable label per generator (may be empty).
  std::vector<std::string> names;

  Alphabet alphabet() const { return Alphabet(generators); }
  std::size_t rank() const { return generators.size(); }
  /// Throws DomainError if a relation uses an undeclared generator.
  void validate() const;
  /// "<a,b | aa, abAB>".
  std::string to_string() const;
  /// Inverse of to_string(); also accepts "<a | >".
  static Presentation parse(std::string_view text);

  friend bool operator==(const Presentation& a, const Presentation& b) {
    return a.generators == b.generators && a.relations == b.relations;
  }
};

/// Invariant factors of the abelianization, computed by Smith normal form
/// of the relation matrix. Free rank is reported as zeros: Z^2 + Z/2 is
/// {2, 0, 0}, sorted so that each entry divides the next and 0 last.
std::vector<long long> abelian_invariants(const Presentation& p);

}  // namespace orbicover
