#include "doctest.h"

#include "orbicover/errors.hpp"
#include "orbicover/presentation.hpp"

using namespace orbicover;

TEST_CASE("word parsing and formatting") {
  Alphabet a;
  Word w = parse_word("abAB", a, true);
  CHECK(w == Word{1, 2, -1, -2});
  CHECK(format_word(w, a) == "abAB");
  CHECK(parse_word("a^3", a) == Word{1, 1, 1});
  CHECK(parse_word("b^-2", a) == Word{-2, -2});
  CHECK(parse_word("1", a).empty());
  CHECK(parse_word("", a).empty());
  CHECK(format_word({}, a) == "1");
  Word x = parse_word("x12X12a", a, true);
  CHECK(x == Word{3, -3, 1});
  CHECK(format_word(x, a) == "x12X12a");
  CHECK_THROWS_AS(parse_word("q", a), DomainError);
  CHECK_THROWS_AS(parse_word("a*b", a), DomainError);
  CHECK_THROWS_AS(parse_word("a^", a), DomainError);
}

TEST_CASE("reductions") {
  CHECK(free_reduce({1, 2, -2, -1, 3}) == Word{3});
  CHECK(cyclic_reduce({-1, 2, 3, 1}) == Word{2, 3});
  CHECK(inverse(Word{1, -2}) == Word{2, -1});
  // bca, its rotations and inverse all canonicalize to abc
  CHECK(canonical_relator({2, 3, 1}) == Word{1, 2, 3});
  CHECK(canonical_relator({-3, -2, -1}) == Word{1, 2, 3});
  CHECK(canonical_relator({-2, -1, 2, 1}) == Word{1, 2, -1, -2});
  CHECK(canonical_relator({1, -1}).empty());
  CHECK(shortlex_less({1, 1}, {1, 1, 1}));
  CHECK(shortlex_less({1}, {-1}));
  CHECK(shortlex_less({-1}, {2}));
}

TEST_CASE("presentation round trip") {
  Presentation p = Presentation::parse("<a,b,c | a^2, b^3, c^7, abc>");
  CHECK(p.rank() == 3);
  CHECK(p.relations.size() == 4);
  CHECK(p.to_string() == "<a,b,c | aa, bbb, ccccccc, abc>");
  CHECK(Presentation::parse(p.to_string()) == p);
  Presentation free = Presentation::parse("<a,b | >");
  CHECK(free.relations.empty());
  CHECK_THROWS_AS(Presentation::parse("a,b | ab"), DomainError);
  CHECK_THROWS_AS(Presentation::parse("<a | b>"), DomainError);
  Presentation bad{{"a"}, {{2}}, {}};
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("abelian invariants") {
  // Integer relation matrices small enough to diagonalize by hand.
  CHECK(abelian_invariants(Presentation::parse("<a,b | abAB>")) == std::vector<long long>{0, 0});
  CHECK(abelian_invariants(Presentation::parse("<a | a^2>")) == std::vector<long long>{2});
  CHECK(abelian_invariants(Presentation::parse("<a,b,c,d | a^2,b^2,c^2,d^2,abcd>")) ==
        std::vector<long long>{2, 2, 2});
  // Z/2 + Z/3 = Z/6
  CHECK(abelian_invariants(Presentation::parse("<a,b | a^2, b^3, abAB>")) ==
        std::vector<long long>{6});
  // (2,3,7): trivial abelianization
  CHECK(abelian_invariants(Presentation::parse("<a,b,c | a^2,b^3,c^7,abc>")).empty());
  // (2,4,4): Z/2 + Z/4
  CHECK(abelian_invariants(Presentation::parse("<a,b,c | a^2,b^4,c^4,abc>")) ==
        std::vector<long long>{2, 4});
  // (3,3,3): Z/3 + Z/3
  CHECK(abelian_invariants(Presentation::parse("<a,b,c | a^3,b^3,c^3,abc>")) ==
        std::vector<long long>{3, 3});
  CHECK(abelian_invariants(Presentation::parse("<a | >")) == std::vector<long long>{0});
}
