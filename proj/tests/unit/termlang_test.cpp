#include <doctest.h>

#include <random>

#include "../oracle.hpp"
#include "tra/error.hpp"
#include "tra/termlang.hpp"

using namespace tra;

TEST_SUITE("termlang") {

TEST_CASE("precedence and associativity") {
  const Term t = parse_term("a | b & ~c");
  REQUIRE(t.kind() == Term::Kind::Or);
  CHECK(t.lhs() == Term::var("a"));
  CHECK(t.rhs().kind() == Term::Kind::And);
  CHECK(t.rhs().rhs().kind() == Term::Kind::Not);

  const Term left = parse_term("a & b & c");
  CHECK(left.lhs().kind() == Term::Kind::And);
  CHECK(print_term(parse_term("a & (b & c)")) == "a & (b & c)");
  CHECK(print_term(parse_term("(a & b) & c")) == "a & b & c");
  CHECK(print_term(parse_term("~(a | b)")) == "~(a | b)");
}

TEST_CASE("substitution prefixes") {
  const Term t = parse_term("s[0,1] s{1,2,0} x");
  REQUIRE(t.kind() == Term::Kind::Subst);
  CHECK(t.perm() == PermSpec{TranspositionSpec{0, 1}});
  CHECK(t.operand().perm() == PermSpec{ImagesSpec{{1, 2, 0}}});
  CHECK(print_term(t) == "s[0,1] s{1,2,0} x");
  // A variable called s, or one starting with s, is not a prefix.
  CHECK(parse_term("s & sx").lhs() == Term::var("s"));
  CHECK(parse_term("s & sx").rhs() == Term::var("sx"));
  CHECK(print_term(parse_term("s [0,1] (x | y)")) == "s[0,1] (x | y)");
}

TEST_CASE("equations and quasi-equations") {
  const Equation eq = parse_equation("x & ~x = 0");
  CHECK(eq.rhs == Term::zero());
  const QuasiEquation q = parse_quasi("x = y, y = z => x = z");
  CHECK(q.hypotheses.size() == 2);
  CHECK(print_quasi(q) == "x = y, y = z => x = z");
  const QuasiEquation plain = parse_quasi("x = x");
  CHECK(plain.hypotheses.empty());
  CHECK(print_quasi(plain) == "x = x");
}

TEST_CASE("parse errors carry positions") {
  struct Case {
    const char* text;
    std::size_t line;
    std::size_t column;
  };
  const Case cases[] = {
      {"x & ", 1, 5},      {"x = ", 1, 5},         {"(x", 1, 3},
      {"s[1,1] x = x", 1, 3}, {"s{0,0} x = x", 1, 3}, {"x = y\n = z", 2, 2},
      {"01 = x", 1, 1},     {"x = y =>", 1, 9},     {"x $ y = x", 1, 3},
  };
  for (const Case& c : cases) {
    CAPTURE(c.text);
    try {
      parse_quasi(c.text);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.code() == ErrorCode::Parse);
      CHECK(e.line() == c.line);
      CHECK(e.column() >= 1);
      CHECK(e.column() <= c.column + 2);
    }
  }
}

TEST_CASE("instantiate checks dimensions") {
  CHECK(instantiate(TranspositionSpec{0, 2}, 3) == transposition(3, 0, 2));
  CHECK_THROWS_AS(instantiate(TranspositionSpec{0, 3}, 3), Error);
  CHECK_THROWS_AS(instantiate(ImagesSpec{{1, 0}}, 3), Error);
}

TEST_CASE("variables are sorted and unique") {
  const auto vars = variables(parse_quasi("zeta | a = b => a = zeta"));
  CHECK(vars == std::vector<std::string>{"a", "b", "zeta"});
}

TEST_CASE("evaluation agrees with the set oracle on random terms") {
  std::mt19937_64 rng(7);
  auto d = Carrier::full(3, 2);
  const auto members = oracle::to_set(*d);
  const std::vector<oracle::Tuple> list(members.begin(), members.end());
  for (int trial = 0; trial < 300; ++trial) {
    const Term t = oracle::random_term(rng, 5, 3);
    const std::uint64_t mx = rng() & 0xFF;
    const std::uint64_t my = rng() & 0xFF;
    const std::uint64_t mz = rng() & 0xFF;
    const Assignment env{{"x", elem_from_word(d, mx)},
                         {"y", elem_from_word(d, my)},
                         {"z", elem_from_word(d, mz)}};
    const oracle::Env senv{{"x", oracle::subset(list, mx)},
                           {"y", oracle::subset(list, my)},
                           {"z", oracle::subset(list, mz)}};
    CAPTURE(print_term(t));
    CHECK(oracle::to_set(eval_term(t, d, env)) == oracle::eval(t, members, 3, senv));
  }
  CHECK_THROWS_AS(eval_term(parse_term("w"), d, {}), Error);
}

TEST_CASE("parse and print round trip") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const Term t = oracle::random_term(rng, 6, 4);
    const std::string text = print_term(t);
    CAPTURE(text);
    CHECK(parse_term(text) == t);
  }
}

TEST_CASE("sigma builder") {
  const QuasiEquation q = sigma(3, forward_cycle(3), backward_cycle(3));
  CHECK(print_quasi(q) == "s{1,2,0} x | s{2,0,1} x = ~x => 0 = 1");
  CHECK(q == parse_quasi(print_quasi(q)));
}

}
