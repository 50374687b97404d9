#include <doctest.h>

#include <set>

#include "../oracle.hpp"
#include "tra/error.hpp"
#include "tra/seqspace.hpp"

using namespace tra;

TEST_SUITE("seqspace") {

TEST_CASE("space size") {
  CHECK(space_size(3, 2) == 8);
  CHECK(space_size(2, 3) == 9);
  CHECK(space_size(0, 0) == 1);
  CHECK(space_size(0, 5) == 1);
  CHECK(space_size(3, 0) == 0);
  CHECK(space_size(1, 1) == 1);
  CHECK_THROWS_AS(space_size(64, 3), Error);
}

TEST_CASE("rank and unrank agree with lexicographic enumeration") {
  for (Dim n = 0; n <= 4; ++n) {
    for (BaseSize u = 1; u <= 4; ++u) {
      const auto tuples = oracle::space(n, u);
      REQUIRE(tuples.size() == space_size(n, u));
      for (std::uint64_t r = 0; r < tuples.size(); ++r) {
        const Seq s = unrank(SpaceRank{r}, n, u);
        CHECK(s.entries == tuples[r]);
        CHECK(rank(s, u).value == r);
      }
    }
  }
}

TEST_CASE("coordinate 0 is most significant") {
  CHECK(rank(Seq{{1, 0, 0}}, 2).value == 4);
  CHECK(rank(Seq{{0, 0, 1}}, 2).value == 1);
}

TEST_CASE("rank rejects entries outside the base") {
  CHECK_THROWS_AS(rank(Seq{{0, 2}}, 2), Error);
  CHECK_THROWS_AS(unrank(SpaceRank{9}, 2, 3), Error);
}

TEST_CASE("permutation validation") {
  CHECK_NOTHROW(Perm({2, 0, 1}));
  CHECK_THROWS_AS(Perm({0, 0, 1}), Error);
  CHECK_THROWS_AS(Perm({0, 3, 1}), Error);
  try {
    Perm({1, 1});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAPermutation);
  }
  CHECK(Perm::identity(4).is_identity());
  CHECK_FALSE(Perm({1, 0}).is_identity());
}

TEST_CASE("transposition") {
  const Perm t = transposition(4, 1, 3);
  CHECK(t.images() == std::vector<Dim>{0, 3, 2, 1});
  CHECK_THROWS_AS(transposition(3, 1, 1), Error);
  CHECK_THROWS_AS(transposition(3, 0, 3), Error);
}

TEST_CASE("precomposition reads through f") {
  const Seq s{{7, 8, 9}};
  CHECK(compose_right(s, Perm({1, 2, 0})).entries == std::vector<Value>{8, 9, 7});
  CHECK_THROWS_AS(compose_right(s, Perm({1, 0})), Error);
}

TEST_CASE("composition laws over all permutations of 4") {
  const auto perms = all_perms(4);
  REQUIRE(perms.size() == 24);
  const auto tuples = oracle::space(4, 3);
  for (const Perm& f : perms) {
    CHECK(perm_compose(f, perm_inverse(f)).is_identity());
    CHECK(perm_compose(perm_inverse(f), f).is_identity());
    for (const Perm& g : perms) {
      // (s∘f)∘g = s∘(f∘g)
      const Perm fg = perm_compose(f, g);
      for (std::size_t r = 0; r < tuples.size(); r += 7) {
        const Seq s{tuples[r]};
        CHECK(compose_right(compose_right(s, f), g) == compose_right(s, fg));
      }
    }
  }
}

TEST_CASE("enumerations") {
  std::set<Perm> distinct;
  const auto perms = all_perms(5);
  distinct.insert(perms.begin(), perms.end());
  CHECK(distinct.size() == 120);
  CHECK(std::is_sorted(perms.begin(), perms.end()));
  const auto ts = all_transpositions(4);
  CHECK(ts.size() == 6);
  CHECK(ts.front() == transposition(4, 0, 1));
  CHECK(ts.back() == transposition(4, 2, 3));
}

TEST_CASE("cycles, units and constants") {
  CHECK(forward_cycle(3).images() == std::vector<Dim>{1, 2, 0});
  CHECK(backward_cycle(3).images() == std::vector<Dim>{2, 0, 1});
  CHECK(perm_compose(forward_cycle(5), backward_cycle(5)).is_identity());
  CHECK(unit_seq(3, 1).entries == std::vector<Value>{0, 1, 0});
  CHECK(is_constant(constant_seq(4, 2)));
  CHECK_FALSE(is_constant(unit_seq(2, 0)));
  CHECK(to_string(Seq{{0, 1, 0}}) == "(0,1,0)");
  CHECK(to_string(Perm({1, 2, 0})) == "[1,2,0]");
}

}
