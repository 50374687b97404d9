#include <doctest.h>

#include "../oracle.hpp"
#include "tra/error.hpp"
#include "tra/termlang.hpp"

using namespace tra;

namespace {

// Least failing index under the documented order: variables sorted by
// name, the first one most significant.
std::optional<std::uint64_t> least_failure(const CarrierRef& d, const QuasiEquation& q) {
  const auto vars = variables(q);
  const auto members = oracle::to_set(*d);
  const std::vector<oracle::Tuple> list(members.begin(), members.end());
  const std::size_t m = list.size();
  const std::uint64_t total = std::uint64_t{1} << (m * vars.size());
  const std::uint64_t mask = (std::uint64_t{1} << m) - 1;
  for (std::uint64_t i = 0; i < total; ++i) {
    oracle::Env env;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      env[vars[k]] = oracle::subset(list, (i >> (m * (vars.size() - 1 - k))) & mask);
    }
    bool hyps = true;
    for (const Equation& h : q.hypotheses) {
      hyps = hyps && oracle::eval(h.lhs, members, d->dim(), env) ==
                         oracle::eval(h.rhs, members, d->dim(), env);
    }
    const bool concl = oracle::eval(q.conclusion.lhs, members, d->dim(), env) ==
                       oracle::eval(q.conclusion.rhs, members, d->dim(), env);
    if (hyps && !concl) return i;
  }
  return std::nullopt;
}

}  // namespace

TEST_SUITE("check") {

TEST_CASE("valid laws hold exhaustively") {
  auto d = Carrier::full(2, 2);
  for (const char* law : {"s[0,1] s[0,1] x = x", "s[0,1] (x | y) = s[0,1] x | s[0,1] y",
                          "s[0,1] ~x = ~s[0,1] x", "x & ~x = 0", "x | ~x = 1"}) {
    CAPTURE(law);
    const Verdict v = check_equation(d, parse_equation(law));
    CHECK(v.outcome == Verdict::Outcome::HoldsExhaustive);
    CHECK_FALSE(v.witness.has_value());
  }
  const Verdict v = check_equation(d, parse_equation("x & y = y & x"));
  CHECK(v.assignments_tested == 256);
}

TEST_CASE("least witness matches the brute-force oracle") {
  auto d = Carrier::full(2, 2);
  auto g = Carrier::from_seqs(3, 2, std::vector<Seq>{unit_seq(3, 0), unit_seq(3, 1),
                                                       unit_seq(3, 2)});
  const std::pair<CarrierRef, const char*> cases[] = {
      {d, "s[0,1] x = x"},
      {d, "x & y = x"},
      {d, "y = s[0,1] x => x = y"},
      {d, "x | y = 1 => x = ~y"},
      {g, "s{1,2,0} x | s{2,0,1} x = ~x => 0 = 1"},
      {g, "s[0,1] x = x"},
  };
  for (const auto& [carrier, text] : cases) {
    CAPTURE(text);
    const QuasiEquation q = parse_quasi(text);
    const auto expected = least_failure(carrier, q);
    REQUIRE(expected.has_value());
    for (unsigned workers : {1U, 3U}) {
      CheckOptions options;
      options.workers = workers;
      const Verdict v = check_quasi(carrier, q, options);
      CHECK(v.outcome == Verdict::Outcome::Fails);
      CHECK(v.assignments_tested == *expected + 1);
      REQUIRE(v.witness.has_value());
      CHECK(violates(carrier, q, *v.witness));
    }
  }
}

TEST_CASE("holding quasi-equation tests every assignment") {
  auto d = Carrier::full(2, 2);
  const QuasiEquation q = parse_quasi("x = y => s[0,1] x = s[0,1] y");
  CHECK_FALSE(least_failure(d, q).has_value());
  const Verdict v = check_quasi(d, q);
  CHECK(v.holds());
  CHECK(v.assignments_tested == 256);
}

TEST_CASE("budget is enforced") {
  auto d = Carrier::full(2, 3);
  CheckOptions options;
  options.limits.enumeration_budget = 500;
  CHECK_THROWS_AS(check_equation(d, parse_equation("x = x"), options), Error);
  try {
    check_equation(d, parse_equation("x & y = y & x"), options);
    FAIL("expected a budget error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetExceeded);
  }
  options.limits.enumeration_budget = std::uint64_t{1} << 18;
  CHECK(check_equation(d, parse_equation("x & y = y & x"), options).holds());
}

TEST_CASE("sampled mode is deterministic and finds failures") {
  auto d = Carrier::full(3, 3);
  CheckOptions options;
  options.mode = Sampled{2000, 99};
  const Equation law = parse_equation("s[0,2] (x & y) = s[0,2] x & s[0,2] y");
  const Verdict holds = check_equation(d, law, options);
  CHECK(holds.outcome == Verdict::Outcome::HoldsSampled);
  CHECK(holds.assignments_tested == 2000);

  const Equation wrong = parse_equation("s[0,2] x = x");
  const Verdict a = check_equation(d, wrong, options);
  options.workers = 4;
  const Verdict b = check_equation(d, wrong, options);
  REQUIRE(a.witness.has_value());
  CHECK(a.assignments_tested == b.assignments_tested);
  CHECK(a.witness->at("x") == b.witness->at("x"));
  CHECK(violates(d, QuasiEquation{{}, wrong}, *a.witness));
}

TEST_CASE("trial streams are independent of scheduling") {
  SplitMix64 a = trial_stream(5, 17);
  SplitMix64 b = trial_stream(5, 17);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  CHECK(trial_stream(5, 17).next() != trial_stream(5, 18).next());
  SplitMix64 rng(1);
  const BitVec bits = random_bits(rng, 70);
  CHECK(bits.size() == 70);
}

TEST_CASE("violates rejects non-witnesses") {
  auto d = Carrier::full(2, 2);
  const QuasiEquation q = parse_quasi("s[0,1] x = x");
  CHECK_FALSE(violates(d, q, {{"x", one(d)}}));
  CHECK(violates(d, q, {{"x", atom(d, Seq{{0, 1}})}}));
}

}
