// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Expected values come from the naive oracles in
// oracle.hpp; time limits are wall-clock on a single worker.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "../oracle.hpp"
#include "tra/report.hpp"
#include "tra/theorems.hpp"

using namespace tra;

namespace {

constexpr double kCounterexampleSeconds = 1.0;
constexpr double kSigmaSmallSeconds = 10.0;
constexpr double kRelativizationSeconds = 5.0;
constexpr double kDecompositionSeconds = 5.0;
constexpr std::uint64_t kSigmaSampledTrials = 100000;
constexpr std::size_t kExpectedPermutableSubsets = 64;
constexpr std::size_t kExhaustiveLawCarrierMax = 12;
constexpr std::size_t kRandomLawCases = 10000;
constexpr std::size_t kRandomLawCarrierMax = 1024;
constexpr std::size_t kUltraproductLists = 3;
constexpr std::size_t kUltraproductCarrierMax = 8;
constexpr std::size_t kRoundTripTerms = 500;
constexpr int kRoundTripDepth = 6;
constexpr std::uint64_t kSuiteSeed = kDefaultSeed;

/// Collects violations for one criterion; keeps the first few messages.
struct Tally {
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (violations++ == 0) first = what;
  }
};

struct Outcome {
  Tally tally;
  double seconds = 0;
  double limit = 0;  // 0: no time limit
  std::string detail;
};

int g_failed = 0;

void run(int id, const char* title, double limit, const std::function<void(Outcome&)>& body) {
  Outcome o;
  o.limit = limit;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.tally.expect(false, std::string("exception: ") + e.what());
  }
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = limit == 0 || o.seconds < limit;
  const bool pass = o.tally.violations == 0 && o.tally.checks > 0 && in_time;
  if (!pass) ++g_failed;
  std::printf("%s [%d] %s: %llu checks, %llu violations, %.3fs", pass ? "PASS" : "FAIL", id,
              title, static_cast<unsigned long long>(o.tally.checks),
              static_cast<unsigned long long>(o.tally.violations), o.seconds);
  if (limit > 0) std::printf(" (limit %.0fs)", limit);
  if (!o.detail.empty()) std::printf("; %s", o.detail.c_str());
  if (o.tally.violations > 0) std::printf("; first: %s", o.tally.first.c_str());
  if (!in_time) std::printf("; too slow");
  std::printf("\n");
  std::fflush(stdout);
}

CarrierRef carrier_of(Dim n, BaseSize u, const oracle::Set& s) {
  std::vector<Seq> seqs;
  for (const auto& t : s) seqs.push_back(Seq{t});
  return Carrier::from_seqs(n, u, seqs);
}

Elem elem_of(const CarrierRef& d, const oracle::Set& s) {
  std::vector<Seq> seqs;
  for (const auto& t : s) seqs.push_back(Seq{t});
  return elem_from_seqs(d, seqs);
}

// σ on ℘(D) decided from the definition with set operations.
bool sigma_holds_oracle(const oracle::Set& d, const std::vector<Dim>& f,
                        const std::vector<Dim>& g) {
  const std::vector<oracle::Tuple> list(d.begin(), d.end());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << list.size()); ++mask) {
    const oracle::Set x = oracle::subset(list, mask);
    const bool hyp = oracle::join(oracle::subst(d, f, x), oracle::subst(d, g, x)) ==
                     oracle::complement(d, x);
    if (hyp && !d.empty()) return false;  // 0 = 1 only in the empty algebra
  }
  return true;
}

// ---- criteria -------------------------------------------------------------

void counterexample(Outcome& o) {
  for (Dim n = 2; n <= 6; ++n) {
    const Counterexample c = build_counterexample(n);
    const std::string tag = "n=" + std::to_string(n) + ": ";
    const oracle::Set g = oracle::to_set(*c.carrier);
    oracle::Set odd;
    for (Dim i = 1; i < n; i += 2) odd.insert(unit_seq(n, i).entries);
    o.tally.expect(oracle::to_set(c.x) == odd, tag + "X is not the odd unit vectors");
    o.tally.expect(c.f == forward_cycle(n) && c.g == backward_cycle(n), tag + "wrong f, g");
    o.tally.expect(oracle::permutable(g, n), tag + "G not permutable");
    const oracle::Set lhs = oracle::join(oracle::subst(g, c.f.images(), odd),
                                         oracle::subst(g, c.g.images(), odd));
    o.tally.expect(lhs == oracle::complement(g, odd), tag + "S_f X | S_g X != ~X (oracle)");
    o.tally.expect(oracle::to_set(c.image_union) == lhs, tag + "library union differs");
    o.tally.expect(c.union_is_complement, tag + "library reports union != ~X");
    o.tally.expect(c.verdict.outcome == Verdict::Outcome::Fails, tag + "sigma not failing");
    o.tally.expect(violates(c.carrier, c.formula, {{"x", c.x}}), tag + "X does not falsify");
    o.tally.expect(c.verdict.witness && violates(c.carrier, c.formula, *c.verdict.witness),
                   tag + "reported witness does not falsify");
  }
}

void sigma_small(Outcome& o) {
  const std::pair<Dim, BaseSize> sizes[] = {{2, 0}, {2, 1}, {2, 2}, {2, 3}, {3, 2}};
  for (auto [n, k] : sizes) {
    const std::string tag = "(" + std::to_string(n) + "," + std::to_string(k) + "): ";
    const SigmaSmallReport r = sigma_holds_small(n, k, std::nullopt);
    const std::size_t perms = all_perms(n).size();
    o.tally.expect(r.pairs.size() == perms * perms, tag + "not every pair checked");
    o.tally.expect(r.brute_force_ran, tag + "brute force skipped");
    o.tally.expect(r.brute_force_holds(), tag + "brute force found a counterexample");
    o.tally.expect(r.certificate.holds, tag + "certificate does not hold");
    o.tally.expect(r.agree(), tag + "certificate disagrees");
    const oracle::Set d = oracle::to_set(*Carrier::full(n, k));
    for (const auto& [f, g] : r.pairs) {
      o.tally.expect(sigma_holds_oracle(d, f.images(), g.images()),
                     tag + "oracle finds a counterexample for " + to_string(f) + "," +
                         to_string(g));
    }
  }
}

void sigma_3_3(Outcome& o) {
  CheckOptions options;
  options.mode = Sampled{kSigmaSampledTrials, kSuiteSeed};
  const SigmaSmallReport r = sigma_holds_small(3, 3, std::nullopt, options);
  o.tally.expect(r.certificate.holds && r.certificate.constants == 3, "certificate fails");
  o.tally.expect(r.brute_force_ran && r.brute_force_holds(), "sampled counterexample found");
  o.tally.expect(r.pairs.size() == 36, "not every pair checked");
  o.tally.expect(r.assignments_tested == 36 * kSigmaSampledTrials, "trial count differs");
  o.detail = std::to_string(r.assignments_tested) + " random X over 36 pairs";
}

void relativization(Outcome& o) {
  const Dim n = 2;
  const BaseSize u = 3;
  const auto big = Carrier::full(n, u);
  const oracle::Set e = oracle::to_set(*big);
  const auto tuples = oracle::space(n, u);
  const auto swap = oracle::swap_images(n, 0, 1);
  std::size_t found = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << tuples.size()); ++mask) {
    const oracle::Set gs = oracle::subset(tuples, mask);
    if (!oracle::permutable(gs, n)) continue;
    ++found;
    const auto g = carrier_of(n, u, gs);
    const std::string tag = "G=" + to_string(elem_of(big, gs)) + ": ";
    const HomReport r = verify_relativization(big, g);
    o.tally.expect(r.exhaustive && r.elements_tested == 512 && r.pairs_tested == 512 * 512,
                   tag + "not exhaustive");
    o.tally.expect(r.passed(), tag + "library reports a violation");
    // Unary laws again from the definitions.
    for (std::uint64_t x = 0; x < 512; ++x) {
      const oracle::Set xs = oracle::subset(tuples, x);
      const oracle::Set hx = oracle::meet(xs, gs);
      o.tally.expect(oracle::meet(oracle::subst(e, swap, xs), gs) == oracle::subst(gs, swap, hx),
                     tag + "S_01 not preserved (oracle)");
      o.tally.expect(oracle::meet(oracle::complement(e, xs), gs) == oracle::complement(gs, hx),
                     tag + "complement not preserved (oracle)");
    }
  }
  o.tally.expect(found == kExpectedPermutableSubsets,
                 "found " + std::to_string(found) + " permutable subsets");
  o.detail = std::to_string(found) + " permutable G";
}

void decomposition(Outcome& o) {
  for (BaseSize k : {2U, 3U}) {
    const std::string tag = "k=" + std::to_string(k) + ": ";
    const Decomposition d = decompose_small(2, k);
    const std::uint64_t elements = std::uint64_t{1} << (k * k);
    o.tally.expect(d.records.size() == k * k, tag + "one record per atom expected");
    o.tally.expect(d.separation.exhaustive && d.separation.elements == elements,
                   tag + "separation not exhaustive");
    o.tally.expect(d.separation.separated, tag + "library reports inseparable pair");
    o.tally.expect(d.separation.homomorphism, tag + "product map not a homomorphism");

    // Oracle: h_a(x) = x ∩ ^2 range(q), values renamed in order.
    const auto tuples = oracle::space(2, k);
    std::set<std::vector<oracle::Set>> images;
    for (std::uint64_t x = 0; x < elements; ++x) {
      const oracle::Set xs = oracle::subset(tuples, x);
      std::vector<oracle::Set> image;
      for (const auto& rec : d.records) {
        const std::set<Value> range(rec.witness->entries.begin(), rec.witness->entries.end());
        std::map<Value, Value> rename;
        for (Value v : range) rename.emplace(v, static_cast<Value>(rename.size()));
        oracle::Set h;
        for (const auto& t : xs) {
          if (range.count(t[0]) && range.count(t[1])) h.insert({rename[t[0]], rename[t[1]]});
        }
        if (xs == oracle::Set{rec.witness->entries}) {
          o.tally.expect(!h.empty(), tag + "h_a(a) = 0 for q=" + to_string(*rec.witness));
          o.tally.expect(rec.image_nonzero, tag + "library reports h_a(a) = 0");
        }
        o.tally.expect(oracle::to_set(apply_record(rec, elem_of(d.carrier, xs))) == h,
                       tag + "h_a differs from the oracle");
        image.push_back(std::move(h));
      }
      images.insert(std::move(image));
    }
    o.tally.expect(images.size() == elements, tag + "oracle finds two elements not separated");
  }
}

// Operator laws on one carrier, exhaustive over x (and pairs for
// additivity) using tables of S_f built by the library and spot-checked
// against the oracle.
void laws_exhaustive(Tally& t, const CarrierRef& d) {
  const std::size_t m = d->size();
  const std::uint64_t count = std::uint64_t{1} << m;
  const oracle::Set ds = oracle::to_set(*d);
  const std::vector<oracle::Tuple> list(ds.begin(), ds.end());
  const bool permutable = d->is_permutable();
  const std::string tag = "D=" + to_string(one(d)) + ": ";
  const auto perms = all_perms(d->dim());

  std::vector<std::vector<std::uint64_t>> table;
  for (const Perm& f : perms) {
    std::vector<std::uint64_t> s(count);
    for (std::uint64_t x = 0; x < count; ++x) {
      const Elem e = subst(f, elem_from_word(d, x));
      s[x] = e.bits().num_words() ? e.bits().words()[0] : 0;
      if (x % 37 == 0 || count <= 256) {
        t.expect(oracle::to_set(e) == oracle::subst(ds, f.images(), oracle::subset(list, x)),
                 tag + "S_f differs from the oracle");
      }
    }
    table.push_back(std::move(s));
  }
  const std::uint64_t full = count - 1;
  for (std::size_t fi = 0; fi < perms.size(); ++fi) {
    const Perm& f = perms[fi];
    const auto& s = table[fi];
    for (std::uint64_t x = 0; x < count; ++x) {
      for (std::uint64_t y = x; y < count; ++y) {
        if (s[x | y] != (s[x] | s[y])) {
          t.expect(false, tag + "additivity fails for " + to_string(f));
        }
      }
      ++t.checks;
      if (permutable) {
        t.expect(s[full & ~x] == (full & ~s[x]), tag + "complement fails for " + to_string(f));
      }
      for (std::size_t p = 0; p < m; ++p) {
        if (is_constant(d->member(p))) {
          t.expect(((s[x] >> p) & 1U) == ((x >> p) & 1U), tag + "constant not fixed");
        }
      }
    }
    t.checks += count * (count + 1) / 2;
    if (!permutable) continue;
    for (std::size_t gi = 0; gi < perms.size(); ++gi) {
      // S_{f∘g} = S_f ∘ S_g
      const std::size_t fg = static_cast<std::size_t>(
          std::find(perms.begin(), perms.end(), perm_compose(f, perms[gi])) - perms.begin());
      for (std::uint64_t x = 0; x < count; ++x) {
        t.expect(table[fg][x] == s[table[gi][x]], tag + "composition fails");
      }
    }
    if (f.dim() >= 2 && perm_compose(f, f).is_identity() && !f.is_identity()) {
      for (std::uint64_t x = 0; x < count; ++x) {
        t.expect(s[s[x]] == x, tag + "involution fails for " + to_string(f));
      }
    }
  }
}

void laws(Outcome& o) {
  // Exhaustive part: every full carrier with 1 <= |D| <= 12 in dimension
  // 1..3, a few permutable and non-permutable partial carriers.
  std::vector<CarrierRef> carriers;
  for (Dim n = 1; n <= 3; ++n) {
    for (BaseSize u = 1; space_size(n, u) <= kExhaustiveLawCarrierMax; ++u) {
      carriers.push_back(Carrier::full(n, u));
    }
  }
  std::mt19937_64 rng(kSuiteSeed);
  for (int i = 0; i < 24; ++i) {
    const Dim n = 2 + static_cast<Dim>(rng() % 2);
    const BaseSize u = n == 2 ? 4 : 3;
    oracle::Set s;
    const auto tuples = oracle::space(n, u);
    while (s.size() < 1 + rng() % 4) s.insert(tuples[rng() % tuples.size()]);
    auto d = carrier_of(n, u, s);
    if (i % 2 == 0) d = permutable_closure(d);
    if (d->size() <= kExhaustiveLawCarrierMax) carriers.push_back(d);
  }
  std::size_t permutable = 0;
  for (const auto& d : carriers) {
    permutable += d->is_permutable();
    laws_exhaustive(o.tally, d);
  }

  // Random part: carriers up to 2^10 members, one random case per
  // iteration; every 100th case also against the oracle.
  std::size_t big = 0;
  for (std::size_t trial = 0; trial < kRandomLawCases; ++trial) {
    SplitMix64 r = trial_stream(kSuiteSeed, trial);
    const Dim n = 2 + static_cast<Dim>(r.next() % 4);
    BaseSize u = 2 + static_cast<BaseSize>(r.next() % 4);
    while (space_size(n, u) > kRandomLawCarrierMax) --u;
    CarrierRef d = Carrier::full(n, u);
    if (r.next() % 2) {
      std::vector<std::uint64_t> ranks;
      const std::uint64_t total = space_size(n, u);
      for (std::uint64_t k = 0, want = 1 + r.next() % 6; k < want; ++k) {
        ranks.push_back(r.next() % total);
      }
      d = Carrier::from_ranks(n, u, ranks);
      if (r.next() % 4) d = permutable_closure(d);
    }
    big += d->size() > 64;
    const std::size_t m = d->size();
    const Elem x(d, random_bits(r, m));
    const Elem y(d, random_bits(r, m));
    std::vector<Dim> fi(n);
    std::iota(fi.begin(), fi.end(), 0U);
    std::vector<Dim> gi = fi;
    for (Dim k = n; k > 1; --k) std::swap(fi[k - 1], fi[r.next() % k]);
    for (Dim k = n; k > 1; --k) std::swap(gi[k - 1], gi[r.next() % k]);
    const Perm f(fi);
    const Perm g(gi);
    const Dim a = static_cast<Dim>(r.next() % n);
    const Dim b = static_cast<Dim>((a + 1 + r.next() % (n - 1)) % n);
    const Perm t = transposition(n, a, b);
    const std::string tag = "trial " + std::to_string(trial) + ": ";

    o.tally.expect(subst(f, join(x, y)) == join(subst(f, x), subst(f, y)), tag + "additivity");
    for (std::size_t p = 0; p < m; ++p) {
      if (is_constant(d->member(p))) {
        o.tally.expect(subst(f, x).contains_position(p) == x.contains_position(p),
                       tag + "constant not fixed");
      }
    }
    if (d->is_permutable()) {
      o.tally.expect(subst(f, complement(x)) == complement(subst(f, x)), tag + "complement");
      o.tally.expect(subst(perm_compose(f, g), x) == subst(f, subst(g, x)), tag + "composition");
      o.tally.expect(subst(t, subst(t, x)) == x, tag + "involution");
    }
    if (trial % 100 == 0) {
      const oracle::Set ds = oracle::to_set(*d);
      o.tally.expect(oracle::to_set(subst(f, x)) ==
                         oracle::subst(ds, f.images(), oracle::to_set(x)),
                     tag + "S_f differs from the oracle");
    }
  }
  o.detail = std::to_string(carriers.size()) + " exhaustive carriers (" +
             std::to_string(permutable) + " permutable), " + std::to_string(kRandomLawCases) +
             " random cases (" + std::to_string(big) + " with |D| > 64)";
}

void ultraproduct(Outcome& o) {
  std::mt19937_64 rng(kSuiteSeed);
  std::size_t runs = 0;
  for (std::size_t list = 0; list < kUltraproductLists; ++list) {
    const Dim n = 1 + static_cast<Dim>(rng() % 3);
    std::vector<BaseSize> bases;
    for (BaseSize u = 1; space_size(n, u) <= kUltraproductCarrierMax; ++u) bases.push_back(u);
    std::vector<CarrierRef> factors;
    const std::size_t count = 2 + rng() % 3;
    for (std::size_t i = 0; i < count; ++i) {
      factors.push_back(Carrier::full(n, bases[rng() % bases.size()]));
    }
    CheckOptions options;
    options.mode = Sampled{kFallbackTrials, rng()};
    for (std::size_t i = 0; i < count; ++i) {
      const UltraproductReport r = principal_ultraproduct(factors, i, options);
      const std::string tag = "list " + std::to_string(list) + " index " + std::to_string(i) +
                              ": ";
      ++runs;
      o.tally.expect(r.elements_checked == (std::uint64_t{1} << factors[i]->size()),
                     tag + "not every element checked");
      o.tally.expect(r.well_defined, tag + "not well defined");
      o.tally.expect(r.equals_projection, tag + "differs from the projection");
      o.tally.expect(r.preserves_meet && r.preserves_complement && r.preserves_subst,
                     tag + "not a homomorphism");
      o.tally.expect(r.injective, tag + "not injective");
    }
  }
  o.detail = std::to_string(runs) + " principal indices";
}

void round_trip(Outcome& o) {
  std::mt19937_64 rng(kSuiteSeed);
  int deepest = 0;
  for (std::size_t i = 0; i < kRoundTripTerms; ++i) {
    const Term t = oracle::random_term(rng, kRoundTripDepth, 2 + static_cast<Dim>(i % 4));
    deepest = std::max(deepest, oracle::term_depth(t));
    o.tally.expect(oracle::term_depth(t) <= kRoundTripDepth, "term too deep");
    const std::string text = print_term(t);
    o.tally.expect(parse_term(text) == t, "round trip changed " + text);
    o.tally.expect(print_term(parse_term(text)) == text, "printing not stable for " + text);
  }
  o.detail = "max depth " + std::to_string(deepest);
}

void determinism(Outcome& o) {
  // Failing verdicts from every mode re-validate.
  std::vector<std::pair<CarrierRef, QuasiEquation>> failing;
  for (Dim n = 2; n <= 6; ++n) {
    const Counterexample c = build_counterexample(n);
    failing.emplace_back(c.carrier, c.formula);
  }
  failing.emplace_back(Carrier::full(2, 3), parse_quasi("s[0,1] x = x"));
  failing.emplace_back(Carrier::full(3, 2), parse_quasi("x & y = 0 => s{1,2,0} x = y"));
  failing.emplace_back(Carrier::full(3, 3), parse_quasi("s[0,2] x | y = y"));
  std::size_t verdicts = 0;
  for (const auto& [d, q] : failing) {
    for (unsigned workers : {1U, 4U}) {
      for (bool sampled : {false, true}) {
        CheckOptions options;
        options.workers = workers;
        if (sampled) options.mode = Sampled{2000, kSuiteSeed};
        if (!sampled && variables(q).size() * d->size() > 24) continue;
        const Verdict v = check_quasi(d, q, options);
        ++verdicts;
        o.tally.expect(!v.holds(), print_quasi(q) + " unexpectedly holds");
        if (!v.witness) continue;
        const Json w = to_json(v)["witness"];
        o.tally.expect(violates(d, q, assignment_from_json(d, w)),
                       print_quasi(q) + ": witness does not re-validate");
        // Same inputs and seed, different worker count: same report.
        CheckOptions single = options;
        single.workers = 1;
        o.tally.expect(to_json(check_quasi(d, q, single)).dump() == to_json(v).dump(),
                       print_quasi(q) + ": report depends on workers");
      }
    }
  }
  // Identical inputs and seed give identical reports.
  CheckOptions options;
  options.mode = Sampled{1000, 77};
  const auto twice = [&](const std::function<Json()>& make, const char* what) {
    o.tally.expect(make().dump() == make().dump(), std::string(what) + " not reproducible");
  };
  twice([&] { return to_json(build_counterexample(5)); }, "counterexample");
  twice([&] {
    return to_json(verify_relativization(Carrier::full(3, 3), unit_vector_carrier(3, 3), options));
  }, "relativization");
  twice([&] { return to_json(decompose_small(3, 2, options)); }, "decomposition");
  twice([&] { return to_json(sigma_holds_small(3, 3, std::nullopt, options)); }, "sigma");
  twice([&] {
    const std::vector<CarrierRef> f{Carrier::full(2, 2), Carrier::full(2, 3)};
    return to_json(principal_ultraproduct(f, 1, options));
  }, "ultraproduct");
  o.detail = std::to_string(verdicts) + " failing verdicts re-validated";
}

}  // namespace

int main() {
  run(1, "counterexample reproduction, n = 2..6", kCounterexampleSeconds, counterexample);
  run(2, "sigma holds in small algebras, all pairs, exhaustive", kSigmaSmallSeconds,
      sigma_small);
  run(2, "sigma in A_3,3: certificate + 10^5 seeded X per pair", 0, sigma_3_3);
  run(3, "relativization onto all permutable G in ^2 3", kRelativizationSeconds,
      relativization);
  run(4, "subdirect decomposition of A_2,2 and A_2,3", kDecompositionSeconds, decomposition);
  run(5, "operator laws, exhaustive |D| <= 12 and 10^4 random |D| <= 2^10", 0, laws);
  run(6, "principal ultraproduct embeddings, 3 seeded factor lists", 0, ultraproduct);
  run(7, "parse/print round trip, 500 random terms", 0, round_trip);
  run(8, "determinism and witness re-validation", 0, determinism);
  std::printf("%s: %d criteria failed\n", g_failed ? "FAIL" : "PASS", g_failed);
  return g_failed ? 1 : 0;
}
